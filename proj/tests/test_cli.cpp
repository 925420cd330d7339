#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "chainmap/chainmap.hpp"
#include "cli_harness.hpp"
#include "oracles.hpp"

using namespace chainmap;
using harness::run;
using harness::slurp;
using harness::TempDir;

namespace {

std::vector<std::string> dir_listing(const harness::fs::path& dir) {
    std::vector<std::string> names;
    if (!harness::fs::exists(dir)) return names;
    for (const auto& e : harness::fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(CliTransform, TwoModeFixture) {
    TempDir d("transform");
    const std::string in = harness::write_fixture(d, "two.csv", harness::kTwoModeCsv);
    const auto r = run({"transform", "--input", in, "--method", "gsh", "--seed", "1", "--output", d / "out"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json chain = json::parse(slurp(d / "out/chain.json"));
    EXPECT_NEAR(chain["primary_coupling"].get<double>(), 5, 1e-13);
    EXPECT_NEAR(chain["diagonal"][0].get<double>(), 164, 1e-12);
    EXPECT_NEAR(chain["diagonal"][1].get<double>(), 136, 1e-12);
    EXPECT_NEAR(std::abs(chain["offdiagonal"][0].get<double>()), 48, 1e-12);
    EXPECT_EQ(chain["method"], "gsh");
    EXPECT_EQ(chain["seed"], 1);
    EXPECT_EQ(dir_listing(d / "out"), (std::vector<std::string>{"chain.json", "reconstructed.csv", "report.json"}));

    const SpectralDensity rec = parse_sdf_csv(slurp(d / "out/reconstructed.csv"));
    EXPECT_NEAR(rec.peaks()[0].coupling, 3, 1e-12);
    EXPECT_NEAR(rec.peaks()[1].frequency, 200, 1e-12);
}

TEST(CliTransform, ChainsOneEqualsDefault) {
    TempDir d("chains1");
    const std::string in = harness::write_fixture(d, "s.csv", sdf_to_csv(synth_structured(30, 50, 2000, 3,
                                                                                          SynthProfile::OhmicLike)));
    ASSERT_EQ(run({"transform", "--input", in, "--output", d / "a"}).code, 0);
    ASSERT_EQ(run({"transform", "--input", in, "--chains", "1", "--output", d / "b"}).code, 0);
    ASSERT_EQ(run({"transform", "--input", in, "--chains", "1", "--scheme", "sp", "--output", d / "c"}).code, 0);
    EXPECT_EQ(slurp(d / "a/chain.json"), slurp(d / "b/chain.json"));
    EXPECT_EQ(slurp(d / "a/chain.json"), slurp(d / "c/chain.json"));
}

TEST(CliTransform, RerunIsByteIdentical) {
    TempDir d("rerun");
    const std::string in = harness::write_fixture(d, "s.csv", sdf_to_csv(synth_structured(40, 50, 2000, 3,
                                                                                          SynthProfile::Flat)));
    for (const char* out : {"a", "b"}) {
        ASSERT_EQ(run({"transform", "--input", in, "--chains", "3", "--seed", "9", "--output", d / out}).code, 0);
    }
    for (const char* f : {"chain.json", "partition.json", "report.json", "reconstructed.csv"}) {
        EXPECT_EQ(slurp(d / (std::string("a/") + f)), slurp(d / (std::string("b/") + f))) << f;
    }
}

TEST(CliTransform, MultiChainOutputs) {
    TempDir d("multi");
    const SpectralDensity s = synth_structured(40, 50, 2000, 3, SynthProfile::OhmicLike);
    const std::string in = harness::write_fixture(d, "s.csv", sdf_to_csv(s));
    ASSERT_EQ(run({"transform", "--input", in, "--chains", "4", "--scheme", "sp", "--method", "householder",
                   "--output", d / "o"})
                  .code,
              0);
    const MultiChainBath m = multi_chain_from_json(json::parse(slurp(d / "o/chain.json")));
    EXPECT_EQ(m.partition, sequential_partition(40, 4));
    EXPECT_EQ(partition_from_json(json::parse(slurp(d / "o/partition.json"))), m.partition);
    const json rep = json::parse(slurp(d / "o/report.json"));
    EXPECT_EQ(rep["n_eff"], 4);
    EXPECT_EQ(rep["scheme"], "sp");
    EXPECT_LT(rep["round_trip"]["max_rel_frequency_error"].get<double>(), 1e-8);
    EXPECT_EQ(rep["flags"]["truncated_chains"].size(), 0u);
}

TEST(CliTransform, CustomPartitionFile) {
    TempDir d("custom");
    const std::string in = harness::write_fixture(d, "s.csv", "frequency_cm1,coupling_cm1\n100,1\n200,1\n300,1\n400,1\n");
    const std::string part = harness::write_fixture(d, "p.json", R"({"scheme":"custom","groups":[[1,3],[2,4]]})");
    ASSERT_EQ(run({"transform", "--input", in, "--scheme", "custom", "--partition", part, "--output", d / "o"}).code, 0);
    const MultiChainBath m = multi_chain_from_json(json::parse(slurp(d / "o/chain.json")));
    EXPECT_NEAR(m.chains[0].chain.diagonal[0], 200, 1e-12);
    EXPECT_NEAR(m.chains[1].chain.diagonal[0], 300, 1e-12);

    const std::string bad = harness::write_fixture(d, "bad.json", R"({"scheme":"custom","groups":[[1,3],[3,4]]})");
    const auto r = run({"transform", "--input", in, "--scheme", "custom", "--partition", bad, "--output", d / "x"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("mode 3"), std::string::npos);
    EXPECT_EQ(run({"transform", "--input", in, "--scheme", "custom", "--output", d / "y"}).code, 2);
}

TEST(CliTransform, HuangRhysInput) {
    TempDir d("hr");
    const std::string in = harness::write_fixture(d, "hr.csv", "frequency_cm1,huang_rhys\n100,0.01\n150,0.04\n");
    ASSERT_EQ(run({"transform", "--input", in, "--hr-input", "--output", d / "o"}).code, 0);
    const json chain = json::parse(slurp(d / "o/chain.json"));
    EXPECT_NEAR(chain["primary_coupling"].get<double>(), std::sqrt(1000.0), 1e-12);
    EXPECT_EQ(run({"transform", "--input", in, "--output", d / "p"}).code, 2);
}

TEST(CliTransform, MalformedRowLeavesNoFiles) {
    TempDir d("malformed");
    const std::string in = harness::write_fixture(d, "bad.csv", "frequency_cm1,coupling_cm1\n100,3\n200,four\n");
    const auto r = run({"transform", "--input", in, "--output", d / "out"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("line 3"), std::string::npos);
    EXPECT_TRUE(dir_listing(d / "out").empty());
}

TEST(CliTransform, FlagErrorsExitTwo) {
    TempDir d("flags");
    const std::string in = harness::write_fixture(d, "two.csv", harness::kTwoModeCsv);
    EXPECT_EQ(run({"transform", "--input", in, "--method", "qr", "--output", d / "o"}).code, 2);
    EXPECT_EQ(run({"transform", "--input", in, "--chains", "3", "--output", d / "o"}).code, 2);
    EXPECT_EQ(run({"transform", "--input", in, "--precision-digits", "5", "--output", d / "o"}).code, 2);
    EXPECT_EQ(run({"transform", "--input", in, "--seed", "minus", "--output", d / "o"}).code, 2);
    EXPECT_EQ(run({"transform", "--output", d / "o"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_TRUE(dir_listing(d / "o").empty());
}

TEST(CliTransform, ExtendedPrecisionRecorded) {
    TempDir d("ep");
    const std::string in = harness::write_fixture(d, "two.csv", harness::kTwoModeCsv);
    ASSERT_EQ(run({"transform", "--input", in, "--method", "bulla", "--precision-digits", "50", "--output", d / "o"}).code,
              0);
    const json chain = json::parse(slurp(d / "o/chain.json"));
    EXPECT_EQ(chain["precision_digits"], 50);
    EXPECT_FALSE(chain.contains("seed"));

    ::setenv("CHAINMAP_PRECISION_DIGITS", "40", 1);
    ASSERT_EQ(run({"transform", "--input", in, "--method", "bulla", "--extended", "--output", d / "p"}).code, 0);
    ::setenv("CHAINMAP_PRECISION_DIGITS", "nope", 1);
    EXPECT_EQ(run({"transform", "--input", in, "--extended", "--output", d / "q"}).code, 2);
    ::unsetenv("CHAINMAP_PRECISION_DIGITS");
    EXPECT_EQ(json::parse(slurp(d / "p/chain.json"))["precision_digits"], 40);
}

TEST(CliScan, WritesScanAndPerChainFiles) {
    TempDir d("scan");
    const std::string in = harness::write_fixture(d, "s.csv", sdf_to_csv(synth_structured(60, 50, 2000, 1,
                                                                                          SynthProfile::OhmicLike)));
    ASSERT_EQ(run({"scan", "--input", in, "--max-chains", "4", "--output", d / "o"}).code, 0);
    const std::string sp = slurp(d / "o/scan_sp.csv");
    EXPECT_EQ(count_lines(sp), 5u);
    EXPECT_EQ(sp.substr(0, sp.find('\n')), "n_eff,scheme,max_primary_hr,max_primary_coupling_cm1,chain_index_of_max");
    EXPECT_EQ(count_lines(slurp(d / "o/chains_lp_n3.csv")), 4u);
    EXPECT_TRUE(harness::fs::exists(d / "o/scan_lp.csv"));
    const json summary = json::parse(slurp(d / "o/scan.json"));
    EXPECT_GT(summary["star_max_hr"].get<double>(), 0);
    EXPECT_EQ(run({"scan", "--input", in, "--scheme", "custom", "--output", d / "x"}).code, 2);
    EXPECT_EQ(run({"scan", "--input", in, "--max-chains", "999", "--output", d / "x"}).code, 2);
}

TEST(CliCompare, WritesAllArtifacts) {
    TempDir d("compare");
    const SpectralDensity s = synth_structured(30, 50, 2000, 1, SynthProfile::Clustered);
    const std::string in = harness::write_fixture(d, "s.csv", sdf_to_csv(s));
    ASSERT_EQ(run({"compare", "--input", in, "--methods", "gsh,bulla", "--precision", "double,ep30", "--points", "11",
                   "--output", d / "o"})
                  .code,
              0);
    for (const char* f : {"reconstructed_gsh_double.csv", "reconstructed_bulla_ep30.csv", "curve_gsh_ep30.csv",
                          "curve_bulla_double.csv", "errors.csv", "secondary_hr.csv"}) {
        EXPECT_TRUE(harness::fs::exists(d / (std::string("o/") + f))) << f;
    }
    const std::string errors = slurp(d / "o/errors.csv");
    EXPECT_EQ(count_lines(errors), 5u);
    EXPECT_EQ(count_lines(slurp(d / "o/curve_gsh_double.csv")), 12u);
    EXPECT_EQ(count_lines(slurp(d / "o/secondary_hr.csv")), 1u + 4u * 30u);
    EXPECT_EQ(run({"compare", "--input", in, "--precision", "quad", "--output", d / "x"}).code, 2);
    EXPECT_EQ(run({"compare", "--input", in, "--broadening", "0", "--output", d / "x"}).code, 2);
}

TEST(CliCompare, CurveMatchesEvaluateJ) {
    TempDir d("curve");
    const std::string in = harness::write_fixture(d, "two.csv", harness::kTwoModeCsv);
    ASSERT_EQ(run({"compare", "--input", in, "--methods", "householder", "--points", "5", "--omega-min", "50",
                   "--omega-max", "250", "--output", d / "o"})
                  .code,
              0);
    const std::string curve = slurp(d / "o/curve_householder_double.csv");
    std::istringstream ss(curve);
    std::string line;
    std::getline(ss, line);
    EXPECT_EQ(line, "omega_cm1,j_source,j_reconstructed");
    const SpectralDensity s = parse_sdf_csv(harness::kTwoModeCsv);
    while (std::getline(ss, line)) {
        double w, js, jr;
        ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf", &w, &js, &jr), 3);
        EXPECT_EQ(js, evaluate_j(s, w, kDefaultBroadening));
        EXPECT_NEAR(jr, js, 1e-12 * js);
    }
}

TEST(CliTwoOsc, DefaultGrid) {
    TempDir d("twoosc");
    ASSERT_EQ(run({"twoosc", "--output", d / "o"}).code, 0);
    const std::string csv = slurp(d / "o/twoosc.csv");
    EXPECT_EQ(count_lines(csv), 1u + 3u * 41u);
    std::istringstream ss(csv);
    std::string line;
    std::getline(ss, line);
    EXPECT_EQ(line, "f,ratio,R_HR_analytic,R_HR_numeric,abs_diff");
    while (std::getline(ss, line)) {
        double f, r, a, n, diff;
        ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &f, &r, &a, &n, &diff), 5);
        EXPECT_LE(diff, 1e-12);
    }
    EXPECT_EQ(run({"twoosc", "--ratio-min", "0.5", "--output", d / "x"}).code, 2);
}

TEST(CliSynth, WritesReadableFile) {
    TempDir d("synth");
    ASSERT_EQ(run({"synth", "--n", "25", "--profile", "clustered", "--seed", "4", "--output", d / "s.csv"}).code, 0);
    EXPECT_EQ(read_sdf(d / "s.csv"), synth_structured(25, 50, 2000, 4, SynthProfile::Clustered));
    ASSERT_EQ(run({"synth", "--n", "25", "--output", d / "s.json"}).code, 0);
    EXPECT_EQ(read_sdf(d / "s.json").size(), 25u);
    ASSERT_EQ(run({"synth", "--n", "25", "--hr-output", "--output", d / "h.csv"}).code, 0);
    const SpectralDensity hr = read_sdf(d / "h.csv", SdfColumns::HuangRhys);
    const SpectralDensity ref = synth_structured(25, 50, 2000, 1, SynthProfile::OhmicLike);
    for (std::size_t i = 0; i < 25; ++i) {
        EXPECT_NEAR(hr.peaks()[i].coupling, ref.peaks()[i].coupling, 1e-12 * ref.peaks()[i].coupling);
    }
    EXPECT_EQ(run({"synth", "--profile", "spiky", "--output", d / "x.csv"}).code, 2);
}

TEST(CliHelp, ExitsZero) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("transform"), std::string::npos);
}
