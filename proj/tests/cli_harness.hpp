#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "chainmap_app.hpp"

namespace harness {

namespace fs = std::filesystem;

struct Result {
    int code = 0;
    std::string out, err;
};

inline Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "chainmap");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Result r;
    r.code = chainmap::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

inline std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("chainmap_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }
    std::string operator/(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

inline std::string write_fixture(const TempDir& dir, const std::string& name, const std::string& text) {
    const std::string p = dir / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

inline const char* kTwoModeCsv = "frequency_cm1,coupling_cm1\n100,3\n200,4\n";

}  // namespace harness
