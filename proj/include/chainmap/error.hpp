#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace chainmap {

// Bad input: malformed files, invariant violations, out-of-range arguments.
// The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical procedure could not complete (rank deficiency, no convergence).
// The CLI maps this to exit code 1.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(std::string message, std::optional<std::uint64_t> seed = std::nullopt,
                            std::optional<std::size_t> group = std::nullopt)
        : std::runtime_error(compose(message, seed, group)),
          message_(std::move(message)),
          seed_(seed),
          group_(group) {}

    const std::string& message() const noexcept { return message_; }
    std::optional<std::uint64_t> seed() const noexcept { return seed_; }
    std::optional<std::size_t> group() const noexcept { return group_; }

    // Same failure tagged with the 1-based partition group it came from.
    NumericalError with_group(std::size_t group) const { return NumericalError(message_, seed_, group); }

private:
    static std::string compose(const std::string& message, std::optional<std::uint64_t> seed,
                               std::optional<std::size_t> group) {
        std::string out = message;
        if (seed) out += " [seed " + std::to_string(*seed) + "]";
        if (group) out += " [group " + std::to_string(*group) + "]";
        return out;
    }

    std::string message_;
    std::optional<std::uint64_t> seed_;
    std::optional<std::size_t> group_;
};

}  // namespace chainmap
