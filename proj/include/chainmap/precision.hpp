#pragma once

// Scalar precision context. Every transform is a template over the scalar
// type; Precision selects double or an MPFR-backed float whose working
// precision is set in decimal digits at run time.

#include <cmath>
#include <limits>
#include <cstdlib>
#include <mutex>
#include <optional>
#include <string>
#include <type_traits>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include "chainmap/error.hpp"

namespace chainmap {

using ExtendedReal = boost::multiprecision::mpfr_float;

inline constexpr unsigned kDefaultExtendedDigits = 100;
inline constexpr unsigned kMinExtendedDigits = 16;

struct Precision {
    enum class Mode { Double, Extended };

    Mode mode = Mode::Double;
    unsigned digits = 0;  // meaningful only for Extended

    static Precision double_precision() { return {}; }

    static Precision extended(unsigned digits = kDefaultExtendedDigits) {
        if (digits < kMinExtendedDigits) {
            throw ValidationError("extended precision needs at least " + std::to_string(kMinExtendedDigits) +
                                  " digits, got " + std::to_string(digits));
        }
        return {Mode::Extended, digits};
    }

    bool is_extended() const noexcept { return mode == Mode::Extended; }

    // Digits for reports; empty in double mode.
    std::optional<unsigned> reported_digits() const {
        if (is_extended()) return digits;
        return std::nullopt;
    }

    std::string label() const { return is_extended() ? "ep" + std::to_string(digits) : "double"; }

    friend bool operator==(const Precision&, const Precision&) = default;
};

// Default EP digits, overridable through CHAINMAP_PRECISION_DIGITS.
inline unsigned default_extended_digits() {
    if (const char* env = std::getenv("CHAINMAP_PRECISION_DIGITS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long value = std::strtoul(env, &end, 10);
        if (end == env || *end != '\0' || value < kMinExtendedDigits || value > 100000) {
            throw ValidationError(std::string("CHAINMAP_PRECISION_DIGITS must be an integer >= 16, got '") + env +
                                  "'");
        }
        return static_cast<unsigned>(value);
    }
    return kDefaultExtendedDigits;
}

namespace detail {

// MPFR default precision is process-global in Boost 1.74, so extended-precision
// sections are serialized.
inline std::recursive_mutex& extended_precision_mutex() {
    static std::recursive_mutex m;
    return m;
}

class ScopedExtendedDigits {
public:
    explicit ScopedExtendedDigits(unsigned digits)
        : lock_(extended_precision_mutex()), previous_(ExtendedReal::default_precision()) {
        ExtendedReal::default_precision(digits);
    }
    ~ScopedExtendedDigits() { ExtendedReal::default_precision(previous_); }
    ScopedExtendedDigits(const ScopedExtendedDigits&) = delete;
    ScopedExtendedDigits& operator=(const ScopedExtendedDigits&) = delete;

private:
    std::unique_lock<std::recursive_mutex> lock_;
    unsigned previous_;
};

}  // namespace detail

template <class Real>
inline double to_double(const Real& x) {
    if constexpr (std::is_same_v<Real, double>) {
        return x;
    } else {
        return x.template convert_to<double>();
    }
}

// Off-diagonal deflation threshold of the tridiagonal QL iteration.
template <class Real>
inline Real deflation_tolerance() {
    if constexpr (std::is_same_v<Real, double>) {
        return 1e-14;
    } else {
        return std::numeric_limits<Real>::epsilon() * 16;
    }
}

template <class Real>
inline Real pi() {
    if constexpr (std::is_same_v<Real, double>) {
        return 3.14159265358979323846;
    } else {
        return boost::math::constants::pi<Real>();
    }
}

// hypot without overflow, usable with any scalar.
template <class Real>
inline Real pythag(const Real& a, const Real& b) {
    using std::abs;
    using std::sqrt;
    const Real aa = abs(a);
    const Real bb = abs(b);
    if (aa > bb) {
        const Real r = bb / aa;
        return Real(aa * sqrt(1 + r * r));
    }
    if (bb == 0) return Real(0);
    const Real r = aa / bb;
    return Real(bb * sqrt(1 + r * r));
}

// Invoke fn(std::type_identity<Real>{}) with Real chosen by the context.
// Both instantiations must return the same type.
template <class Fn>
decltype(auto) with_precision(const Precision& precision, Fn&& fn) {
    if (precision.is_extended()) {
        detail::ScopedExtendedDigits guard(precision.digits);
        return fn(std::type_identity<ExtendedReal>{});
    }
    return fn(std::type_identity<double>{});
}

}  // namespace chainmap
