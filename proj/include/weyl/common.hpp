#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace weyl {

using cplx = std::complex<double>;
using i64 = std::int64_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i128 = __int128_t;

inline constexpr double TWO_PI = 6.283185307179586476925286766559;

inline constexpr const char *ARTIFACT_VERSION = "0.1.0";
inline constexpr const char *JSON_SCHEMA = "weyl/1";

// Bad parameters / violated preconditions.  CLI maps this to exit 2.
struct InvalidInput : std::runtime_error {
    explicit InvalidInput(const std::string &msg) : std::runtime_error(msg) {}
};

// Grid/panel budget exceeded.  CLI maps this to exit 3.
struct ResourceError : std::runtime_error {
    u64 minimum_budget;
    ResourceError(const std::string &msg, u64 min_budget)
        : std::runtime_error(msg), minimum_budget(min_budget) {}
};

// Exact integer phase path would overflow its guard.
struct PrecisionError : std::runtime_error {
    explicit PrecisionError(const std::string &msg) : std::runtime_error(msg) {}
};

// Adaptive quadrature ran out of panels before reaching the tolerance.
struct QuadratureError : std::runtime_error {
    double achieved_error;
    QuadratureError(const std::string &msg, double achieved)
        : std::runtime_error(msg), achieved_error(achieved) {}
};

}  // namespace weyl
