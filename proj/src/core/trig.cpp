#include "core/trig.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "core/errors.hpp"

namespace hexflow {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kLn2 = 0.6931471805599453;
// Above this, sqrt(x*x - 1) == x to double precision and x*x may overflow.
constexpr double kAcoshBig = 1e8;
}  // namespace

double stable_acosh(double x) {
    if (!(x >= 1.0 - 4.0 * kEps)) {
        throw DomainError("arccosh argument below 1: x = " + std::to_string(x));
    }
    if (x <= 1.0) return 0.0;
    if (x >= kAcoshBig) return std::log(x) + kLn2;
    const double u = x - 1.0;
    return std::log1p(u + std::sqrt(u * (u + 2.0)));
}

double acosh1p(double q) {
    if (!(q >= 0.0)) {
        throw DomainError("arccosh excess must be nonnegative: q = " + std::to_string(q));
    }
    if (q == 0.0) return 0.0;
    if (q >= kAcoshBig) return kLn2 + std::log1p(q);
    return std::log1p(q + std::sqrt(q * (q + 2.0)));
}

double log_cosh_half(double l) {
    const double t = 0.5 * l;
    // cosh t = e^t (1 + e^{-2t}) / 2
    return t + std::log1p(std::exp(-2.0 * t)) - kLn2;
}

}  // namespace hexflow
