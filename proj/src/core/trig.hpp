#pragma once

namespace hexflow {

// Lengths (and the hyperbolic-function arguments derived from them) are
// capped here so cosh/sinh stay inside double range; cosh(710) overflows.
inline constexpr double kLengthMax = 700.0;

// arccosh with full relative accuracy down to x = 1. Values within a few
// ulp below 1 are treated as round-off and clamped; anything lower throws
// DomainError.
double stable_acosh(double x);

// arccosh(1 + q) for q >= 0, without forming 1 + q. This is the form the
// cosine law wants: the argument excess is available directly and may be
// anywhere from 1e-300 to 1e300.
double acosh1p(double q);

// log(cosh(l/2)) for l >= 0, stable for large l where cosh overflows.
double log_cosh_half(double l);

}  // namespace hexflow
