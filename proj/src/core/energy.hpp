#pragma once

#include <functional>

#include "core/surface.hpp"

namespace hexflow {

// Integral of f over [0, 1] by 16-point Gauss-Legendre panels, doubling the
// panel count until successive estimates agree to rel_tol. Throws
// NumericError when 2^10 panels are not enough.
double integrate_01(const std::function<double(double)>& f, double rel_tol = 1e-10);

// Line integral of the 1-form sum_i B_i dw_i along the straight segment from
// `from` to `to`. Both endpoints must be admissible; the segment stays inside
// the admissible set because that set is convex.
double boundary_form_integral(const Surface& surface, const ConformalFactor& from,
                              const ConformalFactor& to, double rel_tol = 1e-10);

// The convex energy with gradient -B: phi(w) = -int_base^w sum_i B_i dw_i.
// Path independent because the Jacobian of B is symmetric. phi(base) = 0.
double energy_phi(const Surface& surface, const ConformalFactor& base, const ConformalFactor& w,
                  double rel_tol = 1e-10);

// psi(w) = phi(w) + <b, w>. Gradient b - B, Hessian -L (positive definite),
// so psi is strictly convex with its minimum where B = b.
double energy_psi(const Surface& surface, const ConformalFactor& base, const ConformalFactor& w,
                  const BoundaryLengths& targets, double rel_tol = 1e-10);

// C(w) = sum_i (B_i - b_i)^2; zero exactly at the realization point.
double boundary_defect(const BoundaryLengths& lengths, const BoundaryLengths& targets);

struct DefectLyapunov {
    double defect;    // C(w)
    double lyapunov;  // psi(w) - psi_ref + C(w)
};

// psi_ref is the caller's best value of psi at the minimizer; any constant
// works for monotonicity checks, which only use differences.
DefectLyapunov defect_and_lyapunov(const Surface& surface, const ConformalFactor& base,
                                   const ConformalFactor& w, const BoundaryLengths& targets,
                                   double psi_ref = 0.0);

}  // namespace hexflow
