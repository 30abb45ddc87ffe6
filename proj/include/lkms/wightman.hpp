#pragma once

#include "lkms/beta_field.hpp"
#include "lkms/minkowski.hpp"
#include "lkms/quadrature.hpp"

namespace lkms {

/// Tolerances and budgets for the 1D momentum quadrature.
struct QuadratureConfig
{
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_refinements = 30;
    double cutoff_safety = 1.5;
};

/**
 * Thermal occupation number 1/(e^x - 1) for x > 0. Cancellation-safe for
 * small x via expm1; decays through the subnormal range and underflows to
 * zero for x > 745.
 */
double bose(double x);

struct FourierWeights
{
    double w_plus;   // forward-shell weight 1/(1 - e^{-x}) = 1 + n(x)
    double w_minus;  // backward-shell weight n(x)
};

/**
 * On-shell spectral weights of the local-KMS two-point function at position
 * q and spatial momentum p3, with x = <beta(q), P> and P the mass-shell
 * lift. Both weights are positive; the sign function of the spectral density
 * is already absorbed. The massless zero mode (p3, m) = (0, 0) is rejected.
 */
FourierWeights fourier_weights(const FourVector& q, const Vec3& p3, const StateSpec& s);

/// Invariants of the pair (beta, z): rest-frame inverse temperature b,
/// rest-frame time separation t and spatial separation r >= 0.
struct RestSeparation
{
    double b;
    double t;
    double r;
};

RestSeparation rest_frame_separation(const FourVector& beta, const FourVector& z);

/**
 * The regular (thermal) part W(q, z) of the two-point function in
 * point-split coordinates,
 *
 *   W = (2 pi)^-3 int d3p / omega_p  cos(<z,P>) / (e^{<beta(q),P>} - 1).
 *
 * Evaluated by boosting to the rest frame of beta(q) and reducing the
 * angular integral, leaving a 1D radial quadrature; for m = 0 the closed
 * form below is used instead. Throws quadrature_error on non-convergence
 * and std::domain_error if q is outside the state's domain or beta(q) is
 * not future timelike.
 */
double regular_part(const FourVector& q, const FourVector& z, const StateSpec& s,
                    const QuadratureConfig& cfg = {});

/// Same, but always through the quadrature path (no closed form), for
/// cross-validation of the two routes.
double regular_part_quadrature(const FourVector& q, const FourVector& z, const StateSpec& s,
                               const QuadratureConfig& cfg = {});

/// The reduced radial quadrature
///   (2 pi^2)^-1 int_0^inf dp p^2/omega cos(t omega) sinc(p r) / (e^{b omega} - 1)
/// on rest-frame invariants. err_estimate, if given, receives the
/// accumulated error estimate.
double regular_part_reduced_quadrature(double t, double r, double b, double m,
                                       const QuadratureConfig& cfg = {},
                                       double* err_estimate = nullptr);

/**
 * Closed form of the massless regular part on rest-frame invariants:
 *
 *   W = (4 pi^2 r)^-1 [ g(r+t) + g(r-t) ],   g(u) = (pi/2b) coth(pi u / b) - 1/(2u),
 *
 * with the singular pair g evaluated by series where the two terms cancel.
 * Finite and accurate for every real t and r >= 0.
 */
double regular_part_closed_massless(double t, double r, double b);

/**
 * W(q, 0): analytically 1/(12 b^2) for m = 0, by radial quadrature of
 * (2 pi^2)^-1 int p^2/omega / (e^{b omega} - 1) dp for m > 0.
 */
double coincidence_limit(const FourVector& q, const StateSpec& s, const QuadratureConfig& cfg = {});

/**
 * Full massless two-point function at spacelike separation: regular part
 * plus the vacuum term 1/(4 pi^2 (r'^2 - t'^2)). Rejects m > 0 and
 * non-spacelike z.
 */
double full_two_point_spacelike_massless(const FourVector& q, const FourVector& z,
                                         const StateSpec& s, const QuadratureConfig& cfg = {});

struct EvalResult
{
    double value;
    double error_estimate;
};

/// regular_part together with the error estimate of the path taken.
EvalResult regular_part_with_error(const FourVector& q, const FourVector& z, const StateSpec& s,
                                   const QuadratureConfig& cfg = {});

}  // namespace lkms
