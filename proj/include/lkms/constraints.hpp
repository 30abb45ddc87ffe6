#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lkms/beta_field.hpp"
#include "lkms/shell_tensor.hpp"
#include "lkms/wightman.hpp"

namespace lkms {

/**
 * Result of a residual sweep over a sample set. max_abs_residual is the
 * worst normalized residual, scale the normalization in force at that
 * sample, and worst_p / worst_q the sample reproducing it.
 */
struct ResidualReport
{
    std::string name;
    double max_abs_residual = 0;
    double scale = 1;
    int sample_count = 0;
    Vec3 worst_p{};
    FourVector worst_q{};
    double tol = 0;
    bool pass = true;
};

/**
 * Detailed balance at q: for each spatial momentum sample the on-shell
 * weights must satisfy w_plus = e^x w_minus with x = <beta(q), P>. Reports
 * the worst |w_plus - e^x w_minus| / w_plus.
 */
ResidualReport kms_detailed_balance(const FourVector& q, const StateSpec& s,
                                    std::span<const Vec3> p_samples, double tol);

/// Exact Jacobian d_mu beta_nu of an affine field (c eta + C).
Tensor2 beta_jacobian(const AffineBetaField& f);

/// Central-difference Jacobian of a general field at q with step h;
/// entry (mu, nu) is d beta_nu / d q^mu with beta_nu covariant.
Tensor2 beta_jacobian(const BetaFieldFn& f, const FourVector& q, double h);

/// Dispatch on the state's field kind.
Tensor2 beta_jacobian(const StateSpec& s, const FourVector& q, double h);

/**
 * First inverse-temperature constraint: P^mu P^lambda d_mu beta_lambda = 0
 * on the mass-m shell. Residuals are |shell_quadratic(J, p, m)| normalized
 * by |J|_max omega_p^2.
 */
ResidualReport constraint1_residual(const Tensor2& J, double m, std::span<const Vec3> samples);

/**
 * Second constraint: with v_mu = d_mu beta_kappa P^kappa,
 *
 *   v_mu v^mu = (e^x - 1)/(e^x + 1) (box beta_nu) P^nu,  x = <beta(q), P>,
 *
 * checked sample by sample; residuals |L - R| / (1 + |J|^2 omega^2).
 * Second derivatives are exact (zero) for affine fields and central
 * differences with step h otherwise.
 */
ResidualReport constraint2_residual(const StateSpec& s, const FourVector& q,
                                    std::span<const Vec3> samples, double h);

struct PdeResiduals
{
    double mixed;  // d^mu_[q] d_mu^[z] W
    double box;    // box_q W + 4 (box_z + m^2) W
};

/**
 * Finite-difference residuals of the two point-split PDE constraints on the
 * regular part W, from central differences with step h. Quadrature
 * tolerances are tightened to at most h^4 so the stencil noise stays below
 * the h^2 truncation term.
 */
PdeResiduals w_pde_residuals(const StateSpec& s, const FourVector& q, const FourVector& z,
                             double h, const QuadratureConfig& cfg = {});

/**
 * The default shell probe set: the decisive proof momenta {0 (only for
 * m > 0), +-e1, +-e2, +-e3} plus 20 seeded random directions at magnitudes
 * {0.5, 1, 2}.
 */
std::vector<Vec3> default_shell_probes(double m, std::uint64_t seed);

}  // namespace lkms
