#pragma once

#include <span>
#include <string>

#include "lkms/beta_field.hpp"
#include "lkms/minkowski.hpp"

namespace lkms {

enum class VerdictKind { GlobalKMS, HotBang, ColdBang, NotLKMS };

/**
 * Classification outcome for an inverse-temperature field. For the cone
 * verdicts the field is beta(q) = c (q + beta_tilde) and the maximal region
 * is the forward (c > 0) or backward (c < 0) lightcone with apex
 * -beta_tilde; for GlobalKMS the field is the constant beta_tilde in V+ and
 * the region is all of Minkowski space.
 */
struct Verdict
{
    VerdictKind kind = VerdictKind::NotLKMS;
    double c = 0;  // 0 for GlobalKMS
    FourVector beta_tilde{};
    ConeRegion region = ConeRegion::all();
    std::string reason;  // NotLKMS only
    double fit_residual = 0;
};

const char* to_string(VerdictKind kind);

/**
 * Classify an affine field. NotLKMS whenever |C|_max > tol (any mass) or
 * m > 0 with |c| > tol; otherwise the verdict follows the sign of c.
 * Every domain sample must lie in the resulting region with beta(sample)
 * future timelike, else NotLKMS with the offending reason.
 */
Verdict classify_affine(const AffineBetaField& f, double m,
                        std::span<const FourVector> domain_samples, double tol = 1e-8);

/**
 * Classify a general field from samples: Jacobians are measured at every
 * sample by central differences with step h; a field with non-constant
 * Jacobian, or whose Jacobian is not of the form c eta + antisymmetric, is
 * NotLKMS. Otherwise (c, C, beta_tilde) are fitted and classification is
 * delegated to classify_affine. Requires at least 5 affinely independent
 * samples.
 */
Verdict classify_field(const BetaFieldFn& f, double m, std::span<const FourVector> samples,
                       double h, double tol = 1e-8);

/// The maximal extension region of a valid verdict; rejects NotLKMS.
ConeRegion maximal_region(const Verdict& v);

/// Local rest-frame temperature 1/sqrt(<beta(q), beta(q)>).
double temperature(const StateSpec& s, const FourVector& q);
double temperature(const AffineBetaField& f, const FourVector& q);
double temperature(const BetaFieldFn& f, const FourVector& q);

}  // namespace lkms
