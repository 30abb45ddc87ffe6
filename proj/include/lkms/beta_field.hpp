#pragma once

#include <functional>
#include <variant>

#include "lkms/minkowski.hpp"
#include "lkms/shell_tensor.hpp"

namespace lkms {

/**
 * The affine inverse-temperature field
 *
 *   beta_nu(q) = c q_nu + C_{mu nu} q^mu + beta_tilde_nu
 *
 * with scalar c, antisymmetric constant tensor C and constant offset
 * beta_tilde. Evaluation returns contravariant components. C must be
 * antisymmetric to 1e-14, checked at construction.
 */
struct AffineBetaField
{
    double c = 0;
    Tensor2 C;
    FourVector beta_tilde{};

    AffineBetaField() = default;
    AffineBetaField(double c, const Tensor2& C, const FourVector& beta_tilde);

    /// Constant field beta(q) = value.
    static AffineBetaField constant(const FourVector& value);

    FourVector operator()(const FourVector& q) const;

    /// The exact Jacobian d_mu beta_nu = c eta_{mu nu} + C_{mu nu},
    /// both indices down.
    Tensor2 jacobian() const;
};

/// A general inverse-temperature field q -> beta(q), assumed C^2 by the
/// caller. Values must be future timelike wherever the toolkit evaluates
/// them; violations fault at the evaluation site.
using BetaFieldFn = std::function<FourVector(const FourVector&)>;

/**
 * Everything needed to evaluate the thermal two-point function: the mass,
 * the inverse-temperature field, and the region the state lives on.
 */
struct StateSpec
{
    double mass = 0;
    std::variant<AffineBetaField, BetaFieldFn> beta;
    ConeRegion domain = ConeRegion::all();

    StateSpec() = default;
    StateSpec(double mass, AffineBetaField field, ConeRegion domain = ConeRegion::all());
    StateSpec(double mass, BetaFieldFn field, ConeRegion domain = ConeRegion::all());

    bool affine() const { return std::holds_alternative<AffineBetaField>(beta); }

    /// Evaluate beta(q), checking that the value is future timelike.
    /// Throws std::domain_error otherwise.
    FourVector beta_at(const FourVector& q) const;

    /// Evaluate the raw field without the future-timelike check.
    FourVector beta_raw(const FourVector& q) const;
};

}  // namespace lkms
