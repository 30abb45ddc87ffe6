#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "lkms/minkowski.hpp"

namespace lkms {

/**
 * A real rank-(0,2) tensor A_{mu nu}, stored with both indices down.
 * Entry (mu, nu) is A_{mu nu}. Carrier for beta-field Jacobians and for
 * the mass-shell quadratic-form tests below.
 */
struct Tensor2
{
    std::array<std::array<double, 4>, 4> a{};

    Tensor2() = default;
    explicit Tensor2(const std::array<std::array<double, 4>, 4>& entries);

    double& operator()(int mu, int nu) { return a[mu][nu]; }
    const double& operator()(int mu, int nu) const { return a[mu][nu]; }

    static Tensor2 zero() { return Tensor2{}; }
    static Tensor2 metric();
    /// Antisymmetric tensor from its six independent upper-triangle entries.
    static Tensor2 antisymmetric(double a01, double a02, double a03, double a12, double a13,
                                 double a23);

    Tensor2 transpose() const;
    Tensor2 operator+(const Tensor2& o) const;
    Tensor2 operator-(const Tensor2& o) const;
    Tensor2 operator*(double s) const;

    double max_norm() const;
    bool is_antisymmetric(double tol) const;
};

/// A = S + Omega with S symmetric and Omega antisymmetric.
std::pair<Tensor2, Tensor2> sym_antisym_split(const Tensor2& A);

/**
 * The on-shell quadratic form P^mu P^nu A_{mu nu} with P = shell_lift(p3, m).
 * Plain component contraction: P carries upper indices, A lower ones, and no
 * metric factor is inserted.
 */
double shell_quadratic(const Tensor2& A, const Vec3& p3, double m);

/// Decomposition A = c eta + Omega of a tensor whose massless-shell
/// quadratic form vanishes.
struct NullFormDecomposition
{
    double c = 0;
    Tensor2 omega;    // antisymmetric part, exact by construction
    double residual;  // max norm of S - c eta
};

/// Outcome of massless_null_decompose. Rejection is a value: it carries the
/// residual and a lightlike witness direction maximizing |shell_quadratic|.
struct MasslessShellTest
{
    std::optional<NullFormDecomposition> decomposition;
    double residual = 0;
    Vec3 witness{};

    bool accepted() const { return decomposition.has_value(); }
};

/**
 * Decide whether P^mu P^nu A_{mu nu} = 0 on the whole massless shell, and if
 * so return the decomposition A = c eta + Omega. Acceptance tests the exact
 * componentwise conditions S_{0i} = 0, S_{ij} = 0 (i != j), S_{ii} = -S_{00}
 * against tol * (1 + |A|_max).
 */
MasslessShellTest massless_null_decompose(const Tensor2& A, double tol = 1e-10);

/**
 * True iff P^mu P^nu A_{mu nu} = 0 on the massive shell, equivalently iff A
 * is antisymmetric: |S|_max <= tol * (1 + |A|_max). Requires m > 0.
 */
bool massive_null_test(const Tensor2& A, double m, double tol = 1e-10);

/// The deterministic 26-direction probe set (faces, edges and corners of the
/// unit cube, normalized) used for rejection witnesses.
const std::vector<Vec3>& shell_probe_directions();

}  // namespace lkms
