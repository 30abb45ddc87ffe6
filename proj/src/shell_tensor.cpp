#include "lkms/shell_tensor.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace lkms {

Tensor2::Tensor2(const std::array<std::array<double, 4>, 4>& entries) : a(entries)
{
    for (const auto& row : a)
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("Tensor2: entries must be finite");
}

Tensor2 Tensor2::metric()
{
    Tensor2 eta;
    eta.a[0][0] = 1.0;
    eta.a[1][1] = eta.a[2][2] = eta.a[3][3] = -1.0;
    return eta;
}

Tensor2 Tensor2::antisymmetric(double a01, double a02, double a03, double a12, double a13,
                               double a23)
{
    Tensor2 t;
    t.a[0][1] = a01;
    t.a[0][2] = a02;
    t.a[0][3] = a03;
    t.a[1][2] = a12;
    t.a[1][3] = a13;
    t.a[2][3] = a23;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < i; ++j) t.a[i][j] = -t.a[j][i];
    return t;
}

Tensor2 Tensor2::transpose() const
{
    Tensor2 t;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) t.a[i][j] = a[j][i];
    return t;
}

Tensor2 Tensor2::operator+(const Tensor2& o) const
{
    Tensor2 t;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) t.a[i][j] = a[i][j] + o.a[i][j];
    return t;
}

Tensor2 Tensor2::operator-(const Tensor2& o) const
{
    Tensor2 t;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) t.a[i][j] = a[i][j] - o.a[i][j];
    return t;
}

Tensor2 Tensor2::operator*(double s) const
{
    Tensor2 t;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) t.a[i][j] = a[i][j] * s;
    return t;
}

double Tensor2::max_norm() const
{
    double n = 0;
    for (const auto& row : a)
        for (double v : row) n = std::max(n, std::abs(v));
    return n;
}

bool Tensor2::is_antisymmetric(double tol) const
{
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j <= i; ++j)
            if (std::abs(a[i][j] + a[j][i]) > tol) return false;
    return true;
}

std::pair<Tensor2, Tensor2> sym_antisym_split(const Tensor2& A)
{
    Tensor2 s, o;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            s.a[i][j] = 0.5 * (A.a[i][j] + A.a[j][i]);
            o.a[i][j] = 0.5 * (A.a[i][j] - A.a[j][i]);
        }
    }
    return {s, o};
}

double shell_quadratic(const Tensor2& A, const Vec3& p3, double m)
{
    const FourVector p = shell_lift(p3, m);
    double q = 0;
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) q += p[mu] * p[nu] * A.a[mu][nu];
    return q;
}

const std::vector<Vec3>& shell_probe_directions()
{
    static const std::vector<Vec3> dirs = [] {
        std::vector<Vec3> d;
        for (int i = -1; i <= 1; ++i) {
            for (int j = -1; j <= 1; ++j) {
                for (int k = -1; k <= 1; ++k) {
                    if (i == 0 && j == 0 && k == 0) continue;
                    const double n = std::sqrt(double(i * i + j * j + k * k));
                    d.push_back({i / n, j / n, k / n});
                }
            }
        }
        return d;  // 26 directions
    }();
    return dirs;
}

MasslessShellTest massless_null_decompose(const Tensor2& A, double tol)
{
    if (!(tol > 0)) throw std::invalid_argument("massless_null_decompose: tol must be > 0");
    auto [S, Omega] = sym_antisym_split(A);

    // Vanishing on the null shell forces S_{0i} = 0, S_{ij} = 0 for i != j,
    // and S_{ii} = -S_{00}; c is read off the time-time entry.
    const double c = S.a[0][0];
    double residual = 0;
    for (int i = 1; i < 4; ++i) {
        residual = std::max(residual, std::abs(S.a[0][i]));
        residual = std::max(residual, std::abs(S.a[i][i] + c));
        for (int j = 1; j < 4; ++j)
            if (i != j) residual = std::max(residual, std::abs(S.a[i][j]));
    }

    MasslessShellTest result;
    result.residual = residual;
    if (residual <= tol * (1.0 + A.max_norm())) {
        result.decomposition = NullFormDecomposition{c, Omega, residual};
        return result;
    }
    double worst = -1;
    for (const Vec3& dir : shell_probe_directions()) {
        const double q = std::abs(shell_quadratic(A, dir, 0.0));
        if (q > worst) {
            worst = q;
            result.witness = dir;
        }
    }
    return result;
}

bool massive_null_test(const Tensor2& A, double m, double tol)
{
    if (!(m > 0)) throw std::invalid_argument("massive_null_test: mass must be > 0");
    if (!(tol > 0)) throw std::invalid_argument("massive_null_test: tol must be > 0");
    const Tensor2 S = sym_antisym_split(A).first;
    const bool antisym = S.max_norm() <= tol * (1.0 + A.max_norm());

#ifndef NDEBUG
    // Cross-validate against the finitely many probe momenta that decide the
    // question: p = 0 pins S_00, the axes pin S_0i and S_ii, the edge
    // directions e_i + e_j pin the spatial off-diagonals. Reconstructing S
    // from those probe values must reproduce the symmetric part.
    {
        const double w1 = std::sqrt(1.0 + m * m);
        const double w2sq = 2.0 + m * m;
        Tensor2 rec;
        rec.a[0][0] = shell_quadratic(A, Vec3{0, 0, 0}, m) / (m * m);
        for (int i = 0; i < 3; ++i) {
            Vec3 e{};
            e[i] = 1.0;
            Vec3 me{};
            me[i] = -1.0;
            const double qp = shell_quadratic(A, e, m);
            const double qm = shell_quadratic(A, me, m);
            rec.a[0][i + 1] = rec.a[i + 1][0] = (qp - qm) / (4.0 * w1);
            rec.a[i + 1][i + 1] = 0.5 * (qp + qm) - w1 * w1 * rec.a[0][0];
        }
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                Vec3 d{};
                d[i] = 1.0;
                d[j] = 1.0;
                const double q = shell_quadratic(A, d, m);
                rec.a[i + 1][j + 1] = rec.a[j + 1][i + 1] =
                    0.5 * (q - w2sq * rec.a[0][0] - 2.0 * std::sqrt(w2sq) * (rec.a[0][i + 1] + rec.a[0][j + 1]) -
                           rec.a[i + 1][i + 1] - rec.a[j + 1][j + 1]);
            }
        }
        const double slack = 1e-10 * (1.0 + A.max_norm()) * (1.0 + m * m) * (1.0 + m * m);
        assert((rec - S).max_norm() <= slack);
    }
#endif
    return antisym;
}

}  // namespace lkms
