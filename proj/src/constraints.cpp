#include "lkms/constraints.hpp"

#include <cmath>
#include <stdexcept>

#include "lkms/rng.hpp"

namespace lkms {

namespace {

constexpr double kMetricDiag[4] = {1.0, -1.0, -1.0, -1.0};

FourVector unit_step(int mu, double h)
{
    FourVector e;
    e[mu] = h;
    return e;
}

// box beta_nu = eta^{mu lambda} d_mu d_lambda beta_nu, covariant components;
// exact zero for affine fields, central second differences otherwise.
std::array<double, 4> beta_box(const StateSpec& s, const FourVector& q, double h)
{
    if (s.affine()) return {0, 0, 0, 0};
    std::array<double, 4> box{};
    const auto center = covariant(s.beta_at(q));
    for (int mu = 0; mu < 4; ++mu) {
        const auto plus = covariant(s.beta_at(q + unit_step(mu, h)));
        const auto minus = covariant(s.beta_at(q - unit_step(mu, h)));
        for (int nu = 0; nu < 4; ++nu)
            box[nu] += kMetricDiag[mu] * (plus[nu] - 2.0 * center[nu] + minus[nu]) / (h * h);
    }
    return box;
}

}  // namespace

ResidualReport kms_detailed_balance(const FourVector& q, const StateSpec& s,
                                    std::span<const Vec3> p_samples, double tol)
{
    ResidualReport report;
    report.name = "detailed_balance";
    report.tol = tol;
    report.worst_q = q;
    report.scale = 1.0;
    for (const Vec3& p : p_samples) {
        const FourierWeights w = fourier_weights(q, p, s);
        const double x = mink_dot(s.beta_at(q), shell_lift(p, s.mass));
        // e^x w_minus through logs when e^x alone would overflow
        const double geared =
            x > 500.0 ? std::exp(x + std::log(w.w_minus)) : std::exp(x) * w.w_minus;
        const double residual = std::abs(w.w_plus - geared) / w.w_plus;
        ++report.sample_count;
        if (residual > report.max_abs_residual) {
            report.max_abs_residual = residual;
            report.worst_p = p;
        }
    }
    report.pass = report.max_abs_residual <= tol;
    return report;
}

Tensor2 beta_jacobian(const AffineBetaField& f)
{
    return f.jacobian();
}

Tensor2 beta_jacobian(const BetaFieldFn& f, const FourVector& q, double h)
{
    if (!(h > 0)) throw std::invalid_argument("beta_jacobian: step h must be > 0");
    StateSpec probe(0.0, f);
    Tensor2 J;
    for (int mu = 0; mu < 4; ++mu) {
        const auto plus = covariant(probe.beta_at(q + unit_step(mu, h)));
        const auto minus = covariant(probe.beta_at(q - unit_step(mu, h)));
        for (int nu = 0; nu < 4; ++nu) J.a[mu][nu] = (plus[nu] - minus[nu]) / (2.0 * h);
    }
    return J;
}

Tensor2 beta_jacobian(const StateSpec& s, const FourVector& q, double h)
{
    if (const auto* f = std::get_if<AffineBetaField>(&s.beta)) return f->jacobian();
    return beta_jacobian(std::get<BetaFieldFn>(s.beta), q, h);
}

ResidualReport constraint1_residual(const Tensor2& J, double m, std::span<const Vec3> samples)
{
    ResidualReport report;
    report.name = "beta_constraint1";
    const double jnorm = J.max_norm();
    report.scale = jnorm;
    for (const Vec3& p : samples) {
        const double w2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + m * m;
        const double quad = shell_quadratic(J, p, m);
        const double residual = jnorm == 0.0 ? 0.0 : std::abs(quad) / (jnorm * w2);
        ++report.sample_count;
        if (residual > report.max_abs_residual) {
            report.max_abs_residual = residual;
            report.worst_p = p;
            report.scale = jnorm * w2;
        }
    }
    return report;
}

ResidualReport constraint2_residual(const StateSpec& s, const FourVector& q,
                                    std::span<const Vec3> samples, double h)
{
    ResidualReport report;
    report.name = "beta_constraint2";
    report.worst_q = q;

    const Tensor2 J = beta_jacobian(s, q, h);
    const auto box = beta_box(s, q, h);
    const FourVector beta = s.beta_at(q);
    const double jnorm = J.max_norm();
    report.scale = 1.0;

    for (const Vec3& p : samples) {
        const FourVector P = shell_lift(p, s.mass);
        const double w2 = P.t * P.t;

        // v_mu = d_mu beta_kappa P^kappa; L = v_mu v^mu
        double v[4];
        for (int mu = 0; mu < 4; ++mu) {
            double sum = 0;
            for (int kappa = 0; kappa < 4; ++kappa) sum += J.a[mu][kappa] * P[kappa];
            v[mu] = sum;
        }
        const double L = v[0] * v[0] - v[1] * v[1] - v[2] * v[2] - v[3] * v[3];

        const double x = mink_dot(beta, P);
        double boxP = 0;
        for (int nu = 0; nu < 4; ++nu) boxP += box[nu] * P[nu];
        const double R = std::tanh(0.5 * x) * boxP;

        const double norm = 1.0 + jnorm * jnorm * w2;
        const double residual = std::abs(L - R) / norm;
        ++report.sample_count;
        if (residual > report.max_abs_residual) {
            report.max_abs_residual = residual;
            report.worst_p = p;
            report.scale = norm;
        }
    }
    return report;
}

PdeResiduals w_pde_residuals(const StateSpec& s, const FourVector& q, const FourVector& z,
                             double h, const QuadratureConfig& cfg)
{
    if (!(h > 0)) throw std::invalid_argument("w_pde_residuals: step h must be > 0");
    QuadratureConfig tight = cfg;
    tight.abs_tol = std::min(cfg.abs_tol, h * h * h * h);
    tight.rel_tol = std::min(cfg.rel_tol, h * h * h * h);

    auto W = [&](const FourVector& qq, const FourVector& zz) {
        return regular_part(qq, zz, s, tight);
    };

    // Mixed constraint d^mu_[q] d_mu^[z] W by the 4-point cross stencil per
    // index pair, metric contraction applied after differencing.
    double mixed = 0;
    for (int mu = 0; mu < 4; ++mu) {
        const FourVector eq = unit_step(mu, h);
        const double cross = (W(q + eq, z + eq) - W(q + eq, z - eq) - W(q - eq, z + eq) +
                              W(q - eq, z - eq)) /
                             (4.0 * h * h);
        mixed += kMetricDiag[mu] * cross;
    }

    // box_q W + 4 (box_z + m^2) W
    const double w0 = W(q, z);
    double box_q = 0, box_z = 0;
    for (int mu = 0; mu < 4; ++mu) {
        const FourVector e = unit_step(mu, h);
        box_q += kMetricDiag[mu] * (W(q + e, z) - 2.0 * w0 + W(q - e, z)) / (h * h);
        box_z += kMetricDiag[mu] * (W(q, z + e) - 2.0 * w0 + W(q, z - e)) / (h * h);
    }
    const double box = box_q + 4.0 * (box_z + s.mass * s.mass * w0);
    return {mixed, box};
}

std::vector<Vec3> default_shell_probes(double m, std::uint64_t seed)
{
    std::vector<Vec3> probes;
    if (m > 0) probes.push_back({0, 0, 0});
    for (int i = 0; i < 3; ++i) {
        Vec3 e{};
        e[i] = 1.0;
        probes.push_back(e);
        e[i] = -1.0;
        probes.push_back(e);
    }
    SplitMix64 rng(seed);
    const double magnitudes[3] = {0.5, 1.0, 2.0};
    for (int i = 0; i < 20; ++i) {
        const Vec3 dir = rng.unit_vector();
        for (double mag : magnitudes)
            probes.push_back({mag * dir[0], mag * dir[1], mag * dir[2]});
    }
    return probes;
}

}  // namespace lkms
