#include "lkms/wightman.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lkms {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPiSq = 2.0 * kPi * kPi;

// zeta(2k), k = 1..12: coefficients of the odd series
// g(u) = sum_k (-1)^{k+1} zeta(2k) u^{2k-1} of the coth pair below.
constexpr double kZetaEven[12] = {
    1.6449340668482264365, 1.0823232337111381916, 1.0173430619844491397,
    1.0040773561979443394, 1.0009945751278180853, 1.0002460865533080483,
    1.0000612481350587048, 1.0000152822594086519, 1.0000038172932649998,
    1.0000009539620338728, 1.0000002384505027277, 1.0000000596081890513};

void validate(const QuadratureConfig& cfg)
{
    if (!(cfg.rel_tol > 0) || !(cfg.abs_tol > 0))
        throw std::invalid_argument("QuadratureConfig: tolerances must be > 0");
    if (cfg.max_refinements < 1)
        throw std::invalid_argument("QuadratureConfig: max_refinements must be >= 1");
    if (!(cfg.cutoff_safety > 0))
        throw std::invalid_argument("QuadratureConfig: cutoff_safety must be > 0");
}

double sinc(double x)
{
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

// The regular coth pair g(u) = (pi/2) coth(pi u) - 1/(2u) at unit inverse
// temperature; odd, analytic on the real line, g(0) = 0.
double coth_pair(double u)
{
    const double au = std::abs(u);
    if (au < 0.05) {
        // Both terms blow up like 1/(2u); sum the series of the pair.
        const double u2 = u * u;
        double term = u;
        double acc = 0;
        for (int k = 0; k < 12; ++k) {
            const double add = (k % 2 == 0 ? 1.0 : -1.0) * kZetaEven[k] * term;
            acc += add;
            if (std::abs(add) < 1e-18 * std::abs(acc)) break;
            term *= u2;
        }
        return acc;
    }
    return (kPi / 2.0) / std::tanh(kPi * u) - 1.0 / (2.0 * u);
}

// Branch of the massless closed form for small rho and small tau: the
// divided pair [g(rho+tau) + g(rho-tau)] / rho expanded as a polynomial in
// (tau^2, rho^2). The binomial sums have no cancellation.
double closed_small(double tau, double rho)
{
    // s_k = [(rho+tau)^{2k-1} + (rho-tau)^{2k-1}] / rho
    //     = 2 sum_{j even} C(2k-1, j) rho^{2k-2-j} tau^j
    double acc = 0;
    for (int k = 1; k <= 12; ++k) {
        const int n = 2 * k - 1;
        double binom = 1.0;  // C(n, 0)
        double sk = 0;
        for (int j = 0; j <= n - 1; j += 2) {
            sk += 2.0 * binom * std::pow(rho, n - 1 - j) * std::pow(tau, j);
            // C(n, j+2) from C(n, j)
            binom *= double(n - j) * double(n - j - 1) / (double(j + 1) * double(j + 2));
        }
        acc += (k % 2 == 1 ? 1.0 : -1.0) * kZetaEven[k - 1] * sk;
    }
    return acc / (4.0 * kPi * kPi);
}

// Branch for timelike-dominated separations tau > rho + 0.05: exponential
// expansion of both coth terms,
//   W1 = 1/(4 pi^2 (tau^2 - rho^2))
//        - (2 pi rho)^-1 sum_k e^{-2 pi k tau} sinh(2 pi k rho).
// Monotone decaying terms, no cancellation, <= ~120 terms at the branch
// boundary.
double closed_timelike(double tau, double rho)
{
    const double lead = 1.0 / (4.0 * kPi * kPi * (tau * tau - rho * rho));
    double sum = 0;
    for (int k = 1; k <= 4096; ++k) {
        const double e = std::exp(-2.0 * kPi * k * tau);
        const double x = 2.0 * kPi * k * rho;
        // sinh(x)/(2 pi rho) = k sinh(x)/x, stable for small x
        const double sh = (x < 1e-4) ? k * (1.0 + x * x / 6.0) : std::sinh(x) / (2.0 * kPi * rho);
        const double term = e * sh;
        sum += term;
        if (term < 1e-18 * (std::abs(lead - sum) + 1e-300)) break;
    }
    return lead - sum;
}

// W1(tau, rho): the massless closed form at b = 1, tau = |t|, rho = r.
double closed_unit(double tau, double rho)
{
    if (rho < 0.05) {
        if (tau < 0.15) return closed_small(tau, rho);
        return closed_timelike(tau, rho);
    }
    if (tau > rho + 0.05) return closed_timelike(tau, rho);
    // Spacelike-dominated: g(rho+tau) >= 0 dominates g(rho-tau); at most one
    // digit of cancellation in the sum.
    return (coth_pair(rho + tau) + coth_pair(rho - tau)) / (4.0 * kPi * kPi * rho);
}

// Momentum cutoff P with certified Bose tail: the radial integrand beyond P
// is bounded by p e^{-b p}/(1 - e^{-b P}), and
// int_P^inf p e^{-b p} dp <= (1/b)(P + 1/b) e^{-b P}; the squared form below
// absorbs the occupation-number slack.
double bose_cutoff(double b, double abs_tol, double safety)
{
    const double target = std::max(abs_tol / 10.0, 1e-300);
    double p = std::max(1.0, 2.0 / b);
    for (int i = 0; i < 20000; ++i) {
        const double bound = (1.0 / b) * (p + 1.0 / b) * (p + 1.0 / b) * std::exp(-b * p);
        if (bound < target) break;
        p *= 1.25;
    }
    return safety * p;
}

double reduced_quadrature(double t, double r, double b, double m, const QuadratureConfig& cfg,
                          double* err_estimate)
{
    const double pmax = bose_cutoff(b, cfg.abs_tol, cfg.cutoff_safety);
    // Cap panels at half the shortest oscillation period of cos(t w) sinc(p r).
    const double freq = std::max(std::abs(t), r);
    const double cap = freq > 1e-12 ? kPi / freq : std::numeric_limits<double>::infinity();

    auto integrand = [&](double p) {
        const double w = (m == 0.0) ? p : std::sqrt(p * p + m * m);
        if (p == 0.0) {
            // Only reachable for m = 0 (panel ends are never sampled by the
            // rule, but keep the limit p^2/w * n(b w) -> 1/b explicit).
            return (m == 0.0) ? 1.0 / (b * kTwoPiSq) : 0.0;
        }
        const double x = b * w;
        const double occupation = bose(x);
        return (p * p / w) * std::cos(t * w) * sinc(p * r) * occupation / kTwoPiSq;
    };

    double err = 0;
    const double value = integrate_adaptive(integrand, 0.0, pmax, cfg.abs_tol, cfg.rel_tol,
                                            cfg.max_refinements, cap, &err);
    if (err_estimate) *err_estimate = err;
    return value;
}

}  // namespace

double bose(double x)
{
    if (!(x > 0)) throw std::invalid_argument("bose: argument must be > 0");
    if (x < 0.5) return 1.0 / std::expm1(x);
    const double e = std::exp(-x);
    return e / (1.0 - e);
}

FourierWeights fourier_weights(const FourVector& q, const Vec3& p3, const StateSpec& s)
{
    if (!cone_contains(s.domain, q))
        throw std::domain_error("fourier_weights: q outside the state domain");
    if (s.mass == 0.0 && p3[0] == 0.0 && p3[1] == 0.0 && p3[2] == 0.0)
        throw std::invalid_argument("fourier_weights: massless zero mode (p, m) = (0, 0)");
    const FourVector beta = s.beta_at(q);
    const FourVector P = shell_lift(p3, s.mass);
    const double x = mink_dot(beta, P);
    if (!(x > 0)) throw std::domain_error("fourier_weights: <beta(q), P> must be positive");
    return {1.0 / (-std::expm1(-x)), bose(x)};
}

RestSeparation rest_frame_separation(const FourVector& beta, const FourVector& z)
{
    const RestFrame frame = boost_to_rest(beta);
    const FourVector zr = frame.boost.apply(z);
    return {frame.b, zr.t, spatial_norm(zr)};
}

double regular_part_closed_massless(double t, double r, double b)
{
    if (!(b > 0)) throw std::invalid_argument("regular_part_closed_massless: b must be > 0");
    if (!(r >= 0)) throw std::invalid_argument("regular_part_closed_massless: r must be >= 0");
    return closed_unit(std::abs(t) / b, r / b) / (b * b);
}

double regular_part_reduced_quadrature(double t, double r, double b, double m,
                                       const QuadratureConfig& cfg, double* err_estimate)
{
    validate(cfg);
    if (!(b > 0)) throw std::invalid_argument("reduced quadrature: b must be > 0");
    if (!(r >= 0) || !(m >= 0)) throw std::invalid_argument("reduced quadrature: r, m must be >= 0");
    return reduced_quadrature(t, r, b, m, cfg, err_estimate);
}

double regular_part(const FourVector& q, const FourVector& z, const StateSpec& s,
                    const QuadratureConfig& cfg)
{
    return regular_part_with_error(q, z, s, cfg).value;
}

double regular_part_quadrature(const FourVector& q, const FourVector& z, const StateSpec& s,
                               const QuadratureConfig& cfg)
{
    validate(cfg);
    if (!cone_contains(s.domain, q))
        throw std::domain_error("regular_part: q outside the state domain");
    const RestSeparation rs = rest_frame_separation(s.beta_at(q), z);
    return reduced_quadrature(rs.t, rs.r, rs.b, s.mass, cfg, nullptr);
}

EvalResult regular_part_with_error(const FourVector& q, const FourVector& z, const StateSpec& s,
                                   const QuadratureConfig& cfg)
{
    validate(cfg);
    if (!cone_contains(s.domain, q))
        throw std::domain_error("regular_part: q outside the state domain");
    const RestSeparation rs = rest_frame_separation(s.beta_at(q), z);
    if (s.mass == 0.0) {
        const double value = regular_part_closed_massless(rs.t, rs.r, rs.b);
#ifndef NDEBUG
        {
            // Cross-check the two routes in debug builds.
            QuadratureConfig loose = cfg;
            loose.rel_tol = std::max(cfg.rel_tol, 1e-9);
            loose.abs_tol = std::max(cfg.abs_tol, 1e-11);
            try {
                const double byquad = reduced_quadrature(rs.t, rs.r, rs.b, 0.0, loose, nullptr);
                assert(std::abs(byquad - value) <=
                       1e-6 * (std::abs(value) + 1.0 / (12.0 * rs.b * rs.b)));
            } catch (const quadrature_error&) {
            }
        }
#endif
        const double scale = std::abs(value) + 1.0 / (12.0 * rs.b * rs.b);
        return {value, 64.0 * 2.22e-16 * scale};
    }
    double err = 0;
    const double value = reduced_quadrature(rs.t, rs.r, rs.b, s.mass, cfg, &err);
    return {value, err};
}

double coincidence_limit(const FourVector& q, const StateSpec& s, const QuadratureConfig& cfg)
{
    validate(cfg);
    if (!cone_contains(s.domain, q))
        throw std::domain_error("coincidence_limit: q outside the state domain");
    const FourVector beta = s.beta_at(q);
    const double b = std::sqrt(mink_dot(beta, beta));
    if (s.mass == 0.0) return 1.0 / (12.0 * b * b);
    return reduced_quadrature(0.0, 0.0, b, s.mass, cfg, nullptr);
}

double full_two_point_spacelike_massless(const FourVector& q, const FourVector& z,
                                         const StateSpec& s, const QuadratureConfig& cfg)
{
    if (s.mass != 0.0)
        throw std::invalid_argument("full_two_point_spacelike_massless: mass must be 0");
    const double zz = mink_dot(z, z);
    if (!(zz < 0))
        throw std::invalid_argument("full_two_point_spacelike_massless: z must be spacelike");
    // Vacuum part 1/(4 pi^2 (r'^2 - t'^2)) = -1/(4 pi^2 <z,z>), frame free.
    return regular_part(q, z, s, cfg) - 1.0 / (4.0 * kPi * kPi * zz);
}

}  // namespace lkms
