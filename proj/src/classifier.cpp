#include "lkms/classifier.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "lkms/constraints.hpp"

namespace lkms {

namespace {

std::string format_vector(const FourVector& v)
{
    std::ostringstream s;
    s << "(" << v.t << ", " << v.x << ", " << v.y << ", " << v.z << ")";
    return s.str();
}

Verdict rejection(std::string reason, double fit_residual = 0)
{
    Verdict v;
    v.kind = VerdictKind::NotLKMS;
    v.reason = std::move(reason);
    v.fit_residual = fit_residual;
    return v;
}

// Rank of the affine hull of the samples: the span of q_i - q_0 must be all
// of R^4 for the fit to be determined.
int affine_rank(std::span<const FourVector> samples)
{
    if (samples.size() < 2) return 0;
    std::vector<std::array<double, 4>> rows;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const FourVector d = samples[i] - samples[0];
        rows.push_back({d.t, d.x, d.y, d.z});
    }
    int rank = 0;
    for (int col = 0; col < 4 && rank < static_cast<int>(rows.size()); ++col) {
        int pivot = -1;
        double best = 1e-12;
        for (std::size_t r = rank; r < rows.size(); ++r) {
            if (std::abs(rows[r][col]) > best) {
                best = std::abs(rows[r][col]);
                pivot = static_cast<int>(r);
            }
        }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            const double factor = rows[r][col] / rows[rank][col];
            for (int c = col; c < 4; ++c) rows[r][c] -= factor * rows[rank][c];
        }
        ++rank;
    }
    return rank;
}

}  // namespace

const char* to_string(VerdictKind kind)
{
    switch (kind) {
        case VerdictKind::GlobalKMS: return "GlobalKMS";
        case VerdictKind::HotBang: return "HotBang";
        case VerdictKind::ColdBang: return "ColdBang";
        case VerdictKind::NotLKMS: return "NotLKMS";
    }
    return "?";
}

Verdict classify_affine(const AffineBetaField& f, double m,
                        std::span<const FourVector> domain_samples, double tol)
{
    if (!(tol > 0)) throw std::invalid_argument("classify_affine: tol must be > 0");
    if (domain_samples.empty())
        throw std::invalid_argument("classify_affine: domain_samples must be nonempty");
    if (!(m >= 0)) throw std::invalid_argument("classify_affine: mass must be >= 0");

    if (f.C.max_norm() > tol)
        return rejection("antisymmetric part C must vanish for every local-KMS state");
    if (m > 0 && std::abs(f.c) > tol)
        return rejection("massive local-KMS states require a constant field (c = 0)");

    Verdict v;
    if (std::abs(f.c) <= tol) {
        if (!is_future_timelike(f.beta_tilde)) return rejection("beta not future timelike");
        v.kind = VerdictKind::GlobalKMS;
        v.c = 0;
        v.beta_tilde = f.beta_tilde;
        v.region = ConeRegion::all();
    } else {
        // beta(q) = c q + beta_tilde = c (q + beta_tilde / c)
        const FourVector offset = f.beta_tilde / f.c;
        v.c = f.c;
        v.beta_tilde = offset;
        if (f.c > 0) {
            v.kind = VerdictKind::HotBang;
            v.region = ConeRegion::forward(-offset);
        } else {
            v.kind = VerdictKind::ColdBang;
            v.region = ConeRegion::backward(-offset);
        }
    }

    for (const FourVector& q : domain_samples) {
        if (!cone_contains(v.region, q))
            return rejection("domain outside maximal region: sample " + format_vector(q));
        if (!is_future_timelike(f(q)))
            return rejection("beta not future timelike at sample " + format_vector(q));
    }
    return v;
}

Verdict classify_field(const BetaFieldFn& f, double m, std::span<const FourVector> samples,
                       double h, double tol)
{
    if (!(tol > 0)) throw std::invalid_argument("classify_field: tol must be > 0");
    if (samples.size() < 5)
        throw std::invalid_argument("classify_field: need at least 5 samples");
    if (affine_rank(samples) < 4)
        throw std::invalid_argument("classify_field: samples must be affinely independent");

    std::vector<Tensor2> jacobians;
    jacobians.reserve(samples.size());
    for (const FourVector& q : samples) jacobians.push_back(beta_jacobian(f, q, h));

    double jscale = 0;
    for (const Tensor2& J : jacobians) jscale = std::max(jscale, J.max_norm());
    for (std::size_t i = 0; i < jacobians.size(); ++i) {
        for (std::size_t j = i + 1; j < jacobians.size(); ++j) {
            if ((jacobians[i] - jacobians[j]).max_norm() > tol * (1.0 + jscale))
                return rejection("non-affine field");
        }
    }

    Tensor2 mean;
    for (const Tensor2& J : jacobians) mean = mean + J;
    mean = mean * (1.0 / static_cast<double>(jacobians.size()));

    auto [S, C] = sym_antisym_split(mean);
    // Metric projection of the symmetric part; the remainder measures how
    // far the Jacobian is from the admissible form c eta + antisymmetric.
    const double c = (S.a[0][0] - S.a[1][1] - S.a[2][2] - S.a[3][3]) / 4.0;
    const double shape_residual = (S - Tensor2::metric() * c).max_norm();

    // Offset fit: mean over samples of beta_nu(q) - c q_nu - C_{mu nu} q^mu
    // (the least-squares solution once c and C are fixed).
    AffineBetaField model(c, C, FourVector{});
    FourVector offset{};
    for (const FourVector& q : samples) offset = offset + (f(q) - model(q));
    offset = offset / static_cast<double>(samples.size());

    AffineBetaField fitted(c, C, offset);
    double value_residual = 0;
    for (const FourVector& q : samples) {
        const FourVector d = f(q) - fitted(q);
        for (int mu = 0; mu < 4; ++mu) value_residual = std::max(value_residual, std::abs(d[mu]));
    }
    const double fit_residual = std::max(shape_residual, value_residual);

    if (shape_residual > tol * (1.0 + jscale)) {
        Verdict v = rejection("Jacobian not of the form c eta + antisymmetric", fit_residual);
        return v;
    }

    Verdict v = classify_affine(fitted, m, samples, tol);
    v.fit_residual = fit_residual;
    return v;
}

ConeRegion maximal_region(const Verdict& v)
{
    if (v.kind == VerdictKind::NotLKMS)
        throw std::invalid_argument("maximal_region: verdict is NotLKMS");
    return v.region;
}

double temperature(const StateSpec& s, const FourVector& q)
{
    const FourVector beta = s.beta_at(q);
    return 1.0 / std::sqrt(mink_dot(beta, beta));
}

double temperature(const AffineBetaField& f, const FourVector& q)
{
    return temperature(StateSpec(0.0, f), q);
}

double temperature(const BetaFieldFn& f, const FourVector& q)
{
    return temperature(StateSpec(0.0, f), q);
}

}  // namespace lkms
