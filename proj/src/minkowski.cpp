#include "lkms/minkowski.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lkms {

namespace {

void require_finite(double v, const char* what)
{
    if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << what << " must be finite, got " << v;
        throw std::invalid_argument(msg.str());
    }
}

constexpr double kMetricDiag[4] = {1.0, -1.0, -1.0, -1.0};

}  // namespace

FourVector::FourVector(double t_, double x_, double y_, double z_) : t(t_), x(x_), y(y_), z(z_)
{
    require_finite(t, "FourVector component 0");
    require_finite(x, "FourVector component 1");
    require_finite(y, "FourVector component 2");
    require_finite(z, "FourVector component 3");
}

double& FourVector::operator[](int mu)
{
    switch (mu) {
        case 0: return t;
        case 1: return x;
        case 2: return y;
        case 3: return z;
    }
    throw std::out_of_range("FourVector index must be 0..3");
}

const double& FourVector::operator[](int mu) const
{
    return const_cast<FourVector&>(*this)[mu];
}

double spatial_norm(const FourVector& v)
{
    return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
}

std::pair<FourVector, FourVector> point_split(const FourVector& q, const FourVector& z)
{
    return {q - z / 2.0, q + z / 2.0};
}

std::pair<FourVector, FourVector> split_point(const FourVector& x, const FourVector& y)
{
    return {(x + y) / 2.0, y - x};
}

bool cone_contains(const ConeRegion& region, const FourVector& q)
{
    switch (region.kind) {
        case ConeKind::AllMinkowski: return true;
        case ConeKind::ForwardCone: {
            const FourVector d = q - region.apex;
            return mink_dot(d, d) > 0.0 && d.t > 0.0;
        }
        case ConeKind::BackwardCone: {
            const FourVector d = q - region.apex;
            return mink_dot(d, d) > 0.0 && d.t < 0.0;
        }
    }
    return false;
}

FourVector shell_lift(const Vec3& p3, double m)
{
    if (!(m >= 0.0)) throw std::invalid_argument("shell_lift: mass must be >= 0");
    const double omega = std::sqrt(p3[0] * p3[0] + p3[1] * p3[1] + p3[2] * p3[2] + m * m);
    return {omega, p3[0], p3[1], p3[2]};
}

bool is_future_timelike(const FourVector& v)
{
    return v.t > 0.0 && mink_dot(v, v) > 1e-12 * v.t * v.t;
}

LorentzBoost::LorentzBoost()
{
    m_ = {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}};
}

LorentzBoost::LorentzBoost(const Matrix& m, bool) : m_(m) {}

LorentzBoost LorentzBoost::identity()
{
    return LorentzBoost{};
}

LorentzBoost LorentzBoost::from_velocity(double vx, double vy, double vz)
{
    const double v2 = vx * vx + vy * vy + vz * vz;
    if (!(v2 < 1.0)) throw std::invalid_argument("LorentzBoost: |v| must be < 1");
    const double gamma = 1.0 / std::sqrt(1.0 - v2);
    // (gamma - 1)/v^2 written as gamma^2/(gamma + 1): regular at v = 0.
    const double k = gamma * gamma / (gamma + 1.0);
    const double v[3] = {vx, vy, vz};

    Matrix m{};
    m[0][0] = gamma;
    for (int i = 0; i < 3; ++i) {
        m[0][i + 1] = m[i + 1][0] = -gamma * v[i];
        for (int j = 0; j < 3; ++j) m[i + 1][j + 1] = (i == j ? 1.0 : 0.0) + k * v[i] * v[j];
    }
    return from_matrix(m);
}

LorentzBoost LorentzBoost::from_matrix(const Matrix& m)
{
    // Lambda^T eta Lambda = eta, componentwise to 1e-12.
    for (int mu = 0; mu < 4; ++mu) {
        for (int nu = 0; nu < 4; ++nu) {
            double s = 0;
            for (int a = 0; a < 4; ++a) s += m[a][mu] * kMetricDiag[a] * m[a][nu];
            const double expect = (mu == nu) ? kMetricDiag[mu] : 0.0;
            if (!(std::abs(s - expect) <= 1e-12)) {
                throw std::invalid_argument("LorentzBoost: matrix does not preserve the metric");
            }
        }
    }
    return LorentzBoost(m, true);
}

FourVector LorentzBoost::apply(const FourVector& v) const
{
    FourVector out;
    for (int mu = 0; mu < 4; ++mu) {
        double s = 0;
        for (int nu = 0; nu < 4; ++nu) s += m_[mu][nu] * v[nu];
        out[mu] = s;
    }
    return out;
}

LorentzBoost LorentzBoost::inverse() const
{
    // eta Lambda^T eta; exact for metric-preserving matrices.
    Matrix inv{};
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu)
            inv[mu][nu] = kMetricDiag[mu] * m_[nu][mu] * kMetricDiag[nu];
    return LorentzBoost(inv, true);
}

RestFrame boost_to_rest(const FourVector& beta)
{
    if (!is_future_timelike(beta)) {
        std::ostringstream msg;
        msg << "boost_to_rest: (" << beta.t << ", " << beta.x << ", " << beta.y << ", " << beta.z
            << ") is not future-pointing timelike";
        throw std::invalid_argument(msg.str());
    }
    const double b = std::sqrt(mink_dot(beta, beta));
    if (beta.x == 0.0 && beta.y == 0.0 && beta.z == 0.0) {
        return {LorentzBoost::identity(), b};
    }
    return {LorentzBoost::from_velocity(beta.x / beta.t, beta.y / beta.t, beta.z / beta.t), b};
}

}  // namespace lkms
