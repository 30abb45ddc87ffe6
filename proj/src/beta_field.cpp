#include "lkms/beta_field.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lkms {

AffineBetaField::AffineBetaField(double c_, const Tensor2& C_, const FourVector& beta_tilde_)
    : c(c_), C(C_), beta_tilde(beta_tilde_)
{
    if (!std::isfinite(c)) throw std::invalid_argument("AffineBetaField: c must be finite");
    if (!C.is_antisymmetric(1e-14))
        throw std::invalid_argument("AffineBetaField: C must be antisymmetric (tol 1e-14)");
}

AffineBetaField AffineBetaField::constant(const FourVector& value)
{
    return AffineBetaField(0.0, Tensor2::zero(), value);
}

FourVector AffineBetaField::operator()(const FourVector& q) const
{
    // (C.q)_nu = C_{mu nu} q^mu; raise the index to return coordinate
    // components.
    std::array<double, 4> lower{};
    for (int nu = 0; nu < 4; ++nu) {
        double s = 0;
        for (int mu = 0; mu < 4; ++mu) s += C.a[mu][nu] * q[mu];
        lower[nu] = s;
    }
    return FourVector{c * q.t + lower[0] + beta_tilde.t, c * q.x - lower[1] + beta_tilde.x,
                      c * q.y - lower[2] + beta_tilde.y, c * q.z - lower[3] + beta_tilde.z};
}

Tensor2 AffineBetaField::jacobian() const
{
    return Tensor2::metric() * c + C;
}

StateSpec::StateSpec(double mass_, AffineBetaField field, ConeRegion domain_)
    : mass(mass_), beta(std::move(field)), domain(domain_)
{
    if (!(mass >= 0)) throw std::invalid_argument("StateSpec: mass must be >= 0");
}

StateSpec::StateSpec(double mass_, BetaFieldFn field, ConeRegion domain_)
    : mass(mass_), beta(std::move(field)), domain(domain_)
{
    if (!(mass >= 0)) throw std::invalid_argument("StateSpec: mass must be >= 0");
    if (!std::get<BetaFieldFn>(beta)) throw std::invalid_argument("StateSpec: empty field callable");
}

FourVector StateSpec::beta_raw(const FourVector& q) const
{
    if (const auto* f = std::get_if<AffineBetaField>(&beta)) return (*f)(q);
    return std::get<BetaFieldFn>(beta)(q);
}

FourVector StateSpec::beta_at(const FourVector& q) const
{
    const FourVector b = beta_raw(q);
    if (!is_future_timelike(b)) {
        std::ostringstream msg;
        msg << "beta(q) = (" << b.t << ", " << b.x << ", " << b.y << ", " << b.z
            << ") is not future-pointing timelike at q = (" << q.t << ", " << q.x << ", " << q.y
            << ", " << q.z << ")";
        throw std::domain_error(msg.str());
    }
    return b;
}

}  // namespace lkms
