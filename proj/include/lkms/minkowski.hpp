#pragma once

#include <array>
#include <utility>

namespace lkms {

/// Spatial momentum / direction triple.
using Vec3 = std::array<double, 3>;

/**
 * A point or vector of Minkowski space with metric signature (+,-,-,-).
 * Component 0 is time; natural units (hbar = c = k_B = 1) throughout.
 * Components are contravariant (coordinate) components.
 */
struct FourVector
{
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    FourVector() = default;
    FourVector(double t_, double x_, double y_, double z_);

    double& operator[](int mu);
    const double& operator[](int mu) const;

    FourVector operator+(const FourVector& o) const { return {t + o.t, x + o.x, y + o.y, z + o.z}; }
    FourVector operator-(const FourVector& o) const { return {t - o.t, x - o.x, y - o.y, z - o.z}; }
    FourVector operator-() const { return {-t, -x, -y, -z}; }
    FourVector operator*(double s) const { return {t * s, x * s, y * s, z * s}; }
    FourVector operator/(double s) const { return {t / s, x / s, y / s, z / s}; }

    bool operator==(const FourVector&) const = default;
};

/// Minkowski inner product a^0 b^0 - a.b with signature (+,-,-,-).
inline double mink_dot(const FourVector& a, const FourVector& b)
{
    return a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z;
}

/// Covariant components (index lowered with the metric).
inline std::array<double, 4> covariant(const FourVector& v)
{
    return {v.t, -v.x, -v.y, -v.z};
}

/// Euclidean norm of the spatial part.
double spatial_norm(const FourVector& v);

/// Point-split coordinates: (q, z) -> (q - z/2, q + z/2).
std::pair<FourVector, FourVector> point_split(const FourVector& q, const FourVector& z);

/// Inverse of point_split: (x, y) -> ((x + y)/2, y - x).
std::pair<FourVector, FourVector> split_point(const FourVector& x, const FourVector& y);

enum class ConeKind { ForwardCone, BackwardCone, AllMinkowski };

/**
 * An open lightcone region V+(apex), V-(apex), or all of Minkowski space.
 * Cones are open: null-separated points are outside.
 */
struct ConeRegion
{
    ConeKind kind = ConeKind::AllMinkowski;
    FourVector apex{};

    static ConeRegion forward(const FourVector& apex) { return {ConeKind::ForwardCone, apex}; }
    static ConeRegion backward(const FourVector& apex) { return {ConeKind::BackwardCone, apex}; }
    static ConeRegion all() { return {ConeKind::AllMinkowski, FourVector{}}; }
};

bool cone_contains(const ConeRegion& region, const FourVector& q);

/**
 * Lift a spatial momentum onto the mass shell: p -> (omega_p, p) with
 * omega_p = sqrt(|p|^2 + m^2). Rejects m < 0.
 */
FourVector shell_lift(const Vec3& p3, double m);

/**
 * True if v is strictly future-pointing timelike, with the guard
 * <v,v> > 1e-12 (v^0)^2 against catastrophic cancellation near the cone.
 */
bool is_future_timelike(const FourVector& v);

/**
 * A Lorentz transformation given by its matrix Lambda^mu_nu acting on
 * contravariant components. Construction checks Lambda^T eta Lambda = eta
 * to 1e-12 componentwise.
 */
class LorentzBoost
{
public:
    using Matrix = std::array<std::array<double, 4>, 4>;

    LorentzBoost();  // identity

    static LorentzBoost identity();

    /// Pure boost with velocity v, |v| < 1. The boosted frame moves with
    /// velocity v relative to the original one.
    static LorentzBoost from_velocity(double vx, double vy, double vz);

    /// Wrap an explicit matrix; throws if it does not preserve the metric.
    static LorentzBoost from_matrix(const Matrix& m);

    FourVector apply(const FourVector& v) const;
    FourVector operator*(const FourVector& v) const { return apply(v); }

    /// Exact inverse eta Lambda^T eta.
    LorentzBoost inverse() const;

    const Matrix& matrix() const { return m_; }

private:
    explicit LorentzBoost(const Matrix& m, bool validated);
    Matrix m_;
};

struct RestFrame
{
    LorentzBoost boost;  // maps beta to (b, 0, 0, 0)
    double b = 0;        // sqrt(<beta,beta>), the rest-frame inverse temperature
};

/**
 * Pure boost into the rest frame of a future-pointing timelike vector.
 * Returns the boost Lambda with Lambda beta = (b, 0, 0, 0) and b = |beta|.
 * Rejects vectors that are not future timelike.
 */
RestFrame boost_to_rest(const FourVector& beta);

}  // namespace lkms
