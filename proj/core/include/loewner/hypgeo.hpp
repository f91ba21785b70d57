#pragma once

// Hyperbolic geometry of the unit disk D and the right half-plane H.
//
// All functions are pure. Points carry their domain invariant in the type:
// a DiskPoint is strictly inside D, a BoundaryPoint sits on the unit circle,
// a HalfPlanePoint is either in H or the point at infinity.

#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <variant>

#include "loewner/errors.hpp"

namespace loewner {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

class DiskPoint {
public:
    explicit DiskPoint(Complex value);
    Complex value() const noexcept { return value_; }

private:
    Complex value_;
};

class BoundaryPoint {
public:
    /// Accepts | |value| - 1 | <= 1e-12 and renormalizes to modulus one.
    explicit BoundaryPoint(Complex value);
    Complex value() const noexcept { return value_; }

private:
    Complex value_;
};

class HalfPlanePoint {
public:
    explicit HalfPlanePoint(Complex value);
    static HalfPlanePoint infinity() noexcept;

    bool is_infinite() const noexcept { return infinite_; }
    /// Throws DomainError for the point at infinity.
    Complex value() const;

private:
    HalfPlanePoint() = default;
    Complex value_{};
    bool infinite_ = false;
};

struct EuclideanCircle {
    Complex center;
    double radius;

    EuclideanCircle(Complex c, double r);
    Complex at(double theta) const { return center + std::polar(radius, theta); }
};

class Horocycle {
public:
    Horocycle(BoundaryPoint contact, double factor);
    BoundaryPoint contact() const noexcept { return contact_; }
    double factor() const noexcept { return factor_; }

private:
    BoundaryPoint contact_;
    double factor_;
};

class HypDisk {
public:
    HypDisk(DiskPoint center, double radius);
    DiskPoint center() const noexcept { return center_; }
    double radius() const noexcept { return radius_; }

private:
    DiskPoint center_;
    double radius_;
};

/// Closed arc {center + R e^{i theta} : theta_lo <= theta <= theta_hi}.
class ClosedArc {
public:
    ClosedArc(EuclideanCircle circle, double theta_lo, double theta_hi);

    const EuclideanCircle& circle() const noexcept { return circle_; }
    double theta_lo() const noexcept { return theta_lo_; }
    double theta_hi() const noexcept { return theta_hi_; }
    double extent() const noexcept { return theta_hi_ - theta_lo_; }
    bool is_proper() const noexcept { return extent() < kTwoPi; }
    Complex start() const { return circle_.at(theta_lo_); }
    Complex end() const { return circle_.at(theta_hi_); }

private:
    EuclideanCircle circle_;
    double theta_lo_;
    double theta_hi_;
};

class StolzAngle {
public:
    StolzAngle(BoundaryPoint vertex, double half_opening);
    BoundaryPoint vertex() const noexcept { return vertex_; }
    double half_opening() const noexcept { return half_opening_; }

private:
    BoundaryPoint vertex_;
    double half_opening_;
};

// --- distances and lengths -------------------------------------------------

double hyp_dist_disk(DiskPoint z1, DiskPoint z2);

/// Same value as hyp_dist_disk on raw coordinates; both must lie in D.
double hyp_dist_disk(Complex z1, Complex z2);

double hyp_dist_halfplane(HalfPlanePoint w1, HalfPlanePoint w2);

/// Trapezoidal hyperbolic length of the polyline through `samples`.
/// Requires at least two samples, consecutive samples distinct, all in D.
double hyp_length_polyline(std::span<const Complex> samples);

/// Length of gamma on [a, b] sampled at `segments` + 1 equispaced
/// parameters. Zero-length segments are skipped, so a constant curve has
/// length zero.
double hyp_length_curve(const std::function<Complex(double)>& gamma, double a, double b,
                        std::size_t segments);

// --- conformal maps --------------------------------------------------------

/// sigma_tau(z) = (tau + z) / (tau - z).
HalfPlanePoint cayley(BoundaryPoint tau, DiskPoint z);

/// Boundary overload. The image of tau is the point at infinity; every other
/// boundary point lands on the imaginary axis, returned as a raw complex.
std::variant<Complex, HalfPlanePoint> cayley(BoundaryPoint tau, BoundaryPoint z);

/// sigma_tau^{-1}(w) = tau (w - 1) / (w + 1). Infinity is rejected.
DiskPoint cayley_inv(BoundaryPoint tau, HalfPlanePoint w);

/// Raw-coordinate versions used on hot paths.
inline Complex cayley_map(Complex tau, Complex z) { return (tau + z) / (tau - z); }
inline Complex cayley_inverse_map(Complex tau, Complex w) { return tau * (w - 1.0) / (w + 1.0); }
inline Complex cayley_derivative(Complex tau, Complex z) {
    const Complex d = tau - z;
    return 2.0 * tau / (d * d);
}

/// alpha_tau(z) = (tau - z) / (1 - conj(tau) z). An involution of D.
DiskPoint mobius_involution(DiskPoint tau, DiskPoint z);
inline Complex mobius_involution_map(Complex tau, Complex z) {
    return (tau - z) / (1.0 - std::conj(tau) * z);
}

// --- horocycles, hyperbolic disks, arcs ------------------------------------

/// k_D(xi, z) = |xi - z|^2 / (1 - |z|^2).
double horocycle_factor(BoundaryPoint xi, DiskPoint z);
double horocycle_factor(Complex xi, Complex z);

EuclideanCircle horocycle_geometry(const Horocycle& h);
EuclideanCircle hyp_disk_geometry(const HypDisk& d);

/// Angular extent of a closed arc on a horocycle boundary (l_H / k) or on a
/// hyperbolic circle (l_H / sinh r). `samples` controls the polyline used
/// for l_H.
using ArcSupport = std::variant<Horocycle, HypDisk>;
double angular_extent(const ClosedArc& arc, const ArcSupport& support,
                      std::size_t samples = 10000);

bool stolz_contains(const StolzAngle& s, DiskPoint z);
inline double stolz_angle_of(Complex tau, Complex z) {
    return std::abs(std::arg(1.0 - std::conj(tau) * z));
}

} // namespace loewner
