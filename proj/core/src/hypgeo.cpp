#include "loewner/hypgeo.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace loewner {

namespace {

constexpr double kBoundaryTol = 1e-12;
constexpr double kArcMembershipTol = 1e-8;

// 1 - |z|^2 without the cancellation of 1 - norm(z) near the circle.
double one_minus_abs2(Complex z) {
    const double r = std::abs(z);
    return (1.0 - r) * (1.0 + r);
}

void require_in_disk(Complex z, const char* what) {
    if (!(std::abs(z) < 1.0)) {
        throw DomainError(std::string(what) + ": point outside the open unit disk");
    }
}

double wrap_to_two_pi(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

} // namespace

DiskPoint::DiskPoint(Complex value) : value_(value) {
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()) || !(std::abs(value) < 1.0)) {
        throw DomainError("DiskPoint requires |z| < 1");
    }
}

BoundaryPoint::BoundaryPoint(Complex value) {
    const double r = std::abs(value);
    if (!(std::abs(r - 1.0) <= kBoundaryTol)) {
        throw DomainError("BoundaryPoint requires |z| = 1 within 1e-12");
    }
    value_ = value / r;
}

HalfPlanePoint::HalfPlanePoint(Complex value) : value_(value) {
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()) || !(value.real() > 0.0)) {
        throw DomainError("HalfPlanePoint requires Re w > 0");
    }
}

HalfPlanePoint HalfPlanePoint::infinity() noexcept {
    HalfPlanePoint p;
    p.infinite_ = true;
    return p;
}

Complex HalfPlanePoint::value() const {
    if (infinite_) throw DomainError("infinite point has no finite coordinate");
    return value_;
}

EuclideanCircle::EuclideanCircle(Complex c, double r) : center(c), radius(r) {
    if (!(r > 0.0)) throw DomainError("circle radius must be positive");
}

Horocycle::Horocycle(BoundaryPoint contact, double factor) : contact_(contact), factor_(factor) {
    if (!(factor > 0.0)) throw DomainError("horocycle factor must be positive");
}

HypDisk::HypDisk(DiskPoint center, double radius) : center_(center), radius_(radius) {
    if (!(radius > 0.0)) throw DomainError("hyperbolic radius must be positive");
}

ClosedArc::ClosedArc(EuclideanCircle circle, double theta_lo, double theta_hi)
    : circle_(circle), theta_lo_(theta_lo), theta_hi_(theta_hi) {
    const double extent = theta_hi - theta_lo;
    if (!(extent > 0.0) || extent > kTwoPi * (1.0 + 1e-15)) {
        throw DomainError("arc requires 0 < theta_hi - theta_lo <= 2 pi");
    }
}

StolzAngle::StolzAngle(BoundaryPoint vertex, double half_opening)
    : vertex_(vertex), half_opening_(half_opening) {
    if (!(half_opening > 0.0 && half_opening < kPi / 2)) {
        throw DomainError("Stolz angle half-opening must lie in (0, pi/2)");
    }
}

double hyp_dist_disk(Complex z1, Complex z2) {
    require_in_disk(z1, "hyp_dist_disk");
    require_in_disk(z2, "hyp_dist_disk");
    if (z1 == z2) return 0.0;
    const double num = std::abs(z1 - z2);
    const double den = std::abs(1.0 - std::conj(z1) * z2);
    const double t = num / den;
    if (t < 0.5) return std::log1p(t) - std::log1p(-t);
    // 1 - t^2 = (1-|z1|^2)(1-|z2|^2)/|1 - conj(z1) z2|^2, evaluated without cancellation.
    const double one_minus_t2 = one_minus_abs2(z1) * one_minus_abs2(z2) / (den * den);
    return 2.0 * std::log1p(t) - std::log(one_minus_t2);
}

double hyp_dist_disk(DiskPoint z1, DiskPoint z2) { return hyp_dist_disk(z1.value(), z2.value()); }

double hyp_dist_halfplane(HalfPlanePoint w1, HalfPlanePoint w2) {
    if (w1.is_infinite() || w2.is_infinite()) {
        throw DomainError("infinite point has no finite distance");
    }
    const Complex a = w1.value();
    const Complex b = w2.value();
    if (a == b) return 0.0;
    // Pull-back through sigma^{-1} written directly in H:
    // tanh(rho/2) = |a - b| / |a + conj(b)|.
    const double t = std::abs(a - b) / std::abs(a + std::conj(b));
    if (t < 0.5) return std::log1p(t) - std::log1p(-t);
    const double den = std::norm(a + std::conj(b));
    const double one_minus_t2 = 4.0 * a.real() * b.real() / den;
    return 2.0 * std::log1p(t) - std::log(one_minus_t2);
}

double hyp_length_polyline(std::span<const Complex> samples) {
    if (samples.size() < 2) throw DomainError("hyp_length_polyline needs at least two samples");
    double total = 0.0;
    double f_prev = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        require_in_disk(samples[k], "hyp_length_polyline");
        const double f = 2.0 / one_minus_abs2(samples[k]);
        if (k > 0) {
            const double ds = std::abs(samples[k] - samples[k - 1]);
            if (ds == 0.0) throw DomainError("hyp_length_polyline: consecutive samples coincide");
            total += 0.5 * (f_prev + f) * ds;
        }
        f_prev = f;
    }
    return total;
}

double hyp_length_curve(const std::function<Complex(double)>& gamma, double a, double b,
                        std::size_t segments) {
    if (segments == 0 || !(b >= a)) throw DomainError("hyp_length_curve: bad parameter range");
    double total = 0.0;
    Complex prev = gamma(a);
    require_in_disk(prev, "hyp_length_curve");
    double f_prev = 2.0 / one_minus_abs2(prev);
    for (std::size_t k = 1; k <= segments; ++k) {
        const double u = a + (b - a) * static_cast<double>(k) / static_cast<double>(segments);
        const Complex z = gamma(u);
        require_in_disk(z, "hyp_length_curve");
        const double f = 2.0 / one_minus_abs2(z);
        total += 0.5 * (f_prev + f) * std::abs(z - prev);
        prev = z;
        f_prev = f;
    }
    return total;
}

HalfPlanePoint cayley(BoundaryPoint tau, DiskPoint z) {
    return HalfPlanePoint(cayley_map(tau.value(), z.value()));
}

std::variant<Complex, HalfPlanePoint> cayley(BoundaryPoint tau, BoundaryPoint z) {
    if (std::abs(tau.value() - z.value()) <= kBoundaryTol) return HalfPlanePoint::infinity();
    const Complex w = cayley_map(tau.value(), z.value());
    return Complex(0.0, w.imag());
}

DiskPoint cayley_inv(BoundaryPoint tau, HalfPlanePoint w) {
    if (w.is_infinite()) throw DomainError("cayley_inv: infinity maps to the boundary point tau");
    return DiskPoint(cayley_inverse_map(tau.value(), w.value()));
}

DiskPoint mobius_involution(DiskPoint tau, DiskPoint z) {
    return DiskPoint(mobius_involution_map(tau.value(), z.value()));
}

double horocycle_factor(Complex xi, Complex z) {
    require_in_disk(z, "horocycle_factor");
    return std::norm(xi - z) / one_minus_abs2(z);
}

double horocycle_factor(BoundaryPoint xi, DiskPoint z) {
    return horocycle_factor(xi.value(), z.value());
}

EuclideanCircle horocycle_geometry(const Horocycle& h) {
    const double k = h.factor();
    return EuclideanCircle(h.contact().value() / (1.0 + k), k / (1.0 + k));
}

EuclideanCircle hyp_disk_geometry(const HypDisk& d) {
    const double big_r = std::tanh(0.5 * d.radius());
    const Complex a = d.center().value();
    const double a2 = std::norm(a);
    const double den = 1.0 - big_r * big_r * a2;
    return EuclideanCircle(a * (1.0 - big_r * big_r) / den, big_r * (1.0 - a2) / den);
}

double angular_extent(const ClosedArc& arc, const ArcSupport& support, std::size_t samples) {
    if (samples < 2) throw DomainError("angular_extent needs at least two samples");
    const EuclideanCircle expected = std::visit(
        [](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Horocycle>) {
                return horocycle_geometry(s);
            } else {
                return hyp_disk_geometry(s);
            }
        },
        support);
    const EuclideanCircle& c = arc.circle();
    const double tol = kArcMembershipTol * expected.radius;
    if (std::abs(c.center - expected.center) > tol || std::abs(c.radius - expected.radius) > tol) {
        throw DomainError("angular_extent: arc does not lie on the support circle");
    }

    double divisor = 0.0;
    if (const auto* h = std::get_if<Horocycle>(&support)) {
        const double theta_xi = std::arg(h->contact().value() - c.center);
        if (wrap_to_two_pi(theta_xi - arc.theta_lo()) <= arc.extent()) {
            throw DomainError("angular_extent: horocycle arc through its contact point has "
                              "infinite hyperbolic length");
        }
        divisor = h->factor();
    } else {
        divisor = std::sinh(std::get<HypDisk>(support).radius());
    }

    std::vector<Complex> pts(samples + 1);
    for (std::size_t k = 0; k <= samples; ++k) {
        const double theta = arc.theta_lo() + arc.extent() * static_cast<double>(k) /
                                                  static_cast<double>(samples);
        pts[k] = expected.at(theta);
    }
    return hyp_length_polyline(pts) / divisor;
}

bool stolz_contains(const StolzAngle& s, DiskPoint z) {
    return stolz_angle_of(s.vertex().value(), z.value()) < s.half_opening();
}

} // namespace loewner
