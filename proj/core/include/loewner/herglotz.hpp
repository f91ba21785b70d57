#pragma once

// Generalized Herglotz vector fields with a constant Denjoy-Wolff point:
// Berkson-Porta form, transfer to the right half-plane, and numerical
// positivity / holomorphy probes.
//
// Measurability in t cannot be observed numerically. Fields declare the
// times where t-regularity may fail (Breakpoints) and are assumed piecewise
// continuous in between; quadrature and ODE stepping never cross one.

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "loewner/hypgeo.hpp"

namespace loewner {

class EvolutionFamily;

using FieldFn = std::function<Complex(Complex, double)>;

/// Sorted explicit breakpoints plus an optional periodic lattice
/// {k * period : k >= 1}.
class Breakpoints {
public:
    Breakpoints() = default;
    explicit Breakpoints(std::vector<double> points, double period = 0.0);

    static Breakpoints periodic(double period) { return Breakpoints({}, period); }

    bool empty() const noexcept { return points_.empty() && period_ <= 0.0; }
    const std::vector<double>& points() const noexcept { return points_; }
    double period() const noexcept { return period_; }

    /// Smallest breakpoint strictly greater than t.
    std::optional<double> next_after(double t) const;
    /// Largest breakpoint less than or equal to t.
    std::optional<double> last_at_or_before(double t) const;
    /// True if some breakpoint lies within distance h of t.
    bool near(double t, double h) const;

private:
    std::vector<double> points_;
    double period_ = 0.0;
};

/// The common Denjoy-Wolff point of a disk family: inner or on the circle.
using DenjoyWolffPoint = std::variant<DiskPoint, BoundaryPoint>;

inline Complex point_value(const DenjoyWolffPoint& p) {
    return std::visit([](const auto& q) { return q.value(); }, p);
}
inline bool is_boundary(const DenjoyWolffPoint& p) {
    return std::holds_alternative<BoundaryPoint>(p);
}
/// Boundary if | |tau| - 1 | <= 1e-12, inner if |tau| < 1, else DomainError.
DenjoyWolffPoint make_denjoy_wolff(Complex tau);

struct HerglotzField {
    DenjoyWolffPoint tau;
    FieldFn p;
    Breakpoints breakpoints;
};

/// G(z, t) = (z - tau)(conj(tau) z - 1) p(z, t).
struct DiskVectorField {
    FieldFn eval;
    DenjoyWolffPoint tau;
    Breakpoints breakpoints;

    Complex operator()(Complex z, double t) const { return eval(z, t); }
};

struct HalfPlaneVectorField {
    FieldFn eval;
    Breakpoints breakpoints;

    Complex operator()(Complex w, double t) const { return eval(w, t); }
    /// Throws DomainError at infinity.
    Complex operator()(HalfPlanePoint w, double t) const;
};

struct ProbeSample {
    Complex z;
    double t;
};

struct HerglotzReport {
    double min_re = 0.0;
    double max_cr_residual = 0.0;
    bool pass = false;
    std::size_t samples = 0;
    std::vector<ProbeSample> violations;
};

inline constexpr double kHerglotzPositivitySlack = 1e-10;
inline constexpr double kCauchyRiemannTol = 1e-6;
inline constexpr double kCauchyRiemannStencil = 1e-4;

/// Radii {0, .25, .5, .75, .9} x 8 angles x `times`; times within 1e-3 of
/// a breakpoint are nudged off it.
std::vector<ProbeSample> default_probe_grid(const Breakpoints& breakpoints = {},
                                            std::vector<double> times = {});

HerglotzReport validate_herglotz(const FieldFn& p, const std::vector<ProbeSample>& grid);

/// Validates p on the default probe grid; HerglotzError lists violators.
DiskVectorField berkson_porta_field(const HerglotzField& field);

/// F(w, t) = sigma_tau'(z) G(z, t) with z = sigma_tau^{-1}(w).
HalfPlaneVectorField transfer_to_halfplane(const DiskVectorField& g, BoundaryPoint tau);
/// Inverse of transfer_to_halfplane: G(z, t) = F(sigma_tau(z), t) / sigma_tau'(z).
DiskVectorField transfer_to_disk(const HalfPlaneVectorField& f, BoundaryPoint tau);

/// Integral of |F(w, xi)| over [0, T] by adaptive Gauss-Kronrod, split at
/// breakpoints. Throws IntegrationError when the requested tolerance is not
/// reached.
double l1_diagnostic(const HalfPlaneVectorField& f, HalfPlanePoint w, double horizon,
                     double tolerance = 1e-10);

/// (phi_{t,t+h}(z) - z) / h, optionally Richardson-extrapolated over h, h/2.
Complex finite_diff_generator(const EvolutionFamily& family, Complex z, double t, double h,
                              bool richardson = false);

} // namespace loewner
