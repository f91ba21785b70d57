#include "loewner/herglotz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "loewner/evolution.hpp"

namespace loewner {

Breakpoints::Breakpoints(std::vector<double> points, double period)
    : points_(std::move(points)), period_(period) {
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
    if (period_ < 0.0) throw DomainError("breakpoint period must be non-negative");
}

std::optional<double> Breakpoints::next_after(double t) const {
    std::optional<double> best;
    const auto it = std::upper_bound(points_.begin(), points_.end(), t);
    if (it != points_.end()) best = *it;
    if (period_ > 0.0) {
        double k = std::floor(t / period_) + 1.0;
        if (k < 1.0) k = 1.0;
        double cand = k * period_;
        if (cand <= t) cand += period_;
        if (!best || cand < *best) best = cand;
    }
    return best;
}

std::optional<double> Breakpoints::last_at_or_before(double t) const {
    std::optional<double> best;
    const auto it = std::upper_bound(points_.begin(), points_.end(), t);
    if (it != points_.begin()) best = *std::prev(it);
    if (period_ > 0.0) {
        const double k = std::floor(t / period_);
        if (k >= 1.0) {
            const double cand = k * period_;
            if (!best || cand > *best) best = cand;
        }
    }
    return best;
}

bool Breakpoints::near(double t, double h) const {
    if (const auto prev = last_at_or_before(t); prev && t - *prev <= h) return true;
    if (const auto next = next_after(t); next && *next - t <= h) return true;
    return false;
}

DenjoyWolffPoint make_denjoy_wolff(Complex tau) {
    if (std::abs(std::abs(tau) - 1.0) <= 1e-12) return BoundaryPoint(tau);
    return DiskPoint(tau);
}

Complex HalfPlaneVectorField::operator()(HalfPlanePoint w, double t) const {
    if (w.is_infinite()) throw DomainError("vector field is not defined at infinity");
    return eval(w.value(), t);
}

std::vector<ProbeSample> default_probe_grid(const Breakpoints& breakpoints,
                                            std::vector<double> times) {
    if (times.empty()) times = {0.0, 0.7, 1.9, 3.3, 7.1, 13.7, 50.3};
    for (double& t : times) {
        int guard = 0;
        while (breakpoints.near(t, 1e-3) && guard++ < 8) t += 2.5e-3;
    }
    const double radii[] = {0.0, 0.25, 0.5, 0.75, 0.9};
    std::vector<ProbeSample> grid;
    for (double t : times) {
        for (double r : radii) {
            const int n_angles = r == 0.0 ? 1 : 8;
            for (int k = 0; k < n_angles; ++k) {
                grid.push_back({std::polar(r, kTwoPi * (k + 0.5) / n_angles), t});
            }
        }
    }
    return grid;
}

HerglotzReport validate_herglotz(const FieldFn& p, const std::vector<ProbeSample>& grid) {
    if (grid.empty()) throw DomainError("validate_herglotz needs a nonempty probe grid");
    HerglotzReport report;
    report.min_re = std::numeric_limits<double>::infinity();
    const double h = kCauchyRiemannStencil;
    for (const auto& probe : grid) {
        const Complex value = p(probe.z, probe.t);
        const double re = value.real();
        report.min_re = std::min(report.min_re, re);

        // f_y = i f_x for holomorphic f.
        const Complex fx = (p(probe.z + h, probe.t) - p(probe.z - h, probe.t)) / (2.0 * h);
        const Complex fy = (p(probe.z + Complex(0.0, h), probe.t) -
                            p(probe.z - Complex(0.0, h), probe.t)) / (2.0 * h);
        const double residual = std::abs(fy - Complex(0.0, 1.0) * fx) / (1.0 + std::abs(value));
        const double cr = std::isfinite(residual) ? residual : std::numeric_limits<double>::infinity();
        report.max_cr_residual = std::max(report.max_cr_residual, cr);

        if (!(re >= -kHerglotzPositivitySlack) || !(cr <= kCauchyRiemannTol)) {
            report.violations.push_back(probe);
        }
        ++report.samples;
    }
    report.pass = report.violations.empty();
    return report;
}

DiskVectorField berkson_porta_field(const HerglotzField& field) {
    const HerglotzReport report = validate_herglotz(field.p, default_probe_grid(field.breakpoints));
    if (!report.pass) {
        std::ostringstream msg;
        msg << "Herglotz validation failed (min Re p = " << report.min_re
            << ", max CR residual = " << report.max_cr_residual << ") at";
        const std::size_t shown = std::min<std::size_t>(report.violations.size(), 5);
        for (std::size_t k = 0; k < shown; ++k) {
            const auto& v = report.violations[k];
            msg << " (z=" << v.z.real() << (v.z.imag() < 0 ? "" : "+") << v.z.imag() << "i, t=" << v.t << ")";
        }
        if (report.violations.size() > shown) msg << " and " << report.violations.size() - shown << " more";
        throw HerglotzError(msg.str());
    }
    const Complex tau = point_value(field.tau);
    FieldFn p = field.p;
    return DiskVectorField{
        [tau, p](Complex z, double t) { return (z - tau) * (std::conj(tau) * z - 1.0) * p(z, t); },
        field.tau, field.breakpoints};
}

HalfPlaneVectorField transfer_to_halfplane(const DiskVectorField& g, BoundaryPoint tau) {
    const Complex tv = tau.value();
    FieldFn eval = g.eval;
    return HalfPlaneVectorField{
        [tv, eval](Complex w, double t) {
            const Complex z = cayley_inverse_map(tv, w);
            return cayley_derivative(tv, z) * eval(z, t);
        },
        g.breakpoints};
}

DiskVectorField transfer_to_disk(const HalfPlaneVectorField& f, BoundaryPoint tau) {
    const Complex tv = tau.value();
    FieldFn eval = f.eval;
    return DiskVectorField{
        [tv, eval](Complex z, double t) {
            return eval(cayley_map(tv, z), t) / cayley_derivative(tv, z);
        },
        tau, f.breakpoints};
}

double l1_diagnostic(const HalfPlaneVectorField& f, HalfPlanePoint w, double horizon,
                     double tolerance) {
    if (!(horizon > 0.0)) throw DomainError("l1_diagnostic requires T > 0");
    const Complex wv = w.value();
    constexpr double kChunk = 8.0;
    using Quadrature = boost::math::quadrature::gauss_kronrod<double, 15>;

    double total = 0.0;
    double a = 0.0;
    while (a < horizon) {
        double b = std::min(horizon, a + kChunk);
        if (const auto bp = f.breakpoints.next_after(a); bp && *bp < b) b = *bp;
        double err = 0.0;
        const double part = Quadrature::integrate(
            [&](double xi) { return std::abs(f.eval(wv, xi)); }, a, b, 15, tolerance, &err);
        if (!std::isfinite(part) || err > 100.0 * tolerance * std::max(1.0, std::abs(part))) {
            std::ostringstream msg;
            msg << "l1_diagnostic: quadrature did not converge on [" << a << ", " << b
                << "], achieved error estimate " << err;
            throw IntegrationError(msg.str());
        }
        total += part;
        a = b;
    }
    return total;
}

Complex finite_diff_generator(const EvolutionFamily& family, Complex z, double t, double h,
                              bool richardson) {
    if (!(h > 0.0)) throw DomainError("finite_diff_generator requires h > 0");
    if (family.breakpoints().near(t, h)) {
        throw DomainError("finite_diff_generator: t lies within h of a declared breakpoint");
    }
    const auto quotient = [&](double step) { return (family(t, t + step, z) - z) / step; };
    const Complex d1 = quotient(h);
    if (!richardson) return d1;
    return 2.0 * quotient(0.5 * h) - d1;
}

} // namespace loewner
