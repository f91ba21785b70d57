#include "loewner/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace loewner {

namespace {

constexpr int kMaxSubdivision = 10;

// Quadratic through (x_k, y_k), evaluated at 0 (Neville).
Complex neville_at_zero(const double (&x)[3], const Complex (&y)[3]) {
    Complex p[3] = {y[0], y[1], y[2]};
    for (int m = 1; m < 3; ++m) {
        for (int i = 0; i + m < 3; ++i) {
            p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i]);
        }
    }
    return p[0];
}

struct Increment {
    Complex value;
    bool stable;
};

Increment boundary_increment(const EvolutionFamily& family, double a, double b, int depth) {
    double spread = 0.0;
    const Complex q = boundary_reciprocal_derivative(family, a, b, &spread);
    if (spread <= kRadialAgreement) return {std::log(q), true};
    if (depth >= kMaxSubdivision) return {std::log(q), false};
    const double mid = 0.5 * (a + b);
    const Increment l = boundary_increment(family, a, mid, depth + 1);
    if (!l.stable) return l;
    const Increment r = boundary_increment(family, mid, b, depth + 1);
    return {l.value + r.value, r.stable};
}

} // namespace

Complex inner_derivative(const EvolutionFamily& family, double s, double t) {
    const Complex tau = point_value(*family.tau());
    const double h = kInnerDerivativeStep;
    const Complex ih(0.0, h);
    const Complex dx = family(s, t, tau + h) - family(s, t, tau - h);
    const Complex dy = family(s, t, tau + ih) - family(s, t, tau - ih);
    return (dx - Complex(0.0, 1.0) * dy) / (4.0 * h);
}

Complex boundary_reciprocal_derivative(const EvolutionFamily& family, double s, double t,
                                       double* spread) {
    Complex q[3];
    double eps[3];
    const bool disk = family.domain() == Domain::disk;
    const Complex tau = disk ? point_value(*family.tau()) : Complex(1.0);
    for (int k = 0; k < 3; ++k) {
        const double r = kRadialSamples[k];
        eps[k] = 1.0 - r;
        if (!disk || family.halfplane_conjugate()) {
            // In H with w_r = sigma(r): Q = (phi(w_r) + 1) / (w_r + 1).
            const double w = (1.0 + r) / (1.0 - r);
            const Complex image = disk ? (*family.halfplane_conjugate())(s, t, Complex(w))
                                       : family(s, t, Complex(w));
            q[k] = (image + 1.0) / (w + 1.0);
        } else {
            q[k] = tau * eps[k] / (tau - family(s, t, r * tau));
        }
    }
    const Complex quadratic = neville_at_zero(eps, q);
    if (spread) {
        const Complex linear = (eps[2] * q[1] - eps[1] * q[2]) / (eps[2] - eps[1]);
        *spread = std::max({std::abs(q[2] - linear), std::abs(q[2] - quadratic),
                            std::abs(linear - quadratic)});
    }
    return quadratic;
}

SpectralSamples spectral_function(const EvolutionFamily& family, std::span<const double> times) {
    if (times.empty() || times.front() != 0.0) throw DomainError("spectral grid must start at 0");
    const bool inner = family.domain() == Domain::disk && !is_boundary(*family.tau());

    SpectralSamples out;
    out.times.push_back(0.0);
    out.lambda.push_back(Complex{});
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double a = times[k - 1];
        const double b = times[k];
        if (!(b > a)) throw DomainError("spectral grid must increase strictly");
        Complex inc;
        if (inner) {
            inc = -std::log(inner_derivative(family, a, b));
        } else {
            const Increment r = boundary_increment(family, a, b, 0);
            if (!r.stable) {
                std::ostringstream msg;
                msg << "radial quotients do not settle on [" << a << ", " << b
                    << "]; spectral samples truncated";
                out.partial = true;
                out.warning = msg.str();
                break;
            }
            inc = r.value;
        }
        if (std::abs(inc.imag()) > 0.5 * kPi) {
            std::ostringstream msg;
            msg << "spectral grid too coarse for branch tracking at t = " << b;
            throw DomainError(msg.str());
        }
        out.max_re_decrease = std::max(out.max_re_decrease, -inc.real());
        out.times.push_back(b);
        out.lambda.push_back(out.lambda.back() + inc);
        out.max_abs_im = std::max(out.max_abs_im, std::abs(out.lambda.back().imag()));
    }

    std::vector<double> re(out.lambda.size());
    for (std::size_t k = 0; k < re.size(); ++k) re[k] = out.lambda[k].real();
    out.L = std::numeric_limits<double>::quiet_NaN();
    try {
        const IntervalEstimate est = estimate_interval(out.times, re);
        out.L_kind = est.kind;
        switch (est.kind) {
        case IntervalKind::point: out.L = est.lo; break;
        case IntervalKind::infinity:
        case IntervalKind::unbounded_above:
        case IntervalKind::full_line:
            out.L = est.hi > 0.0 ? std::numeric_limits<double>::infinity() : out.L;
            break;
        default: break;
        }
    } catch (const DomainError&) {
        if (out.warning.empty()) out.warning = "too few spectral samples to estimate L";
    }
    return out;
}

SpectralSamples spectral_function(const EvolutionFamily& family, double horizon, double spacing) {
    const std::vector<double> times = output_times(0.0, horizon, tail_spacing(0.0, horizon, spacing));
    return spectral_function(family, times);
}

} // namespace loewner
