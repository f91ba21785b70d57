#include <algorithm>
#include <cmath>
#include <sstream>

#include "loewner/evolution.hpp"

namespace loewner {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr int kMaxDomainRejections = 60;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::string at_time(const char* what, double t) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << " at t = " << t;
    return msg.str();
}

} // namespace

struct RungeKuttaIntegrator::State {
    double t;
    Complex z;
    double h;
    double err = 0.0;
};

RungeKuttaIntegrator::RungeKuttaIntegrator(FieldFn field, Domain domain, Breakpoints breakpoints,
                                           IntegratorConfig cfg)
    : field_(std::move(field)), domain_(domain), breakpoints_(std::move(breakpoints)), cfg_(cfg) {
    cfg_.validate();
}

Complex RungeKuttaIntegrator::step_to(State& st, double target) const {
    const double eps_t = 1e-13;
    while (st.t < target) {
        double seg_end = target;
        if (const auto bp = breakpoints_.next_after(st.t); bp && *bp < seg_end) seg_end = *bp;
        const double seg_start = st.t;
        // Stage times stay strictly inside the segment, so one-sided limits
        // are used at breakpoints.
        const double delta = 1e-12 * std::max(1.0, std::abs(seg_end));

        int domain_rejections = 0;
        while (st.t < seg_end) {
            double h = std::min({st.h, cfg_.max_step, seg_end - st.t});
            bool lands = false;
            if (st.t + h >= seg_end - eps_t * std::max(1.0, std::abs(seg_end))) {
                h = seg_end - st.t;
                lands = true;
            }
            if (h < 1e-14 * std::max(1.0, std::abs(st.t)) && !lands) {
                throw IntegrationError(at_time("stiffness/regularity failure", st.t));
            }

            const double t0 = st.t;
            const auto stage_t = [&](double c) {
                const double lo = seg_start + delta;
                const double hi = seg_end - delta;
                const double tt = t0 + c * h;
                if (hi <= lo) return 0.5 * (seg_start + seg_end);
                return std::clamp(tt, lo, hi);
            };
            const Complex y = st.z;
            const Complex k1 = field_(y, stage_t(0.0));
            const Complex k2 = field_(y + h * (a21 * k1), stage_t(c2));
            const Complex k3 = field_(y + h * (a31 * k1 + a32 * k2), stage_t(c3));
            const Complex k4 = field_(y + h * (a41 * k1 + a42 * k2 + a43 * k3), stage_t(c4));
            const Complex k5 =
                field_(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), stage_t(c5));
            const Complex k6 =
                field_(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), stage_t(1.0));
            const Complex y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const Complex k7 = field_(y_new, stage_t(1.0));
            const Complex err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            const bool ok_value = finite(y_new) && finite(err_vec);
            const bool outside = !ok_value ||
                                 (domain_ == Domain::disk ? std::abs(y_new) > 1.0 + cfg_.abs_tol
                                                          : y_new.real() < -cfg_.abs_tol);
            if (outside) {
                if (++domain_rejections > kMaxDomainRejections) {
                    throw IntegrationError(at_time("trajectory left the domain", st.t));
                }
                st.h = 0.5 * h;
                if (st.h < 1e-14 * std::max(1.0, std::abs(st.t))) {
                    throw IntegrationError(at_time("stiffness/regularity failure", st.t));
                }
                continue;
            }

            const double err_abs = std::abs(err_vec);
            const double scale =
                cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(y), std::abs(y_new));
            const double ratio = err_abs / scale;
            if (ratio <= 1.0) {
                st.z = y_new;
                st.t = lands ? seg_end : t0 + h;
                st.err += err_abs;
                domain_rejections = 0;
                const double grow = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
                // A step clipped by the segment end says nothing about the
                // attainable size; keep the previous proposal in that case.
                if (!lands || h >= st.h) st.h = h * grow;
            } else {
                st.h = h * std::clamp(0.9 * std::pow(ratio, -0.2), 0.1, 0.9);
                if (st.h < 1e-14 * std::max(1.0, std::abs(st.t))) {
                    throw IntegrationError(at_time("stiffness/regularity failure", st.t));
                }
            }
        }
    }
    return st.z;
}

Complex RungeKuttaIntegrator::advance(double s, double t, Complex z) const {
    if (t < s) throw DomainError("integration requires t >= s");
    if (t == s) return z;
    State st{s, z, std::min(cfg_.max_step, 1e-2)};
    return step_to(st, t);
}

void RungeKuttaIntegrator::sample(double s, Complex z, std::span<const double> times,
                                  std::vector<Complex>& points, std::vector<double>& errors) const {
    points.assign(times.size(), Complex{});
    errors.assign(times.size(), 0.0);
    if (times.empty()) return;
    if (times[0] != s) throw DomainError("sample times must start at s");
    points[0] = z;
    State st{s, z, std::min(cfg_.max_step, 1e-2)};
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) throw DomainError("sample times must increase strictly");
        st.err = 0.0;
        points[k] = step_to(st, times[k]);
        errors[k] = st.err;
    }
}

} // namespace loewner
