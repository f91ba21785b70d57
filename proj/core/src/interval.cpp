#include "loewner/interval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "loewner/errors.hpp"

namespace loewner {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double regression_slope(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxy += (x[k] - mx) * (y[k] - my);
        sxx += (x[k] - mx) * (x[k] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

bool monotone(std::span<const double> v) {
    bool up = true, down = true;
    for (std::size_t k = 1; k < v.size(); ++k) {
        if (v[k] < v[k - 1]) up = false;
        if (v[k] > v[k - 1]) down = false;
    }
    return up || down;
}

// Least-squares fit of L + a1 x + a2 x^2 + a3 x^3 with x = t_ref / t; the
// limit is L. Suits the algebraic 1/t tails of convergent drivers.
double extrapolate_limit(std::span<const double> t, std::span<const double> v) {
    constexpr std::size_t kMaxRows = 2000;
    const std::size_t n = t.size();
    const std::size_t rows = std::min(n, kMaxRows);
    const double t_ref = t.front();
    Eigen::MatrixXd a(rows, 4);
    Eigen::VectorXd b(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t k = rows == 1 ? 0 : r * (n - 1) / (rows - 1);
        const double x = t_ref / t[k];
        a(r, 0) = 1.0;
        a(r, 1) = x;
        a(r, 2) = x * x;
        a(r, 3) = x * x * x;
        b(r) = v[k];
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
    return c(0);
}

} // namespace

std::string_view to_string(IntervalKind k) {
    switch (k) {
    case IntervalKind::point: return "point";
    case IntervalKind::compact: return "compact";
    case IntervalKind::unbounded_above: return "unbounded_above";
    case IntervalKind::unbounded_below: return "unbounded_below";
    case IntervalKind::full_line: return "full_line";
    case IntervalKind::full_line_with_infinity: return "full_line_with_infinity";
    case IntervalKind::infinity: return "infinity";
    case IntervalKind::inconclusive: return "inconclusive";
    }
    return "?";
}

double transient_cutoff(double t_first, double t_last) {
    return std::max(t_first + 10.0, 0.25 * t_last);
}

double tail_spacing(double t_first, double t_last, double spacing, std::size_t min_samples) {
    const double tail = t_last - transient_cutoff(t_first, t_last);
    if (!(tail > 0.0)) return spacing;
    return std::min(spacing, tail / (1.25 * static_cast<double>(min_samples)));
}

IntervalEstimate estimate_interval(std::span<const double> times, std::span<const double> values,
                                   const IntervalOptions& opt) {
    if (times.empty()) throw DomainError("estimate_interval: empty series");
    return estimate_interval(times, values, transient_cutoff(times.front(), times.back()), opt);
}

IntervalEstimate estimate_interval(std::span<const double> times, std::span<const double> values,
                                   double t_cut, const IntervalOptions& opt) {
    if (times.size() != values.size()) throw DomainError("estimate_interval: size mismatch");
    const auto first =
        static_cast<std::size_t>(std::lower_bound(times.begin(), times.end(), t_cut) - times.begin());
    const std::size_t n = times.size() - first;
    if (n < opt.min_samples || n < static_cast<std::size_t>(2 * opt.windows)) {
        throw DomainError("estimate_interval: too few samples (" + std::to_string(n) +
                          " in the tail, need " + std::to_string(opt.min_samples) + ")");
    }
    const auto t = times.subspan(first);
    const auto v = values.subspan(first);
    for (double x : v) {
        if (!std::isfinite(x)) throw DomainError("estimate_interval: non-finite sample");
    }

    IntervalEstimate est;
    est.t_cut = t_cut;
    est.tail_samples = n;
    est.windows = opt.windows;

    const auto [mn_it, mx_it] = std::minmax_element(v.begin(), v.end());
    const double vmin = *mn_it;
    const double vmax = *mx_it;
    const double range = vmax - vmin;
    est.tail_range = range;
    const double eps_pt = opt.point_relative * std::max({1.0, std::abs(vmin), std::abs(vmax)});
    if (range <= eps_pt) {
        est.kind = IntervalKind::point;
        est.lo = est.hi = 0.5 * (vmin + vmax);
        est.recurrent_hi = est.recurrent_lo = opt.windows;
        return est;
    }

    const int w = opt.windows;
    std::vector<double> lo(w), hi(w), x(w);
    std::vector<std::size_t> begin(w + 1);
    for (int j = 0; j <= w; ++j) begin[j] = static_cast<std::size_t>(j) * n / static_cast<std::size_t>(w);
    for (int j = 0; j < w; ++j) {
        const auto seg = v.subspan(begin[j], begin[j + 1] - begin[j]);
        const auto [a, b] = std::minmax_element(seg.begin(), seg.end());
        lo[j] = *a;
        hi[j] = *b;
        x[j] = std::log10(0.5 * (t[begin[j]] + t[begin[j + 1] - 1]));
    }

    const double eps_rec = opt.recurrence_fraction * range;
    for (int j = 0; j < w; ++j) {
        if (hi[j] >= vmax - eps_rec) ++est.recurrent_hi;
        if (lo[j] <= vmin + eps_rec) ++est.recurrent_lo;
    }
    const bool rec_hi = est.recurrent_hi == w;
    const bool rec_lo = est.recurrent_lo == w;

    std::vector<double> neg_lo(w);
    for (int j = 0; j < w; ++j) neg_lo[j] = -lo[j];
    const auto diverges = [&](const std::vector<double>& y, double& slope) {
        slope = regression_slope(x, y) / range;
        const int half = w / 2;
        const double s1 = regression_slope(std::span(x).first(half), std::span(y).first(half));
        const double s2 = regression_slope(std::span(x).subspan(half), std::span(y).subspan(half));
        return slope > opt.divergence_slope && s1 > 0.0 && s2 >= opt.divergence_persistence * s1;
    };
    double slope_up = 0.0, slope_down = 0.0;
    const bool up = diverges(hi, slope_up);
    const bool down = diverges(neg_lo, slope_down);
    est.slope_hi = slope_up;
    est.slope_lo = -slope_down;

    if (up && down) {
        est.kind = IntervalKind::full_line;
        est.lo = -kInf;
        est.hi = kInf;
    } else if (up && rec_lo) {
        est.kind = IntervalKind::unbounded_above;
        est.lo = vmin;
        est.hi = kInf;
    } else if (down && rec_hi) {
        est.kind = IntervalKind::unbounded_below;
        est.lo = -kInf;
        est.hi = vmax;
    } else if (up) {
        est.kind = IntervalKind::infinity;
        est.lo = est.hi = kInf;
    } else if (down) {
        est.kind = IntervalKind::infinity;
        est.lo = est.hi = -kInf;
    } else if (rec_hi && rec_lo) {
        est.kind = IntervalKind::compact;
        est.lo = vmin;
        est.hi = vmax;
    } else if (hi[w - 1] - lo[w - 1] <= 0.25 * range) {
        est.kind = IntervalKind::point;
        const auto last = v.subspan(begin[w - 1]);
        double limit;
        if (monotone(v)) {
            limit = extrapolate_limit(t, v);
            est.extrapolated = true;
            if (!std::isfinite(limit) || std::abs(limit - v.back()) > range) {
                limit = v.back();
                est.extrapolated = false;
            }
        } else if (monotone(last)) {
            limit = v.back();
        } else {
            limit = 0.5 * (hi[w - 1] + lo[w - 1]);
        }
        est.lo = est.hi = limit;
    } else {
        est.kind = IntervalKind::inconclusive;
        est.lo = vmin;
        est.hi = vmax;
    }
    return est;
}

} // namespace loewner
