#pragma once

// Accumulation-set estimation for a real time series: the tail of the series
// is split into windows whose extremes decide between a point, a compact
// interval, one- or two-sided divergence, or an honest "inconclusive".

#include <cstddef>
#include <span>
#include <string_view>

namespace loewner {

enum class IntervalKind {
    point,
    compact,
    unbounded_above,
    unbounded_below,
    full_line,
    full_line_with_infinity,
    /// The series itself tends to +inf (hi = +inf) or -inf (lo = -inf); the
    /// accumulation set in the extended line is that single infinite point.
    infinity,
    inconclusive
};

std::string_view to_string(IntervalKind k);

struct IntervalEstimate {
    IntervalKind kind = IntervalKind::inconclusive;
    double lo = 0.0; ///< -inf when unbounded below
    double hi = 0.0; ///< +inf when unbounded above

    // diagnostics
    double t_cut = 0.0;
    std::size_t tail_samples = 0;
    double tail_range = 0.0;
    int windows = 0;
    int recurrent_hi = 0; ///< windows whose max is within eps_rec of the tail max
    int recurrent_lo = 0;
    double slope_hi = 0.0; ///< window-max trend per decade of t, relative to the tail range
    double slope_lo = 0.0;
    bool extrapolated = false; ///< point limit from the 1/t polynomial fit

    bool bounded() const noexcept {
        return kind == IntervalKind::point || kind == IntervalKind::compact;
    }
    double length() const noexcept { return hi - lo; }
};

struct IntervalOptions {
    std::size_t min_samples = 1000;
    int windows = 8;
    double recurrence_fraction = 0.02;   ///< eps_rec = fraction * tail range
    double divergence_slope = 0.05;      ///< per decade, relative to the tail range
    double divergence_persistence = 0.75; ///< late/early half slope ratio
    double point_relative = 1e-8;        ///< eps_pt = point_relative * max(1, max |v|)
};

/// Transient cutoff max(t_first + 10, 0.25 t_last).
double transient_cutoff(double t_first, double t_last);

/// `spacing`, reduced when needed so that [transient_cutoff, t_last] holds at
/// least 1.25 * min_samples grid points.
double tail_spacing(double t_first, double t_last, double spacing, std::size_t min_samples = 1000);

/// Estimates the accumulation set of `values` sampled at strictly increasing
/// `times`, using only samples with t >= `t_cut`. Throws DomainError with
/// fewer than `min_samples` tail samples or mismatched spans.
IntervalEstimate estimate_interval(std::span<const double> times, std::span<const double> values,
                                   double t_cut, const IntervalOptions& opt = {});
/// Same with the default transient cutoff.
IntervalEstimate estimate_interval(std::span<const double> times, std::span<const double> values,
                                   const IntervalOptions& opt = {});

} // namespace loewner
