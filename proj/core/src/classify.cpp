#include "loewner/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace loewner {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kUnwrapGuard = 0.5 * kPi;
constexpr double kNoisyConvergence = 1e-4;

double wrap_two_pi(double x) {
    x = std::fmod(x, kTwoPi);
    return x < 0.0 ? x + kTwoPi : x;
}

std::string time_message(const char* what, double t) {
    std::ostringstream msg;
    msg << what << " at t = " << t;
    return msg.str();
}

// Trajectory of a boundary-tau family in half-plane coordinates.
struct HalfPlaneSeries {
    std::vector<double> times;
    std::vector<Complex> w;
    Complex w0;
    bool hit_tau = false;
};

HalfPlaneSeries halfplane_series(const EvolutionFamily& family, Complex tau, double s, Complex z,
                                 const IntegratorConfig& cfg) {
    HalfPlaneSeries out;
    out.times = output_times(s, cfg.horizon, tail_spacing(s, cfg.horizon, cfg.output_grid));
    std::vector<double> errors;
    if (family.domain() == Domain::half_plane) {
        out.w0 = z;
        family.sample(s, z, out.times, out.w, errors);
        return out;
    }
    if (!family.in_domain(z)) throw DomainError("point outside the unit disk");
    out.w0 = cayley_map(tau, z);
    if (const auto& conj = family.halfplane_conjugate()) {
        out.w.resize(out.times.size());
        for (std::size_t k = 0; k < out.times.size(); ++k) out.w[k] = (*conj)(s, out.times[k], out.w0);
        return out;
    }
    std::vector<Complex> disk;
    family.sample(s, z, out.times, disk, errors);
    out.w.resize(disk.size());
    for (std::size_t k = 0; k < disk.size(); ++k) {
        out.w[k] = cayley_map(tau, disk[k]);
        if (!std::isfinite(out.w[k].real()) || !std::isfinite(out.w[k].imag())) out.hit_tau = true;
    }
    return out;
}

// Inner trajectory moved to Denjoy-Wolff point 0: beta = -log |zeta| and the
// continuously unwrapped argument of zeta = alpha_tau(phi).
struct InnerSeries {
    std::vector<double> times;
    std::vector<double> beta;
    std::vector<double> arg;
    bool reached_tau = false;
};

InnerSeries inner_series(const EvolutionFamily& family, Complex tau, double s, Complex z,
                         const IntegratorConfig& cfg) {
    InnerSeries out;
    out.times = output_times(s, cfg.horizon, tail_spacing(s, cfg.horizon, cfg.output_grid));
    std::vector<Complex> points;
    std::vector<double> errors;
    family.sample(s, z, out.times, points, errors);
    out.beta.resize(points.size());
    out.arg.resize(points.size());
    Complex prev{};
    for (std::size_t k = 0; k < points.size(); ++k) {
        const Complex zeta = mobius_involution_map(tau, points[k]);
        const double m = std::abs(zeta);
        if (m == 0.0 || !std::isfinite(m)) {
            out.reached_tau = true;
            out.times.resize(k);
            out.beta.resize(k);
            out.arg.resize(k);
            return out;
        }
        out.beta[k] = -std::log(m);
        if (k == 0) {
            out.arg[k] = std::arg(zeta);
        } else {
            const double delta = std::arg(zeta / prev);
            if (std::abs(delta) > kUnwrapGuard) {
                throw DomainError(
                    time_message("output grid too coarse for argument unwrapping", out.times[k]));
            }
            out.arg[k] = out.arg[k - 1] + delta;
        }
        prev = zeta;
    }
    return out;
}

bool diverges_up(const IntervalEstimate& e) {
    return (e.kind == IntervalKind::infinity && e.hi > 0.0) ||
           e.kind == IntervalKind::unbounded_above || e.kind == IntervalKind::full_line;
}

// Limit of a series that must converge or diverge upward. Small noisy tails
// (cancellation near tau) count as converged and are noted.
std::optional<double> monotone_limit(const IntervalEstimate& e, std::span<const double> values,
                                     std::vector<std::string>& notes) {
    if (e.kind == IntervalKind::point) return e.lo;
    const double last = values.back();
    if (e.bounded() || e.kind == IntervalKind::inconclusive) {
        if (e.tail_range <= kNoisyConvergence * std::max(1.0, std::abs(last))) {
            notes.push_back("limit series noisy at the 1e-4 level; treated as converged");
            return last;
        }
    }
    return std::nullopt;
}

std::vector<double> real_parts(std::span<const Complex> v) {
    std::vector<double> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k].real();
    return out;
}
std::vector<double> imag_parts(std::span<const Complex> v) {
    std::vector<double> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k].imag();
    return out;
}

} // namespace

std::string_view to_string(CaseLabel c) {
    switch (c) {
    case CaseLabel::case1: return "1";
    case CaseLabel::case2: return "2";
    case CaseLabel::case3a: return "3a";
    case CaseLabel::case3b: return "3b";
    case CaseLabel::case3c: return "3c";
    case CaseLabel::inconclusive: return "inconclusive";
    }
    return "?";
}

ClosedArc arc_through(const EuclideanCircle& circle, Complex start, Complex mid, Complex end) {
    const double a = std::arg(start - circle.center);
    const double m = std::arg(mid - circle.center);
    const double b = std::arg(end - circle.center);
    const double to_end = wrap_two_pi(b - a);
    const double to_mid = wrap_two_pi(m - a);
    if (to_mid <= to_end) return ClosedArc(circle, a, a + to_end);
    return ClosedArc(circle, b, b + wrap_two_pi(a - b));
}

OmegaLimitEstimate classify_boundary(const EvolutionFamily& family, BoundaryPoint tau, double s,
                                     Complex z, const IntegratorConfig& cfg) {
    if (family.domain() == Domain::disk) {
        if (!is_boundary(*family.tau()) ||
            std::abs(point_value(*family.tau()) - tau.value()) > 1e-12) {
            throw DomainError("classify_boundary: tau is not the family's Denjoy-Wolff point");
        }
    }
    const Complex tv = tau.value();
    OmegaLimitEstimate est;
    est.boundary = true;
    est.s = s;
    est.z = z;
    est.tau = tv;

    const HalfPlaneSeries ser = halfplane_series(family, tv, s, z, cfg);
    if (ser.hit_tau) {
        est.label = CaseLabel::case1;
        est.notes.push_back("trajectory reached tau to machine precision");
        return est;
    }
    const std::vector<double> re = real_parts(ser.w);
    const std::vector<double> im = imag_parts(ser.w);

    double max_drop = 0.0;
    for (std::size_t k = 1; k < re.size(); ++k) max_drop = std::max(max_drop, re[k - 1] - re[k]);
    est.diagnostics["max_re_decrease"] = max_drop;
    const double k_d = 1.0 / ser.w0.real();
    est.diagnostics["k_D"] = k_d;

    est.limit_series = estimate_interval(ser.times, re);
    if (diverges_up(est.limit_series)) {
        est.label = CaseLabel::case1;
        est.re_limit = kInf;
        return est;
    }
    const auto r_inf = monotone_limit(est.limit_series, re, est.notes);
    if (!r_inf || !(*r_inf > 0.0)) {
        est.label = CaseLabel::inconclusive;
        est.notes.push_back("Re w neither converges nor diverges on the sampled tail");
        return est;
    }
    const double R = *r_inf;
    est.re_limit = R;
    est.k = 1.0 / R;
    est.diagnostics["julia_margin"] = R - ser.w0.real();
    est.diagnostics["horocycle_margin"] = k_d - *est.k;

    est.interval = estimate_interval(ser.times, im);
    const Horocycle hor(tau, *est.k);
    const EuclideanCircle circle = horocycle_geometry(hor);
    const auto disk_at = [&](double y) { return cayley_inverse_map(tv, Complex(R, y)); };
    const double contact_angle = std::arg(tv - circle.center);

    switch (est.interval.kind) {
    case IntervalKind::infinity:
        est.label = CaseLabel::case1;
        est.notes.push_back("Im w diverges with bounded Re w");
        break;
    case IntervalKind::point: {
        est.label = CaseLabel::case2;
        const Complex w_lim(R, est.interval.lo);
        est.limit_point = family.domain() == Domain::half_plane ? w_lim : cayley_inverse_map(tv, w_lim);
        break;
    }
    case IntervalKind::full_line:
        est.label = CaseLabel::case3a;
        est.interval.kind = IntervalKind::full_line_with_infinity;
        est.arc = ClosedArc(circle, contact_angle, contact_angle + kTwoPi);
        break;
    case IntervalKind::unbounded_above: {
        est.label = CaseLabel::case3b;
        const double lo = est.interval.lo;
        est.arc = arc_through(circle, disk_at(lo), disk_at(lo + std::max(1.0, R)), tv);
        break;
    }
    case IntervalKind::unbounded_below: {
        est.label = CaseLabel::case3b;
        const double hi = est.interval.hi;
        est.arc = arc_through(circle, tv, disk_at(hi - std::max(1.0, R)), disk_at(hi));
        break;
    }
    case IntervalKind::compact: {
        est.label = CaseLabel::case3c;
        const double lo = est.interval.lo;
        const double hi = est.interval.hi;
        est.theta = hi - lo;
        est.arc = arc_through(circle, disk_at(lo), disk_at(0.5 * (lo + hi)), disk_at(hi));
        break;
    }
    default:
        est.label = CaseLabel::inconclusive;
        est.notes.push_back("accumulation set of Im w is inconclusive");
        break;
    }
    return est;
}

OmegaLimitEstimate classify_inner(const EvolutionFamily& family, DiskPoint tau, double s,
                                  Complex z, const IntegratorConfig& cfg) {
    if (family.domain() != Domain::disk || is_boundary(*family.tau()) ||
        std::abs(point_value(*family.tau()) - tau.value()) > 1e-12) {
        throw DomainError("classify_inner: tau is not the family's Denjoy-Wolff point");
    }
    const Complex tv = tau.value();
    if (std::abs(z - tv) < 1e-15) throw DomainError("classify_inner: z = tau is a fixed point");

    OmegaLimitEstimate est;
    est.boundary = false;
    est.s = s;
    est.z = z;
    est.tau = tv;

    const InnerSeries ser = inner_series(family, tv, s, z, cfg);
    const double rho0 = hyp_dist_disk(tv, z);
    est.diagnostics["rho_D"] = rho0;
    if (ser.reached_tau) {
        est.label = CaseLabel::case1;
        est.re_limit = 0.0;
        est.notes.push_back("trajectory reached tau to machine precision");
        return est;
    }

    est.limit_series = estimate_interval(ser.times, ser.beta);
    if (diverges_up(est.limit_series)) {
        est.label = CaseLabel::case1;
        est.re_limit = 0.0;
        return est;
    }
    const auto beta_inf = monotone_limit(est.limit_series, ser.beta, est.notes);
    if (!beta_inf) {
        est.label = CaseLabel::inconclusive;
        est.notes.push_back("modulus neither converges nor tends to zero on the sampled tail");
        return est;
    }
    const double r_inf = std::exp(-*beta_inf);
    est.re_limit = r_inf;
    est.r = 2.0 * std::atanh(r_inf);
    est.diagnostics["radius_margin"] = rho0 - *est.r;

    est.interval = estimate_interval(ser.times, ser.arg);
    const auto disk_at = [&](double angle) { return mobius_involution_map(tv, std::polar(r_inf, angle)); };
    const auto full_circle = [&] {
        const EuclideanCircle c = hyp_disk_geometry(HypDisk(DiskPoint(tv), *est.r));
        est.arc = ClosedArc(c, 0.0, kTwoPi);
    };

    switch (est.interval.kind) {
    case IntervalKind::point:
        est.label = CaseLabel::case2;
        est.limit_point = disk_at(est.interval.lo);
        break;
    case IntervalKind::compact:
        if (est.interval.length() >= kTwoPi) {
            est.label = CaseLabel::case3a;
            full_circle();
        } else {
            est.label = CaseLabel::case3b;
            est.theta = est.interval.length();
            const double lo = est.interval.lo;
            const double hi = est.interval.hi;
            const EuclideanCircle c = hyp_disk_geometry(HypDisk(DiskPoint(tv), *est.r));
            est.arc = arc_through(c, disk_at(lo), disk_at(0.5 * (lo + hi)), disk_at(hi));
        }
        break;
    case IntervalKind::full_line:
    case IntervalKind::unbounded_above:
    case IntervalKind::unbounded_below:
    case IntervalKind::infinity:
        est.label = CaseLabel::case3a;
        full_circle();
        break;
    default:
        est.label = CaseLabel::inconclusive;
        est.notes.push_back("accumulation set of the argument is inconclusive");
        break;
    }
    return est;
}

OmegaLimitEstimate classify(const EvolutionFamily& family, double s, Complex z,
                            const IntegratorConfig& cfg) {
    if (family.domain() == Domain::half_plane) return classify_boundary(family, BoundaryPoint(1.0), s, z, cfg);
    const DenjoyWolffPoint& tau = *family.tau();
    if (is_boundary(tau)) return classify_boundary(family, std::get<BoundaryPoint>(tau), s, z, cfg);
    return classify_inner(family, std::get<DiskPoint>(tau), s, z, cfg);
}

void require_uniform(std::span<const OmegaLimitEstimate> estimates) {
    for (const auto& e : estimates) {
        if (e.label != estimates.front().label) {
            throw ClassificationError("family classification not uniform");
        }
    }
}

ThetaInvariant theta_invariant(std::span<const OmegaLimitEstimate> estimates) {
    if (estimates.empty()) throw DomainError("theta_invariant needs a nonempty grid");
    require_uniform(estimates);
    ThetaInvariant out;
    out.label = estimates.front().label;
    const bool applicable = estimates.front().boundary ? out.label == CaseLabel::case3c
                                                       : out.label == CaseLabel::case3b;
    if (!applicable) {
        throw NotApplicable("theta_invariant needs proper arcs; the family is in case " +
                            std::string(to_string(out.label)));
    }
    for (const auto& e : estimates) out.values.push_back(*e.theta);
    const auto [mn, mx] = std::minmax_element(out.values.begin(), out.values.end());
    out.spread = *mx - *mn;
    double sum = 0.0;
    for (double v : out.values) sum += v;
    out.mean = sum / static_cast<double>(out.values.size());
    return out;
}

ThetaInvariant theta_invariant(const EvolutionFamily& family, std::span<const GridPoint> grid,
                               const IntegratorConfig& cfg) {
    std::vector<OmegaLimitEstimate> estimates;
    for (const auto& g : grid) estimates.push_back(classify(family, g.s, g.z, cfg));
    return theta_invariant(estimates);
}

NontangentialResult nontangential_check(const EvolutionFamily& family, BoundaryPoint tau, double s,
                                        Complex z, const IntegratorConfig& cfg) {
    const OmegaLimitEstimate omega = classify_boundary(family, tau, s, z, cfg);
    if (omega.label != CaseLabel::case1) {
        throw NotApplicable("not applicable: the trajectory is in case " +
                            std::string(to_string(omega.label)));
    }
    const HalfPlaneSeries ser = halfplane_series(family, tau.value(), s, z, cfg);
    const double t_cut = transient_cutoff(ser.times.front(), ser.times.back());
    const auto first = static_cast<std::size_t>(
        std::lower_bound(ser.times.begin(), ser.times.end(), t_cut) - ser.times.begin());
    const std::size_t n = ser.times.size() - first;
    const std::size_t last_begin = first + n - std::max<std::size_t>(1, n / 8);

    NontangentialResult out;
    for (std::size_t k = first; k < ser.times.size(); ++k) {
        // 1 - conj(tau) sigma_tau^{-1}(w) = 2 / (w + 1).
        const double angle = std::isfinite(ser.w[k].real()) ? std::abs(std::arg(ser.w[k] + 1.0)) : 0.0;
        out.sup_angle = std::max(out.sup_angle, angle);
        if (k < last_begin) out.early_sup = std::max(out.early_sup, angle);
        else out.last_window_sup = std::max(out.last_window_sup, angle);
    }
    const bool stable = out.last_window_sup <= out.early_sup + kNontangentialStability;
    out.flag = stable && out.sup_angle < 0.5 * kPi - kNontangentialMargin;
    return out;
}

namespace {

struct CircleSet {
    bool full = false;
    double lo = 0.0;
    double hi = 0.0;
};

CircleSet circle_set(const IntervalEstimate& e) {
    if (e.kind == IntervalKind::point) return {false, e.lo, e.lo};
    if (e.kind == IntervalKind::compact && e.length() < kTwoPi) return {false, e.lo, e.hi};
    if (e.kind == IntervalKind::inconclusive) throw NotApplicable("limit set is inconclusive");
    return {true, 0.0, kTwoPi};
}

std::vector<Complex> circle_samples(const CircleSet& c, double shift) {
    constexpr int kSamples = 1024;
    if (!c.full && c.hi == c.lo) return {std::polar(1.0, c.lo + shift)};
    std::vector<Complex> pts(kSamples);
    for (int k = 0; k < kSamples; ++k) {
        const double a = c.lo + (c.hi - c.lo) * k / (kSamples - 1);
        pts[k] = std::polar(1.0, a + shift);
    }
    return pts;
}

double hausdorff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    const auto directed = [](const std::vector<Complex>& x, const std::vector<Complex>& y) {
        double worst = 0.0;
        for (const Complex& p : x) {
            double best = kInf;
            for (const Complex& q : y) best = std::min(best, std::abs(p - q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

} // namespace

ArgOmegaResult arg_omega_vs_lambda(const EvolutionFamily& family, double s, Complex z,
                                   const IntegratorConfig& cfg) {
    if (family.domain() != Domain::disk || is_boundary(*family.tau())) {
        throw NotApplicable("arg_omega_vs_lambda needs an inner Denjoy-Wolff point");
    }
    const DiskPoint tau = std::get<DiskPoint>(*family.tau());
    const OmegaLimitEstimate omega = classify_inner(family, tau, s, z, cfg);
    if (omega.label == CaseLabel::case1) {
        throw NotApplicable("not applicable: the trajectory converges to tau (case 1)");
    }

    // lambda on 0 .. s with the output spacing, then on the trajectory grid.
    const double dt = tail_spacing(s, cfg.horizon, cfg.output_grid);
    const std::vector<double> traj_times = output_times(s, cfg.horizon, dt);
    std::vector<double> grid;
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * dt;
        if (t >= s - 1e-12) break;
        grid.push_back(t);
    }
    grid.insert(grid.end(), traj_times.begin(), traj_times.end());
    const SpectralSamples spec = spectral_function(family, grid);
    if (spec.partial) throw IntegrationError("spectral samples incomplete: " + spec.warning);
    const std::size_t lead = grid.size() - traj_times.size();
    std::vector<double> neg_im(traj_times.size());
    for (std::size_t k = 0; k < traj_times.size(); ++k) neg_im[k] = -spec.lambda[lead + k].imag();
    const IntervalEstimate lam = estimate_interval(traj_times, neg_im);

    const CircleSet a = circle_set(omega.interval);
    const CircleSet b = circle_set(lam);
    ArgOmegaResult out;
    out.full_circle_arg = a.full;
    out.full_circle_lambda = b.full;
    out.extent_arg = a.hi - a.lo;
    out.extent_lambda = b.hi - b.lo;
    if (a.full && b.full) return out;
    if (!a.full && !b.full) out.c = 0.5 * (a.lo + a.hi) - 0.5 * (b.lo + b.hi);
    out.residual = hausdorff(circle_samples(a, 0.0), circle_samples(b, out.c));
    return out;
}

AutomorphicReport automorphic_reports(const EvolutionFamily& family, double s, Complex z,
                                      const IntegratorConfig& cfg) {
    AutomorphicReport out;
    const auto pairs = default_isometry_pairs(family.domain());
    const double times[] = {0.0, 0.7, 2.3, 5.1};
    for (double a : times) {
        for (double b : times) {
            if (b <= a) continue;
            const IsometryResult iso = isometry_test(family, a, b, pairs);
            out.isometry_deviation = std::max(out.isometry_deviation, iso.max_abs_deviation);
        }
    }
    if (out.isometry_deviation >= kIsometryTol) {
        throw NotApplicable("family is not of automorphic type (isometry deviation " +
                            std::to_string(out.isometry_deviation) + ")");
    }

    const bool half = family.domain() == Domain::half_plane;
    out.boundary = half || is_boundary(*family.tau());
    const SpectralSamples spec = spectral_function(family, cfg.horizon, cfg.output_grid);

    if (out.boundary) {
        const Complex tv = half ? Complex(1.0) : point_value(*family.tau());
        const auto phi_h = [&](double a, double b, Complex w) {
            if (half) return family(a, b, w);
            if (const auto& conj = family.halfplane_conjugate()) return (*conj)(a, b, w);
            return cayley_map(tv, family(a, b, cayley_inverse_map(tv, w)));
        };
        const Complex probes[] = {Complex(1.0, 0.0), Complex(2.0, 1.0), Complex(0.5, -3.0)};
        out.min_scale = kInf;
        for (double a : times) {
            for (double b : times) {
                if (b <= a) continue;
                const Complex f0 = phi_h(a, b, probes[0]);
                const Complex f1 = phi_h(a, b, probes[1]);
                const Complex f2 = phi_h(a, b, probes[2]);
                const Complex scale = (f1 - f0) / (probes[1] - probes[0]);
                const Complex shift = f0 - scale * probes[0];
                const double fit = std::abs(f2 - (scale * probes[2] + shift));
                out.affine_residual = std::max(
                    {out.affine_residual, fit, std::abs(scale.imag()), std::abs(shift.real())});
                out.min_scale = std::min(out.min_scale, scale.real());
            }
        }
        const OmegaLimitEstimate omega = classify(family, s, z, cfg);
        if (omega.k && !std::isnan(spec.L) && !spec.partial) {
            // Re lambda(s) by interpolation on the spectral grid.
            const auto it = std::lower_bound(spec.times.begin(), spec.times.end(), s);
            double re_s = spec.lambda.front().real();
            if (it != spec.times.end()) {
                const std::size_t k = static_cast<std::size_t>(it - spec.times.begin());
                if (k == 0 || spec.times[k] == s) {
                    re_s = spec.lambda[k].real();
                } else {
                    const double u = (s - spec.times[k - 1]) / (spec.times[k] - spec.times[k - 1]);
                    re_s = (1.0 - u) * spec.lambda[k - 1].real() + u * spec.lambda[k].real();
                }
            }
            const double k_d = half ? 1.0 / z.real() : horocycle_factor(tv, z);
            out.k_formula = std::exp(re_s - spec.L) * k_d;
            out.k_classifier = omega.k;
        }
        return out;
    }

    for (const Complex& l : spec.lambda) out.max_abs_re_lambda = std::max(out.max_abs_re_lambda, std::abs(l.real()));
    const OmegaLimitEstimate omega = classify(family, s, z, cfg);
    out.observed_case = omega.label;
    out.rotation_case_3a = omega.label == CaseLabel::case3a;
    if (omega.label == CaseLabel::case3b) {
        out.note = "rotation family with a proper arc: observed case 3b where automorphic inner "
                   "families are stated to be in case 3a";
    } else if (omega.label == CaseLabel::case2) {
        out.note = "rotation converges: degenerate case 2";
    }
    return out;
}

} // namespace loewner
