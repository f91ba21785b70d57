#include "loewner/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

namespace loewner {

std::string_view to_string(Domain d) { return d == Domain::disk ? "disk" : "half_plane"; }

void IntegratorConfig::validate() const {
    const auto in_unit = [](double x) { return x > 0.0 && x < 1.0; };
    if (!in_unit(rel_tol) || !in_unit(abs_tol)) throw DomainError("tolerances must lie in (0, 1)");
    if (!(max_step > 0.0)) throw DomainError("max_step must be positive");
    if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
    if (!(output_grid > 0.0)) throw DomainError("output_grid must be positive");
}

EvolutionFamily::EvolutionFamily(std::string name, Domain domain,
                                 std::optional<DenjoyWolffPoint> tau, FlowMap flow,
                                 Provenance provenance)
    : name_(std::move(name)),
      domain_(domain),
      tau_(std::move(tau)),
      flow_(std::move(flow)),
      provenance_(provenance) {
    if (domain_ == Domain::disk && !tau_) {
        throw DomainError("disk families must declare their Denjoy-Wolff point");
    }
    if (domain_ == Domain::half_plane && tau_) {
        throw DomainError("half-plane families have their Denjoy-Wolff point at infinity");
    }
}

bool EvolutionFamily::in_domain(Complex z) const {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return domain_ == Domain::disk ? std::abs(z) < 1.0 : z.real() > 0.0;
}

Complex EvolutionFamily::operator()(double s, double t, Complex z) const {
    if (!(s >= 0.0) || !(t >= s)) throw DomainError("evolution family requires 0 <= s <= t");
    if (!in_domain(z)) throw DomainError("point outside the domain of the family");
    if (t == s) return z;
    return flow_(s, t, z);
}

EvolutionFamily& EvolutionFamily::with_generator(FieldFn g) {
    generator_ = std::move(g);
    return *this;
}
EvolutionFamily& EvolutionFamily::with_herglotz(HerglotzField h) {
    herglotz_ = std::move(h);
    return *this;
}
EvolutionFamily& EvolutionFamily::with_breakpoints(Breakpoints b) {
    breakpoints_ = std::move(b);
    return *this;
}
EvolutionFamily& EvolutionFamily::with_sampler(PathSampler sampler) {
    sampler_ = std::move(sampler);
    return *this;
}
EvolutionFamily& EvolutionFamily::with_halfplane_conjugate(FlowMap conjugate) {
    if (domain_ != Domain::disk || !is_boundary(*tau_)) {
        throw DomainError("a half-plane conjugate needs a boundary Denjoy-Wolff point");
    }
    conjugate_ = std::move(conjugate);
    return *this;
}

void EvolutionFamily::sample(double s, Complex z, std::span<const double> times,
                             std::vector<Complex>& points, std::vector<double>& errors) const {
    if (!in_domain(z)) throw DomainError("point outside the domain of the family");
    if (sampler_) {
        (*sampler_)(s, z, times, points, errors);
        return;
    }
    points.resize(times.size());
    errors.assign(times.size(), 0.0);
    for (std::size_t k = 0; k < times.size(); ++k) points[k] = (*this)(s, times[k], z);
}

EvolutionFamily semigroup_family(std::string name, Domain domain,
                                 std::optional<DenjoyWolffPoint> tau,
                                 std::function<Complex(double, Complex)> semigroup) {
    return EvolutionFamily(
        std::move(name), domain, std::move(tau),
        [semigroup = std::move(semigroup)](double s, double t, Complex z) { return semigroup(t - s, z); },
        Provenance::semigroup);
}

namespace {

EvolutionFamily wrap_integrator(std::string name, Domain domain,
                                std::optional<DenjoyWolffPoint> tau, FieldFn field,
                                const Breakpoints& breakpoints, const IntegratorConfig& cfg) {
    auto rk = std::make_shared<const RungeKuttaIntegrator>(field, domain, breakpoints, cfg);
    EvolutionFamily fam(
        std::move(name), domain, std::move(tau),
        [rk](double s, double t, Complex z) { return rk->advance(s, t, z); }, Provenance::integrated);
    fam.with_generator(std::move(field))
        .with_breakpoints(breakpoints)
        .with_sampler([rk](double s, Complex z, std::span<const double> times,
                           std::vector<Complex>& points, std::vector<double>& errors) {
            rk->sample(s, z, times, points, errors);
        });
    return fam;
}

} // namespace

EvolutionFamily integrate_family(const HerglotzField& field, const IntegratorConfig& cfg,
                                 std::string name) {
    cfg.validate();
    const DiskVectorField g = berkson_porta_field(field);
    EvolutionFamily fam =
        wrap_integrator(std::move(name), Domain::disk, field.tau, g.eval, field.breakpoints, cfg);
    fam.with_herglotz(field);
    return fam;
}

EvolutionFamily integrate_family(const HalfPlaneVectorField& field, const IntegratorConfig& cfg,
                                 std::string name) {
    cfg.validate();
    return wrap_integrator(std::move(name), Domain::half_plane, std::nullopt, field.eval,
                           field.breakpoints, cfg);
}

std::vector<double> output_times(double s, double horizon, double spacing) {
    if (!(spacing > 0.0)) throw DomainError("output grid spacing must be positive");
    if (!(horizon > s)) throw DomainError("horizon must exceed the start time");
    const auto n = static_cast<std::size_t>(std::ceil((horizon - s) / spacing - 1e-9));
    std::vector<double> times;
    times.reserve(n + 1);
    for (std::size_t k = 0; k < n; ++k) times.push_back(s + static_cast<double>(k) * spacing);
    times.push_back(horizon);
    return times;
}

Trajectory sample_trajectory(const EvolutionFamily& family, double s, Complex z,
                             const IntegratorConfig& cfg) {
    cfg.validate();
    if (!(s >= 0.0)) throw DomainError("start time must be non-negative");
    Trajectory tr;
    tr.s = s;
    tr.z = z;
    tr.domain = family.domain();
    tr.times = output_times(s, cfg.horizon, cfg.output_grid);
    family.sample(s, z, tr.times, tr.points, tr.local_error);
    return tr;
}

double hyp_dist(Domain domain, Complex a, Complex b) {
    if (domain == Domain::disk) return hyp_dist_disk(a, b);
    return hyp_dist_halfplane(HalfPlanePoint(a), HalfPlanePoint(b));
}

std::vector<AxiomProbe> random_axiom_probes(Domain domain, std::size_t count, double t_max,
                                            std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto point = [&] {
        if (domain == Domain::disk) {
            return std::polar(0.9 * std::sqrt(unit(rng)), kTwoPi * unit(rng));
        }
        return Complex(0.05 + 4.95 * unit(rng), -5.0 + 10.0 * unit(rng));
    };
    std::vector<AxiomProbe> probes;
    probes.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        double times[3] = {t_max * unit(rng), t_max * unit(rng), t_max * unit(rng)};
        std::sort(std::begin(times), std::end(times));
        const Complex z = point();
        Complex z2 = point();
        while (z2 == z) z2 = point();
        probes.push_back({times[0], times[1], times[2], z, z2});
    }
    return probes;
}

AxiomReport axiom_residuals(const EvolutionFamily& family, std::span<const AxiomProbe> probes) {
    AxiomReport r;
    r.min_image_separation = std::numeric_limits<double>::infinity();
    r.max_schwarz_pick_excess = -std::numeric_limits<double>::infinity();
    r.max_domain_excess = -std::numeric_limits<double>::infinity();
    const Domain dom = family.domain();
    const bool conj = family.halfplane_conjugate() && family.tau() && is_boundary(*family.tau());
    const Complex tau = family.tau() ? point_value(*family.tau()) : Complex{};
    for (const auto& p : probes) {
        if (!(0.0 <= p.s && p.s <= p.u && p.u <= p.t)) {
            throw DomainError("axiom probes require 0 <= s <= u <= t");
        }
        r.max_identity_residual = std::max(r.max_identity_residual, std::abs(family(p.s, p.s, p.z) - p.z));

        const Complex direct = family(p.s, p.t, p.z);
        const Complex composed = family(p.u, p.t, family(p.s, p.u, p.z));
        const double comp = std::abs(composed - direct);
        r.max_composition_residual = std::max(r.max_composition_residual, comp);
        r.max_scaled_composition = std::max(r.max_scaled_composition, comp / (1.0 + (p.t - p.s) / 10.0));

        const Complex direct2 = family(p.s, p.t, p.z2);
        r.min_image_separation = std::min(r.min_image_separation, std::abs(direct - direct2));
        // Images crowding the boundary tau lose rho_D to rounding; sigma_tau is
        // an isometry, so measure them through the exact conjugate instead.
        double after = 0.0;
        if (conj) {
            const FlowMap& c = *family.halfplane_conjugate();
            after = hyp_dist(Domain::half_plane, c(p.s, p.t, cayley_map(tau, p.z)),
                             c(p.s, p.t, cayley_map(tau, p.z2)));
        } else {
            after = hyp_dist(dom, direct, direct2);
        }
        r.max_schwarz_pick_excess = std::max(r.max_schwarz_pick_excess, after - hyp_dist(dom, p.z, p.z2));

        const double excess = dom == Domain::disk ? std::max(std::abs(direct), std::abs(direct2)) - 1.0
                                                  : -std::min(direct.real(), direct2.real());
        r.max_domain_excess = std::max(r.max_domain_excess, excess);
        ++r.probes;
    }
    return r;
}

IsometryResult isometry_test(const EvolutionFamily& family, double s, double t,
                             std::span<const std::pair<Complex, Complex>> pairs) {
    if (!(s <= t)) throw DomainError("isometry_test requires s <= t");
    IsometryResult out;
    for (const auto& [z1, z2] : pairs) {
        const double before = hyp_dist(family.domain(), z1, z2);
        const double after = hyp_dist(family.domain(), family(s, t, z1), family(s, t, z2));
        out.max_abs_deviation = std::max(out.max_abs_deviation, std::abs(after - before));
        out.deficiency = std::max(out.deficiency, before - after);
    }
    out.isometry = out.max_abs_deviation < kIsometryTol;
    return out;
}

std::vector<std::pair<Complex, Complex>> default_isometry_pairs(Domain domain) {
    if (domain == Domain::disk) {
        return {{0.0, 0.5},
                {Complex(0.3, 0.2), Complex(-0.4, 0.1)},
                {Complex(0.0, -0.6), Complex(0.7, 0.0)},
                {Complex(-0.2, -0.2), Complex(0.1, 0.45)},
                {Complex(0.8, 0.1), Complex(-0.1, -0.8)}};
    }
    return {{1.0, 3.0},
            {Complex(0.5, 1.0), Complex(2.0, -1.0)},
            {Complex(1.0, -2.0), Complex(0.2, 0.3)},
            {Complex(4.0, 0.0), Complex(0.3, 5.0)}};
}

namespace {

bool automorphic_on(const EvolutionFamily& family, double alpha, double horizon,
                    std::span<const std::pair<Complex, Complex>> pairs) {
    constexpr int kSteps = 6;
    for (int i = 0; i < kSteps; ++i) {
        const double s = alpha + (horizon - alpha) * i / kSteps;
        for (int j = i + 1; j <= kSteps; ++j) {
            const double t = alpha + (horizon - alpha) * j / kSteps;
            if (!isometry_test(family, s, t, pairs).isometry) return false;
        }
    }
    return true;
}

} // namespace

std::optional<double> automorphic_threshold(const EvolutionFamily& family, double horizon,
                                            int iterations) {
    if (!(horizon > 0.0)) throw DomainError("automorphic_threshold requires a positive horizon");
    const auto pairs = default_isometry_pairs(family.domain());
    if (automorphic_on(family, 0.0, horizon, pairs)) return 0.0;
    double lo = 0.0;
    double hi = 0.5 * horizon;
    if (!automorphic_on(family, hi, horizon, pairs)) return std::nullopt;
    for (int k = 0; k < iterations; ++k) {
        const double mid = 0.5 * (lo + hi);
        (automorphic_on(family, mid, horizon, pairs) ? hi : lo) = mid;
    }
    return hi;
}

EvolutionFamily log_lift(const EvolutionFamily& inner, const IntegratorConfig& cfg) {
    if (inner.domain() != Domain::disk || !inner.tau() || is_boundary(*inner.tau()) ||
        std::abs(point_value(*inner.tau())) > 1e-14) {
        throw DomainError("log_lift requires a disk family with Denjoy-Wolff point 0");
    }
    if (!inner.herglotz()) throw DomainError("log_lift requires generator");
    FieldFn p = inner.herglotz()->p;
    HalfPlaneVectorField q{[p](Complex w, double t) { return p(std::exp(-w), t); },
                           inner.herglotz()->breakpoints};
    return integrate_family(q, cfg, inner.name() + "-lift");
}

double semiconjugation_residual(const EvolutionFamily& inner, const EvolutionFamily& lifted,
                                double s, double t, Complex w) {
    return std::abs(inner(s, t, std::exp(-w)) - std::exp(-lifted(s, t, w)));
}

double periodicity_residual(const EvolutionFamily& lifted, double s, double t, Complex w) {
    const Complex shift(0.0, kTwoPi);
    return std::abs(lifted(s, t, w + shift) - lifted(s, t, w) - shift);
}

} // namespace loewner
