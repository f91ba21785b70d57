#include "runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "loewner/errors.hpp"
#include "loewner/expression.hpp"

namespace loewner::cli {

namespace {

bool boundary_family(const EvolutionFamily& family) {
    return family.domain() == Domain::half_plane || is_boundary(*family.tau());
}

std::optional<SpectralSamples> family_spectral(const EvolutionFamily& family,
                                               const Scenario& sc) {
    if (!sc.wants(Analysis::spectral)) return std::nullopt;
    return spectral_function(family, sc.horizon, sc.integrator.output_grid);
}

void write_csv(const std::filesystem::path& path, const Trajectory& tr) {
    std::FILE* f = std::fopen(path.string().c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + path.string());
    std::fputs("t,re,im,local_error\n", f);
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        std::fprintf(f, "%.16e,%.16e,%.16e,%.16e\n", tr.times[k], tr.points[k].real(),
                     tr.points[k].imag(), tr.local_error[k]);
    }
    std::fclose(f);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_scenario(JsonWriter& w, const Scenario& sc) {
    w.key("scenario");
    w.begin_object();
    w.field("family", sc.family_name());
    w.field("horizon", sc.horizon);
    w.field("grid_points", sc.grid.size());
    w.key("analyses");
    w.begin_array();
    for (Analysis a : sc.analyses) w.value(to_string(a));
    w.end_array();
    w.end_object();
}

struct ThetaSummary {
    std::optional<ThetaInvariant> theta;
    std::string status;
};

ThetaSummary summarize_theta(const std::vector<OmegaLimitEstimate>& estimates) {
    ThetaSummary out;
    try {
        out.theta = theta_invariant(estimates);
    } catch (const NotApplicable& e) {
        out.status = std::string("not_applicable: ") + e.what();
    } catch (const ClassificationError& e) {
        out.status = std::string("error: ") + e.what();
    }
    return out;
}

void write_theta(JsonWriter& w, const ThetaSummary& t) {
    w.key("theta");
    if (!t.theta) {
        if (t.status.empty()) w.value(nullptr);
        else w.value(t.status);
        return;
    }
    w.begin_object();
    w.field("label", to_string(t.theta->label));
    w.field("mean", t.theta->mean);
    w.field("spread", t.theta->spread);
    w.field("within_tolerance", t.theta->spread < kThetaSpreadTol);
    w.key("values");
    w.begin_array();
    for (double v : t.theta->values) w.value(v);
    w.end_array();
    w.end_object();
}

void write_errors(JsonWriter& w, const std::vector<PointOutcome>& outcomes) {
    w.key("errors");
    w.begin_array();
    for (const PointOutcome& o : outcomes) {
        if (o.error.empty()) continue;
        w.begin_object();
        w.field("index", o.index);
        w.field("message", o.error);
        w.end_object();
    }
    w.end_array();
}

// Runs `work(i)` for i in [0, n) on a pool of `jobs` threads.
template <class F>
void parallel_for(std::size_t n, unsigned jobs, F&& work) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) work(i);
    };
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
}

std::vector<OmegaLimitEstimate> estimates_of(const std::vector<PointOutcome>& outcomes) {
    std::vector<OmegaLimitEstimate> out;
    for (const PointOutcome& o : outcomes) {
        if (o.report) out.push_back(o.report->omega);
    }
    return out;
}

} // namespace

PointOutcome analyse_point(const EvolutionFamily& family, const Scenario& sc, std::size_t index,
                           const SpectralSamples* spectral) {
    PointOutcome out;
    out.index = index;
    out.point = sc.grid[index];
    const double s = out.point.s;
    const Complex z = out.point.z;
    try {
        ClassificationReport r;
        r.family = sc.family_name();
        r.config = sc.integrator;
        r.omega = classify(family, s, z, sc.integrator);
        if (sc.catalog) {
            if (std::string note = catalog_note(*sc.catalog); !note.empty()) r.diagnostics.push_back(note);
        }
        if (spectral) r.spectral = *spectral;
        if (sc.wants(Analysis::nontangential)) {
            if (!boundary_family(family) || family.domain() != Domain::disk) {
                r.nontangential_status = "not_applicable: needs a boundary Denjoy-Wolff point in the disk";
            } else {
                try {
                    r.nontangential = nontangential_check(
                        family, std::get<BoundaryPoint>(*family.tau()), s, z, sc.integrator);
                } catch (const NotApplicable& e) {
                    r.nontangential_status = e.what();
                }
            }
        }
        if (sc.wants(Analysis::automorphic)) {
            try {
                r.automorphic = automorphic_reports(family, s, z, sc.integrator);
            } catch (const NotApplicable& e) {
                r.automorphic_status = std::string("not_applicable: ") + e.what();
            }
        }
        out.report = std::move(r);
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

std::vector<CheckRow> validation_checks(const Scenario& sc) {
    std::vector<CheckRow> rows;
    auto le = [&](std::string name, double v, double thr, std::string note = {}) {
        rows.push_back({std::move(name), v, thr, v <= thr, std::move(note)});
    };

    if (sc.field) {
        const Expression p = Expression::parse(sc.field->p);
        const Breakpoints bps(sc.field->breakpoints, sc.field->period);
        const HerglotzReport h = validate_herglotz(
            [&p](Complex z, double t) { return p(z, t); }, default_probe_grid(bps));
        std::string where;
        if (!h.violations.empty()) {
            std::ostringstream msg;
            msg << "first violation at z = " << h.violations.front().z
                << ", t = " << h.violations.front().t;
            where = msg.str();
        }
        le("herglotz: -min Re p", -h.min_re, kHerglotzPositivitySlack, where);
        le("herglotz: cauchy-riemann residual", h.max_cr_residual, kCauchyRiemannTol);
        if (!rows[0].pass || !rows[1].pass) {
            rows.push_back({"family construction", 0.0, 0.0, false, "skipped: field is not Herglotz"});
            return rows;
        }
    }

    const EvolutionFamily family = build_family(sc);
    const bool integrated = family.provenance() == Provenance::integrated;
    const std::size_t count = 1000;
    const double t_max = std::min(sc.horizon, integrated ? 10.0 : 100.0);
    const auto probes = random_axiom_probes(family.domain(), count, t_max, 20240611);
    const AxiomReport ax = axiom_residuals(family, probes);
    const std::string probes_note = std::to_string(ax.probes) + " probes";
    le("EF1 identity residual", ax.max_identity_residual, 1e-10, probes_note);
    le("EF2 composition residual (scaled)", ax.max_scaled_composition, 1e-7, probes_note);
    le("Schwarz-Pick excess", ax.max_schwarz_pick_excess, 1e-9);
    rows.push_back({"injectivity: min image separation", ax.min_image_separation, 0.0,
                    ax.min_image_separation > 0.0, "must be positive"});
    le("domain excess", ax.max_domain_excess, 1e-9);

    if (boundary_family(family)) {
        const Complex tau = family.domain() == Domain::half_plane
                                ? Complex(1.0)
                                : point_value(*family.tau());
        double worst = 0.0;
        for (std::size_t k = 0; k < 16; ++k) {
            const AxiomProbe& pr = probes[k];
            const double end = std::min(sc.horizon, pr.s + 50.0);
            if (!(end > pr.s)) continue;
            const std::vector<double> times = output_times(pr.s, end, sc.integrator.output_grid);
            std::vector<Complex> w(times.size());
            if (family.domain() == Domain::half_plane) {
                std::vector<double> err;
                family.sample(pr.s, pr.z, times, w, err);
            } else if (const auto& conj = family.halfplane_conjugate()) {
                const Complex w0 = cayley_map(tau, pr.z);
                for (std::size_t j = 0; j < times.size(); ++j) w[j] = (*conj)(pr.s, times[j], w0);
            } else {
                std::vector<Complex> disk;
                std::vector<double> err;
                family.sample(pr.s, pr.z, times, disk, err);
                for (std::size_t j = 0; j < disk.size(); ++j) w[j] = cayley_map(tau, disk[j]);
            }
            for (std::size_t j = 1; j < w.size(); ++j) {
                if (!std::isfinite(w[j].real())) break; // reached tau
                const double drop = (w[j - 1].real() - w[j].real()) / std::max(1.0, std::abs(w[j].real()));
                worst = std::max(worst, drop);
            }
        }
        le("monotone Re (relative drop)", worst, 1e-9, "16 trajectories");
    }
    return rows;
}

void print_checks(std::ostream& out, const std::vector<CheckRow>& rows) {
    std::size_t width = 5;
    for (const CheckRow& r : rows) width = std::max(width, r.name.size());
    out << std::left << std::setw(static_cast<int>(width)) << "check" << "  "
        << std::setw(24) << "value" << std::setw(12) << "threshold" << "result\n";
    for (const CheckRow& r : rows) {
        char value[32];
        char thr[32];
        std::snprintf(value, sizeof value, "%.6e", r.value);
        std::snprintf(thr, sizeof thr, "%.1e", r.threshold);
        out << std::left << std::setw(static_cast<int>(width)) << r.name << "  " << std::setw(24)
            << value << std::setw(12) << thr << (r.pass ? "PASS" : "FAIL");
        if (!r.note.empty()) out << "  (" << r.note << ")";
        out << '\n';
    }
}

unsigned resolve_jobs(unsigned flag) {
    if (const char* env = std::getenv("LOEWNER_JOBS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    if (flag > 0) return flag;
    return std::max(1u, std::thread::hardware_concurrency());
}

int run_command(const Scenario& sc, const std::filesystem::path& out_dir, std::ostream& log) {
    std::filesystem::create_directories(out_dir);
    const EvolutionFamily family = build_family(sc);

    std::optional<SpectralSamples> spectral;
    std::string spectral_error;
    try {
        spectral = family_spectral(family, sc);
    } catch (const std::exception& e) {
        spectral_error = e.what();
    }

    std::vector<PointOutcome> outcomes;
    for (std::size_t i = 0; i < sc.grid.size(); ++i) {
        const GridPoint& g = sc.grid[i];
        try {
            write_csv(out_dir / ("traj_" + std::to_string(i) + ".csv"),
                      sample_trajectory(family, g.s, g.z, sc.integrator));
        } catch (const std::exception& e) {
            outcomes.push_back({i, g, std::nullopt, e.what()});
            continue;
        }
        outcomes.push_back(analyse_point(family, sc, i, spectral ? &*spectral : nullptr));
        if (!spectral_error.empty() && outcomes.back().error.empty()) {
            outcomes.back().error = "spectral: " + spectral_error;
        }
    }

    std::vector<CheckRow> checks;
    if (sc.wants(Analysis::validate)) checks = validation_checks(sc);

    JsonWriter w;
    w.begin_object();
    write_scenario(w, sc);
    w.key("points");
    w.begin_array();
    for (const PointOutcome& o : outcomes) {
        if (o.report) write_report(w, *o.report);
    }
    w.end_array();
    const std::vector<OmegaLimitEstimate> estimates = estimates_of(outcomes);
    ThetaSummary theta;
    if (sc.wants(Analysis::theta) && !estimates.empty()) theta = summarize_theta(estimates);
    write_theta(w, theta);
    w.key("validation");
    if (checks.empty()) {
        w.value(nullptr);
    } else {
        w.begin_array();
        for (const CheckRow& c : checks) {
            w.begin_object();
            w.field("check", c.name);
            w.field("value", c.value);
            w.field("threshold", c.threshold);
            w.field("pass", c.pass);
            w.end_object();
        }
        w.end_array();
    }
    write_errors(w, outcomes);
    w.end_object();
    write_text(out_dir / "report.json", w.str());

    bool error = false;
    bool inconclusive = false;
    for (const PointOutcome& o : outcomes) {
        if (!o.error.empty()) {
            error = true;
            log << "point " << o.index << ": error: " << o.error << '\n';
            continue;
        }
        const OmegaLimitEstimate& om = o.report->omega;
        log << "point " << o.index << " (s = " << o.point.s << ", z = " << o.point.z
            << "): case " << to_string(om.label) << '\n';
        if (om.label == CaseLabel::inconclusive) inconclusive = true;
    }
    for (const CheckRow& c : checks) error = error || !c.pass;
    if (theta.status.rfind("error", 0) == 0) inconclusive = true;
    if (error) return kExitError;
    return inconclusive ? kExitInconclusive : kExitOk;
}

int validate_command(const Scenario& sc, std::ostream& out) {
    const std::vector<CheckRow> rows = validation_checks(sc);
    out << "family: " << sc.family_name() << '\n';
    print_checks(out, rows);
    const bool ok = std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
    out << (ok ? "all checks passed\n" : "validation FAILED\n");
    return ok ? kExitOk : kExitError;
}

int sweep_command(const Scenario& sc, const std::filesystem::path& out_dir, unsigned jobs,
                  std::ostream& log) {
    if (sc.grid.size() < 2) {
        log << "error: sweep needs at least 2 grid points (use run for a single point)\n";
        return kExitError;
    }
    std::filesystem::create_directories(out_dir);
    const EvolutionFamily family = build_family(sc);
    const std::optional<SpectralSamples> spectral = family_spectral(family, sc);

    std::vector<PointOutcome> outcomes(sc.grid.size());
    parallel_for(sc.grid.size(), resolve_jobs(jobs), [&](std::size_t i) {
        outcomes[i] = analyse_point(family, sc, i, spectral ? &*spectral : nullptr);
    });
    std::sort(outcomes.begin(), outcomes.end(),
              [](const PointOutcome& a, const PointOutcome& b) { return a.index < b.index; });

    const std::vector<OmegaLimitEstimate> estimates = estimates_of(outcomes);
    bool error = false;
    bool inconclusive = false;
    for (const PointOutcome& o : outcomes) {
        error = error || !o.error.empty();
        if (o.report && o.report->omega.label == CaseLabel::inconclusive) inconclusive = true;
    }
    std::string uniformity = "uniform";
    try {
        require_uniform(estimates);
    } catch (const ClassificationError& e) {
        uniformity = e.what();
    }
    ThetaSummary theta;
    if (!estimates.empty() && uniformity == "uniform") theta = summarize_theta(estimates);
    const bool theta_fail = theta.theta && theta.theta->spread >= kThetaSpreadTol;

    JsonWriter w;
    w.begin_object();
    write_scenario(w, sc);
    w.field("uniformity", uniformity);
    w.field("label", estimates.empty() || uniformity != "uniform"
                         ? std::string("mixed")
                         : std::string(to_string(estimates.front().label)));
    write_theta(w, theta);
    w.key("summary");
    w.begin_array();
    for (const PointOutcome& o : outcomes) {
        w.begin_object();
        w.field("index", o.index);
        w.field("s", o.point.s);
        w.field("z", o.point.z);
        if (o.report) {
            const OmegaLimitEstimate& om = o.report->omega;
            w.field("case", to_string(om.label));
            w.field("k", om.k);
            w.field("r", om.r);
            w.field("theta", om.theta);
            w.field("interval_kind", to_string(om.interval.kind));
        } else {
            w.field("case", "error");
            w.field("error", o.error);
        }
        w.end_object();
    }
    w.end_array();
    w.key("reports");
    w.begin_array();
    for (const PointOutcome& o : outcomes) {
        if (o.report) write_report(w, *o.report);
    }
    w.end_array();
    write_errors(w, outcomes);
    w.end_object();
    write_text(out_dir / "sweep.json", w.str());

    log << "index  s            z                          case   k / r          theta\n";
    for (const PointOutcome& o : outcomes) {
        char row[256];
        if (!o.report) {
            std::snprintf(row, sizeof row, "%-5zu  %-11.4g  %-26s error: %s\n", o.index,
                          o.point.s, "", o.error.c_str());
        } else {
            const OmegaLimitEstimate& om = o.report->omega;
            char zbuf[64];
            std::snprintf(zbuf, sizeof zbuf, "(%.4g, %.4g)", o.point.z.real(), o.point.z.imag());
            const std::optional<double> kr = om.boundary ? om.k : om.r;
            std::snprintf(row, sizeof row, "%-5zu  %-11.4g  %-26s %-6s %-14.6g %.6g\n", o.index,
                          o.point.s, zbuf, std::string(to_string(om.label)).c_str(),
                          kr ? *kr : std::nan(""), om.theta ? *om.theta : std::nan(""));
        }
        log << row;
    }
    log << "labels: " << uniformity << '\n';
    if (theta.theta) log << "theta spread: " << theta.theta->spread << '\n';

    if (error) return kExitError;
    if (uniformity != "uniform" || inconclusive || theta_fail) return kExitInconclusive;
    return kExitOk;
}

} // namespace loewner::cli
