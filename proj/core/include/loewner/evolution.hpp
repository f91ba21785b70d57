#pragma once

// Evolution families phi_{s,t} on the disk or the right half-plane: the
// closed-form example catalog, semigroup wrappers, families integrated from
// Herglotz fields, trajectories, and the axiom / isometry probes.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "loewner/herglotz.hpp"

namespace loewner {

enum class Domain { disk, half_plane };
enum class Provenance { closed_form, integrated, semigroup };

std::string_view to_string(Domain d);

/// (s, t, z) -> phi_{s,t}(z). Must be pure.
using FlowMap = std::function<Complex(double, double, Complex)>;

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.1;
    double horizon = 100.0;
    double output_grid = 0.05;

    /// Throws DomainError unless tolerances lie in (0, 1) and the step,
    /// horizon and grid spacing are positive.
    void validate() const;
};

/// Samples of t -> phi_{s,t}(z) on an output grid.
struct Trajectory {
    double s = 0.0;
    Complex z{};
    Domain domain = Domain::disk;
    std::vector<double> times;
    std::vector<Complex> points;
    /// Sum of embedded-pair error estimates of the steps ending at each
    /// sample; zero for closed-form families.
    std::vector<double> local_error;
};

/// Fills points/errors for the given strictly increasing times (times[0] = s).
using PathSampler = std::function<void(double s, Complex z, std::span<const double> times,
                                       std::vector<Complex>& points,
                                       std::vector<double>& errors)>;

class EvolutionFamily {
public:
    /// `tau` is the declared common Denjoy-Wolff point for disk families;
    /// half-plane families have theirs at infinity and pass nullopt.
    EvolutionFamily(std::string name, Domain domain, std::optional<DenjoyWolffPoint> tau,
                    FlowMap flow, Provenance provenance);

    /// phi_{s,t}(z). Requires 0 <= s <= t and z in the open domain.
    Complex operator()(double s, double t, Complex z) const;

    const std::string& name() const noexcept { return name_; }
    Domain domain() const noexcept { return domain_; }
    Provenance provenance() const noexcept { return provenance_; }
    const std::optional<DenjoyWolffPoint>& tau() const noexcept { return tau_; }
    const Breakpoints& breakpoints() const noexcept { return breakpoints_; }
    /// Analytic vector field (G on the disk, F on the half-plane), if known.
    const std::optional<FieldFn>& generator() const noexcept { return generator_; }
    /// Herglotz data (tau, p), if known. Required by log_lift.
    const std::optional<HerglotzField>& herglotz() const noexcept { return herglotz_; }

    EvolutionFamily& with_generator(FieldFn g);
    EvolutionFamily& with_herglotz(HerglotzField h);
    EvolutionFamily& with_breakpoints(Breakpoints b);
    EvolutionFamily& with_sampler(PathSampler sampler);
    /// Exact Cayley conjugate sigma_tau o phi_{s,t} o sigma_tau^{-1} for a
    /// boundary-tau disk family. Lets half-plane analyses skip the
    /// cancellation in sigma_tau near tau.
    EvolutionFamily& with_halfplane_conjugate(FlowMap conjugate);
    const std::optional<FlowMap>& halfplane_conjugate() const noexcept { return conjugate_; }

    void sample(double s, Complex z, std::span<const double> times, std::vector<Complex>& points,
                std::vector<double>& errors) const;

    bool in_domain(Complex z) const;

private:
    std::string name_;
    Domain domain_;
    std::optional<DenjoyWolffPoint> tau_;
    FlowMap flow_;
    Provenance provenance_;
    Breakpoints breakpoints_;
    std::optional<FieldFn> generator_;
    std::optional<HerglotzField> herglotz_;
    std::optional<PathSampler> sampler_;
    std::optional<FlowMap> conjugate_;
};

// --- catalog ---------------------------------------------------------------

/// B1..B5: linear-fractional families with Denjoy-Wolff point 1 driven by
/// m(t). B4p is a supplementary one-sided driver (not part of the original
/// example list). I1..I4: linear families exp(nu(s) - nu(t)) z.
/// Trivial: every phi_{s,t} is the identity.
enum class CatalogId { B1, B2, B3, B4, B5, B4p, I1, I2, I3, I4, trivial };

inline constexpr CatalogId kBoundaryCatalog[] = {CatalogId::B1, CatalogId::B2, CatalogId::B3,
                                                 CatalogId::B4, CatalogId::B5, CatalogId::B4p};
inline constexpr CatalogId kInnerCatalog[] = {CatalogId::I1, CatalogId::I2, CatalogId::I3,
                                              CatalogId::I4};

std::string_view to_string(CatalogId id);
/// Accepts "B1".."B5", "B4p" (also "B4'"), "I1".."I4", "trivial".
CatalogId parse_catalog_id(std::string_view text);
bool is_boundary_id(CatalogId id);

/// The scalar driver of a catalog family: m(t) for boundary ids, nu(t) for
/// inner ids, with derivative. Breakpoints mark where the derivative jumps.
struct CatalogDriver {
    std::function<Complex(double)> value;
    std::function<Complex(double)> derivative;
    Breakpoints breakpoints;
    /// value(t) - value(s); short steps go through difference identities so
    /// that finite-difference quotients do not cancel.
    std::function<Complex(double, double)> increment;
};
CatalogDriver catalog_driver(CatalogId id);

EvolutionFamily catalog_family(CatalogId id);
/// Caveat attached to reports of a catalog family, empty if none.
std::string catalog_note(CatalogId id);
/// Cayley conjugate w + 2 (m(t) - m(s)) of a boundary catalog family.
EvolutionFamily halfplane_form(CatalogId id);

/// phi_{s,t} = phi_{t-s} for a one-parameter semigroup.
EvolutionFamily semigroup_family(std::string name, Domain domain,
                                 std::optional<DenjoyWolffPoint> tau,
                                 std::function<Complex(double, Complex)> semigroup);

// --- integration -----------------------------------------------------------

/// Dormand-Prince 5(4) with breakpoint-aware stepping and domain-exit
/// rejection. Immutable after construction; safe to share across threads.
class RungeKuttaIntegrator {
public:
    RungeKuttaIntegrator(FieldFn field, Domain domain, Breakpoints breakpoints,
                         IntegratorConfig cfg);

    /// Solution of dz/dt = field(z, t), z(s) = z, at time t >= s.
    Complex advance(double s, double t, Complex z) const;
    /// Solution at every entry of `times` (times[0] = s), landing exactly on
    /// each output time.
    void sample(double s, Complex z, std::span<const double> times, std::vector<Complex>& points,
                std::vector<double>& errors) const;

    const IntegratorConfig& config() const noexcept { return cfg_; }

private:
    struct State;
    Complex step_to(State& st, double target) const;

    FieldFn field_;
    Domain domain_;
    Breakpoints breakpoints_;
    IntegratorConfig cfg_;
};

/// Disk family from a Herglotz field (validated through berkson_porta_field).
EvolutionFamily integrate_family(const HerglotzField& field, const IntegratorConfig& cfg,
                                 std::string name = "integrated");
/// Half-plane family with Denjoy-Wolff point at infinity.
EvolutionFamily integrate_family(const HalfPlaneVectorField& field, const IntegratorConfig& cfg,
                                 std::string name = "integrated-halfplane");

/// Output grid s, s + dt, ..., with the horizon always included.
std::vector<double> output_times(double s, double horizon, double spacing);

Trajectory sample_trajectory(const EvolutionFamily& family, double s, Complex z,
                             const IntegratorConfig& cfg);

// --- axioms and invariants -------------------------------------------------

struct AxiomProbe {
    double s;
    double u;
    double t;
    Complex z;
    Complex z2; ///< second point for the injectivity / Schwarz-Pick probes
};

struct AxiomReport {
    double max_identity_residual = 0.0;    ///< max |phi_{s,s}(z) - z|
    double max_composition_residual = 0.0; ///< max |phi_{u,t}(phi_{s,u}(z)) - phi_{s,t}(z)|
    double max_scaled_composition = 0.0;   ///< residual / (1 + (t - s)/10)
    double min_image_separation = 0.0;     ///< min |phi(z) - phi(z2)| over distinct pairs
    double max_schwarz_pick_excess = 0.0;  ///< max rho(phi z, phi z2) - rho(z, z2)
    double max_domain_excess = 0.0;        ///< disk: max |phi| - 1; half-plane: max -Re phi
    std::size_t probes = 0;
};

/// Random probes with fixed seed: times in [0, t_max], points with |z| <= 0.9
/// (disk) or in a box of H (half-plane).
std::vector<AxiomProbe> random_axiom_probes(Domain domain, std::size_t count, double t_max,
                                            std::uint64_t seed);

AxiomReport axiom_residuals(const EvolutionFamily& family, std::span<const AxiomProbe> probes);

/// rho_D or rho_H depending on the domain.
double hyp_dist(Domain domain, Complex a, Complex b);

struct IsometryResult {
    bool isometry = false;
    double max_abs_deviation = 0.0;
    double deficiency = 0.0; ///< max contraction rho(z1,z2) - rho(phi z1, phi z2)
};

inline constexpr double kIsometryTol = 1e-8;

IsometryResult isometry_test(const EvolutionFamily& family, double s, double t,
                             std::span<const std::pair<Complex, Complex>> pairs);
/// A fixed spread of probe pairs for the family's domain.
std::vector<std::pair<Complex, Complex>> default_isometry_pairs(Domain domain);

/// Bisection on isometry_test for the first time alpha after which all
/// phi_{s,t} (alpha <= s <= t <= horizon) look like automorphisms. A
/// diagnostic only; returns nullopt if even [horizon/2, horizon] fails.
std::optional<double> automorphic_threshold(const EvolutionFamily& family, double horizon,
                                            int iterations = 30);

/// Half-plane family integrated from q(w, t) = p(e^{-w}, t). Requires a disk
/// family with Denjoy-Wolff point 0 and known Herglotz data.
EvolutionFamily log_lift(const EvolutionFamily& inner, const IntegratorConfig& cfg);

/// |psi_{s,t}(e^{-w}) - exp(-phi_{s,t}(w))|.
double semiconjugation_residual(const EvolutionFamily& inner, const EvolutionFamily& lifted,
                                double s, double t, Complex w);
/// |phi_{s,t}(w + 2 pi i) - phi_{s,t}(w) - 2 pi i|.
double periodicity_residual(const EvolutionFamily& lifted, double s, double t, Complex w);

} // namespace loewner
