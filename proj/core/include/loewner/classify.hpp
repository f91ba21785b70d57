#pragma once

// Omega-limit classification of trajectories of evolution families with a
// common Denjoy-Wolff point, and the derived invariants: Theta, horocycle
// factor, hyperbolic radius, non-tangential approach, rotation offsets and
// automorphic-type formulas.
//
// Boundary tau: the trajectory is read in the right half-plane through
// sigma_tau. Re w is non-decreasing; Re w -> inf gives case 1, otherwise
// R = lim Re w exists and the accumulation set A of Im w decides:
//   point -> 2, full line -> 3a, half line -> 3b, compact -> 3c.
// Inner tau: after alpha_tau moves tau to 0, the log-modulus and the unwrapped
// argument play the same roles (modulus -> 0 is case 1).

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "loewner/evolution.hpp"
#include "loewner/interval.hpp"
#include "loewner/spectral.hpp"

namespace loewner {

enum class CaseLabel { case1, case2, case3a, case3b, case3c, inconclusive };

/// "1", "2", "3a", "3b", "3c", "inconclusive".
std::string_view to_string(CaseLabel c);

struct OmegaLimitEstimate {
    CaseLabel label = CaseLabel::inconclusive;
    bool boundary = true;
    double s = 0.0;
    Complex z{};
    Complex tau{};
    /// Boundary: R = lim Re w. Inner: lim |alpha_tau(phi)|.
    double re_limit = std::numeric_limits<double>::quiet_NaN();
    /// Series behind re_limit: Re w, or -log |alpha_tau(phi)|.
    IntervalEstimate limit_series;
    /// The set A: accumulation set of Im w, or of the unwrapped argument.
    IntervalEstimate interval;
    std::optional<double> k;     ///< horocycle factor 1/R (boundary)
    std::optional<double> r;     ///< hyperbolic radius (inner)
    std::optional<double> theta; ///< Theta (boundary 3c) or euclidean extent (inner 3b)
    std::optional<ClosedArc> arc;
    std::optional<Complex> limit_point; ///< case 2, in the family's own coordinates
    std::map<std::string, double> diagnostics;
    std::vector<std::string> notes;
};

OmegaLimitEstimate classify_boundary(const EvolutionFamily& family, BoundaryPoint tau, double s,
                                     Complex z, const IntegratorConfig& cfg);
OmegaLimitEstimate classify_inner(const EvolutionFamily& family, DiskPoint tau, double s,
                                  Complex z, const IntegratorConfig& cfg);
/// Dispatch on the family's Denjoy-Wolff point. Half-plane families are read
/// as boundary families with tau = 1.
OmegaLimitEstimate classify(const EvolutionFamily& family, double s, Complex z,
                            const IntegratorConfig& cfg);

struct GridPoint {
    double s;
    Complex z;
};

/// Throws ClassificationError("family classification not uniform") unless
/// every estimate carries the same label.
void require_uniform(std::span<const OmegaLimitEstimate> estimates);

struct ThetaInvariant {
    std::vector<double> values;
    double spread = 0.0;
    double mean = 0.0;
    CaseLabel label = CaseLabel::inconclusive;
};

/// Theta (boundary 3c) or euclidean extent (inner 3b) at every grid point.
/// Mixed labels throw ClassificationError; other labels throw NotApplicable.
ThetaInvariant theta_invariant(const EvolutionFamily& family, std::span<const GridPoint> grid,
                               const IntegratorConfig& cfg);
ThetaInvariant theta_invariant(std::span<const OmegaLimitEstimate> estimates);

struct NontangentialResult {
    bool flag = false;
    double sup_angle = 0.0;    ///< sup |Arg(1 - conj(tau) phi)| over the tail
    double early_sup = 0.0;    ///< same, tail without its last window
    double last_window_sup = 0.0;
};

inline constexpr double kNontangentialMargin = 0.01;
inline constexpr double kNontangentialStability = 1e-3;

/// Requires case 1 for a boundary tau, else NotApplicable.
NontangentialResult nontangential_check(const EvolutionFamily& family, BoundaryPoint tau, double s,
                                        Complex z, const IntegratorConfig& cfg);

struct ArgOmegaResult {
    double c = 0.0;        ///< rotation aligning the two limit sets
    double residual = 0.0; ///< Hausdorff distance on the unit circle after rotation
    bool full_circle_arg = false;
    bool full_circle_lambda = false;
    double extent_arg = 0.0;
    double extent_lambda = 0.0;
};

/// Compares the limit set of exp(i arg alpha_tau(phi_{s,t}(z))) with the limit
/// set of exp(-i Im lambda(t)). Case-1 input throws NotApplicable.
ArgOmegaResult arg_omega_vs_lambda(const EvolutionFamily& family, double s, Complex z,
                                   const IntegratorConfig& cfg);

struct AutomorphicReport {
    bool boundary = true;
    double isometry_deviation = 0.0;
    // boundary: phi^H_{s,t}(w) = a w + i b
    double affine_residual = 0.0;
    double min_scale = 0.0;
    std::optional<double> k_formula;
    std::optional<double> k_classifier;
    // inner: lambda purely imaginary, rotation structure
    double max_abs_re_lambda = 0.0;
    std::optional<CaseLabel> observed_case;
    bool rotation_case_3a = false;
    std::string note;
};

inline constexpr double kAffineFitTol = 1e-8;

/// Requires isometry on an (s, t) probe grid (automorphic from time 0), else
/// NotApplicable. (s, z) is the probe used for the factor formula and the
/// observed case.
AutomorphicReport automorphic_reports(const EvolutionFamily& family, double s, Complex z,
                                      const IntegratorConfig& cfg);

/// Arc of `circle` from `start` to `end` that passes through `mid`.
ClosedArc arc_through(const EuclideanCircle& circle, Complex start, Complex mid, Complex end);

} // namespace loewner
