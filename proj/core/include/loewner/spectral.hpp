#pragma once

// Spectral function lambda(t) of an evolution family at its Denjoy-Wolff
// point: phi'_{s,t}(tau) = exp(lambda(s) - lambda(t)), lambda(0) = 0.

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "loewner/evolution.hpp"
#include "loewner/interval.hpp"

namespace loewner {

struct SpectralSamples {
    std::vector<double> times;
    std::vector<Complex> lambda;
    /// lim Re lambda; +inf when divergent, NaN when undetermined.
    double L = 0.0;
    IntervalKind L_kind = IntervalKind::inconclusive;
    /// The boundary derivative became unstable and the samples stop early.
    bool partial = false;
    std::string warning;
    double max_re_decrease = 0.0; ///< largest drop of Re lambda between samples
    double max_abs_im = 0.0;      ///< max |Im lambda|

    bool divergent() const noexcept { return L == std::numeric_limits<double>::infinity(); }
};

inline constexpr double kInnerDerivativeStep = 1e-5;
inline constexpr double kRadialSamples[] = {0.9, 0.99, 0.999};
inline constexpr double kRadialAgreement = 1e-2;

/// phi'(tau) for an inner Denjoy-Wolff point by the four-point central
/// difference of radius 1e-5.
Complex inner_derivative(const EvolutionFamily& family, double s, double t);

/// 1 / (angular derivative at tau) of phi_{s,t}: the radial quotients at
/// r = 0.9, 0.99, 0.999 extrapolated to r = 1. `spread` receives the largest
/// disagreement between the successive extrapolants.
Complex boundary_reciprocal_derivative(const EvolutionFamily& family, double s, double t,
                                       double* spread = nullptr);

/// lambda on `times` (must start at 0 and increase strictly).
SpectralSamples spectral_function(const EvolutionFamily& family, std::span<const double> times);
/// lambda on 0, spacing, 2 spacing, ..., horizon.
SpectralSamples spectral_function(const EvolutionFamily& family, double horizon, double spacing);

} // namespace loewner
