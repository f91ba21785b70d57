#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "loewner/report.hpp"
#include "scenario.hpp"

namespace loewner::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInconclusive = 2;

inline constexpr double kThetaSpreadTol = 0.05;

struct PointOutcome {
    std::size_t index = 0;
    GridPoint point{};
    std::optional<ClassificationReport> report;
    std::string error; ///< non-empty when the point failed
};

/// Classification plus every requested per-point analysis. Analysis-specific
/// "not applicable" outcomes are recorded in the report, other failures in
/// `error`.
PointOutcome analyse_point(const EvolutionFamily& family, const Scenario& scenario,
                           std::size_t index, const SpectralSamples* spectral);

struct CheckRow {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string note;
};

/// Herglotz probes (declared fields), evolution-family axioms, Schwarz-Pick,
/// injectivity, domain membership and, for boundary families, monotone Re.
std::vector<CheckRow> validation_checks(const Scenario& scenario);
void print_checks(std::ostream& out, const std::vector<CheckRow>& rows);

/// LOEWNER_JOBS when set to a positive integer, else `flag`, else the
/// hardware concurrency.
unsigned resolve_jobs(unsigned flag);

int run_command(const Scenario& scenario, const std::filesystem::path& out_dir, std::ostream& log);
int validate_command(const Scenario& scenario, std::ostream& out);
int sweep_command(const Scenario& scenario, const std::filesystem::path& out_dir, unsigned jobs,
                  std::ostream& log);

} // namespace loewner::cli
