#pragma once

// Scenario files: a JSON document naming a family (catalog id or declared
// Herglotz field), a grid of (s, z) start points, a horizon, integrator
// settings and the analyses to run.
//
//   {
//     "family": "B5"  |  {"tau": [1, 0], "p": "(1 + z) / (1 - z)",
//                         "breakpoints": [1.5], "period": 0},
//     "grid": [{"s": 0, "z": [0, 0]}, {"s": 1, "z": 0.25}],
//     "horizon": 400,
//     "integrator": {"rel_tol": 1e-10, "abs_tol": 1e-12, "max_step": 0.1,
//                    "output_grid": 0.05},
//     "analyses": ["classify", "theta", "spectral", "nontangential",
//                  "automorphic", "validate"]
//   }

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "loewner/classify.hpp"

namespace loewner::cli {

enum class Analysis { classify, theta, spectral, nontangential, automorphic, validate };

std::string_view to_string(Analysis a);

struct FieldDeclaration {
    Complex tau{};
    std::string p;
    std::vector<double> breakpoints;
    double period = 0.0;
};

struct Scenario {
    std::optional<CatalogId> catalog;
    std::optional<FieldDeclaration> field;
    std::vector<GridPoint> grid;
    double horizon = 0.0;
    IntegratorConfig integrator;
    std::vector<Analysis> analyses;

    bool wants(Analysis a) const;
    std::string family_name() const;
};

/// Throws ParseError carrying the line and column of the offending token, or
/// of the key whose value is invalid.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Declared fields are validated and integrated; throws HerglotzError if p is
/// not a Herglotz function.
EvolutionFamily build_family(const Scenario& scenario);

} // namespace loewner::cli
