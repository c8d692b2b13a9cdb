#pragma once

// Named, reproducible experiments: each scenario bundles a mesh recipe, cut
// recipes, and a list of expected-value checks (eigenvalues against
// closed-form references, spectral positions, nodal counts, Courant
// sharpness on both sides of aspect thresholds, partition energies, homology
// verdicts).  The catalog lives in a versioned configuration file shipped
// with the repository and embedded into the library at configure time;
// list_scenarios() reflects it verbatim.
//
// run_scenario evaluates every check and keeps going after failures, so one
// run reports the full picture.  A refinement shift reruns the same scenario
// on a finer (+1 doubles) or coarser (-1 halves) mesh with everything else
// fixed.  On shifted-up runs each eigenvalue check also compares its distance
// to the reference against the next-coarser level; a level that drifts
// further from the reference than 1.5x the coarser distance is flagged as
// non-monotone, which is advisory and never fails the check.

#include <string>
#include <vector>

#include "cutlap/geometry.hpp"
#include "cutlap/homology.hpp"
#include "cutlap/spectral.hpp"

namespace cutlap {

struct ScenarioCheck {
    std::string name;        // stable identifier, "<variant>:<check>" on multi-variant scenarios
    bool passed = false;
    bool flagged = false;    // advisory refinement-monotonicity flag; never affects passed
    double measured = 0.0;   // NaN when the check has no scalar measurement
    double reference = 0.0;  // NaN when the check has no scalar reference
    double tolerance = 0.0;  // relative unless the detail string says otherwise
    std::string detail;      // human-readable outcome, including error text on failures
};

struct ScenarioReport {
    std::string name;
    int refinement_shift = 0;
    bool passed = false;  // conjunction of all checks (flags excluded)
    std::vector<ScenarioCheck> checks;
};

struct ScenarioInfo {
    std::string name;
    std::string description;  // one line: what the scenario exercises
    std::string statement;    // the full claim being verified, self-contained
};

// Catalog in file order; stable across runs and platforms.
std::vector<ScenarioInfo> list_scenarios();

bool is_registered_scenario(const std::string& name);

// Run one catalog entry.  Throws InvalidArgument for unknown names; check
// failures are reported, never thrown.  When export_dir is non-empty, runs
// that compute a spectrum also write mesh/eigenvector exports there (legacy
// VTK always, SVG for planar charts).
ScenarioReport run_scenario(const std::string& name, int refinement_shift = 0,
                            const std::string& export_dir = "");

// The embedded catalog configuration, verbatim.
const char* scenarios_config_text();

// Build a mesh, cut, or partition from a JSON recipe in the same dialect the
// scenario catalog uses (see the shipped configuration file for examples).
// Malformed JSON or unknown recipe kinds raise InvalidArgument.
SurfaceMesh mesh_from_recipe_text(const std::string& recipe);
Cut cut_from_recipe_text(const SurfaceMesh& mesh, const std::string& recipe);
Partition partition_from_recipe_text(const SurfaceMesh& mesh, const std::string& recipe);

}  // namespace cutlap
