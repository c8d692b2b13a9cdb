#pragma once

// JSON run reports.  Every report is a single object with the envelope
// {schema_version, kind, tool} and kind-specific payload, and is structurally
// valid against the schema shipped in share/report.schema.json (a copy of
// which is embedded at configure time).  JSON has no NaN/Infinity: optional
// scalar fields are omitted when not finite, and mandatory energies are
// clamped to +/-1e308 with the circumstances already recorded in the
// diagnostics list.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cutlap/eigensolver.hpp"
#include "cutlap/geometry.hpp"
#include "cutlap/scenarios.hpp"
#include "cutlap/spectral.hpp"

namespace cutlap {

inline constexpr int kReportSchemaVersion = 1;

std::string mesh_report_json(const SurfaceMesh& mesh);

struct HomologyReportCut {
    std::string name;
    int n_edges = 0;
    int n_odd_points = 0;
};

struct HomologyVerdicts {
    std::optional<bool> relative_cycle;
    std::optional<bool> null_homologous;
    std::optional<bool> homologous;
    std::optional<int> witness_chain_triangles;
    std::optional<int> witness_coloring_minus;
    std::string obstruction;  // empty = no obstruction
};

std::string homology_report_json(const SurfaceMesh& mesh,
                                 const std::vector<HomologyReportCut>& cuts,
                                 const HomologyVerdicts& verdicts);

struct SpectrumModeInfo {
    int index = 0;
    double eigenvalue = 0.0;
    int nodal_count = 0;
    int spectral_position = 0;
    bool courant_sharp = false;
};

std::string spectrum_report_json(const SurfaceMesh& mesh, int cut_edges, int n_dofs, int k,
                                 double tol, uint64_t seed, const Spectrum& spectrum,
                                 const std::vector<SpectrumModeInfo>& modes);

struct EnergyMembership {
    bool member = false;
    double lambda_k = 0.0;
    double margin = 0.0;
    bool violation = false;
};

std::string energy_report_json(const SurfaceMesh& mesh, const Partition& partition,
                               const PartitionEnergy& energy,
                               const std::optional<EnergyMembership>& membership);

std::string scenario_report_json(const ScenarioReport& report);

// Structural validation against the embedded schema.  Returns the list of
// problems found; an empty list means valid.  Implements exactly the schema
// vocabulary the shipped file uses: type, enum, const, required, properties,
// items, oneOf.
std::vector<std::string> validate_report(const std::string& report_text);

// The embedded schema, verbatim.
const char* report_schema_text();

}  // namespace cutlap
