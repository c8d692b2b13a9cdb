#include "cutlap/report.hpp"

#include <cmath>

#include <json.hpp>

#include "cutlap/errors.hpp"
#include "cutlap_embedded/embedded_data.hpp"

namespace cutlap {

namespace {

using nlohmann::json;

json envelope(const std::string& kind) {
    return json{{"schema_version", kReportSchemaVersion}, {"kind", kind}, {"tool", "cutlap"}};
}

json mesh_summary(const SurfaceMesh& mesh) {
    return json{{"surface", mesh.surface_tag},
                {"n_vertices", mesh.n_vertices()},
                {"n_edges", mesh.n_edges()},
                {"n_triangles", mesh.n_triangles()}};
}

double finite_or_clamp(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? 1e308 : -1e308;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

const json& schema() {
    static const json parsed = json::parse(embedded::kReportSchemaJson);
    return parsed;
}

bool type_matches(const json& value, const std::string& type) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "string") return value.is_string();
    if (type == "boolean") return value.is_boolean();
    if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
    if (type == "number") return value.is_number();
    return false;
}

void validate_node(const json& value, const json& node, const std::string& path,
                   std::vector<std::string>& problems);

// True iff the node accepts the value without recording problems.
bool validates_clean(const json& value, const json& node) {
    std::vector<std::string> scratch;
    validate_node(value, node, "", scratch);
    return scratch.empty();
}

void validate_node(const json& value, const json& node, const std::string& path,
                   std::vector<std::string>& problems) {
    const std::string where = path.empty() ? "$" : path;
    if (node.contains("const") && value != node.at("const"))
        problems.push_back(where + ": expected constant " + node.at("const").dump());
    if (node.contains("enum")) {
        bool found = false;
        for (const json& option : node.at("enum")) found = found || value == option;
        if (!found)
            problems.push_back(where + ": value " + value.dump() + " not in enum " +
                               node.at("enum").dump());
    }
    if (node.contains("type")) {
        const std::string type = node.at("type").get<std::string>();
        if (!type_matches(value, type)) {
            problems.push_back(where + ": expected type " + type);
            return;  // structure below is meaningless on a type mismatch
        }
    }
    if (value.is_object() && node.contains("required")) {
        for (const json& key : node.at("required"))
            if (!value.contains(key.get<std::string>()))
                problems.push_back(where + ": missing required key '" + key.get<std::string>() +
                                   "'");
    }
    if (value.is_object() && node.contains("properties")) {
        for (const auto& [key, sub] : node.at("properties").items())
            if (value.contains(key)) validate_node(value.at(key), sub, where + "." + key, problems);
    }
    if (value.is_array() && node.contains("items")) {
        int i = 0;
        for (const json& element : value)
            validate_node(element, node.at("items"), where + "[" + std::to_string(i++) + "]",
                          problems);
    }
    if (node.contains("oneOf")) {
        int matches = 0;
        for (const json& branch : node.at("oneOf"))
            if (validates_clean(value, branch)) ++matches;
        if (matches != 1)
            problems.push_back(where + ": matched " + std::to_string(matches) +
                               " oneOf branches, expected exactly 1");
    }
}

}  // namespace

std::string mesh_report_json(const SurfaceMesh& mesh) {
    int boundary = 0;
    for (int e = 0; e < mesh.n_edges(); ++e)
        if (!mesh.is_interior_edge(e)) ++boundary;
    json j = envelope("mesh");
    j["surface"] = mesh.surface_tag;
    j["n_vertices"] = mesh.n_vertices();
    j["n_edges"] = mesh.n_edges();
    j["n_triangles"] = mesh.n_triangles();
    j["n_boundary_edges"] = boundary;
    j["euler_characteristic"] = mesh.n_vertices() - mesh.n_edges() + mesh.n_triangles();
    j["total_area"] = mesh.total_area();
    return dump(j);
}

std::string homology_report_json(const SurfaceMesh& mesh,
                                 const std::vector<HomologyReportCut>& cuts,
                                 const HomologyVerdicts& verdicts) {
    json j = envelope("homology");
    j["mesh"] = mesh_summary(mesh);
    j["cuts"] = json::array();
    for (const HomologyReportCut& c : cuts)
        j["cuts"].push_back(
            {{"name", c.name}, {"n_edges", c.n_edges}, {"n_odd_points", c.n_odd_points}});
    json v = json::object();
    if (verdicts.relative_cycle) v["relative_cycle"] = *verdicts.relative_cycle;
    if (verdicts.null_homologous) v["null_homologous"] = *verdicts.null_homologous;
    if (verdicts.homologous) v["homologous"] = *verdicts.homologous;
    if (verdicts.witness_chain_triangles)
        v["witness_chain_triangles"] = *verdicts.witness_chain_triangles;
    if (verdicts.witness_coloring_minus)
        v["witness_coloring_minus"] = *verdicts.witness_coloring_minus;
    if (!verdicts.obstruction.empty()) v["obstruction"] = verdicts.obstruction;
    j["verdicts"] = std::move(v);
    return dump(j);
}

std::string spectrum_report_json(const SurfaceMesh& mesh, int cut_edges, int n_dofs, int k,
                                 double tol, uint64_t seed, const Spectrum& spectrum,
                                 const std::vector<SpectrumModeInfo>& modes) {
    json j = envelope("spectrum");
    j["mesh"] = mesh_summary(mesh);
    j["cut_edges"] = cut_edges;
    j["n_dofs"] = n_dofs;
    j["k"] = k;
    j["tol"] = tol;
    j["seed"] = seed;
    j["method"] = spectrum.stats.method;
    j["iterations"] = spectrum.stats.iterations;
    j["operator_applies"] = spectrum.stats.n_operator_applies;
    j["shift"] = spectrum.stats.shift;
    j["eigenvalues"] = spectrum.eigenvalues;
    j["residuals"] = spectrum.residuals;
    j["modes"] = json::array();
    for (const SpectrumModeInfo& m : modes)
        j["modes"].push_back({{"index", m.index},
                              {"eigenvalue", m.eigenvalue},
                              {"nodal_count", m.nodal_count},
                              {"spectral_position", m.spectral_position},
                              {"courant_sharp", m.courant_sharp}});
    return dump(j);
}

std::string energy_report_json(const SurfaceMesh& mesh, const Partition& partition,
                               const PartitionEnergy& energy,
                               const std::optional<EnergyMembership>& membership) {
    json j = envelope("energy");
    j["mesh"] = mesh_summary(mesh);
    j["k"] = partition.k;
    int unassigned = 0;
    for (int label : partition.label)
        if (label == 0) ++unassigned;
    j["unassigned_triangles"] = unassigned;
    j["areas"] = part_areas(mesh, partition);
    json per_part = json::array();
    for (double v : energy.per_part) per_part.push_back(finite_or_clamp(v));
    j["per_part"] = std::move(per_part);
    j["max_energy"] = finite_or_clamp(energy.max_energy);
    j["diagnostics"] = energy.diagnostics;
    if (membership)
        j["membership"] = {{"member", membership->member},
                           {"lambda_k", membership->lambda_k},
                           {"margin", membership->margin},
                           {"violation", membership->violation}};
    return dump(j);
}

std::string scenario_report_json(const ScenarioReport& report) {
    json j = envelope("scenario");
    j["name"] = report.name;
    j["refinement_shift"] = report.refinement_shift;
    j["passed"] = report.passed;
    j["checks"] = json::array();
    for (const ScenarioCheck& c : report.checks) {
        json entry = {{"name", c.name},
                      {"passed", c.passed},
                      {"flagged", c.flagged},
                      {"detail", c.detail}};
        if (std::isfinite(c.measured)) entry["measured"] = c.measured;
        if (std::isfinite(c.reference)) entry["reference"] = c.reference;
        if (std::isfinite(c.tolerance)) entry["tolerance"] = c.tolerance;
        j["checks"].push_back(std::move(entry));
    }
    return dump(j);
}

std::vector<std::string> validate_report(const std::string& report_text) {
    std::vector<std::string> problems;
    json value;
    try {
        value = json::parse(report_text);
    } catch (const json::parse_error& e) {
        problems.push_back(std::string("not valid JSON: ") + e.what());
        return problems;
    }
    validate_node(value, schema(), "", problems);
    return problems;
}

const char* report_schema_text() { return embedded::kReportSchemaJson; }

}  // namespace cutlap
