#include "cutlap/mesh_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "cutlap/errors.hpp"

namespace cutlap {

namespace {

const char* kMeshMagic = "cutlap-mesh";
const char* kCutMagic = "cutlap-cut";
const char* kPartitionMagic = "cutlap-partition";
const char* kVersion = "v1";

bool known_tag(const std::string& tag) {
    return tag == "disk" || tag == "sphere" || tag == "torus" || tag == "cylinder" ||
           tag == "rectangle" || tag == "custom";
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

[[noreturn]] void malformed(const std::string& what) {
    throw IoError("malformed file: " + what);
}

template <typename T>
T expect_value(std::istream& in, const std::string& what) {
    T value;
    if (!(in >> value)) malformed("expected " + what);
    return value;
}

void expect_token(std::istream& in, const std::string& token, const std::string& what) {
    std::string got;
    if (!(in >> got) || got != token) malformed("expected " + what + " '" + token + "'");
}

// Fundamental-domain grids include coordinate 0, so the period equals the
// largest coordinate plus the smallest positive one (one grid step past max).
double infer_period(const std::vector<Vec3>& vertices, double Vec3::* axis) {
    double max_c = -std::numeric_limits<double>::infinity();
    double min_pos = std::numeric_limits<double>::infinity();
    for (const Vec3& v : vertices) {
        double c = v.*axis;
        max_c = std::max(max_c, c);
        if (c > 0.0) min_pos = std::min(min_pos, c);
    }
    if (!std::isfinite(max_c) || !std::isfinite(min_pos) || max_c <= 0.0)
        malformed("cannot infer period from coordinates (need a positive coordinate range)");
    return max_c + min_pos;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return in;
}

}  // namespace

void write_mesh(std::ostream& out, const SurfaceMesh& mesh) {
    out << kMeshMagic << ' ' << kVersion << ' ' << mesh.surface_tag << '\n';
    out << "V " << mesh.n_vertices() << '\n';
    for (const Vec3& v : mesh.vertices)
        out << format_double(v.x) << ' ' << format_double(v.y) << ' ' << format_double(v.z)
            << '\n';
    out << "F " << mesh.n_triangles() << '\n';
    for (const auto& t : mesh.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void write_mesh_file(const std::string& path, const SurfaceMesh& mesh) {
    auto out = open_out(path);
    write_mesh(out, mesh);
    if (!out) throw IoError("failed writing mesh to '" + path + "'");
}

SurfaceMesh read_mesh(std::istream& in) {
    expect_token(in, kMeshMagic, "mesh magic");
    expect_token(in, kVersion, "mesh format version");
    auto tag = expect_value<std::string>(in, "surface tag");
    if (!known_tag(tag)) malformed("unknown surface tag '" + tag + "'");

    SurfaceMesh mesh;
    mesh.surface_tag = tag;
    expect_token(in, "V", "vertex section header");
    int nv = expect_value<int>(in, "vertex count");
    if (nv < 3) malformed("vertex count must be at least 3");
    mesh.vertices.reserve(static_cast<size_t>(nv));
    for (int i = 0; i < nv; ++i) {
        double x = expect_value<double>(in, "vertex coordinate");
        double y = expect_value<double>(in, "vertex coordinate");
        double z = expect_value<double>(in, "vertex coordinate");
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
            malformed("non-finite vertex coordinate");
        mesh.vertices.push_back({x, y, z});
    }
    expect_token(in, "F", "face section header");
    int nt = expect_value<int>(in, "triangle count");
    if (nt < 1) malformed("triangle count must be at least 1");
    mesh.triangles.reserve(static_cast<size_t>(nt));
    for (int i = 0; i < nt; ++i) {
        int a = expect_value<int>(in, "triangle index");
        int b = expect_value<int>(in, "triangle index");
        int c = expect_value<int>(in, "triangle index");
        for (int v : {a, b, c})
            if (v < 0 || v >= nv) malformed("triangle index " + std::to_string(v) + " out of range");
        mesh.triangles.push_back({a, b, c});
    }
    std::string extra;
    if (in >> extra) malformed("unexpected trailing content '" + extra + "'");

    if (tag == "torus" || tag == "cylinder") {
        mesh.period_x = infer_period(mesh.vertices, &Vec3::x);
        if (tag == "torus") mesh.period_y = infer_period(mesh.vertices, &Vec3::y);
    }
    mesh.finalize();  // rejects non-manifold input with MeshError
    return mesh;
}

SurfaceMesh read_mesh_file(const std::string& path) {
    auto in = open_in(path);
    return read_mesh(in);
}

void write_cut(std::ostream& out, const SurfaceMesh& mesh, const std::vector<int>& cut_edges) {
    out << kCutMagic << ' ' << kVersion << '\n';
    for (int e : cut_edges) {
        if (e < 0 || e >= mesh.n_edges())
            throw InvalidArgument("write_cut: edge id out of range");
        out << mesh.edges[static_cast<size_t>(e)][0] << ' ' << mesh.edges[static_cast<size_t>(e)][1]
            << '\n';
    }
}

void write_cut_file(const std::string& path, const SurfaceMesh& mesh,
                    const std::vector<int>& cut_edges) {
    auto out = open_out(path);
    write_cut(out, mesh, cut_edges);
    if (!out) throw IoError("failed writing cut to '" + path + "'");
}

std::vector<int> read_cut(std::istream& in, const SurfaceMesh& mesh) {
    expect_token(in, kCutMagic, "cut magic");
    expect_token(in, kVersion, "cut format version");
    std::vector<int> edges;
    std::set<int> seen;
    int u;
    while (in >> u) {
        int v = expect_value<int>(in, "second vertex of cut edge pair");
        if (u < 0 || u >= mesh.n_vertices() || v < 0 || v >= mesh.n_vertices())
            malformed("cut vertex id out of range: " + std::to_string(u) + " " + std::to_string(v));
        int e = mesh.find_edge(u, v);
        if (e < 0)
            malformed("cut pair " + std::to_string(u) + "-" + std::to_string(v) +
                      " is not a mesh edge");
        if (mesh.boundary_edge[static_cast<size_t>(e)])
            malformed("cut pair " + std::to_string(u) + "-" + std::to_string(v) +
                      " lies on the outer boundary (cuts must use interior edges)");
        if (!seen.insert(e).second)
            malformed("cut edge " + std::to_string(u) + "-" + std::to_string(v) + " listed twice");
        edges.push_back(e);
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

std::vector<int> read_cut_file(const std::string& path, const SurfaceMesh& mesh) {
    auto in = open_in(path);
    return read_cut(in, mesh);
}

void write_partition(std::ostream& out, const PartitionData& partition) {
    out << kPartitionMagic << ' ' << kVersion << " k=" << partition.k << '\n';
    for (int label : partition.labels) out << label << '\n';
}

void write_partition_file(const std::string& path, const PartitionData& partition) {
    auto out = open_out(path);
    write_partition(out, partition);
    if (!out) throw IoError("failed writing partition to '" + path + "'");
}

PartitionData read_partition(std::istream& in, const SurfaceMesh& mesh) {
    expect_token(in, kPartitionMagic, "partition magic");
    expect_token(in, kVersion, "partition format version");
    auto kfield = expect_value<std::string>(in, "part count field k=<k>");
    if (kfield.rfind("k=", 0) != 0) malformed("expected part count field k=<k>");
    PartitionData partition;
    try {
        partition.k = std::stoi(kfield.substr(2));
    } catch (const std::exception&) {
        malformed("unparseable part count '" + kfield + "'");
    }
    if (partition.k < 1) malformed("part count must be at least 1");
    partition.labels.reserve(static_cast<size_t>(mesh.n_triangles()));
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        int label = expect_value<int>(in, "triangle label");
        if (label < 0 || label > partition.k)
            malformed("label " + std::to_string(label) + " outside 0..k");
        partition.labels.push_back(label);
    }
    std::string extra;
    if (in >> extra) malformed("unexpected trailing content '" + extra + "'");
    return partition;
}

PartitionData read_partition_file(const std::string& path, const SurfaceMesh& mesh) {
    auto in = open_in(path);
    return read_partition(in, mesh);
}

}  // namespace cutlap
