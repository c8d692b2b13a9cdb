#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "cutlap/builders.hpp"
#include "cutlap/errors.hpp"
#include "cutlap/geometry.hpp"
#include "cutlap/mesh_io.hpp"

using namespace cutlap;

namespace {

std::string mesh_to_string(const SurfaceMesh& m) {
    std::ostringstream out;
    write_mesh(out, m);
    return out.str();
}

SurfaceMesh mesh_from_string(const std::string& s) {
    std::istringstream in(s);
    return read_mesh(in);
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("mesh roundtrip is exact for every canonical surface") {
    std::vector<SurfaceMesh> meshes;
    meshes.push_back(build_disk(2));
    meshes.push_back(build_sphere(1));
    meshes.push_back(build_rectangle(1.0, 0.65, 8, 6, Identify::both));
    meshes.push_back(build_rectangle(2.0, 1.0, 8, 4, Identify::horizontal));
    meshes.push_back(build_rectangle(1.5, 0.5, 4, 4, Identify::none));
    meshes.push_back(build_annulus(1.0, 2.0, 16, 4));
    for (const SurfaceMesh& m : meshes) {
        CAPTURE(m.surface_tag);
        const SurfaceMesh back = mesh_from_string(mesh_to_string(m));
        CHECK(back.surface_tag == m.surface_tag);
        REQUIRE(back.n_vertices() == m.n_vertices());
        REQUIRE(back.n_triangles() == m.n_triangles());
        CHECK(back.n_edges() == m.n_edges());
        for (int v = 0; v < m.n_vertices(); ++v) {
            // %.17g serialization reproduces doubles bit for bit.
            CHECK(back.vertices[static_cast<size_t>(v)].x == m.vertices[static_cast<size_t>(v)].x);
            CHECK(back.vertices[static_cast<size_t>(v)].y == m.vertices[static_cast<size_t>(v)].y);
            CHECK(back.vertices[static_cast<size_t>(v)].z == m.vertices[static_cast<size_t>(v)].z);
        }
        CHECK(back.triangles == m.triangles);
        // Periodic metadata is re-inferred from the coordinate range.
        CHECK(back.period_x == doctest::Approx(m.period_x).epsilon(1e-12));
        CHECK(back.period_y == doctest::Approx(m.period_y).epsilon(1e-12));
        CHECK(back.total_area() == doctest::Approx(m.total_area()).epsilon(1e-12));
    }
}

TEST_CASE("file variants agree with stream variants") {
    const SurfaceMesh m = build_disk(1);
    const std::string path = "/tmp/cutlap_io_test_mesh.txt";
    write_mesh_file(path, m);
    const SurfaceMesh back = read_mesh_file(path);
    CHECK(back.n_vertices() == m.n_vertices());
    CHECK(back.n_triangles() == m.n_triangles());
    CHECK_THROWS_AS(read_mesh_file("/tmp/definitely_missing_cutlap_file.txt"), IoError);
}

TEST_CASE("cut roundtrip preserves the edge set") {
    const SurfaceMesh m = build_rectangle(1.0, 1.0, 6, 6, Identify::both);
    std::vector<int> cut;
    for (int j = 0; j < 6; ++j) {
        const int u = nearest_vertex(m, {0.0, j / 6.0, 0.0});
        const int v = nearest_vertex(m, {0.0, (j + 1) / 6.0, 0.0});
        cut.push_back(m.find_edge(u, v));
    }
    std::ostringstream out;
    write_cut(out, m, cut);
    std::istringstream in(out.str());
    std::vector<int> back = read_cut(in, m);
    std::sort(cut.begin(), cut.end());
    CHECK(back == cut);  // reader returns sorted ids
}

TEST_CASE("cut reader validates pairs against the mesh") {
    const SurfaceMesh m = build_rectangle(1.0, 1.0, 4, 4, Identify::none);
    const auto parse = [&](const std::string& body) {
        std::istringstream in("cutlap-cut v1\n" + body);
        return read_cut(in, m);
    };
    // Vertex pair that is not a mesh edge.
    CHECK_THROWS_AS(parse("0 24\n"), IoError);
    // Boundary edge (0 and 1 are adjacent corners of the outer boundary).
    const int b0 = nearest_vertex(m, {0.0, 0.0, 0.0});
    const int b1 = nearest_vertex(m, {0.25, 0.0, 0.0});
    REQUIRE_FALSE(m.is_interior_edge(m.find_edge(b0, b1)));
    CHECK_THROWS_AS(parse(std::to_string(b0) + " " + std::to_string(b1) + "\n"), IoError);
    // Duplicate edge.
    const int i0 = nearest_vertex(m, {0.25, 0.25, 0.0});
    const int i1 = nearest_vertex(m, {0.5, 0.25, 0.0});
    REQUIRE(m.is_interior_edge(m.find_edge(i0, i1)));
    const std::string pair = std::to_string(i0) + " " + std::to_string(i1) + "\n";
    CHECK_THROWS_AS(parse(pair + pair), IoError);
    // Out-of-range vertex id.
    CHECK_THROWS_AS(parse("0 99\n"), IoError);
    // Valid single edge parses.
    CHECK(parse(pair).size() == 1);
}

TEST_CASE("partition roundtrip and validation") {
    const SurfaceMesh m = build_rectangle(1.0, 1.0, 4, 4, Identify::none);  // 32 triangles
    PartitionData p;
    p.k = 3;
    p.labels.assign(static_cast<size_t>(m.n_triangles()), 1);
    p.labels[3] = 2;
    p.labels[10] = 3;
    p.labels[11] = 0;  // unassigned
    std::ostringstream out;
    write_partition(out, p);
    std::istringstream in(out.str());
    const PartitionData back = read_partition(in, m);
    CHECK(back.k == p.k);
    CHECK(back.labels == p.labels);

    const auto parse = [&](const std::string& text) {
        std::istringstream i2(text);
        return read_partition(i2, m);
    };
    // Label out of range.
    std::string bad = "cutlap-partition v1 k=2\n";
    for (int t = 0; t < m.n_triangles(); ++t) bad += "3\n";
    CHECK_THROWS_AS(parse(bad), IoError);
    // Too few labels.
    CHECK_THROWS_AS(parse("cutlap-partition v1 k=2\n1\n2\n"), IoError);
    // Nonpositive k.
    CHECK_THROWS_AS(parse("cutlap-partition v1 k=0\n"), IoError);
}

TEST_CASE("malformed mesh input is rejected with IoError") {
    const std::string good = mesh_to_string(build_disk(0));
    CHECK_NOTHROW(mesh_from_string(good));

    CHECK_THROWS_AS(mesh_from_string(""), IoError);
    CHECK_THROWS_AS(mesh_from_string("wrong-magic v1 disk\nV 0\nF 0\n"), IoError);
    CHECK_THROWS_AS(mesh_from_string("cutlap-mesh v9 disk\nV 0\nF 0\n"), IoError);
    CHECK_THROWS_AS(mesh_from_string("cutlap-mesh v1 klein-bottle\nV 0\nF 0\n"), IoError);
    // Triangle index out of range.
    CHECK_THROWS_AS(
        mesh_from_string("cutlap-mesh v1 custom\nV 3\n0 0 0\n1 0 0\n0 1 0\nF 1\n0 1 7\n"),
        IoError);
    // Non-finite coordinate.
    CHECK_THROWS_AS(
        mesh_from_string("cutlap-mesh v1 custom\nV 3\n0 0 0\nnan 0 0\n0 1 0\nF 1\n0 1 2\n"),
        IoError);
    // Truncated vertex list.
    CHECK_THROWS_AS(mesh_from_string("cutlap-mesh v1 custom\nV 3\n0 0 0\n1 0 0\nF 1\n0 1 2\n"),
                    IoError);
    // Trailing garbage.
    CHECK_THROWS_AS(mesh_from_string(good + "extra\n"), IoError);
}

TEST_CASE("mesh reader rejects structurally invalid meshes") {
    // Parses fine but fails manifold validation (three triangles on one edge).
    const std::string text =
        "cutlap-mesh v1 custom\n"
        "V 5\n0 0 0\n1 0 0\n0 1 0\n0 -1 0\n0 0 1\n"
        "F 3\n0 1 2\n1 0 3\n0 1 4\n";
    CHECK_THROWS_AS(mesh_from_string(text), MeshError);
}

TEST_CASE("seam geometry survives a torus roundtrip") {
    const SurfaceMesh m = build_rectangle(1.0, 0.65, 8, 6, Identify::both);
    const SurfaceMesh back = mesh_from_string(mesh_to_string(m));
    REQUIRE(back.period_x == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(back.period_y == doctest::Approx(0.65).epsilon(1e-12));
    for (int e = 0; e < m.n_edges(); ++e)
        CHECK(back.edge_length(e) == doctest::Approx(m.edge_length(e)).epsilon(1e-12));
    for (int t = 0; t < m.n_triangles(); ++t)
        CHECK(back.triangle_area(t) == doctest::Approx(m.triangle_area(t)).epsilon(1e-12));
}

}  // TEST_SUITE("io")
