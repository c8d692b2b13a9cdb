#pragma once

// Text file formats:
//   mesh:      "cutlap-mesh v1 <surface_tag>", "V <n>" + x y z lines,
//              "F <m>" + i j k lines (0-based corner indices).
//   cut:       "cutlap-cut v1" + one "u v" vertex pair per edge.
//   partition: "cutlap-partition v1 k=<k>" + one label per triangle
//              (1..k; 0 marks an unassigned triangle).
//
// Readers validate everything they can see: meshes must be manifold and
// consistently oriented, cut pairs must resolve to interior mesh edges,
// partition labels must be in range with one entry per triangle.  Periodic
// metadata for torus/cylinder meshes is re-inferred from the coordinate range
// (fundamental-domain grids always include a zero coordinate, so the period
// is max coordinate + smallest positive coordinate).

#include <iosfwd>
#include <string>
#include <vector>

#include "cutlap/geometry.hpp"

namespace cutlap {

void write_mesh(std::ostream& out, const SurfaceMesh& mesh);
void write_mesh_file(const std::string& path, const SurfaceMesh& mesh);
SurfaceMesh read_mesh(std::istream& in);
SurfaceMesh read_mesh_file(const std::string& path);

void write_cut(std::ostream& out, const SurfaceMesh& mesh, const std::vector<int>& cut_edges);
void write_cut_file(const std::string& path, const SurfaceMesh& mesh,
                    const std::vector<int>& cut_edges);
std::vector<int> read_cut(std::istream& in, const SurfaceMesh& mesh);
std::vector<int> read_cut_file(const std::string& path, const SurfaceMesh& mesh);

struct PartitionData {
    int k = 0;
    std::vector<int> labels;  // one per triangle, 0 = unassigned
};

void write_partition(std::ostream& out, const PartitionData& partition);
void write_partition_file(const std::string& path, const PartitionData& partition);
PartitionData read_partition(std::istream& in, const SurfaceMesh& mesh);
PartitionData read_partition_file(const std::string& path, const SurfaceMesh& mesh);

}  // namespace cutlap
