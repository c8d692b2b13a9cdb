#pragma once

// Visualization exports.
//
// VTK: legacy ASCII unstructured grids.  Every triangle contributes three
// independent points taken from the unwrapped corner chart, so sign flips
// across cut edges and seam-crossing triangles of periodic charts render
// faithfully; corner fields become point scalars and per-triangle integers
// (partition labels, colorings) become cell scalars.
//
// SVG: flat line drawings for meshes whose chart lies in the z = 0 plane
// (disk, rectangle charts, annulus).  Arbitrary edge sets are drawn as
// colored layers over a light wireframe.  Non-planar meshes are rejected.

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "cutlap/geometry.hpp"
#include "cutlap/spectral.hpp"

namespace cutlap {

struct VtkPointField {
    std::string name;
    const CornerField* field = nullptr;
};

struct VtkCellField {
    std::string name;
    const std::vector<int>* values = nullptr;  // one entry per triangle
};

void write_vtk(std::ostream& out, const SurfaceMesh& mesh,
               const std::vector<VtkPointField>& point_fields,
               const std::vector<VtkCellField>& cell_fields, const std::string& title = "cutlap");

void write_vtk_file(const std::string& path, const SurfaceMesh& mesh,
                    const std::vector<VtkPointField>& point_fields,
                    const std::vector<VtkCellField>& cell_fields,
                    const std::string& title = "cutlap");

struct SvgLayer {
    std::vector<int> edges;            // mesh edge ids
    std::string stroke = "#000000";    // CSS color
    double width_px = 2.0;
};

// Throws InvalidArgument when any vertex leaves the z = 0 plane.
void write_svg(std::ostream& out, const SurfaceMesh& mesh, const std::vector<SvgLayer>& layers);

void write_svg_file(const std::string& path, const SurfaceMesh& mesh,
                    const std::vector<SvgLayer>& layers);

}  // namespace cutlap
