#include "cutlap/exports.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cutlap/errors.hpp"

namespace cutlap {

namespace {

void check_field_sizes(const SurfaceMesh& mesh, const std::vector<VtkPointField>& point_fields,
                       const std::vector<VtkCellField>& cell_fields) {
    const size_t nt = static_cast<size_t>(mesh.n_triangles());
    for (const VtkPointField& f : point_fields) {
        if (f.field == nullptr || f.field->values.size() != nt)
            throw InvalidArgument("VTK point field '" + f.name +
                                  "' missing or not sized per triangle");
    }
    for (const VtkCellField& f : cell_fields) {
        if (f.values == nullptr || f.values->size() != nt)
            throw InvalidArgument("VTK cell field '" + f.name +
                                  "' missing or not sized per triangle");
    }
}

std::string sanitize_name(const std::string& name) {
    std::string out = name.empty() ? std::string("field") : name;
    for (char& c : out)
        if (std::isspace(static_cast<unsigned char>(c))) c = '_';
    return out;
}

// Both corner positions of edge e in the chart of one incident triangle.
std::array<Vec3, 2> edge_chart_segment(const SurfaceMesh& mesh, int e) {
    const int t = mesh.edge_tris[static_cast<size_t>(e)][0];
    for (int c = 0; c < 3; ++c) {
        if (mesh.tri_edges[static_cast<size_t>(t)][static_cast<size_t>(c)] == e) {
            return {mesh.corner_pos[static_cast<size_t>(t)][static_cast<size_t>(c)],
                    mesh.corner_pos[static_cast<size_t>(t)][static_cast<size_t>((c + 1) % 3)]};
        }
    }
    throw InvalidArgument("edge " + std::to_string(e) + " not found in its incident triangle");
}

}  // namespace

void write_vtk(std::ostream& out, const SurfaceMesh& mesh,
               const std::vector<VtkPointField>& point_fields,
               const std::vector<VtkCellField>& cell_fields, const std::string& title) {
    check_field_sizes(mesh, point_fields, cell_fields);
    const int nt = mesh.n_triangles();

    out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << std::setprecision(17);

    out << "POINTS " << 3 * nt << " double\n";
    for (int t = 0; t < nt; ++t)
        for (int c = 0; c < 3; ++c) {
            const Vec3& p = mesh.corner_pos[static_cast<size_t>(t)][static_cast<size_t>(c)];
            out << p.x << " " << p.y << " " << p.z << "\n";
        }

    out << "CELLS " << nt << " " << 4 * nt << "\n";
    for (int t = 0; t < nt; ++t)
        out << "3 " << 3 * t << " " << 3 * t + 1 << " " << 3 * t + 2 << "\n";
    out << "CELL_TYPES " << nt << "\n";
    for (int t = 0; t < nt; ++t) out << "5\n";

    if (!point_fields.empty()) {
        out << "POINT_DATA " << 3 * nt << "\n";
        for (const VtkPointField& f : point_fields) {
            out << "SCALARS " << sanitize_name(f.name) << " double 1\nLOOKUP_TABLE default\n";
            for (int t = 0; t < nt; ++t)
                for (int c = 0; c < 3; ++c)
                    out << f.field->values[static_cast<size_t>(t)][static_cast<size_t>(c)] << "\n";
        }
    }
    if (!cell_fields.empty()) {
        out << "CELL_DATA " << nt << "\n";
        for (const VtkCellField& f : cell_fields) {
            out << "SCALARS " << sanitize_name(f.name) << " int 1\nLOOKUP_TABLE default\n";
            for (int t = 0; t < nt; ++t) out << (*f.values)[static_cast<size_t>(t)] << "\n";
        }
    }
    if (!out) throw IoError("failed while writing VTK stream");
}

void write_vtk_file(const std::string& path, const SurfaceMesh& mesh,
                    const std::vector<VtkPointField>& point_fields,
                    const std::vector<VtkCellField>& cell_fields, const std::string& title) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_vtk(out, mesh, point_fields, cell_fields, title);
    if (!out) throw IoError("failed while writing '" + path + "'");
}

void write_svg(std::ostream& out, const SurfaceMesh& mesh, const std::vector<SvgLayer>& layers) {
    for (const Vec3& v : mesh.vertices)
        if (std::abs(v.z) > 1e-9)
            throw InvalidArgument("SVG export requires a planar (z = 0) chart; mesh '" +
                                  mesh.surface_tag + "' leaves the plane");
    for (const SvgLayer& layer : layers)
        for (int e : layer.edges)
            if (e < 0 || e >= mesh.n_edges())
                throw InvalidArgument("SVG layer references edge " + std::to_string(e) +
                                      " outside the mesh");

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& corners : mesh.corner_pos)
        for (const Vec3& p : corners) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
    const double scale = 800.0 / span;
    const double margin = 0.04 * 800.0;
    const double width = (xmax - xmin) * scale + 2 * margin;
    const double height = (ymax - ymin) * scale + 2 * margin;
    const auto px = [&](const Vec3& p) {
        return std::pair<double, double>{(p.x - xmin) * scale + margin,
                                         (ymax - p.y) * scale + margin};
    };
    const auto path_for = [&](const std::vector<int>& edge_ids) {
        std::ostringstream d;
        d << std::setprecision(8);
        for (int e : edge_ids) {
            const std::array<Vec3, 2> seg = edge_chart_segment(mesh, e);
            const auto [x0, y0] = px(seg[0]);
            const auto [x1, y1] = px(seg[1]);
            d << "M" << x0 << " " << y0 << "L" << x1 << " " << y1;
        }
        return d.str();
    };

    out << std::setprecision(8);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << " " << height
        << "\">\n";
    std::vector<int> all_edges(static_cast<size_t>(mesh.n_edges()));
    for (int e = 0; e < mesh.n_edges(); ++e) all_edges[static_cast<size_t>(e)] = e;
    out << "  <path fill=\"none\" stroke=\"#d8d8d8\" stroke-width=\"0.5\" d=\""
        << path_for(all_edges) << "\"/>\n";
    for (const SvgLayer& layer : layers) {
        out << "  <path fill=\"none\" stroke=\"" << layer.stroke << "\" stroke-width=\""
            << layer.width_px << "\" stroke-linecap=\"round\" d=\"" << path_for(layer.edges)
            << "\"/>\n";
    }
    out << "</svg>\n";
    if (!out) throw IoError("failed while writing SVG stream");
}

void write_svg_file(const std::string& path, const SurfaceMesh& mesh,
                    const std::vector<SvgLayer>& layers) {
    // Render first so precondition failures leave no partial file behind.
    std::ostringstream buffer;
    write_svg(buffer, mesh, layers);
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << buffer.str();
    if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace cutlap
