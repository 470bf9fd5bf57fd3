#pragma once

#include "cornerspec/profile.hpp"

#include <array>
#include <vector>

namespace cornerspec {

enum class BoundaryTag { Surface, Bottom, Left, Right };

struct MeshParams {
    double h_max = 0.04;       // target outer edge length
    double grading = 0.5;      // geometric layer ratio toward the corner
    int n_layers = 16;         // graded layers inside the corner patch
    int n_angular = 8;         // angular subdivisions of the corner patch
    double patch_radius = 0.0; // 0 selects an automatic radius
    double growth = 1.25;      // outer-block spacing growth away from the patch
};

/// Conforming triangulation of the half-period domain: a polar, geometrically
/// graded patch around the crest corner joined to two transfinite blocks.
struct Mesh {
    struct Edge {
        int a = -1, b = -1;
        BoundaryTag tag = BoundaryTag::Surface;
    };

    std::vector<std::array<double, 2>> nodes;
    std::vector<std::array<int, 3>> elements;
    std::vector<Edge> boundary;

    int corner_vertex = -1;
    double corner_x = 0.0;
    double corner_y = 0.0;

    double patch_radius = 0.0;
    double r_inner = 0.0;
    double grading = 0.5;
    int n_layers = 0;
    int n_angular = 0;
    std::vector<double> layer_radii; // descending, layer_radii[0] = patch_radius

    // patch bookkeeping: ring l occupies nodes ring_start(l) .. +n_angular,
    // elements of annulus l start at annulus_elements_begin + 2*n_angular*l
    int annulus_elements_begin = 0;
    int fan_elements_begin = 0;
    int outer_elements_begin = 0;

    int ring_start(int layer) const { return 1 + layer * (n_angular + 1); }

    double signed_area(int e) const;
    /// Normalized quality 2*inradius/circumradius (1 for equilateral).
    double quality(int e) const;
    double min_quality() const;
    int count_boundary(BoundaryTag tag) const;
    /// Distance of a node to the crest corner.
    double node_radius(int v) const;
};

/// Generates the graded triangulation for the given surface profile.
Mesh generate_mesh(const SurfaceProfile& profile, const MeshParams& params);

} // namespace cornerspec
