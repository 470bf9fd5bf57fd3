#include "cornerspec/mesh.hpp"

#include "cornerspec/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cornerspec {

namespace {

// Graded 1D grid on [0, 1]: spacing first_step at the s=1 end, growing by
// the given factor toward s=0 and capped by max_step; lengths normalized.
std::vector<double> graded_axis(double first_step, double max_step, double growth)
{
    std::vector<double> steps;
    double s = first_step;
    double total = 0.0;
    while (total < 1.0) {
        steps.push_back(s);
        total += s;
        s = std::min(s * growth, max_step);
    }
    std::vector<double> pts;
    pts.push_back(1.0);
    double acc = 1.0;
    for (double st : steps) {
        acc -= st / total;
        pts.push_back(std::max(acc, 0.0));
    }
    pts.back() = 0.0;
    std::reverse(pts.begin(), pts.end()); // ascending from 0 to 1
    return pts;
}

struct Pt {
    double x, y;
};

} // namespace

double Mesh::signed_area(int e) const
{
    const auto& t = elements[e];
    const auto& a = nodes[t[0]];
    const auto& b = nodes[t[1]];
    const auto& c = nodes[t[2]];
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

double Mesh::quality(int e) const
{
    const auto& t = elements[e];
    const auto& a = nodes[t[0]];
    const auto& b = nodes[t[1]];
    const auto& c = nodes[t[2]];
    const double la = std::hypot(b[0] - c[0], b[1] - c[1]);
    const double lb = std::hypot(a[0] - c[0], a[1] - c[1]);
    const double lc = std::hypot(a[0] - b[0], a[1] - b[1]);
    const double area = std::abs(signed_area(e));
    const double s = 0.5 * (la + lb + lc);
    const double r_in = area / s;
    const double r_circ = la * lb * lc / (4.0 * area);
    return 2.0 * r_in / r_circ;
}

double Mesh::min_quality() const
{
    double q = 1.0;
    for (std::size_t e = 0; e < elements.size(); ++e)
        q = std::min(q, quality(static_cast<int>(e)));
    return q;
}

int Mesh::count_boundary(BoundaryTag tag) const
{
    int n = 0;
    for (const Edge& e : boundary)
        n += (e.tag == tag) ? 1 : 0;
    return n;
}

double Mesh::node_radius(int v) const
{
    return std::hypot(nodes[v][0] - corner_x, nodes[v][1] - corner_y);
}

Mesh generate_mesh(const SurfaceProfile& profile, const MeshParams& params)
{
    if (!(params.grading > 0.0) || !(params.grading < 1.0))
        throw InvalidParameterError("generate_mesh: grading must lie in (0, 1)");
    if (params.n_layers < 2 || params.n_angular < 3)
        throw InvalidParameterError("generate_mesh: too few layers or angular segments");
    if (!(params.h_max > 0.0))
        throw InvalidParameterError("generate_mesh: h_max must be positive");

    const double half = 0.5 * profile.Lambda;
    const double eta0 = profile.eta0;
    double r0 = params.patch_radius;
    if (r0 <= 0.0)
        r0 = std::min(0.25 * half, 0.45 * eta0);
    if (!(r0 < 0.9 * eta0) || !(profile.corner_distance(half) > 1.3 * r0))
        throw GeometryError("generate_mesh: patch radius does not fit the domain");

    Mesh mesh;
    mesh.corner_x = 0.0;
    mesh.corner_y = eta0;
    mesh.grading = params.grading;
    mesh.n_layers = params.n_layers;
    mesh.n_angular = params.n_angular;
    mesh.patch_radius = r0;

    const int L = params.n_layers;
    const int m = params.n_angular;

    // corner vertex then the rings, outermost first
    mesh.nodes.push_back({0.0, eta0});
    mesh.corner_vertex = 0;
    mesh.layer_radii.resize(L + 1);
    for (int l = 0; l <= L; ++l) {
        const double r = r0 * std::pow(params.grading, l);
        mesh.layer_radii[l] = r;
        const double xs = profile.surface_x_at_radius(r);
        const double theta_s = profile.theta_at(xs);
        for (int j = 0; j <= m; ++j) {
            const double th = theta_s * j / m;
            mesh.nodes.push_back({r * std::sin(th), eta0 - r * std::cos(th)});
        }
        // ring node j = m sits exactly on the surface
        mesh.nodes[mesh.nodes.size() - 1] = {xs, profile.eta(xs)};
    }
    mesh.r_inner = mesh.layer_radii[L];

    // annulus triangles between consecutive rings
    mesh.annulus_elements_begin = 0;
    for (int l = 0; l < L; ++l) {
        const int outer = mesh.ring_start(l);
        const int inner = mesh.ring_start(l + 1);
        for (int j = 0; j < m; ++j) {
            mesh.elements.push_back({inner + j, outer + j, outer + j + 1});
            mesh.elements.push_back({inner + j, outer + j + 1, inner + j + 1});
        }
    }
    // fan around the corner vertex
    mesh.fan_elements_begin = static_cast<int>(mesh.elements.size());
    const int last_ring = mesh.ring_start(L);
    for (int j = 0; j < m; ++j)
        mesh.elements.push_back({mesh.corner_vertex, last_ring + j + 1, last_ring + j});

    // patch boundary edges
    for (int l = 0; l < L; ++l) {
        mesh.boundary.push_back({mesh.ring_start(l + 1), mesh.ring_start(l), BoundaryTag::Left});
        mesh.boundary.push_back(
            {mesh.ring_start(l) + m, mesh.ring_start(l + 1) + m, BoundaryTag::Surface});
    }
    mesh.boundary.push_back({mesh.corner_vertex, mesh.ring_start(L), BoundaryTag::Left});
    mesh.boundary.push_back({mesh.ring_start(L) + m, mesh.corner_vertex, BoundaryTag::Surface});

    // --- outer region: two transfinite blocks ---
    const double xs0 = profile.surface_x_at_radius(r0); // split abscissa
    const Pt corner_A{0.0, 0.0};
    const Pt corner_B{xs0, 0.0};
    const Pt corner_E{0.0, eta0 - r0};
    const Pt corner_D{xs0, profile.eta(xs0)};

    // vertical spacing near the arc matches the outermost annulus thickness
    const double s_arc = r0 * (1.0 - params.grading);
    const double left_len = eta0 - r0;
    std::vector<double> vgrid =
        graded_axis(s_arc / left_len, params.h_max / left_len, params.growth);
    const int n_v = static_cast<int>(vgrid.size()) - 1;

    // left block: u follows the arc (ring 0), v runs bottom -> arc
    std::vector<int> left_block(static_cast<std::size_t>(m + 1) * (n_v + 1), -1);
    auto lb = [&](int iu, int iv) -> int& { return left_block[iv * (m + 1) + iu]; };
    for (int iu = 0; iu <= m; ++iu)
        lb(iu, n_v) = mesh.ring_start(0) + iu; // shared with the patch ring
    for (int iv = 0; iv < n_v; ++iv) {
        const double v = vgrid[iv];
        for (int iu = 0; iu <= m; ++iu) {
            const double u = static_cast<double>(iu) / m;
            const auto& top = mesh.nodes[mesh.ring_start(0) + iu];
            const double bx = corner_A.x + u * (corner_B.x - corner_A.x);
            const double by = 0.0;
            const double lx = corner_A.x + v * (corner_E.x - corner_A.x);
            const double ly = corner_A.y + v * (corner_E.y - corner_A.y);
            const double rx = corner_B.x + v * (corner_D.x - corner_B.x);
            const double ry = corner_B.y + v * (corner_D.y - corner_B.y);
            const double x = (1.0 - v) * bx + v * top[0] + (1.0 - u) * lx + u * rx -
                             ((1.0 - u) * (1.0 - v) * corner_A.x + u * (1.0 - v) * corner_B.x +
                              (1.0 - u) * v * corner_E.x + u * v * corner_D.x);
            const double y = (1.0 - v) * by + v * top[1] + (1.0 - u) * ly + u * ry -
                             ((1.0 - u) * (1.0 - v) * corner_A.y + u * (1.0 - v) * corner_B.y +
                              (1.0 - u) * v * corner_E.y + u * v * corner_D.y);
            mesh.nodes.push_back({x, y});
            lb(iu, iv) = static_cast<int>(mesh.nodes.size()) - 1;
        }
    }

    // right block: u runs split -> trough wall, v reuses the left block grading
    const int n_u = std::max(2, static_cast<int>(std::lround((half - xs0) / params.h_max)));
    std::vector<int> right_block(static_cast<std::size_t>(n_u + 1) * (n_v + 1), -1);
    auto rb = [&](int iu, int iv) -> int& { return right_block[iv * (n_u + 1) + iu]; };
    for (int iv = 0; iv <= n_v; ++iv)
        rb(0, iv) = lb(m, iv); // shared column
    for (int iu = 1; iu <= n_u; ++iu) {
        const double u = static_cast<double>(iu) / n_u;
        const double x = xs0 + u * (half - xs0);
        const double y_top = profile.eta(x);
        for (int iv = 0; iv <= n_v; ++iv) {
            const double v = vgrid[iv];
            mesh.nodes.push_back({x, v * y_top});
            rb(iu, iv) = static_cast<int>(mesh.nodes.size()) - 1;
        }
    }

    mesh.outer_elements_begin = static_cast<int>(mesh.elements.size());
    auto emit_quad = [&](int p00, int p10, int p11, int p01) {
        mesh.elements.push_back({p00, p10, p11});
        mesh.elements.push_back({p00, p11, p01});
    };
    for (int iv = 0; iv < n_v; ++iv)
        for (int iu = 0; iu < m; ++iu)
            emit_quad(lb(iu, iv), lb(iu + 1, iv), lb(iu + 1, iv + 1), lb(iu, iv + 1));
    for (int iv = 0; iv < n_v; ++iv)
        for (int iu = 0; iu < n_u; ++iu)
            emit_quad(rb(iu, iv), rb(iu + 1, iv), rb(iu + 1, iv + 1), rb(iu, iv + 1));

    // outer boundary edges
    for (int iv = 0; iv < n_v; ++iv)
        mesh.boundary.push_back({lb(0, iv + 1), lb(0, iv), BoundaryTag::Left});
    for (int iu = 0; iu < m; ++iu)
        mesh.boundary.push_back({lb(iu, 0), lb(iu + 1, 0), BoundaryTag::Bottom});
    for (int iu = 0; iu < n_u; ++iu) {
        mesh.boundary.push_back({rb(iu, 0), rb(iu + 1, 0), BoundaryTag::Bottom});
        mesh.boundary.push_back({rb(iu, n_v), rb(iu + 1, n_v), BoundaryTag::Surface});
    }
    for (int iv = 0; iv < n_v; ++iv)
        mesh.boundary.push_back({rb(n_u, iv), rb(n_u, iv + 1), BoundaryTag::Right});

    // orientation and degeneracy checks
    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
        if (mesh.signed_area(static_cast<int>(e)) < 0.0)
            std::swap(mesh.elements[e][1], mesh.elements[e][2]);
        if (!(mesh.signed_area(static_cast<int>(e)) > 0.0))
            throw MeshError("generate_mesh: degenerate element");
    }
    return mesh;
}

} // namespace cornerspec
