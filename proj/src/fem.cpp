#include "cornerspec/fem.hpp"

#include "cornerspec/errors.hpp"
#include "cornerspec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace cornerspec {

namespace {

long long edge_key(int a, int b)
{
    if (a > b)
        std::swap(a, b);
    return (static_cast<long long>(a) << 32) | static_cast<unsigned int>(b);
}

// C^4 polynomial step: 0 at 0, 1 at 1, four vanishing derivatives at both
// ends, so the cutoff enters the operator with two continuous derivatives.
double step9(double s)
{
    if (s <= 0.0)
        return 0.0;
    if (s >= 1.0)
        return 1.0;
    const double s2 = s * s;
    return s2 * s2 * s * (126.0 + s * (-420.0 + s * (540.0 + s * (-315.0 + s * 70.0))));
}

double step9_d(double s)
{
    if (s <= 0.0 || s >= 1.0)
        return 0.0;
    const double s2 = s * s;
    return s2 * s2 * (630.0 + s * (-2520.0 + s * (3780.0 + s * (-2520.0 + s * 630.0))));
}

double step9_dd(double s)
{
    if (s <= 0.0 || s >= 1.0)
        return 0.0;
    const double s2 = s * s;
    return s2 * s * (2520.0 + s * (-12600.0 + s * (22680.0 + s * (-17640.0 + s * 5040.0))));
}

struct ElementGeometry {
    std::array<double, 2> p0, p1, p2;
    double area;
    std::array<double, 2> grad_l0, grad_l1, grad_l2; // barycentric gradients
};

ElementGeometry element_geometry(const Mesh& mesh, int e)
{
    ElementGeometry g;
    const auto& t = mesh.elements[e];
    g.p0 = mesh.nodes[t[0]];
    g.p1 = mesh.nodes[t[1]];
    g.p2 = mesh.nodes[t[2]];
    const double det = (g.p1[0] - g.p0[0]) * (g.p2[1] - g.p0[1]) -
                       (g.p2[0] - g.p0[0]) * (g.p1[1] - g.p0[1]);
    g.area = 0.5 * det;
    g.grad_l1 = {(g.p2[1] - g.p0[1]) / det, (g.p0[0] - g.p2[0]) / det};
    g.grad_l2 = {(g.p0[1] - g.p1[1]) / det, (g.p1[0] - g.p0[0]) / det};
    g.grad_l0 = {-g.grad_l1[0] - g.grad_l2[0], -g.grad_l1[1] - g.grad_l2[1]};
    return g;
}

// shape functions at barycentric (l0, l1, l2); P1 has 3, P2 has 6
void shape_values(int degree, double l0, double l1, double l2, double* N)
{
    if (degree == 1) {
        N[0] = l0;
        N[1] = l1;
        N[2] = l2;
        return;
    }
    N[0] = l0 * (2.0 * l0 - 1.0);
    N[1] = l1 * (2.0 * l1 - 1.0);
    N[2] = l2 * (2.0 * l2 - 1.0);
    N[3] = 4.0 * l0 * l1;
    N[4] = 4.0 * l1 * l2;
    N[5] = 4.0 * l2 * l0;
}

void shape_gradients(int degree, const ElementGeometry& g, double l0, double l1, double l2,
                     std::array<double, 2>* G)
{
    const auto& g0 = g.grad_l0;
    const auto& g1 = g.grad_l1;
    const auto& g2 = g.grad_l2;
    if (degree == 1) {
        G[0] = g0;
        G[1] = g1;
        G[2] = g2;
        return;
    }
    for (int c = 0; c < 2; ++c) {
        G[0][c] = (4.0 * l0 - 1.0) * g0[c];
        G[1][c] = (4.0 * l1 - 1.0) * g1[c];
        G[2][c] = (4.0 * l2 - 1.0) * g2[c];
        G[3][c] = 4.0 * (l1 * g0[c] + l0 * g1[c]);
        G[4][c] = 4.0 * (l2 * g1[c] + l1 * g2[c]);
        G[5][c] = 4.0 * (l0 * g2[c] + l2 * g0[c]);
    }
}

} // namespace

EnrichedSpace::EnrichedSpace(std::shared_ptr<const Mesh> mesh, SurfaceProfile profile,
                             CornerData corner, int poly_degree, double cut_r1,
                             double cut_r2)
    : mesh_(std::move(mesh)), profile_(std::move(profile)), corner_(std::move(corner)),
      degree_(poly_degree), cut_r1_(cut_r1), cut_r2_(cut_r2)
{
    if (degree_ != 1 && degree_ != 2)
        throw InvalidParameterError("EnrichedSpace: polynomial degree must be 1 or 2");
    if (!(cut_r1_ > 0.0) || !(cut_r2_ > cut_r1_) || cut_r2_ > 0.999 * mesh_->patch_radius)
        throw InvalidParameterError(
            "EnrichedSpace: cutoff annulus must sit inside the corner patch");
    if (profile_.straight_until > 0.0) {
        const double x2 = profile_.surface_x_at_radius(cut_r2_);
        if (x2 > profile_.straight_until * (1.0 + 1e-12))
            throw InvalidParameterError(
                "EnrichedSpace: cutoff reaches beyond the straight corner region");
    }

    const Mesh& msh = *mesh_;
    const int nv = static_cast<int>(msh.nodes.size());
    std::vector<char> constrained(nv, 0);
    constrained[msh.corner_vertex] = 1; // the regular part decays at the corner
    for (const Mesh::Edge& e : msh.boundary) {
        if (e.tag == BoundaryTag::Bottom) {
            constrained[e.a] = 1;
            constrained[e.b] = 1;
        }
    }

    // edge table for P2 midpoints
    if (degree_ == 2) {
        for (std::size_t e = 0; e < msh.elements.size(); ++e) {
            const auto& t = msh.elements[e];
            const int pairs[3][2] = {{t[0], t[1]}, {t[1], t[2]}, {t[2], t[0]}};
            for (const auto& p : pairs) {
                const long long key = edge_key(p[0], p[1]);
                if (edge_lookup_.find(key) == edge_lookup_.end()) {
                    edge_lookup_.emplace(key, static_cast<int>(edge_nodes_.size()));
                    edge_nodes_.push_back({std::min(p[0], p[1]), std::max(p[0], p[1])});
                }
            }
        }
    }

    vertex_dof_.assign(nv, -1);
    int next = 0;
    for (int v = 0; v < nv; ++v)
        if (!constrained[v])
            vertex_dof_[v] = next++;
    if (degree_ == 2) {
        edge_dof_.assign(edge_nodes_.size(), -1);
        std::vector<char> edge_constrained(edge_nodes_.size(), 0);
        for (const Mesh::Edge& e : msh.boundary)
            if (e.tag == BoundaryTag::Bottom)
                edge_constrained[edge_index(e.a, e.b)] = 1;
        for (std::size_t e = 0; e < edge_nodes_.size(); ++e)
            if (!edge_constrained[e])
                edge_dof_[e] = next++;
    }
    n_dofs_ = next + 1; // trailing enrichment dof
}

int EnrichedSpace::edge_index(int a, int b) const
{
    const auto it = edge_lookup_.find(edge_key(a, b));
    if (it == edge_lookup_.end())
        throw InternalError("EnrichedSpace: unknown edge");
    return it->second;
}

void EnrichedSpace::element_dofs(int e, std::vector<int>& dofs) const
{
    const auto& t = mesh_->elements[e];
    dofs.clear();
    dofs.push_back(vertex_dof_[t[0]]);
    dofs.push_back(vertex_dof_[t[1]]);
    dofs.push_back(vertex_dof_[t[2]]);
    if (degree_ == 2) {
        dofs.push_back(edge_dof_[edge_index(t[0], t[1])]);
        dofs.push_back(edge_dof_[edge_index(t[1], t[2])]);
        dofs.push_back(edge_dof_[edge_index(t[2], t[0])]);
    }
}

void EnrichedSpace::polar(double x, double y, double& r, double& theta) const
{
    const double dx = x - mesh_->corner_x;
    const double dy = mesh_->corner_y - y;
    r = std::hypot(dx, dy);
    theta = std::atan2(dx, dy);
}

double EnrichedSpace::cutoff(double r) const
{
    return 1.0 - step9((r - cut_r1_) / (cut_r2_ - cut_r1_));
}

double EnrichedSpace::cutoff_d(double r) const
{
    return -step9_d((r - cut_r1_) / (cut_r2_ - cut_r1_)) / (cut_r2_ - cut_r1_);
}

double EnrichedSpace::cutoff_dd(double r) const
{
    const double w = cut_r2_ - cut_r1_;
    return -step9_dd((r - cut_r1_) / w) / (w * w);
}

double EnrichedSpace::enrich(double x, double y) const
{
    double r, theta;
    polar(x, y, r, theta);
    if (r >= cut_r2_ || r == 0.0)
        return 0.0;
    const double k = corner_.kappa;
    return cutoff(r) * std::sin(k * std::log(0.5 * r) + corner_.gamma) *
           std::cosh(k * theta);
}

void EnrichedSpace::enrich_grad(double x, double y, double& gx, double& gy) const
{
    double r, theta;
    polar(x, y, r, theta);
    gx = gy = 0.0;
    if (r >= cut_r2_ || r == 0.0)
        return;
    const double k = corner_.kappa;
    const double P = k * std::log(0.5 * r) + corner_.gamma;
    const double ch = std::cosh(k * theta);
    const double sh = std::sinh(k * theta);
    const double z = cutoff(r);
    const double zp = cutoff_d(r);
    const double dr = zp * std::sin(P) * ch + z * (k / r) * std::cos(P) * ch;
    const double dth = z * std::sin(P) * k * sh; // times 1/r for arc length
    const double st = std::sin(theta), ct = std::cos(theta);
    // e_r = (sin t, -cos t), e_theta = (cos t, sin t) about the crest
    gx = dr * st + (dth / r) * ct;
    gy = -dr * ct + (dth / r) * st;
}

double EnrichedSpace::enrich_neg_laplace(double x, double y) const
{
    double r, theta;
    polar(x, y, r, theta);
    if (r >= cut_r2_ || r <= cut_r1_)
        return 0.0; // the bare wave is harmonic; only the cutoff contributes
    const double k = corner_.kappa;
    const double P = k * std::log(0.5 * r) + corner_.gamma;
    const double ch = std::cosh(k * theta);
    const double w = std::sin(P) * ch;
    const double wr = (k / r) * std::cos(P) * ch;
    const double zp = cutoff_d(r);
    const double zpp = cutoff_dd(r);
    return -(zpp + zp / r) * w - 2.0 * zp * wr;
}

double EnrichedSpace::eval_element(const Eigen::VectorXd& u, int e, double x, double y) const
{
    const ElementGeometry g = element_geometry(*mesh_, e);
    const double det = 2.0 * g.area;
    const double l1 = ((x - g.p0[0]) * (g.p2[1] - g.p0[1]) -
                       (y - g.p0[1]) * (g.p2[0] - g.p0[0])) /
                      det;
    const double l2 = ((y - g.p0[1]) * (g.p1[0] - g.p0[0]) -
                       (x - g.p0[0]) * (g.p1[1] - g.p0[1])) /
                      det;
    const double l0 = 1.0 - l1 - l2;
    double N[6];
    shape_values(degree_, l0, l1, l2, N);
    std::vector<int> dofs;
    element_dofs(e, dofs);
    double val = u[enrichment_dof()] * enrich(x, y);
    for (std::size_t i = 0; i < dofs.size(); ++i)
        if (dofs[i] >= 0)
            val += u[dofs[i]] * N[i];
    return val;
}

int EnrichedSpace::locate_in_patch(double x, double y) const
{
    const Mesh& msh = *mesh_;
    double r, theta;
    polar(x, y, r, theta);
    if (r >= msh.patch_radius)
        throw DomainError("eval_in_patch: point outside the corner patch");
    const int m = msh.n_angular;
    auto inside = [&](int e) {
        const ElementGeometry g = element_geometry(msh, e);
        const double det = 2.0 * g.area;
        const double l1 = ((x - g.p0[0]) * (g.p2[1] - g.p0[1]) -
                           (y - g.p0[1]) * (g.p2[0] - g.p0[0])) /
                          det;
        const double l2 = ((y - g.p0[1]) * (g.p1[0] - g.p0[0]) -
                           (x - g.p0[0]) * (g.p1[1] - g.p0[1])) /
                          det;
        const double l0 = 1.0 - l1 - l2;
        const double tol = -1e-10;
        return l0 >= tol && l1 >= tol && l2 >= tol;
    };
    if (r <= msh.r_inner) {
        for (int j = 0; j < m; ++j) {
            const int e = msh.fan_elements_begin + j;
            if (inside(e))
                return e;
        }
    }
    int layer = static_cast<int>(std::floor(std::log(r / msh.patch_radius) /
                                            std::log(msh.grading)));
    layer = std::clamp(layer, 0, msh.n_layers - 1);
    for (int l : {layer, layer - 1, layer + 1}) {
        if (l < 0 || l >= msh.n_layers)
            continue;
        for (int j = 0; j < 2 * m; ++j) {
            const int e = msh.annulus_elements_begin + 2 * m * l + j;
            if (inside(e))
                return e;
        }
    }
    throw InternalError("eval_in_patch: point location failed");
}

double EnrichedSpace::eval_in_patch(const Eigen::VectorXd& u, double x, double y) const
{
    return eval_element(u, locate_in_patch(x, y), x, y);
}

namespace {

struct EnrichmentRow {
    std::vector<double> a_row, m_row; // indexed by dof
    double a_diag = 0.0, m_diag = 0.0;
};

// operator pairing of the enrichment with all regular dofs and itself
EnrichmentRow enrichment_couplings(const EnrichedSpace& space, const ScalarFn2& sigma,
                                   const ScalarFn& robin_coeff, int duffy_order,
                                   int surface_order)
{
    const Mesh& msh = space.mesh();
    EnrichmentRow row;
    row.a_row.assign(space.n_dofs(), 0.0);
    row.m_row.assign(space.n_dofs(), 0.0);
    const std::vector<TriPoint> rule = tri_rule_duffy(duffy_order);
    std::vector<int> dofs;
    const int nsh = space.poly_degree() == 1 ? 3 : 6;
    double N[6];

    for (std::size_t e = 0; e < msh.elements.size(); ++e) {
        const auto& t = msh.elements[e];
        const double rmin = std::min({msh.node_radius(t[0]), msh.node_radius(t[1]),
                                      msh.node_radius(t[2])});
        if (rmin >= space.cut_r2())
            continue;
        const ElementGeometry g = element_geometry(msh, static_cast<int>(e));
        space.element_dofs(static_cast<int>(e), dofs);
        for (const TriPoint& q : rule) {
            const double l1 = q.l1, l2 = q.l2, l0 = 1.0 - l1 - l2;
            const double x = l0 * g.p0[0] + l1 * g.p1[0] + l2 * g.p2[0];
            const double y = l0 * g.p0[1] + l1 * g.p1[1] + l2 * g.p2[1];
            const double w = 2.0 * g.area * q.w;
            const double wig = space.enrich(x, y);
            double op = space.enrich_neg_laplace(x, y);
            if (sigma)
                op += sigma(x, y) * wig;
            if (op == 0.0 && wig == 0.0)
                continue;
            shape_values(space.poly_degree(), l0, l1, l2, N);
            for (int i = 0; i < nsh; ++i) {
                if (dofs[i] < 0)
                    continue;
                row.a_row[dofs[i]] += w * op * N[i];
                row.m_row[dofs[i]] += w * wig * N[i];
            }
            row.a_diag += w * op * wig;
            row.m_diag += w * wig * wig;
        }
    }

    // Robin-defect correction on the surface below the cutoff; identically
    // zero when the surface is straight there, since the bare wave satisfies
    // the exact Robin condition on the straight ray.
    if (getenv("CS_SKIP_DEFECT")) return row;
    const GaussRule& g1 = gauss_legendre(surface_order);
    for (const Mesh::Edge& be : msh.boundary) {
        if (be.tag != BoundaryTag::Surface)
            continue;
        auto pa = msh.nodes[be.a];
        auto pb = msh.nodes[be.b];
        if (pa[0] > pb[0])
            std::swap(pa, pb); // orient by increasing x
        const double ra = std::hypot(pa[0] - msh.corner_x, msh.corner_y - pa[1]);
        const double rb = std::hypot(pb[0] - msh.corner_x, msh.corner_y - pb[1]);
        if (std::min(ra, rb) >= space.cut_r2())
            continue;
        const double ex = pb[0] - pa[0], ey = pb[1] - pa[1];
        const double len = std::hypot(ex, ey);
        double nx = -ey / len, ny = ex / len;
        if (ny < 0.0) {
            nx = -nx;
            ny = -ny;
        }
        const int mid = (space.poly_degree() == 2)
                            ? space.edge_dof(space.edge_index(be.a, be.b))
                            : -1;
        const int da = space.vertex_dof(be.a), db = space.vertex_dof(be.b);
        const int dof_a = (pa[0] == msh.nodes[be.a][0] && pa[1] == msh.nodes[be.a][1]) ? da : db;
        const int dof_b = (dof_a == da) ? db : da;
        for (int iq = 0; iq < surface_order; ++iq) {
            const double s = 0.5 * (g1.nodes[iq] + 1.0);
            const double wq = 0.5 * g1.weights[iq] * len;
            const double x = pa[0] + s * ex;
            const double y = pa[1] + s * ey;
            double gx, gy;
            space.enrich_grad(x, y, gx, gy);
            const double wig = space.enrich(x, y);
            const double defect = (gx * nx + gy * ny) - robin_coeff(x) * wig;
            if (defect == 0.0)
                continue;
            const double Na = (space.poly_degree() == 2) ? (1.0 - s) * (1.0 - 2.0 * s)
                                                         : (1.0 - s);
            const double Nb = (space.poly_degree() == 2) ? s * (2.0 * s - 1.0) : s;
            const double Nm = 4.0 * s * (1.0 - s);
            if (dof_a >= 0)
                row.a_row[dof_a] += wq * defect * Na;
            if (dof_b >= 0)
                row.a_row[dof_b] += wq * defect * Nb;
            if (mid >= 0)
                row.a_row[mid] += wq * defect * Nm;
            row.a_diag += wq * defect * wig;
        }
    }
    return row;
}

} // namespace

SystemMatrices assemble(const EnrichedSpace& space, const ScalarFn2& sigma,
                        const ScalarFn& robin_coeff, const AssemblyOptions& opts)
{
    if (!robin_coeff)
        throw InvalidParameterError("assemble: a Robin coefficient callable is required");
    const Mesh& msh = space.mesh();
    const int n = space.n_dofs();
    const int nsh = space.poly_degree() == 1 ? 3 : 6;

    std::vector<Eigen::Triplet<double>> ta, tm;
    ta.reserve(msh.elements.size() * nsh * nsh + 8 * n);
    tm.reserve(msh.elements.size() * nsh * nsh + 8 * n);
    std::vector<int> dofs;
    const std::vector<TriPoint>& rule = tri_rule_deg5();
    double N[6];
    std::array<double, 2> G[6];

    for (std::size_t e = 0; e < msh.elements.size(); ++e) {
        const ElementGeometry g = element_geometry(msh, static_cast<int>(e));
        space.element_dofs(static_cast<int>(e), dofs);
        double ka[6][6] = {};
        double km[6][6] = {};
        for (const TriPoint& q : rule) {
            const double l1 = q.l1, l2 = q.l2, l0 = 1.0 - l1 - l2;
            const double w = 2.0 * g.area * q.w;
            shape_values(space.poly_degree(), l0, l1, l2, N);
            shape_gradients(space.poly_degree(), g, l0, l1, l2, G);
            double sig = 0.0;
            if (sigma) {
                const double x = l0 * g.p0[0] + l1 * g.p1[0] + l2 * g.p2[0];
                const double y = l0 * g.p0[1] + l1 * g.p1[1] + l2 * g.p2[1];
                sig = sigma(x, y);
            }
            for (int i = 0; i < nsh; ++i)
                for (int j = 0; j <= i; ++j) {
                    ka[i][j] += w * (G[i][0] * G[j][0] + G[i][1] * G[j][1] +
                                     sig * N[i] * N[j]);
                    km[i][j] += w * N[i] * N[j];
                }
        }
        for (int i = 0; i < nsh; ++i) {
            if (dofs[i] < 0)
                continue;
            for (int j = 0; j < nsh; ++j) {
                if (dofs[j] < 0)
                    continue;
                const double va = (j <= i) ? ka[i][j] : ka[j][i];
                const double vm = (j <= i) ? km[i][j] : km[j][i];
                ta.emplace_back(dofs[i], dofs[j], va);
                tm.emplace_back(dofs[i], dofs[j], vm);
            }
        }
    }

    // Robin surface term for the regular dofs: -int c(x) u v ds with interior
    // Gauss nodes, which keeps the 1/r coefficient away from the corner vertex
    const GaussRule& g1 = gauss_legendre(opts.surface_order);
    for (const Mesh::Edge& be : msh.boundary) {
        if (be.tag != BoundaryTag::Surface)
            continue;
        auto pa = msh.nodes[be.a];
        auto pb = msh.nodes[be.b];
        int va = be.a, vb = be.b;
        if (pa[0] > pb[0]) {
            std::swap(pa, pb);
            std::swap(va, vb);
        }
        const double len = std::hypot(pb[0] - pa[0], pb[1] - pa[1]);
        const int dmid = (space.poly_degree() == 2)
                             ? space.edge_dof(space.edge_index(va, vb))
                             : -1;
        const int dof[3] = {space.vertex_dof(va), space.vertex_dof(vb), dmid};
        double k_edge[3][3] = {};
        for (int iq = 0; iq < opts.surface_order; ++iq) {
            const double s = 0.5 * (g1.nodes[iq] + 1.0);
            const double wq = 0.5 * g1.weights[iq] * len;
            const double x = pa[0] + s * (pb[0] - pa[0]);
            const double c = robin_coeff(x);
            double Ns[3];
            if (space.poly_degree() == 2) {
                Ns[0] = (1.0 - s) * (1.0 - 2.0 * s);
                Ns[1] = s * (2.0 * s - 1.0);
                Ns[2] = 4.0 * s * (1.0 - s);
            } else {
                Ns[0] = 1.0 - s;
                Ns[1] = s;
                Ns[2] = 0.0;
            }
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j <= i; ++j)
                    k_edge[i][j] += wq * c * Ns[i] * Ns[j];
        }
        for (int i = 0; i < 3; ++i) {
            if (dof[i] < 0)
                continue;
            for (int j = 0; j < 3; ++j) {
                if (dof[j] < 0)
                    continue;
                const double v = (j <= i) ? k_edge[i][j] : k_edge[j][i];
                ta.emplace_back(dof[i], dof[j], -v);
            }
        }
    }

    // enrichment row/column, with a refinement check of the quadrature
    EnrichmentRow row = enrichment_couplings(space, sigma, robin_coeff, opts.duffy_order,
                                             opts.surface_order);
    if (opts.quadrature_check) {
        const EnrichmentRow fine = enrichment_couplings(space, sigma, robin_coeff,
                                                        opts.duffy_order + 4,
                                                        opts.surface_order + 4);
        double scale = std::abs(fine.a_diag) + std::abs(fine.m_diag);
        for (int i = 0; i + 1 < space.n_dofs(); ++i)
            scale = std::max(scale, std::abs(fine.a_row[i]));
        double err = std::abs(fine.a_diag - row.a_diag) + std::abs(fine.m_diag - row.m_diag);
        for (int i = 0; i + 1 < space.n_dofs(); ++i)
            err = std::max(err, std::abs(fine.a_row[i] - row.a_row[i]) +
                                    std::abs(fine.m_row[i] - row.m_row[i]));
        if (!(err <= opts.quadrature_tol * std::max(scale, 1e-30))) {
            if (getenv("CS_QDEBUG")) {
                for (int i = 0; i + 1 < space.n_dofs(); ++i) {
                    const double da = std::abs(fine.a_row[i] - row.a_row[i]);
                    const double dm = std::abs(fine.m_row[i] - row.m_row[i]);
                    if (da + dm > 0.05 * err)
                        std::fprintf(stderr, "dof %d: A %.6e vs %.6e, M %.6e vs %.6e\n", i,
                                     row.a_row[i], fine.a_row[i], row.m_row[i], fine.m_row[i]);
                }
                std::fprintf(stderr, "diag: A %.6e vs %.6e, M %.6e vs %.6e\n",
                             row.a_diag, fine.a_diag, row.m_diag, fine.m_diag);
            }
            throw AssemblyError("assemble: enrichment quadrature did not converge (err=" +
                                std::to_string(err) + ", scale=" + std::to_string(scale) +
                                ")");
        }
        row = fine;
    }
    const int we = space.enrichment_dof();
    for (int i = 0; i < we; ++i) {
        if (row.a_row[i] != 0.0) {
            ta.emplace_back(we, i, row.a_row[i]);
            ta.emplace_back(i, we, row.a_row[i]);
        }
        if (row.m_row[i] != 0.0) {
            tm.emplace_back(we, i, row.m_row[i]);
            tm.emplace_back(i, we, row.m_row[i]);
        }
    }
    ta.emplace_back(we, we, row.a_diag);
    tm.emplace_back(we, we, row.m_diag);

    SystemMatrices out;
    out.A.resize(n, n);
    out.M.resize(n, n);
    out.A.setFromTriplets(ta.begin(), ta.end());
    out.M.setFromTriplets(tm.begin(), tm.end());
    out.A.makeCompressed();
    out.M.makeCompressed();
    return out;
}

} // namespace cornerspec
