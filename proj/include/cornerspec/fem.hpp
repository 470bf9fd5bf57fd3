#pragma once

#include "cornerspec/mesh.hpp"
#include "cornerspec/profile.hpp"
#include "cornerspec/specfun.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

namespace cornerspec {

using ScalarFn2 = std::function<double(double, double)>;

/// Lagrange space (degree 1 or 2) on the graded mesh, with homogeneous
/// Dirichlet conditions on the bottom and at the corner vertex, enriched by
/// one singular function zeta(r) sin(kappa log(r/2) + gamma) cosh(kappa theta)
/// whose cutoff annulus (cut_r1, cut_r2) lies inside the corner patch. The
/// standard basis cannot represent the log-oscillation; the enrichment
/// carries it for every ladder mode at once, since they all share the phase.
class EnrichedSpace {
public:
    EnrichedSpace(std::shared_ptr<const Mesh> mesh, SurfaceProfile profile,
                  CornerData corner, int poly_degree, double cut_r1, double cut_r2);

    const Mesh& mesh() const { return *mesh_; }
    const SurfaceProfile& profile() const { return profile_; }
    const CornerData& corner() const { return corner_; }
    int poly_degree() const { return degree_; }
    double cut_r1() const { return cut_r1_; }
    double cut_r2() const { return cut_r2_; }

    int n_dofs() const { return n_dofs_; }
    int enrichment_dof() const { return n_dofs_ - 1; }
    int vertex_dof(int v) const { return vertex_dof_[v]; }
    int edge_dof(int e) const { return degree_ == 2 ? edge_dof_[e] : -1; }
    int n_edges() const { return static_cast<int>(edge_nodes_.size()); }
    int edge_index(int a, int b) const;
    const std::array<int, 2>& edge_nodes(int e) const { return edge_nodes_[e]; }

    /// Local dofs of an element: 3 vertex dofs, then 3 edge dofs for P2.
    void element_dofs(int e, std::vector<int>& dofs) const;

    // polar coordinates about the crest corner
    void polar(double x, double y, double& r, double& theta) const;

    double cutoff(double r) const;
    double cutoff_d(double r) const;
    double cutoff_dd(double r) const;

    /// Enrichment value, gradient, and -Laplacian at a point.
    double enrich(double x, double y) const;
    void enrich_grad(double x, double y, double& gx, double& gy) const;
    double enrich_neg_laplace(double x, double y) const;

    /// Evaluates a coefficient vector (with trailing enrichment dof) at a
    /// point that lies inside the polar corner patch.
    double eval_in_patch(const Eigen::VectorXd& u, double x, double y) const;

private:
    std::shared_ptr<const Mesh> mesh_;
    SurfaceProfile profile_;
    CornerData corner_;
    int degree_ = 2;
    double cut_r1_ = 0.0, cut_r2_ = 0.0;
    int n_dofs_ = 0;
    std::vector<int> vertex_dof_;
    std::vector<int> edge_dof_;
    std::vector<std::array<int, 2>> edge_nodes_;
    std::unordered_map<long long, int> edge_lookup_;

    double eval_element(const Eigen::VectorXd& u, int e, double x, double y) const;
    int locate_in_patch(double x, double y) const;
};

struct SystemMatrices {
    Eigen::SparseMatrix<double> A;
    Eigen::SparseMatrix<double> M;
};

struct AssemblyOptions {
    int duffy_order = 10;    // tensor order for the enrichment couplings
    int surface_order = 12;  // Gauss order per surface edge
    bool quadrature_check = true;
    double quadrature_tol = 1e-8;
};

/// Assembles the bilinear forms: A carries stiffness + sigma mass - Robin
/// surface term; M is the mass matrix. robin_coeff(x) is the full surface
/// coefficient (rho/r for the physical problem, chi for the straightened
/// one). The enrichment couplings use the operator pairing on the cutoff
/// annulus plus a Robin-defect surface correction, which vanishes
/// identically when the surface is exactly straight under the cutoff.
SystemMatrices assemble(const EnrichedSpace& space, const ScalarFn2& sigma,
                        const ScalarFn& robin_coeff, const AssemblyOptions& opts = {});

} // namespace cornerspec
