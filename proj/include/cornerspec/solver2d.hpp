#pragma once

#include "cornerspec/angle_modes.hpp"
#include "cornerspec/fem.hpp"
#include "cornerspec/model1d.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <memory>
#include <span>
#include <vector>

namespace cornerspec {

/// Negative part of the spectrum with per-mode diagnostics. Eigenvalues are
/// ascending (the most negative first); vectors are M-normalized and carry
/// the enrichment coefficient in their last component.
struct EigenReport {
    std::vector<double> eigenvalues;
    std::vector<double> sing_coeffs;
    std::vector<double> residuals;
    std::vector<Eigen::VectorXd> vectors;
};

struct SolveOptions {
    int dense_threshold = 1100; // below this, a dense generalized solve
    int max_iterations = 60;
    double tol = 1e-10;
};

/// Most-negative eigenpairs of A u = lambda M u: one shift-invert inverse
/// iteration per supplied shift, or a dense solve when the problem is small
/// or no shifts are given.
EigenReport solve_negative_spectrum(const SystemMatrices& mats, int n_eigs,
                                    std::span<const double> shifts,
                                    const SolveOptions& opts = {});

/// Linear fit of kappa*log(sqrt(-lambda_k)) against the mode index.
struct LadderFit {
    double slope_raw = 0.0;      // d(log s)/dk from the fit
    double intercept_raw = 0.0;  // log s at the first fitted index
    double kappa_fit = 0.0;      // pi / slope_raw
    double ratio_fit = 0.0;      // e^{slope_raw}
    double phase_fit = 0.0;      // kappa_fit * intercept_raw, reduced mod pi
    double slope_over_pi = 0.0;  // corner.kappa * slope_raw / pi
    double intercept_dev = 0.0;  // distance of the intercept from
                                 // gamma + gamma_kappa, reduced mod pi
    std::vector<double> deviations; // per-point fit residuals, kappa*log scale
};

LadderFit fit_asymptotics(const EigenReport& report, const CornerData& corner);

/// Lowest-angular-mode radial profile h(r) of a discrete mode along arcs in
/// the corner patch, with its normalized correlation against K(s_k r).
struct ArcProfile {
    std::vector<double> radii;
    std::vector<double> h;
    double correlation = 0.0;
};

ArcProfile eigenfunction_profile(const EnrichedSpace& space, const Eigen::VectorXd& mode,
                                 double s_k, const AngularBasis& basis,
                                 std::span<const double> radii);

/// Relative weighted-L2 mass of the part orthogonal to the lowest angular
/// mode, computed over the patch below r_limit.
double w_component_mass(const EnrichedSpace& space, const Eigen::VectorXd& mode,
                        const AngularBasis& basis, double r_limit);

/// Robin correction alpha extracted from the outer problem at radius delta:
/// the discrete one-sided map gives h'(delta) = (-tau + alpha) h(delta).
struct DtnResult {
    double alpha = 0.0;
    double delta_used = 0.0;   // snapped to the nearest patch ring
    double w_scaled = 0.0;     // outer remainder norm, scaled by e^{tau delta}
};

DtnResult dtn_alpha(const EnrichedSpace& space, const CornerData& corner, double tau,
                    double delta, const ScalarFn& robin_coeff);

/// One full ladder computation on a profile: mesh, enriched space, assembly,
/// and shift-invert solves at the closed-form predictions.
struct Solve2dParams {
    MeshParams mesh;
    int poly_degree = 2;
    double cut_r1 = 0.0; // 0 = patch_radius * 0.4
    double cut_r2 = 0.0; // 0 = patch_radius * 0.8
    AssemblyOptions assembly;
    SolveOptions solve;
};

struct LadderRun {
    std::shared_ptr<const Mesh> mesh;
    std::shared_ptr<EnrichedSpace> space;
    SystemMatrices mats;
    EigenReport report;
    std::vector<int> k_indices;     // ladder indices targeted by the shifts
    std::vector<double> predicted;  // closed-form s_k at those indices
};

LadderRun solve_profile_spectrum(const SurfaceProfile& profile, const ScalarFn& robin_coeff,
                                 const ScalarFn2& sigma, const CornerData& corner,
                                 int k_min, int n_eigs, const Solve2dParams& params);

struct CompareRow {
    int k = 0;
    double lambda_curved = 0.0;
    double lambda_model = 0.0;
    double diff = 0.0;
    double normalized = 0.0; // |diff| / tau_hat^{2-alpha}
};

/// Solves the physical profile and its straightened companion on structurally
/// identical meshes and tabulates the eigenvalue differences against the
/// perturbation scale tau^{2-alpha}.
std::vector<CompareRow> curved_vs_model_compare(const SurfaceProfile& profile,
                                                const StraightenedProfile& straightened,
                                                const CornerData& corner, int k_min,
                                                int n_eigs, const Solve2dParams& params);

} // namespace cornerspec
