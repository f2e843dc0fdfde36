#pragma once

#include <Eigen/Dense>
#include <span>

#include "conespec/cone_boundary.hpp"
#include "conespec/green_model.hpp"

namespace conespec::harness {

struct PotentialTriple {
    double v1, v2, v3;
    double total() const { return v1 + v2 + v3; }
};

/// dist(y, boundary of the truncated cone model).
double distance_to_boundary(const Eigen::Vector3d& y, double theta0, double delta);

// Quadrature evaluation of the three zone integrals of |f| against the
// kernel-bound weights:
//   v1 = |y|^a      int_{2|y|<|xi|}    |f| |xi|^{-(n-1+a)}
//   v2 = R(y)       int_{|y|/2<=|xi|<=2|y|} |f| |y-xi|^{-n}
//   v3 = |y|^{-(n-2+a)} int_{2|xi|<|y|} |f| |xi|^{a-1}
// The v1/v3 kernels are radial, so whole dyadic bands and the lid are
// pre-aggregated and only the two bands cut by the zone thresholds are walked
// pointwise; v2 touches at most the three bands around |y|.
class PotentialEvaluator {
  public:
    PotentialEvaluator(const ConeBoundary& bnd, const BoundaryData& f,
                       const green::KernelBoundModel& model);

    PotentialTriple evaluate(const Eigen::Vector3d& y) const;

    /// Direct full-mesh sums, no band aggregation; oracle for the fast path.
    PotentialTriple evaluate_direct(const Eigen::Vector3d& y) const;

    const ConeBoundary& boundary() const { return *bnd_; }
    double alpha() const { return alpha_; }

  private:
    const ConeBoundary* bnd_;
    const BoundaryData* f_;
    double alpha_;
    std::vector<double> band_s1_, band_s3_;  // per-band aggregated radial sums
    double lid_s1_ = 0.0, lid_s3_ = 0.0;
    std::vector<int> band_begin_, band_end_;  // point ranges per band
};

struct ConeSampleConfig {
    double aperture = 0.5;  // required dist-to-boundary over dist-to-vertex ratio
    double height = 0.25;
    int samples = 64;
};

/// Deterministic low-discrepancy sample of the nontangential cone at x.
std::vector<Eigen::Vector3d> nontangential_samples(const Eigen::Vector3d& x, bool lid_point,
                                                   const ConeSampleConfig& cone, double theta0,
                                                   double delta);

struct MaximalValues {
    double v1_star = 0.0, v2_star = 0.0, v3_star = 0.0;
    double w = 0.0, z = 0.0;  // v2 split at the |y - x| <= |x| cut
    double u_star = 0.0;      // sup of v1+v2+v3 over the same cone
    bool skipped = false;     // empty admissible sample set (lid edge)
};

MaximalValues maximal_surrogate(const Eigen::Vector3d& x, bool lid_point,
                                const PotentialEvaluator& pot, const ConeSampleConfig& cone);

// Compares the three potentials at probe points between the given mesh and
// one with doubled angular/radial resolution; throws a diagnostic
// std::runtime_error when the relative change of any component exceeds tol.
void potential_convergence_check(const ConeBoundaryConfig& mesh, const DatumFn& datum,
                                 const green::KernelBoundModel& model,
                                 std::span<const Eigen::Vector3d> probes, double tol);

// Discrete weak-L^p quasinorm sup_t t sigma(|v| > t)^{1/p}; for step
// distributions the supremum is attained approaching sample values from
// below, so the sweep uses tail measures of {|v| >= value}. p = inf is the
// plain supremum.
double weak_lp_quasinorm(std::span<const double> values, std::span<const double> weights,
                         double p);

double lp_norm(std::span<const double> values, std::span<const double> weights, double p);

}  // namespace conespec::harness
