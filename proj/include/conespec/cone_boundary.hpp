#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace conespec::harness {

// Boundary model of a 3-D truncated cone: the lateral surface
// {colatitude = theta0, 0 < |x| <= delta} meshed dyadically in radius and
// uniformly in azimuth, closed by a spherical-cap lid at |x| = delta. Radii
// inside a band reuse one fixed template, so band j+1 is exactly half of
// band j and dyadic rescaling is bitwise on the mesh.
struct ConeBoundaryConfig {
    double theta0 = 1.5707963267948966;
    double delta = 1.0;
    int bands = 10;            // dyadic bands toward the vertex; innermost radius ~ 2^-bands
    int radial_per_band = 4;
    int angular = 64;
    int lid_rings = 8;
};

struct ConeBoundary {
    ConeBoundaryConfig cfg;
    std::vector<Eigen::Vector3d> xyz;
    std::vector<double> r;          // |xi|
    std::vector<double> phi;
    std::vector<double> colat;      // theta0 on the lateral part
    std::vector<double> weight;     // surface quadrature weight
    std::vector<double> footprint;  // quadrature cell diameter at the point
    std::vector<double> dr;         // radial extent of the cell (0 on the lid)
    std::vector<int> band;          // dyadic band index, -1 on the lid
    int lateral_count = 0;          // points [0, lateral_count) are lateral

    int size() const { return static_cast<int>(r.size()); }
    double lateral_measure_analytic() const;
    double lid_measure_analytic() const;
    double measure_discrete() const;
    /// Radii template shared by every band, as fractions of the band's upper radius.
    std::vector<double> radial_template() const;
};

ConeBoundary make_cone_boundary(const ConeBoundaryConfig& cfg);

/// Scalar boundary datum sampled on the mesh; generators are continuum
/// functions so refinements see the same datum.
struct BoundaryData {
    std::vector<double> values;
    std::string description;
};

using DatumFn = std::function<double(double r, double phi, bool lid, double colat)>;

BoundaryData sample_boundary_data(const ConeBoundary& bnd, const DatumFn& fn,
                                  const std::string& description);

DatumFn constant_datum(double value);
DatumFn seeded_random_datum(std::uint64_t seed, double delta);  // smooth positive random field
DatumFn band_localized_datum(int band_index, double delta);
DatumFn vertex_singular_datum(double beta, double delta);  // (r/delta)^-beta

double l1_norm(const ConeBoundary& bnd, const BoundaryData& f);
double lp_norm(const ConeBoundary& bnd, const BoundaryData& f, double p);  // p may be inf

struct BandAccounting {
    bool rescale_exact;        // band j+1 radii match band j radii halved, to roundoff
    double max_rescale_error;
    int max_overlap;           // enlarged-band membership count, max over mesh points
    int interior_overlap;      // membership count away from index clipping (exactly 5)
    bool pass;
};

// Verifies the dyadic band bookkeeping used by the w-estimate: exact band
// rescaling, and that each point lies in at most 5 of the enlarged bands
// [2^{-j-2} delta, 2^{-j+3} delta] so p-th powers oversum by a fixed factor.
BandAccounting dyadic_band_accounting(const ConeBoundary& bnd);

/// Sum over enlarged bands of the restricted ||f||_p^p; bounded by 5 ||f||_p^p.
double enlarged_band_power_sum(const ConeBoundary& bnd, const BoundaryData& f, double p);

}  // namespace conespec::harness
