#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace conespec {

enum class Scheme { FiniteDifference, SpectralCollocation };

/// Shared discretization knobs for the colatitude solvers.
struct DiscretizationConfig {
    int grid_points = 128;
    Scheme scheme = Scheme::FiniteDifference;
    int max_azimuthal_mode = 8;
    int richardson_levels = 3;
    double residual_tol = 1e-10;

    void validate() const {
        if (grid_points < 16)
            throw std::invalid_argument("DiscretizationConfig: grid_points must be >= 16");
        if (max_azimuthal_mode < 1)
            throw std::invalid_argument("DiscretizationConfig: max_azimuthal_mode must be >= 1");
        if (richardson_levels < 1)
            throw std::invalid_argument("DiscretizationConfig: richardson_levels must be >= 1");
        // grid doubling across all levels must stay representable
        if (static_cast<long long>(grid_points) << (richardson_levels - 1) > (1LL << 24))
            throw std::invalid_argument("DiscretizationConfig: grid doubling overflows sane limits");
        if (residual_tol <= 0.0)
            throw std::invalid_argument("DiscretizationConfig: residual_tol must be positive");
    }
};

/// Discrete eigensolve failed to reach the configured residual tolerance.
class EigensolveError : public std::runtime_error {
  public:
    EigensolveError(const std::string& what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const { return residual_; }

  private:
    double residual_;
};

// Sequence extrapolation for values computed on successively doubled grids.
// Three or more levels use Aitken's delta-squared on the final triple, which
// does not require knowing the leading error order; two levels assume order 2.
inline double extrapolate_sequence(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("extrapolate_sequence: empty");
    if (v.size() == 1) return v[0];
    if (v.size() == 2) return (4.0 * v[1] - v[0]) / 3.0;
    const double a = v[v.size() - 3], b = v[v.size() - 2], c = v[v.size() - 1];
    const double den = (c - b) - (b - a);
    if (std::abs(den) < 1e-300 || !(std::abs(c - b) < std::abs(b - a)))
        return c;  // sequence already flat or not contracting
    return c - (c - b) * (c - b) / den;
}

/// Observed convergence order from the last three entries of a doubled-grid sequence.
inline double observed_order(std::span<const double> v) {
    if (v.size() < 3) return 0.0;
    const double a = v[v.size() - 3], b = v[v.size() - 2], c = v[v.size() - 1];
    const double r = std::abs(b - a) / std::max(std::abs(c - b), 1e-300);
    return std::log2(r);
}

// splitmix64: deterministic seed scrambling for reproducible start vectors and data.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Uniform double in [0,1) from a splitmix64 stream.
inline double uniform01(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12);

}  // namespace conespec
