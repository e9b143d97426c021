#pragma once

#include <array>
#include <vector>

#include "ladmov/clustering.hpp"

namespace ladmov {

struct GaussianComponent {
  Vec3 mean = Vec3::Zero();
  double sigma = 0.0;   // isotropic bandwidth, meters
  double weight = 0.0;  // non-negative; normalized on evaluation
};

/// Object surface modeled as a mixture of isotropic 3D Gaussians, one per
/// range hit. Evaluation divides by total_weight so the density integrates
/// to one regardless of the raw weights.
struct SurfaceDensity {
  std::vector<GaussianComponent> components;
  double total_weight = 0.0;

  bool empty() const { return components.empty(); }
  Vec3 weighted_centroid() const;
  double min_sigma() const;
  double median_sigma() const;
  /// Axis-aligned box covering every component mean padded by pad_sigmas
  /// times its bandwidth.
  BoundingBox support(double pad_sigmas) const;
};

/// Axis-aligned discretization lattice. Cell (i, j, k) spans
/// origin + (i, j, k) .* cell with its sample point at the cell center.
struct GridSpec {
  Vec3 origin = Vec3::Zero();
  Vec3 cell = Vec3::Ones();
  std::array<int, 3> dims = {1, 1, 1};

  size_t cell_count() const {
    return static_cast<size_t>(dims[0]) * dims[1] * dims[2];
  }
  // z-slice major so per-slice correlations walk contiguous memory
  size_t index(int i, int j, int k) const {
    return (static_cast<size_t>(k) * dims[1] + j) * dims[0] + i;
  }
  Vec3 center(int i, int j, int k) const {
    return origin + Vec3((i + 0.5) * cell.x(), (j + 0.5) * cell.y(), (k + 0.5) * cell.z());
  }
  double cell_volume() const { return cell.x() * cell.y() * cell.z(); }
  bool same_lattice(const GridSpec& other) const {
    return dims == other.dims && (cell - other.cell).cwiseAbs().maxCoeff() < 1e-12;
  }
};

/// Normalized mass per cell; sums to one unless empty.
struct DensityGrid {
  GridSpec spec;
  std::vector<double> mass;
};

/// Range-dependent kernel bandwidth: max(sigma_floor, k_sigma * distance).
double bandwidth_for_distance(double sensor_distance, double k_sigma, double sigma_floor);

/// One Gaussian per cluster point with uniform weight and distance-scaled
/// bandwidth.
SurfaceDensity build_density(const ObjectCluster& cluster, double k_sigma, double sigma_floor);

/// Mixture pdf at x, in 1/m^3.
double evaluate_density(const SurfaceDensity& density, const Vec3& x);

/// Bins the mixture onto the grid by center evaluation times cell volume,
/// truncating each component beyond kTruncationSigmas per axis, then
/// renormalizes to unit mass. raw_mass (optional) receives the
/// pre-normalization total, which approaches 1 when the grid covers the
/// mixture support. Throws EmptyGridError when nothing lands on the grid.
DensityGrid discretize(const SurfaceDensity& density, const GridSpec& spec,
                       double* raw_mass = nullptr);

/// Component truncation radius used by discretize, in bandwidths. Four sigma
/// keeps per-component mass loss below 0.1%, which the mass-conservation and
/// closed-form similarity checks require.
inline constexpr double kTruncationSigmas = 4.0;

/// Components below this weight are dropped during accumulation.
inline constexpr double kPruneWeight = 0.01;

/// Decays existing component weights by 2^(-dt / half_life), appends the
/// observation's components (already transformed into the model frame) with
/// weight 1 each, prunes negligible components and refreshes total_weight.
void accumulate(SurfaceDensity& model, const SurfaceDensity& observation, double dt,
                double half_life);

/// Grid spec covering `box` padded by `pad` per axis, with the given cell
/// edge lengths. The lattice is centered on the padded box.
GridSpec make_grid_spec(const BoundingBox& box, const Vec3& cell, const Vec3& pad);

}  // namespace ladmov
