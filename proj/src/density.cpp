#include "ladmov/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ladmov {

namespace {
constexpr double kTwoPi = 6.283185307179586;
}

Vec3 SurfaceDensity::weighted_centroid() const {
  Vec3 sum = Vec3::Zero();
  double w = 0.0;
  for (const GaussianComponent& c : components) {
    sum += c.weight * c.mean;
    w += c.weight;
  }
  return w > 0.0 ? Vec3(sum / w) : Vec3::Zero();
}

double SurfaceDensity::min_sigma() const {
  double s = std::numeric_limits<double>::infinity();
  for (const GaussianComponent& c : components) s = std::min(s, c.sigma);
  return s;
}

double SurfaceDensity::median_sigma() const {
  if (components.empty()) return 0.0;
  std::vector<double> sigmas;
  sigmas.reserve(components.size());
  for (const GaussianComponent& c : components) sigmas.push_back(c.sigma);
  const size_t mid = sigmas.size() / 2;
  std::nth_element(sigmas.begin(), sigmas.begin() + mid, sigmas.end());
  return sigmas[mid];
}

BoundingBox SurfaceDensity::support(double pad_sigmas) const {
  BoundingBox box;
  box.min = Vec3::Constant(std::numeric_limits<double>::infinity());
  box.max = -box.min;
  for (const GaussianComponent& c : components) {
    const Vec3 pad = Vec3::Constant(pad_sigmas * c.sigma);
    box.min = box.min.cwiseMin(c.mean - pad);
    box.max = box.max.cwiseMax(c.mean + pad);
  }
  return box;
}

double bandwidth_for_distance(double sensor_distance, double k_sigma, double sigma_floor) {
  if (!(sensor_distance > 0.0)) {
    throw std::invalid_argument("bandwidth_for_distance: distance must be positive");
  }
  return std::max(sigma_floor, k_sigma * sensor_distance);
}

SurfaceDensity build_density(const ObjectCluster& cluster, double k_sigma, double sigma_floor) {
  if (cluster.points.empty()) throw std::invalid_argument("build_density: empty cluster");
  SurfaceDensity density;
  density.components.reserve(cluster.points.size());
  for (const WorldPoint& p : cluster.points) {
    GaussianComponent c;
    c.mean = p.position;
    c.sigma = bandwidth_for_distance(p.sensor_distance, k_sigma, sigma_floor);
    c.weight = 1.0;
    density.components.push_back(c);
  }
  density.total_weight = static_cast<double>(cluster.points.size());
  return density;
}

double evaluate_density(const SurfaceDensity& density, const Vec3& x) {
  if (density.empty() || density.total_weight <= 0.0) return 0.0;
  double sum = 0.0;
  for (const GaussianComponent& c : density.components) {
    const double var = c.sigma * c.sigma;
    const double norm = std::pow(kTwoPi * var, -1.5);
    sum += c.weight * norm * std::exp(-(x - c.mean).squaredNorm() / (2.0 * var));
  }
  return sum / density.total_weight;
}

DensityGrid discretize(const SurfaceDensity& density, const GridSpec& spec, double* raw_mass) {
  if (density.empty() || density.total_weight <= 0.0) {
    throw std::invalid_argument("discretize: empty density");
  }
  if (spec.cell.minCoeff() <= 0.0 || spec.dims[0] < 1 || spec.dims[1] < 1 || spec.dims[2] < 1) {
    throw std::invalid_argument("discretize: invalid grid spec");
  }

  DensityGrid grid;
  grid.spec = spec;
  grid.mass.assign(spec.cell_count(), 0.0);

  const double volume = spec.cell_volume();
  std::vector<double> ex, ey, ez;
  for (const GaussianComponent& comp : density.components) {
    const double reach = kTruncationSigmas * comp.sigma;
    const Vec3 local = comp.mean - spec.origin;
    int lo[3], hi[3];
    bool outside = false;
    for (int axis = 0; axis < 3; ++axis) {
      lo[axis] = static_cast<int>(std::floor((local[axis] - reach) / spec.cell[axis] - 0.5)) + 1;
      hi[axis] = static_cast<int>(std::floor((local[axis] + reach) / spec.cell[axis] - 0.5));
      lo[axis] = std::max(lo[axis], 0);
      hi[axis] = std::min(hi[axis], spec.dims[axis] - 1);
      if (lo[axis] > hi[axis]) outside = true;
    }
    if (outside) continue;

    const double var = comp.sigma * comp.sigma;
    const double scale =
        comp.weight / density.total_weight * std::pow(kTwoPi * var, -1.5) * volume;
    auto fill_axis = [&](std::vector<double>& buf, int axis) {
      buf.clear();
      for (int i = lo[axis]; i <= hi[axis]; ++i) {
        const double d = (i + 0.5) * spec.cell[axis] - local[axis];
        buf.push_back(std::exp(-d * d / (2.0 * var)));
      }
    };
    fill_axis(ex, 0);
    fill_axis(ey, 1);
    fill_axis(ez, 2);

    for (int k = lo[2]; k <= hi[2]; ++k) {
      const double wz = scale * ez[k - lo[2]];
      for (int j = lo[1]; j <= hi[1]; ++j) {
        const double wyz = wz * ey[j - lo[1]];
        double* row = grid.mass.data() + spec.index(lo[0], j, k);
        const double* exp_x = ex.data();
        for (int i = lo[0]; i <= hi[0]; ++i) {
          row[i - lo[0]] += wyz * exp_x[i - lo[0]];
        }
      }
    }
  }

  double total = 0.0;
  for (double m : grid.mass) total += m;
  if (raw_mass) *raw_mass = total;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw EmptyGridError("discretize: density support misses the grid");
  }
  for (double& m : grid.mass) m /= total;
  return grid;
}

void accumulate(SurfaceDensity& model, const SurfaceDensity& observation, double dt,
                double half_life) {
  if (dt < 0.0) throw std::invalid_argument("accumulate: negative dt");
  if (!(half_life > 0.0)) throw std::invalid_argument("accumulate: half_life must be positive");

  const double decay = std::exp2(-dt / half_life);
  std::vector<GaussianComponent> next;
  next.reserve(model.components.size() + observation.components.size());
  for (GaussianComponent c : model.components) {
    c.weight *= decay;
    if (c.weight >= kPruneWeight) next.push_back(c);
  }
  for (GaussianComponent c : observation.components) {
    c.weight = 1.0;
    next.push_back(c);
  }
  model.components = std::move(next);
  model.total_weight = 0.0;
  for (const GaussianComponent& c : model.components) model.total_weight += c.weight;
}

GridSpec make_grid_spec(const BoundingBox& box, const Vec3& cell, const Vec3& pad) {
  GridSpec spec;
  spec.cell = cell;
  const Vec3 lo = box.min - pad;
  const Vec3 hi = box.max + pad;
  for (int axis = 0; axis < 3; ++axis) {
    spec.dims[axis] = std::max(1, static_cast<int>(std::ceil((hi[axis] - lo[axis]) / cell[axis])));
  }
  // Center the lattice on the padded box.
  for (int axis = 0; axis < 3; ++axis) {
    const double span = spec.dims[axis] * cell[axis];
    spec.origin[axis] = 0.5 * (lo[axis] + hi[axis]) - 0.5 * span;
  }
  return spec;
}

}  // namespace ladmov
