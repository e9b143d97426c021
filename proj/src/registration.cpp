#include "ladmov/registration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace ladmov {

namespace {

struct GridNonzero {
  int i, j, k;
  double sqrt_mass;
};

std::vector<GridNonzero> sqrt_nonzeros(const DensityGrid& grid) {
  std::vector<GridNonzero> out;
  const auto& d = grid.spec.dims;
  for (int k = 0; k < d[2]; ++k) {
    for (int j = 0; j < d[1]; ++j) {
      for (int i = 0; i < d[0]; ++i) {
        const double m = grid.mass[grid.spec.index(i, j, k)];
        if (m > 0.0) out.push_back({i, j, k, std::sqrt(m)});
      }
    }
  }
  return out;
}

/// Parabola through (-1, s_minus), (0, s0), (+1, s_plus); vertex offset
/// clamped to half a cell. Returns {offset, value_at_offset}.
std::pair<double, double> parabola_vertex(double s_minus, double s0, double s_plus) {
  const double denom = s_minus - 2.0 * s0 + s_plus;
  if (!(denom < -1e-300)) return {0.0, s0};  // flat or non-concave stencil
  double t = 0.5 * (s_minus - s_plus) / denom;
  t = std::clamp(t, -0.5, 0.5);
  const double value = s0 + 0.5 * t * (s_plus - s_minus) + 0.5 * t * t * (s_plus - 2.0 * s0 + s_minus);
  return {t, value};
}

void validate_window(const SearchWindow& window) {
  if (!(window.tx_range > 0.0) || !(window.ty_range > 0.0)) {
    throw std::invalid_argument("search window ranges must be positive");
  }
  if (window.yaw_samples != 1 && window.yaw_samples != 3 && window.yaw_samples != 4 &&
      window.yaw_samples != 5) {
    throw std::invalid_argument("yaw_samples must be 1, 3, 4 or 5");
  }
  if (window.yaw_samples > 1 && !(window.yaw_range > 0.0)) {
    throw std::invalid_argument("yaw_range must be positive when sampling rotations");
  }
}

std::vector<double> yaw_offsets(const SearchWindow& window) {
  const int n = window.yaw_samples;
  if (n <= 1) return {0.0};
  std::vector<double> offsets(n);
  for (int i = 0; i < n; ++i) {
    offsets[i] = -window.yaw_range + 2.0 * window.yaw_range * i / (n - 1);
  }
  // Even sample counts skip zero; snap the nearest sample so the predicted
  // yaw is always scored.
  auto nearest = std::min_element(offsets.begin(), offsets.end(),
                                  [](double a, double b) { return std::abs(a) < std::abs(b); });
  *nearest = 0.0;
  return offsets;
}

}  // namespace

double normalize_angle(double radians) {
  double a = std::remainder(radians, 2.0 * M_PI);
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

double bhattacharyya_continuous(const SurfaceDensity& a, const SurfaceDensity& b,
                                double quadrature_cell) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("bhattacharyya_continuous: empty density");
  }
  const double sigma_min = std::min(a.min_sigma(), b.min_sigma());
  double cell = quadrature_cell > 0.0 ? quadrature_cell : sigma_min / 4.0;
  cell = std::min(cell, sigma_min / 4.0);

  // The integrand is negligible where either factor vanishes, so the
  // intersection of the padded supports bounds the quadrature region.
  const BoundingBox sa = a.support(4.5);
  const BoundingBox sb = b.support(4.5);
  Vec3 lo = sa.min.cwiseMax(sb.min);
  Vec3 hi = sa.max.cwiseMin(sb.max);
  if ((hi - lo).minCoeff() <= 0.0) return 0.0;

  double sum = 0.0;
  const int nx = static_cast<int>(std::ceil((hi.x() - lo.x()) / cell));
  const int ny = static_cast<int>(std::ceil((hi.y() - lo.y()) / cell));
  const int nz = static_cast<int>(std::ceil((hi.z() - lo.z()) / cell));
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const Vec3 x = lo + Vec3((i + 0.5) * cell, (j + 0.5) * cell, (k + 0.5) * cell);
        sum += std::sqrt(evaluate_density(a, x) * evaluate_density(b, x));
      }
    }
  }
  return sum * cell * cell * cell;
}

double bhattacharyya_grid(const DensityGrid& a, const DensityGrid& b) {
  if (!a.spec.same_lattice(b.spec)) {
    throw std::invalid_argument("bhattacharyya_grid: grid specs differ");
  }
  double sum = 0.0;
  for (size_t i = 0; i < a.mass.size(); ++i) {
    sum += std::sqrt(a.mass[i] * b.mass[i]);
  }
  return sum;
}

ScoreSurface translation_score_surface(const DensityGrid& model, const DensityGrid& obs,
                                       const SearchWindow& window) {
  if (!model.spec.same_lattice(obs.spec)) {
    throw std::invalid_argument("translation_score_surface: grid specs differ");
  }
  validate_window(window);
  const auto& dims = model.spec.dims;
  const int nx = static_cast<int>(std::ceil(window.tx_range / model.spec.cell.x()));
  const int ny = static_cast<int>(std::ceil(window.ty_range / model.spec.cell.y()));
  if (nx >= dims[0] || ny >= dims[1]) {
    throw std::invalid_argument("translation_score_surface: window larger than grid");
  }

  std::vector<double> sqrt_model(model.mass.size());
  for (size_t i = 0; i < model.mass.size(); ++i) sqrt_model[i] = std::sqrt(model.mass[i]);
  const std::vector<GridNonzero> obs_nz = sqrt_nonzeros(obs);

  ScoreSurface surface;
  surface.dx0 = -nx;
  surface.dy0 = -ny;
  surface.values = Eigen::MatrixXd::Zero(2 * ny + 1, 2 * nx + 1);

  // score(dx, dy) = sum over cells of sqrt(model(i, j, k)) * sqrt(obs(i + dx, j + dy, k)):
  // positive offsets mean the observation mass is displaced toward +x/+y.
  for (int dy = -ny; dy <= ny; ++dy) {
    for (int dx = -nx; dx <= nx; ++dx) {
      double score = 0.0;
      for (const GridNonzero& nz : obs_nz) {
        const int mi = nz.i - dx;
        const int mj = nz.j - dy;
        if (mi < 0 || mi >= dims[0] || mj < 0 || mj >= dims[1]) continue;
        score += nz.sqrt_mass * sqrt_model[model.spec.index(mi, mj, nz.k)];
      }
      surface.values(dy + ny, dx + nx) = score;
    }
  }
  return surface;
}

RefineResult refine_parabolic(const ScoreSurface& surface, int peak_dx, int peak_dy,
                              const Vec2& cell_xy) {
  const int ix = peak_dx - surface.dx0;
  const int iy = peak_dy - surface.dy0;
  if (ix < 0 || iy < 0 || ix >= surface.values.cols() || iy >= surface.values.rows()) {
    throw std::invalid_argument("refine_parabolic: peak outside surface");
  }

  RefineResult result;
  result.dx = peak_dx * cell_xy.x();
  result.dy = peak_dy * cell_xy.y();
  result.score = std::clamp(surface.values(iy, ix), 0.0, 1.0);
  if (ix == 0 || iy == 0 || ix + 1 >= surface.values.cols() || iy + 1 >= surface.values.rows()) {
    result.converged = false;
    return result;
  }

  const double s0 = surface.values(iy, ix);
  const auto [tx, vx] = parabola_vertex(surface.values(iy, ix - 1), s0, surface.values(iy, ix + 1));
  const auto [ty, vy] = parabola_vertex(surface.values(iy - 1, ix), s0, surface.values(iy + 1, ix));
  result.dx = (peak_dx + tx) * cell_xy.x();
  result.dy = (peak_dy + ty) * cell_xy.y();
  result.score = std::clamp(s0 + (vx - s0) + (vy - s0), 0.0, 1.0);
  result.converged = true;
  return result;
}

RegistrationResult register_observation(const SurfaceDensity& model, const Vec3& anchor,
                                        const ObjectCluster& obs,
                                        const RigidMotion2D& predicted,
                                        const SearchWindow& window,
                                        const RegistrationConfig& config) {
  if (model.empty()) throw std::invalid_argument("register_observation: empty model");
  if (obs.points.empty()) throw std::invalid_argument("register_observation: empty observation");
  validate_window(window);

  const double edge = std::max(config.cell_min, config.cell_scale * model.median_sigma());
  Vec3 cell(edge, edge, edge);
  const BoundingBox support = model.support(3.0);
  if (config.nz_budget > 0) {
    const double z_span = std::max(support.extent().z() + 2.0 * edge, edge);
    cell.z() = std::max(cell.z(), z_span / config.nz_budget);
  }
  const GridSpec spec = make_grid_spec(
      support, cell, Vec3(window.tx_range + edge, window.ty_range + edge, 0.0));
  const DensityGrid model_grid = discretize(model, spec);

  const Vec3 centroid = model.weighted_centroid();
  const Vec3 t_pred(predicted.tx, predicted.ty, 0.0);
  const std::vector<double> offsets = yaw_offsets(window);

  struct Layer {
    double yaw_offset = 0.0;
    ScoreSurface surface;
  };
  std::vector<Layer> layers;
  layers.reserve(offsets.size());
  for (double yaw_off : offsets) {
    const double yaw = predicted.yaw + yaw_off;
    const Eigen::Rotation2Dd unrotate(-yaw);

    ObjectCluster mapped;
    mapped.points.reserve(obs.points.size());
    for (const WorldPoint& p : obs.points) {
      const Vec3 rel = p.position - anchor - t_pred - centroid;
      const Vec2 xy = unrotate * Vec2(rel.x(), rel.y());
      WorldPoint q = p;
      q.position = centroid + Vec3(xy.x(), xy.y(), rel.z());
      mapped.points.push_back(q);
    }
    const SurfaceDensity obs_density =
        build_density(mapped, config.k_sigma, config.sigma_floor);
    const DensityGrid obs_grid = discretize(obs_density, spec);
    layers.push_back({yaw_off, translation_score_surface(model_grid, obs_grid, window)});
  }

  // Global maximum over the layered score volume. Ties resolve toward the
  // prediction: smallest translation offset, then smallest yaw offset, then
  // lexicographic.
  int best_layer = 0, best_dx = 0, best_dy = 0;
  double best_score = -1.0;
  auto better = [&](double score, int layer, int dx, int dy) {
    if (score != best_score) return score > best_score;
    const long long r2 = static_cast<long long>(dx) * dx + static_cast<long long>(dy) * dy;
    const long long best_r2 =
        static_cast<long long>(best_dx) * best_dx + static_cast<long long>(best_dy) * best_dy;
    if (r2 != best_r2) return r2 < best_r2;
    const double dyaw = std::abs(layers[layer].yaw_offset);
    const double best_dyaw = std::abs(layers[best_layer].yaw_offset);
    if (dyaw != best_dyaw) return dyaw < best_dyaw;
    return std::tie(dx, dy, layer) < std::tie(best_dx, best_dy, best_layer);
  };
  for (size_t l = 0; l < layers.size(); ++l) {
    const ScoreSurface& s = layers[l].surface;
    for (int iy = 0; iy < s.values.rows(); ++iy) {
      for (int ix = 0; ix < s.values.cols(); ++ix) {
        const int dx = s.dx0 + ix;
        const int dy = s.dy0 + iy;
        if (better(s.values(iy, ix), static_cast<int>(l), dx, dy)) {
          best_score = s.values(iy, ix);
          best_layer = static_cast<int>(l);
          best_dx = dx;
          best_dy = dy;
        }
      }
    }
  }

  const ScoreSurface& win_surface = layers[best_layer].surface;
  const RefineResult refined =
      refine_parabolic(win_surface, best_dx, best_dy, Vec2(spec.cell.x(), spec.cell.y()));

  double yaw_offset = layers[best_layer].yaw_offset;
  double score = refined.score;
  if (layers.size() >= 3 && best_layer > 0 && best_layer + 1 < static_cast<int>(layers.size())) {
    const double s_minus = layers[best_layer - 1].surface.at_offset(best_dx, best_dy);
    const double s0 = win_surface.at_offset(best_dx, best_dy);
    const double s_plus = layers[best_layer + 1].surface.at_offset(best_dx, best_dy);
    // Layers may be unevenly spaced after snapping a sample to zero; fit the
    // parabola in yaw directly.
    const double y_minus = layers[best_layer - 1].yaw_offset;
    const double y0 = layers[best_layer].yaw_offset;
    const double y_plus = layers[best_layer + 1].yaw_offset;
    const double h_minus = y0 - y_minus;
    const double h_plus = y_plus - y0;
    const double d_minus = (s0 - s_minus) / h_minus;
    const double d_plus = (s_plus - s0) / h_plus;
    const double curvature = 2.0 * (d_plus - d_minus) / (h_minus + h_plus);
    if (curvature < -1e-300) {
      const double slope = (d_minus * h_plus + d_plus * h_minus) / (h_minus + h_plus);
      double step = -slope / curvature;
      step = std::clamp(step, -0.5 * h_minus, 0.5 * h_plus);
      const double gain = slope * step + 0.5 * curvature * step * step;
      yaw_offset = y0 + step;
      score = std::clamp(score + std::max(0.0, gain), 0.0, 1.0);
    }
  }

  const double yaw_layer = predicted.yaw + layers[best_layer].yaw_offset;
  const Vec2 delta =
      Eigen::Rotation2Dd(yaw_layer) * Vec2(refined.dx, refined.dy);

  RegistrationResult result;
  result.motion.tx = predicted.tx + delta.x();
  result.motion.ty = predicted.ty + delta.y();
  result.motion.yaw = normalize_angle(predicted.yaw + yaw_offset);
  result.score = score;
  result.score_surface = win_surface;
  result.converged = refined.converged;
  return result;
}

void dump_score_surface(std::ostream& out, const ScoreSurface& surface) {
  for (int iy = 0; iy < surface.values.rows(); ++iy) {
    for (int ix = 0; ix < surface.values.cols(); ++ix) {
      out << (surface.dx0 + ix) << '\t' << (surface.dy0 + iy) << '\t'
          << surface.values(iy, ix) << '\n';
    }
  }
}

}  // namespace ladmov
