#pragma once

#include <iosfwd>

#include "ladmov/density.hpp"

namespace ladmov {

/// Horizontal translation plus rotation about the vertical axis; the
/// rotation acts about the model centroid.
struct RigidMotion2D {
  double tx = 0.0;
  double ty = 0.0;
  double yaw = 0.0;  // radians, normalized to (-pi, pi]
};

double normalize_angle(double radians);

struct SearchWindow {
  double tx_range = 1.0;  // +- bound around the predicted translation, meters
  double ty_range = 1.0;
  int yaw_samples = 1;  // 1, 3, 4 or 5 rotation layers
  double yaw_range = 15.0 * M_PI / 180.0;  // +- bound around the predicted yaw
};

/// Similarity per integer cell offset. values(iy, ix) is the score for the
/// offset (dx0 + ix, dy0 + iy) in cells, where positive dx means the
/// observation mass sits at larger x than the model.
struct ScoreSurface {
  int dx0 = 0;
  int dy0 = 0;
  Eigen::MatrixXd values;

  double at_offset(int dx, int dy) const { return values(dy - dy0, dx - dx0); }
};

struct RegistrationResult {
  RigidMotion2D motion;
  double score = 0.0;          // Bhattacharyya similarity in [0, 1]
  ScoreSurface score_surface;  // diagnostic, winning yaw layer
  bool converged = false;
};

struct RefineResult {
  double dx = 0.0;  // meters, integer peak plus sub-cell offset
  double dy = 0.0;
  double score = 0.0;
  bool converged = false;
};

/// Grid construction knobs for register_observation.
struct RegistrationConfig {
  double k_sigma = 0.01;     // observation bandwidth per meter of range
  double sigma_floor = 0.05;
  double cell_scale = 1.0;   // grid cell edge = cell_scale * median model sigma
  double cell_min = 0.05;    // meters, lower bound on the cell edge
  int nz_budget = 0;         // 0 = full vertical resolution, else max z slices
};

/// Fine Riemann quadrature of Eq-style continuous similarity
/// integral sqrt(rho_a * rho_b). Serves as the independent oracle for the
/// grid path; the quadrature cell is clamped to a quarter of the smallest
/// bandwidth.
double bhattacharyya_continuous(const SurfaceDensity& a, const SurfaceDensity& b,
                                double quadrature_cell);

/// Discrete similarity sum_cells sqrt(mass_a * mass_b) over identical lattices.
double bhattacharyya_grid(const DensityGrid& a, const DensityGrid& b);

/// Scores every integer (dx, dy) offset inside the window as the sum over z
/// slices of the 2D cross-correlation of the square-rooted slice masses.
/// Out-of-bounds cells contribute zero.
ScoreSurface translation_score_surface(const DensityGrid& model, const DensityGrid& obs,
                                       const SearchWindow& window);

/// Independent 1D parabolas through the axis neighbors of the peak give the
/// sub-cell vertex per axis (clamped to half a cell) and a refined score.
/// A peak on the surface boundary refines nothing and reports
/// converged = false.
RefineResult refine_parabolic(const ScoreSurface& surface, int peak_dx, int peak_dy,
                              const Vec2& cell_xy);

/// Registers an observed cluster against a track's accumulated model.
///
/// The model lives in the object frame anchored at `anchor` (world position
/// of the frame origin). `predicted` is the expected object motion since
/// anchoring. The observation is rotated about the model centroid at each of
/// yaw_samples rotations, discretized on the model's lattice, scored over
/// the translation window, and the layered maximum is refined parabolically
/// in translation and yaw. Throws EmptyGridError when the observation maps
/// entirely off the model grid; callers treat that as an occlusion.
RegistrationResult register_observation(const SurfaceDensity& model, const Vec3& anchor,
                                        const ObjectCluster& obs,
                                        const RigidMotion2D& predicted,
                                        const SearchWindow& window,
                                        const RegistrationConfig& config);

/// Text dump of a score surface: one "dx dy score" row per offset, offsets
/// in cells.
void dump_score_surface(std::ostream& out, const ScoreSurface& surface);

}  // namespace ladmov
