#include "mir3d/lesion/morphology.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "mir3d/core/error.hpp"

namespace mir3d {

Morphology lesion_morphology(const LesionComponent& component, const Spacing& spacing) {
  if (component.voxels.empty()) throw ValidationError("lesion_morphology: empty component");
  const double n = static_cast<double>(component.voxels.size());

  Morphology m;
  m.voxel_count = component.voxels.size();
  m.physical_volume_mm3 = n * spacing.voxel_volume();

  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& v : component.voxels) mean += Eigen::Vector3d(v.x * spacing.sx, v.y * spacing.sy, v.z * spacing.sz);
  mean /= n;
  m.centroid_mm = {mean.x(), mean.y(), mean.z()};

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& v : component.voxels) {
    const Eigen::Vector3d d = Eigen::Vector3d(v.x * spacing.sx, v.y * spacing.sy, v.z * spacing.sz) - mean;
    cov.noalias() += d * d.transpose();
  }
  cov /= n;

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov, Eigen::EigenvaluesOnly);
  const double edge = std::min({spacing.sx, spacing.sy, spacing.sz});
  const double floor = (edge / 2.0) * (edge / 2.0) / 5.0;
  std::array<double, 3> axes{};
  for (int i = 0; i < 3; ++i) axes[i] = 2.0 * std::sqrt(5.0 * std::max(solver.eigenvalues()[i], floor));
  std::sort(axes.begin(), axes.end(), std::greater<>());

  m.ellipsoid_axes_mm = axes;
  m.length_cm = axes[0] / 10.0;
  m.elongation = axes[0] / axes[1];
  m.flatness = axes[1] / axes[2];
  return m;
}

}  // namespace mir3d
