#pragma once

#include <array>

#include "mir3d/core/types.hpp"
#include "mir3d/lesion/components.hpp"

namespace mir3d {

struct Morphology {
  std::size_t voxel_count = 0;
  double physical_volume_mm3 = 0.0;
  std::array<double, 3> centroid_mm{};
  /// Full axis lengths of the moment-matched ellipsoid, a >= b >= c.
  std::array<double, 3> ellipsoid_axes_mm{};
  /// Largest axis in centimetres.
  double length_cm = 0.0;
  /// a / b
  double elongation = 1.0;
  /// b / c
  double flatness = 1.0;
};

/// Shape descriptors of one component in physical space.
///
/// The ellipsoid comes from the covariance of the voxel centre coordinates:
/// a uniform solid ellipsoid with semi-axis r has variance r^2 / 5 along
/// that axis, so each full axis is 2 * sqrt(5 * lambda). Eigenvalues are
/// floored at (e / 2)^2 / 5, e the smallest voxel edge, which keeps single
/// voxels and planar components at least one voxel edge thick.
Morphology lesion_morphology(const LesionComponent& component, const Spacing& spacing);

}  // namespace mir3d
