#include "mir3d/lesion/components.hpp"

#include <algorithm>
#include <numeric>

#include "mir3d/core/error.hpp"

namespace mir3d {

namespace {

class DisjointSets {
 public:
  std::uint32_t make() {
    parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
    return parent_.back();
  }
  std::uint32_t find(std::uint32_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

struct Offset {
  int dx, dy, dz;
};

// Neighbors that precede a voxel in scan order.
std::vector<Offset> causal_neighbors(Connectivity c) {
  std::vector<Offset> out;
  for (int dz = -1; dz <= 0; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dz == 0 && (dy > 0 || (dy == 0 && dx >= 0))) continue;
        if (c == Connectivity::face6 && std::abs(dx) + std::abs(dy) + std::abs(dz) != 1) continue;
        out.push_back({dx, dy, dz});
      }
  return out;
}

}  // namespace

std::vector<LesionComponent> connected_components(const LabelVolume& mask, Connectivity connectivity) {
  if (!mask.is_binary()) throw ValidationError("connected_components: mask is not binary");
  const auto [nx, ny, nz] = mask.dims();
  const auto voxels = mask.voxels();
  const auto offsets = causal_neighbors(connectivity);

  // Provisional label + 1 per voxel (0 = background).
  std::vector<std::uint32_t> label(voxels.size(), 0);
  DisjointSets sets;
  for (std::int64_t z = 0; z < nz; ++z)
    for (std::int64_t y = 0; y < ny; ++y)
      for (std::int64_t x = 0; x < nx; ++x) {
        const std::size_t i = mask.index(x, y, z);
        if (voxels[i] == 0) continue;
        std::uint32_t mine = 0;
        for (const auto& o : offsets) {
          const std::int64_t qx = x + o.dx, qy = y + o.dy, qz = z + o.dz;
          if (qx < 0 || qy < 0 || qz < 0 || qx >= nx || qy >= ny) continue;
          const std::uint32_t l = label[mask.index(qx, qy, qz)];
          if (l == 0) continue;
          if (mine == 0)
            mine = l;
          else
            sets.unite(mine - 1, l - 1);
        }
        label[i] = mine != 0 ? mine : sets.make() + 1;
      }

  // Gather voxels per root in scan order; the first voxel seen is the
  // component's scan-order minimum.
  std::vector<std::int64_t> slot_of_root;
  std::vector<LesionComponent> comps;
  for (std::int64_t z = 0; z < nz; ++z)
    for (std::int64_t y = 0; y < ny; ++y)
      for (std::int64_t x = 0; x < nx; ++x) {
        const std::uint32_t l = label[mask.index(x, y, z)];
        if (l == 0) continue;
        const std::uint32_t root = sets.find(l - 1);
        if (root >= slot_of_root.size()) slot_of_root.resize(root + 1, -1);
        if (slot_of_root[root] < 0) {
          slot_of_root[root] = static_cast<std::int64_t>(comps.size());
          comps.emplace_back();
        }
        comps[static_cast<std::size_t>(slot_of_root[root])].voxels.push_back(
            {static_cast<std::int32_t>(x), static_cast<std::int32_t>(y), static_cast<std::int32_t>(z)});
      }

  // comps is already in order of first scan-order voxel; a stable sort by
  // size keeps that as the tie-break.
  std::stable_sort(comps.begin(), comps.end(), [](const LesionComponent& a, const LesionComponent& b) {
    return a.voxels.size() > b.voxels.size();
  });
  for (std::size_t i = 0; i < comps.size(); ++i) comps[i].lesion_id = static_cast<int>(i + 1);
  return comps;
}

}  // namespace mir3d
