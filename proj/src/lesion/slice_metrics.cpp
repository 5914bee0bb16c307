#include "mir3d/lesion/slice_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "mir3d/core/error.hpp"

namespace mir3d {

double marching_squares_perimeter(std::span<const std::uint8_t> pixels, std::int64_t width,
                                  std::int64_t height, double sx, double sy) {
  auto inside = [&](std::int64_t x, std::int64_t y) -> int {
    if (x < 0 || y < 0 || x >= width || y >= height) return 0;
    return pixels[static_cast<std::size_t>(y * width + x)] != 0 ? 1 : 0;
  };
  // Binary samples put every crossing at an edge midpoint, so each cell
  // contributes a fixed length per case.
  const double corner = std::hypot(sx / 2.0, sy / 2.0);
  double perimeter = 0.0;
  for (std::int64_t y = -1; y < height; ++y)
    for (std::int64_t x = -1; x < width; ++x) {
      const int bl = inside(x, y), br = inside(x + 1, y);
      const int tl = inside(x, y + 1), tr = inside(x + 1, y + 1);
      const int code = bl | (br << 1) | (tr << 2) | (tl << 3);
      switch (code) {
        case 0:
        case 15:
          break;
        case 3:   // bottom pair
        case 12:  // top pair
          perimeter += sx;
          break;
        case 6:  // right pair
        case 9:  // left pair
          perimeter += sy;
          break;
        case 5:
        case 10:  // saddle: two corner segments either way it is resolved
          perimeter += 2.0 * corner;
          break;
        default:  // one corner differs from the other three
          perimeter += corner;
          break;
      }
    }
  return perimeter;
}

SliceMetrics slice_metrics(const LabelVolume& mask, std::int64_t z, const std::string& volume_id) {
  const auto& d = mask.dims();
  if (z < 0 || z >= d.nz)
    throw ValidationError("slice_metrics: slice " + std::to_string(z) + " outside [0, " +
                          std::to_string(d.nz) + ")");
  const auto& sp = mask.spacing();
  SliceMetrics out;
  out.volume_id = volume_id;
  out.slice_index = static_cast<int>(z);

  const std::int64_t w = d.nx, h = d.ny;
  std::vector<std::int32_t> comp(static_cast<std::size_t>(w * h), -1);
  auto fg = [&](std::int64_t x, std::int64_t y) { return mask.at(x, y, z) != 0; };

  std::vector<std::pair<std::int64_t, std::int64_t>> stack, members;
  std::int32_t next = 0;
  for (std::int64_t y0 = 0; y0 < h; ++y0)
    for (std::int64_t x0 = 0; x0 < w; ++x0) {
      if (!fg(x0, y0) || comp[static_cast<std::size_t>(y0 * w + x0)] >= 0) continue;
      const std::int32_t id = next++;
      members.clear();
      stack.assign(1, {x0, y0});
      comp[static_cast<std::size_t>(y0 * w + x0)] = id;
      std::int64_t minx = x0, maxx = x0, miny = y0, maxy = y0;
      while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        members.push_back({x, y});
        minx = std::min(minx, x), maxx = std::max(maxx, x);
        miny = std::min(miny, y), maxy = std::max(maxy, y);
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const std::int64_t qx = x + dx, qy = y + dy;
            if (qx < 0 || qy < 0 || qx >= w || qy >= h || !fg(qx, qy)) continue;
            auto& c = comp[static_cast<std::size_t>(qy * w + qx)];
            if (c >= 0) continue;
            c = id;
            stack.push_back({qx, qy});
          }
      }
      const std::int64_t bw = maxx - minx + 1, bh = maxy - miny + 1;
      std::vector<std::uint8_t> crop(static_cast<std::size_t>(bw * bh), 0);
      for (auto [x, y] : members) crop[static_cast<std::size_t>((y - miny) * bw + (x - minx))] = 1;

      const double area = static_cast<double>(members.size()) * sp.sx * sp.sy;
      const double perimeter = marching_squares_perimeter(crop, bw, bh, sp.sx, sp.sy);
      const double circ = 4.0 * std::numbers::pi * area / (perimeter * perimeter);
      out.total_lesion_area_mm2 += area;
      out.circularities.push_back(std::min(circ, kMaxCircularity));
    }
  out.lesion_count_2d = next;
  return out;
}

}  // namespace mir3d
