#include "mir3d/eval/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "mir3d/core/embedding_io.hpp"
#include "mir3d/core/error.hpp"
#include "mir3d/core/label_volume_io.hpp"
#include "mir3d/core/manifest.hpp"

namespace mir3d {

namespace {

constexpr std::array<Organ, 4> kOrgans{Organ::liver, Organ::colon, Organ::pancreas, Organ::lung};

// Mask geometry: 80 mm cube sampled at 1.25 x 1.25 x 2 mm.
constexpr Dims kMaskDims{64, 64, 40};
constexpr Spacing kMaskSpacing{1.25, 1.25, 2.0};
constexpr double kOrganRadiusMm = 38.0;

struct Ellipsoid {
  std::array<double, 3> center_mm;
  std::array<double, 3> semi_axes_mm;
};

void rasterize(LabelVolume& vol, const Ellipsoid& e) {
  const auto& d = vol.dims();
  const auto& s = vol.spacing();
  for (std::int64_t z = 0; z < d.nz; ++z)
    for (std::int64_t y = 0; y < d.ny; ++y)
      for (std::int64_t x = 0; x < d.nx; ++x) {
        const double px = (x * s.sx - e.center_mm[0]) / e.semi_axes_mm[0];
        const double py = (y * s.sy - e.center_mm[1]) / e.semi_axes_mm[1];
        const double pz = (z * s.sz - e.center_mm[2]) / e.semi_axes_mm[2];
        if (px * px + py * py + pz * pz <= 1.0) vol.set(x, y, z, 1);
      }
}

// Lesions sized so the recomputed group equals the planted one:
// G1 one lesion ~1.2 cm, G2 a ~3 cm lesion plus a ~1 cm satellite,
// G3 one lesion ~6.4 cm. Sizes jitter by +-10%.
std::vector<Ellipsoid> lesions_for(LesionGroup g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> jitter(0.9, 1.1);
  const double c = 40.0;
  auto scaled = [&](std::array<double, 3> full_axes) {
    const double f = jitter(rng);
    return std::array<double, 3>{full_axes[0] * f / 2, full_axes[1] * f / 2, full_axes[2] * f / 2};
  };
  switch (g) {
    case LesionGroup::G0: return {};
    case LesionGroup::G1: return {{{c, c, c}, scaled({12, 10, 8})}};
    case LesionGroup::G2: return {{{c - 12, c, c}, scaled({30, 24, 20})}, {{c + 20, c, c}, scaled({10, 8, 8})}};
    case LesionGroup::G3: return {{{c, c, c}, scaled({64, 52, 44})}};
  }
  return {};
}

}  // namespace

void SynthConfig::validate() const {
  if (num_groups < 2 || num_groups > 4) throw ValidationError("synth: num_groups must be in [2, 4]");
  if (volumes_per_group < 1) throw ValidationError("synth: volumes_per_group must be positive");
  if (slices_per_volume < 1) throw ValidationError("synth: slices_per_volume must be positive");
  if (dim == 0) throw ValidationError("synth: dim must be positive");
  if (static_cast<std::uint32_t>(num_groups) > dim)
    throw ValidationError("synth: dim must be at least num_groups for orthogonal centres");
  if (!(cluster_separation > 0)) throw ValidationError("synth: cluster_separation must be positive");
  if (!(noise_sigma > 0)) throw ValidationError("synth: noise_sigma must be positive");
}

SynthDataset synth_generate(const SynthConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t dim = config.dim;

  SynthDataset ds;
  // Gram-Schmidt over Gaussian draws gives random orthonormal directions.
  for (int g = 0; g < config.num_groups; ++g) {
    std::vector<double> v(dim);
    double norm = 0.0;
    do {
      for (auto& x : v) x = gauss(rng);
      for (const auto& prev : ds.centers) {
        double dot = 0.0;
        for (std::size_t j = 0; j < dim; ++j) dot += v[j] * prev[j];
        dot /= config.cluster_separation * config.cluster_separation;
        for (std::size_t j = 0; j < dim; ++j) v[j] -= dot * prev[j];
      }
      norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    } while (norm < 1e-6);
    for (auto& x : v) x *= config.cluster_separation / norm;
    ds.centers.push_back(std::move(v));
  }

  auto noisy = [&](const std::vector<double>& center) {
    std::vector<float> out(dim);
    for (std::size_t j = 0; j < dim; ++j) out[j] = static_cast<float>(center[j] + config.noise_sigma * gauss(rng));
    return out;
  };

  DatasetManifest& m = ds.manifest;
  m.dataset_name = "synth-seed" + std::to_string(config.seed);
  m.embedding_dim = config.dim;

  const int test_per_group = (config.volumes_per_group + 2) / 5;  // round(20%)
  int ordinal = 0;
  for (int g = 0; g < config.num_groups; ++g) {
    std::vector<int> order(static_cast<std::size_t>(config.volumes_per_group));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<bool> is_test(order.size(), false);
    for (int i = 0; i < test_per_group; ++i) is_test[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = true;

    const auto group = static_cast<LesionGroup>(g);
    for (int i = 0; i < config.volumes_per_group; ++i, ++ordinal) {
      char id_buf[48];
      std::snprintf(id_buf, sizeof(id_buf), "synth_g%d_%03d", g, i);
      const std::string id = id_buf;

      VolumeEntry e;
      e.volume_id = id;
      e.organ_tag = kOrgans[static_cast<std::size_t>(ordinal) % kOrgans.size()];
      e.split = is_test[static_cast<std::size_t>(i)] ? Split::test : Split::train;
      e.slice_embeddings_path = "embeddings/" + id + ".emb";
      e.lesion_flag = group != LesionGroup::G0;
      e.lesion_group = group;

      std::vector<std::uint32_t> slices(static_cast<std::size_t>(config.slices_per_volume));
      std::iota(slices.begin(), slices.end(), 0u);
      std::vector<float> values;
      values.reserve(slices.size() * dim);
      for (std::size_t s = 0; s < slices.size(); ++s) {
        auto row = noisy(ds.centers[static_cast<std::size_t>(g)]);
        values.insert(values.end(), row.begin(), row.end());
      }
      ds.slice_embeddings.emplace(id, EmbeddingMatrix(id, config.dim, std::move(slices), std::move(values)));

      if (config.with_captions) {
        e.caption_embedding_path = "captions/" + id + ".emb";
        ds.caption_embeddings.emplace(
            id, EmbeddingMatrix(id, config.dim, {0}, noisy(ds.centers[static_cast<std::size_t>(g)])));
      }

      if (config.with_masks) {
        e.lesion_mask_path = "masks/" + id + "_lesion.hdr";
        e.organ_mask_path = "masks/" + id + "_organ.hdr";
        LabelVolume lesion(kMaskDims, kMaskSpacing, VoxelType::u8);
        for (const auto& ell : lesions_for(group, rng)) rasterize(lesion, ell);
        LabelVolume organ(kMaskDims, kMaskSpacing, VoxelType::u8);
        rasterize(organ, {{40, 40, 40}, {kOrganRadiusMm, kOrganRadiusMm, kOrganRadiusMm}});
        ds.lesion_masks.emplace(id, std::move(lesion));
        ds.organ_masks.emplace(id, std::move(organ));
      }
      m.volumes.push_back(std::move(e));
    }
  }
  m.validate();
  return ds;
}

void write_synth_dataset(const SynthDataset& ds, const std::filesystem::path& dir) {
  for (const auto& [id, mat] : ds.slice_embeddings) write_embeddings(dir / "embeddings" / (id + ".emb"), mat);
  for (const auto& [id, mat] : ds.caption_embeddings) write_embeddings(dir / "captions" / (id + ".emb"), mat);
  for (const auto& v : ds.manifest.volumes) {
    if (auto it = ds.lesion_masks.find(v.volume_id); it != ds.lesion_masks.end())
      write_label_volume(dir / *v.lesion_mask_path, it->second);
    if (auto it = ds.organ_masks.find(v.volume_id); it != ds.organ_masks.end())
      write_label_volume(dir / *v.organ_mask_path, it->second, {{1, std::string(to_string(v.organ_tag))}});
  }
  save_manifest(ds.manifest, dir / "manifest.json");
}

}  // namespace mir3d
