// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "mir3d/cli/cli.hpp"
#include "mir3d/core/error.hpp"
#include "mir3d/core/file_util.hpp"
#include "mir3d/core/manifest.hpp"
#include "mir3d/eval/experiment.hpp"
#include "mir3d/eval/metrics.hpp"
#include "mir3d/eval/synth.hpp"
#include "mir3d/knn/vector_index.hpp"
#include "mir3d/lesion/components.hpp"
#include "mir3d/lesion/grouping.hpp"
#include "mir3d/lesion/morphology.hpp"
#include "mir3d/lesion/slice_metrics.hpp"
#include "mir3d/retrieval/multimodal.hpp"
#include "mir3d/retrieval/slice_retrieval.hpp"
#include "mir3d/retrieval/volume_retrieval.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace mir3d {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Collects failures of one criterion; the first few are printed.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_++ < 5) detail_ << "    " << what << "\n";
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream s;
    s.precision(17);
    s << what << ": got " << got << ", want " << want << " +/- " << tol;
    expect(std::abs(got - want) <= tol, s.str());
  }
  void note(const std::string& n) { notes_ += (notes_.empty() ? "" : "; ") + n; }
  bool ok() const { return failures_ == 0; }
  std::string detail() const { return detail_.str(); }
  const std::string& notes() const { return notes_; }

 private:
  int failures_ = 0;
  std::ostringstream detail_;
  std::string notes_;
};

// 1. Exact k-NN against a full sort.
void knn_oracle(Check& c) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::size_t queries = 0;
  for (int corpus = 0; corpus < 200; ++corpus) {
    const std::uint32_t dim = 1 + rng() % 64;
    const std::size_t n = rng() % 1001;
    const bool coarse = corpus % 3 == 0;  // integer grid forces distance ties
    std::uniform_int_distribution<int> grid(-2, 2);
    std::uniform_real_distribution<float> real(-1, 1);
    const auto draw = [&] {
      std::vector<float> v(dim);
      for (auto& x : v) x = coarse ? static_cast<float>(grid(rng)) : real(rng);
      return v;
    };
    oracle::Items items;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i < n; ++i) items.push_back({"key" + std::to_string(order[i]), draw()});
    VectorIndex index;
    try {
      index = build_index(items, dim);
    } catch (const std::exception& e) {
      c.expect(false, std::string("build_index threw: ") + e.what());
      continue;
    }
    for (int q = 0; q < 5; ++q, ++queries) {
      const auto query = (q == 0 && n > 0) ? items[rng() % n].second : draw();
      const std::size_t k = 1 + rng() % (n + 10);
      const auto got = index.search(query, k);
      const auto want = oracle::knn(items, query, k);
      bool same = got.size() == want.size();
      for (std::size_t i = 0; same && i < got.size(); ++i)
        same = got[i].key == want[i].second && got[i].distance == want[i].first;
      c.expect(same, "corpus " + std::to_string(corpus) + " query " + std::to_string(q) + " differs from oracle");
    }
  }
  const double secs = seconds_since(t0);
  c.expect(secs < 30.0, "runtime " + std::to_string(secs) + " s exceeds 30 s");
  c.note("200 corpora, " + std::to_string(queries) + " queries, " + std::to_string(secs) + " s");
}

// 2. Freq / MaxScore / ScoreSum against their definitions.
void scorer_oracle(Check& c) {
  std::mt19937_64 rng(7);
  std::exponential_distribution<double> dist(0.5);
  for (int t = 0; t < 100; ++t) {
    SlicePool pool;
    pool.query_volume_id = "query";
    pool.num_query_slices = 1 + rng() % 8;
    pool.n_per_slice = 1 + rng() % 20;
    std::vector<std::pair<std::string, double>> raw;
    const std::size_t volumes = 1 + rng() % 12;
    for (std::size_t s = 0; s < pool.num_query_slices; ++s)
      for (std::size_t j = 0; j < pool.n_per_slice; ++j) {
        const std::string v = "vol" + std::to_string(rng() % volumes);
        const double d = (rng() % 10 == 0) ? 0.0 : dist(rng);
        raw.emplace_back(v, d);
        pool.retrieved.push_back({v + "#" + std::to_string(raw.size()), v, d});
      }
    const auto want = oracle::slice_scores(raw);
    const auto check = [&](const std::vector<VolumeScore>& got, const std::map<std::string, double>& ref,
                           const char* name) {
      c.expect(got.size() == ref.size(), std::string(name) + ": wrong volume count");
      for (const auto& s : got) {
        const auto it = ref.find(s.volume_id);
        c.expect(it != ref.end(), std::string(name) + ": unexpected volume " + s.volume_id);
        if (it != ref.end()) c.near(s.score, it->second, 1e-12, std::string(name) + " " + s.volume_id);
      }
    };
    const auto freq = score_freq(pool), mx = score_max(pool), sm = score_sum(pool);
    check(freq, want.freq, "Freq");
    check(mx, want.max_score, "MaxScore");
    check(sm, want.score_sum, "ScoreSum");
    double total = 0;
    for (const auto& s : freq) total += s.score;
    c.near(total, 1.0, 1e-12, "sum of Freq");
    for (std::size_t i = 0; i < mx.size() && i < sm.size(); ++i)
      c.expect(sm[i].volume_id == mx[i].volume_id && sm[i].score >= mx[i].score,
               "ScoreSum < MaxScore for " + sm[i].volume_id);
  }
  c.note("100 pools");
}

// 3. Pooling against column-wise reductions.
void pooling_oracle(Check& c) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::uint32_t dim = 1 + rng() % 64;
    const std::size_t n = 1 + rng() % 40;
    std::vector<std::vector<float>> rows;
    for (std::size_t i = 0; i < n; ++i) rows.push_back(testing::random_vector(rng, dim, -10, 10));
    const auto to_matrix = [&](const std::vector<std::vector<float>>& r) {
      std::vector<std::uint32_t> idx(r.size());
      std::iota(idx.begin(), idx.end(), 0u);
      std::vector<float> values;
      for (const auto& row : r) values.insert(values.end(), row.begin(), row.end());
      return EmbeddingMatrix("v", dim, idx, values);
    };
    const auto m = to_matrix(rows);
    auto shuffled = rows;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto ms = to_matrix(shuffled);
    for (auto p : kAllPoolings) {
      const auto got = pool_embeddings(m, p).vector;
      const auto perm = pool_embeddings(ms, p).vector;
      for (std::uint32_t j = 0; j < dim; ++j) {
        const auto col = oracle::column(rows, j);
        double want = 0;
        switch (p) {
          case PoolingMethod::median: want = oracle::median(col); break;
          case PoolingMethod::max: want = oracle::max(col); break;
          case PoolingMethod::average: want = oracle::mean(col); break;
          case PoolingMethod::std: want = oracle::pop_std(col); break;
        }
        c.near(got[j], want, 1e-12, std::string(to_string(p)) + " component");
        c.near(perm[j], got[j], 1e-12, std::string(to_string(p)) + " permutation");
      }
    }
    const auto constant = to_matrix(std::vector<std::vector<float>>(n, rows[0]));
    for (double x : pool_embeddings(constant, PoolingMethod::std).vector) c.expect(x == 0.0, "std of constant rows != 0");
  }
  c.note("200 matrices x 4 poolings");
}

// 4. Union-find labelling against flood fill.
void components_oracle(Check& c) {
  std::mt19937_64 rng(4);
  std::size_t voxels = 0;
  for (int t = 0; t < 100; ++t) {
    const Dims d{1 + static_cast<std::int64_t>(rng() % 64), 1 + static_cast<std::int64_t>(rng() % 64),
                 1 + static_cast<std::int64_t>(rng() % 64)};
    voxels += static_cast<std::size_t>(d.count());
    LabelVolume mask(d, {});
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(d.count()));
    std::bernoulli_distribution on(0.05 + 0.4 * std::uniform_real_distribution<double>(0, 1)(rng));
    for (std::size_t i = 0; i < raw.size(); ++i) mask.voxels()[i] = raw[i] = on(rng);
    const auto conn = t % 2 ? Connectivity::face6 : Connectivity::full26;
    std::set<std::vector<std::int64_t>> got;
    for (const auto& comp : connected_components(mask, conn)) {
      std::vector<std::int64_t> p;
      for (const auto& v : comp.voxels) p.push_back(v.x + d.nx * (v.y + d.ny * v.z));
      std::sort(p.begin(), p.end());
      got.insert(std::move(p));
    }
    c.expect(got == oracle::flood_fill(raw, d.nx, d.ny, d.nz, static_cast<int>(conn)),
             "partition differs on mask " + std::to_string(t));
  }
  LabelVolume pair({2, 2, 2}, {});
  pair.set(0, 0, 0, 1);
  pair.set(1, 1, 1, 1);
  c.expect(connected_components(pair, Connectivity::full26).size() == 1, "corner pair not joined at 26");
  c.expect(connected_components(pair, Connectivity::face6).size() == 2, "corner pair joined at 6");
  c.note("100 masks, " + std::to_string(voxels) + " voxels");
}

// 5. Morphology on analytic shapes.
void analytic_shapes(Check& c) {
  const double sp = 0.5, r = 10.0;
  const std::int64_t n = static_cast<std::int64_t>(2 * r / sp) + 5;
  LabelVolume sphere({n, n, n}, {sp, sp, sp});
  const double ctr = (n - 1) / 2.0;
  for (std::int64_t z = 0; z < n; ++z)
    for (std::int64_t y = 0; y < n; ++y)
      for (std::int64_t x = 0; x < n; ++x) {
        const double dx = (x - ctr) * sp, dy = (y - ctr) * sp, dz = (z - ctr) * sp;
        if (dx * dx + dy * dy + dz * dz <= r * r) sphere.set(x, y, z, 1);
      }
  const auto comps = connected_components(sphere);
  c.expect(comps.size() == 1, "sphere is not one component");
  if (!comps.empty()) {
    const auto m = lesion_morphology(comps[0], sphere.spacing());
    for (double a : m.ellipsoid_axes_mm) c.near(a, 20.0, 0.05 * 20.0, "sphere axis (mm)");
    c.note("sphere axes " + std::to_string(m.ellipsoid_axes_mm[0]) + "/" + std::to_string(m.ellipsoid_axes_mm[2]));
  }

  const int R = 50, w = 2 * R + 5;
  LabelVolume disk({w, w, 1}, {});
  const double dc = (w - 1) / 2.0;
  for (int y = 0; y < w; ++y)
    for (int x = 0; x < w; ++x)
      if ((x - dc) * (x - dc) + (y - dc) * (y - dc) <= R * R) disk.set(x, y, 0, 1);
  const auto sm = slice_metrics(disk, 0);
  c.expect(sm.circularities.size() == 1, "disk is not one 2D component");
  if (!sm.circularities.empty()) {
    c.expect(sm.circularities[0] >= 0.95 && sm.circularities[0] <= 1.05,
             "disk circularity " + std::to_string(sm.circularities[0]));
    c.note("disk circularity " + std::to_string(sm.circularities[0]));
  }

  LesionComponent ten;
  for (int i = 0; i < 10; ++i) ten.voxels.push_back({i % 3, i / 3, 0});
  const auto m = lesion_morphology(ten, {1, 1, 2});
  c.expect(m.physical_volume_mm3 == 20.0, "10 voxels at (1,1,2) mm: " + std::to_string(m.physical_volume_mm3));
}

// 6. Lesion grouping.
void grouping(Check& c) {
  using V = std::vector<double>;
  c.expect(classify_lesion_group(V{}) == LesionGroup::G0, "empty -> G0");
  c.expect(classify_lesion_group(V{1.5}) == LesionGroup::G1, "{1.5} -> G1");
  c.expect(classify_lesion_group(V{3, 1}) == LesionGroup::G2, "{3,1} -> G2");
  c.expect(classify_lesion_group(V{6}) == LesionGroup::G3, "{6} -> G3");
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> len(0.05, 8.0);
  for (int t = 0; t < 1000; ++t) {
    V l(1 + rng() % 8);
    for (auto& x : l) x = len(rng);
    const auto g = classify_lesion_group(l);
    std::shuffle(l.begin(), l.end(), rng);
    c.expect(classify_lesion_group(l) == g, "order changed the group");
  }
  c.note("1000 shuffles");
}

// 7. P@k and AP.
void metrics(Check& c) {
  using P = std::vector<std::uint8_t>;
  c.near(average_precision(P{1, 0, 1}, 2), 0.8333333333333333, 1e-9, "AP [1,0,1]");
  std::mt19937_64 rng(5);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng() % 50, rel = 1 + rng() % n;
    P pattern(n, 0);
    std::fill(pattern.begin(), pattern.begin() + static_cast<std::ptrdiff_t>(rel), 1);
    std::shuffle(pattern.begin(), pattern.end(), rng);
    const double ap = average_precision(pattern, rel);
    c.near(ap, oracle::ap_threshold(pattern, rel), 1e-12, "AP vs threshold formula");
    c.near(ap, oracle::ap_mean_precision(pattern), 1e-12, "AP vs mean precision at relevant ranks");
  }
  c.near(precision_at_k(P{1, 1}, 5), 0.4, 1e-15, "P@5 of short list");
  c.note("1000 permutations");
}

// 8. Caption templates.
void captions(Check& c) {
  c.expect(generate_caption("liver", 0, std::nullopt) == "A normal image of the liver with no tumors present.",
           "normal caption");
  c.expect(generate_caption("liver", 11, 2.26) ==
               "3D volume image showcasing a liver with 11 tumors, the largest of which measures 2.26 centimeters "
               "in length",
           "lesion caption");
}

int cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::vector<std::string> full{"mir3d"};
  full.insert(full.end(), args.begin(), args.end());
  std::ostringstream o, e;
  const int code = cli::run_cli(full, o, e);
  if (out) *out = o.str();
  if (code != 0) std::cerr << "    mir3d exited " << code << ": " << e.str();
  return code;
}

/// synth -> build-index (slice + 4 poolings) -> evaluate, all through the CLI.
bool cli_pipeline(const std::filesystem::path& root) {
  const auto data = (root / "data").string(), idx = (root / "idx").string(), rep = (root / "reports").string();
  const auto manifest = data + "/manifest.json";
  if (cli({"synth", "--out", data, "--seed", "42"}) != 0) return false;
  if (cli({"build-index", "--manifest", manifest, "--mode", "slice", "--out", idx}) != 0) return false;
  for (const char* p : {"median", "max", "average", "std"})
    if (cli({"build-index", "--manifest", manifest, "--mode", "volume", "--pooling", p, "--out", idx}) != 0)
      return false;
  return cli({"evaluate", "--manifest", manifest, "--index-dir", idx, "--criterion", "group", "--out", rep}) == 0;
}

// 9. Planted clusters end to end.
void planted(Check& c) {
  const auto evaluate = [&](double separation, double sigma, const std::string& tag) {
    testing::TempDir dir("mir3d-accept");
    SynthConfig cfg;
    cfg.cluster_separation = separation;
    cfg.noise_sigma = sigma;
    write_synth_dataset(synth_generate(cfg), dir.path());
    const auto manifest = load_manifest(dir / "manifest.json");
    std::map<std::string, MetricReport> out;
    for (auto m : {MethodSpec::volume_average, MethodSpec::slice_freq}) {
      out[std::string(to_string(m))] = run_experiment(manifest, m, RelevanceCriterion::group);
      const auto& r = out[std::string(to_string(m))];
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s sep=%g sigma=%g: P@10=%.4f AP=%.4f", std::string(to_string(m)).c_str(),
                    separation, sigma, r.macro.at("P@10"), r.macro.at("AP"));
      c.note(buf);
    }
    (void)tag;
    return out;
  };
  for (const auto& [name, r] : evaluate(10.0, 0.1, "planted")) {
    c.expect(r.macro.at("P@10") == 1.0, name + " P@10 != 1");
    c.expect(r.macro.at("AP") == 1.0, name + " AP != 1");
  }
  for (const auto& [name, r] : evaluate(1.0, 1.0, "degraded"))
    c.expect(r.macro.at("P@10") < 1.0, name + " P@10 not below 1 on degraded data");

  testing::TempDir dir("mir3d-accept");
  const auto t0 = Clock::now();
  c.expect(cli_pipeline(dir.path()), "CLI pipeline failed");
  const double secs = seconds_since(t0);
  c.expect(secs < 120.0, "pipeline took " + std::to_string(secs) + " s");
  std::string summary = read_text_file(dir / "reports/summary.csv");
  c.expect(summary.find("volume-average,1,1,1,1\n") != std::string::npos, "summary lacks perfect volume-average row");
  c.expect(summary.find("slice-freq,1,1,1,1\n") != std::string::npos, "summary lacks perfect slice-freq row");
  c.note("CLI pipeline " + std::to_string(secs) + " s");
}

// 10. Two CLI runs give byte-identical artifacts.
void determinism(Check& c) {
  testing::TempDir a("mir3d-accept"), b("mir3d-accept");
  c.expect(cli_pipeline(a.path()) && cli_pipeline(b.path()), "CLI pipeline failed");
  std::size_t compared = 0;
  for (const char* sub : {"idx", "reports"}) {
    for (const auto& e : std::filesystem::directory_iterator(a / sub)) {
      const auto other = b / sub / e.path().filename();
      c.expect(std::filesystem::exists(other), "missing " + other.string());
      if (std::filesystem::exists(other))
        c.expect(read_binary_file(e.path()) == read_binary_file(other), "differs: " + e.path().filename().string());
      ++compared;
    }
  }
  c.expect(compared >= 10 + 19, "too few artifacts: " + std::to_string(compared));
  c.note(std::to_string(compared) + " files compared");
}

// 11. Split leakage.
void leakage(Check& c) {
  testing::TempDir dir("mir3d-accept");
  SynthConfig cfg;
  cfg.volumes_per_group = 5;
  write_synth_dataset(synth_generate(cfg), dir.path());
  auto manifest = load_manifest(dir / "manifest.json");
  auto dup = *manifest.split(Split::test).front();
  dup.split = Split::train;
  manifest.volumes.push_back(dup);
  bool raised = false;
  try {
    run_experiment(manifest, MethodSpec::volume_average, RelevanceCriterion::group);
  } catch (const ValidationError& e) {
    raised = true;
    c.note(e.what());
  }
  c.expect(raised, "no validation error for id " + dup.volume_id + " in both splits");
}

}  // namespace
}  // namespace mir3d

int main() {
  using namespace mir3d;
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"1  k-NN oracle equivalence", knn_oracle},
      {"2  slice scorer correctness", scorer_oracle},
      {"3  pooling correctness", pooling_oracle},
      {"4  connected components", components_oracle},
      {"5  morphology vs analytic shapes", analytic_shapes},
      {"6  lesion grouping", grouping},
      {"7  metric correctness", metrics},
      {"8  caption fidelity", captions},
      {"9  planted-structure end to end", planted},
      {"10 determinism", determinism},
      {"11 leakage guard", leakage},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Check c;
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << (c.ok() ? "PASS " : "FAIL ") << name;
    if (!c.notes().empty()) std::cout << "  (" << c.notes() << ")";
    std::cout << "\n" << c.detail() << std::flush;
    failed += !c.ok();
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed\n" : "all criteria passed\n");
  return failed ? 1 : 0;
}
