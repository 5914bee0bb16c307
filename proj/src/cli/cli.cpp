#include "mir3d/cli/cli.hpp"

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mir3d/core/embedding_io.hpp"
#include "mir3d/core/error.hpp"
#include "mir3d/core/file_util.hpp"
#include "mir3d/core/manifest.hpp"
#include "mir3d/eval/experiment.hpp"
#include "mir3d/eval/histogram.hpp"
#include "mir3d/eval/report_io.hpp"
#include "mir3d/eval/synth.hpp"
#include "mir3d/lesion/pipeline.hpp"
#include "mir3d/retrieval/multimodal.hpp"

namespace mir3d::cli {

namespace fs = std::filesystem;

namespace {

/// Usage problem detected after CLI11 parsing (exit 1, prints help).
class UsageError : public ValidationError {
 public:
  UsageError(const std::string& msg, const CLI::App* app) : ValidationError(msg), app(app) {}
  const CLI::App* app;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::string workdir;

  fs::path path(const std::string& p) const {
    fs::path q(p);
    if (workdir.empty() || q.is_absolute()) return q;
    return fs::path(workdir) / q;
  }
};

Connectivity parse_connectivity(int c) {
  if (c == 6) return Connectivity::face6;
  if (c == 26) return Connectivity::full26;
  throw ValidationError("connectivity must be 6 or 26");
}

std::vector<std::size_t> parse_k_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const long v = std::stol(item, &pos);
      if (pos != item.size() || v <= 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::logic_error&) {
      throw ValidationError("--k expects a comma-separated list of positive integers, got '" + text + "'");
    }
  }
  if (out.empty()) throw ValidationError("--k list is empty");
  return out;
}

std::vector<MethodSpec> parse_method_list(const std::vector<std::string>& names) {
  std::vector<MethodSpec> out;
  for (const auto& n : names) {
    std::stringstream ss(n);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) out.push_back(parse_method(item));
  }
  if (out.empty()) out.assign(kAllMethods.begin(), kAllMethods.end());
  return out;
}

VectorIndex load_method_index(const fs::path& index_dir, MethodSpec method) {
  const fs::path base = index_dir / index_name(method);
  fs::path meta = base;
  meta += ".meta";
  if (!fs::exists(meta))
    throw ValidationError("no index for method '" + std::string(to_string(method)) + "' in '" +
                          index_dir.string() + "' (expected " + meta.filename().string() + ")");
  VectorIndex index = load_index(base);
  if (index.kind() != index_name(method))
    throw ValidationError("index '" + base.string() + "' has kind '" + index.kind() + "', method '" +
                          std::string(to_string(method)) + "' needs '" + index_name(method) + "'");
  return index;
}

IndexSet load_indexes(const fs::path& index_dir, const std::vector<MethodSpec>& methods) {
  IndexSet set;
  for (auto m : methods) {
    if (auto p = pooling_of(m)) {
      if (!set.volume.contains(*p)) set.volume.emplace(*p, load_method_index(index_dir, m));
    } else if (!set.slice) {
      set.slice = load_method_index(index_dir, m);
    }
  }
  return set;
}

// ---------------------------------------------------------------- commands

struct IngestArgs {
  std::string manifest;
  int connectivity = 26;
};

int cmd_ingest(const Context& ctx, const IngestArgs& a) {
  const DatasetManifest m = load_manifest(ctx.path(a.manifest));
  std::size_t train = 0, test = 0, slices = 0, masks = 0;
  for (const auto& e : m.volumes) {
    (e.split == Split::train ? train : test) += 1;
    slices += load_volume_embeddings(m, e).rows();
    if (e.caption_embedding_path) {
      const auto cap = load_embeddings(m.resolve(*e.caption_embedding_path), e.volume_id);
      if (cap.dim() != m.embedding_dim)
        throw ValidationError("volume '" + e.volume_id + "': caption embedding dim differs from dataset");
    }
    if (e.lesion_mask_path) ++masks;
  }
  const auto mismatches = check_ground_truth(m, parse_connectivity(a.connectivity));
  for (const auto& mm : mismatches)
    ctx.err << "ground truth mismatch for '" << mm.volume_id << "': manifest flag="
            << (mm.stored_flag ? "true" : "false") << " group="
            << (mm.stored_group ? to_string(*mm.stored_group) : "-") << ", masks give flag="
            << (mm.computed_flag ? "true" : "false") << " group=" << to_string(mm.computed_group) << "\n";
  if (!mismatches.empty())
    throw ValidationError(std::to_string(mismatches.size()) + " volume(s) disagree with their lesion masks");

  ctx.out << "dataset " << m.dataset_name << ": " << m.volumes.size() << " volumes (" << train << " train, "
          << test << " test), " << slices << " slices, dim " << m.embedding_dim << ", " << masks
          << " lesion masks verified\n";
  return kOk;
}

struct BuildIndexArgs {
  std::string manifest;
  std::string mode;
  std::string pooling;
  std::string out;
};

int cmd_build_index(const Context& ctx, const BuildIndexArgs& a, const CLI::App* app) {
  if (a.mode == "volume" && a.pooling.empty()) throw UsageError("--mode volume requires --pooling", app);
  if (a.mode == "slice" && !a.pooling.empty()) throw UsageError("--pooling only applies to --mode volume", app);
  const DatasetManifest m = load_manifest(ctx.path(a.manifest));
  const MethodSpec method =
      a.mode == "slice" ? MethodSpec::slice_freq : parse_method("volume-" + a.pooling);
  const std::array<MethodSpec, 1> methods{method};
  const IndexSet set = build_indexes(m, methods);
  const VectorIndex& index = a.mode == "slice" ? set.slice_index() : set.volume_index(*pooling_of(method));
  const fs::path base = ctx.path(a.out) / index_name(method);
  save_index(index, base);
  ctx.out << "wrote " << index.kind() << " index with " << index.size() << " entries to " << base.string()
          << ".{emb,meta}\n";
  return kOk;
}

struct LesionsArgs {
  std::string manifest;
  std::string out;
  int connectivity = 26;
  bool update = false;
};

int cmd_lesions(const Context& ctx, const LesionsArgs& a) {
  const fs::path manifest_path = ctx.path(a.manifest);
  DatasetManifest m = load_manifest(manifest_path);
  const Connectivity conn = parse_connectivity(a.connectivity);

  std::string lesion_lines, slice_lines;
  std::size_t analysed = 0, changed = 0;
  std::vector<std::string> mismatched;
  for (auto& e : m.volumes) {
    if (!e.lesion_mask_path) continue;
    const VolumeLesionReport rep = analyze_manifest_entry(m, e, conn);
    ++analysed;
    for (const auto& r : rep.lesions) lesion_lines += lesion_record_line(r);
    for (const auto& s : rep.slices) slice_lines += slice_metrics_line(s);
    if (e.lesion_flag == rep.lesion_flag && e.lesion_group == rep.lesion_group) continue;
    if (a.update) {
      e.lesion_flag = rep.lesion_flag;
      e.lesion_group = rep.lesion_group;
      ++changed;
    } else if (e.lesion_flag != rep.lesion_flag || e.lesion_group) {
      mismatched.push_back(e.volume_id + " (manifest " +
                           std::string(e.lesion_group ? to_string(*e.lesion_group) : "-") + ", masks " +
                           std::string(to_string(rep.lesion_group)) + ")");
    }
  }
  if (!mismatched.empty()) {
    for (const auto& s : mismatched) ctx.err << "ground truth mismatch: " << s << "\n";
    throw ValidationError("lesion masks disagree with manifest ground truth; rerun with --update-ground-truth");
  }
  const fs::path out_dir = ctx.path(a.out);
  write_file_atomic(out_dir / "lesions.jsonl", lesion_lines);
  write_file_atomic(out_dir / "slice_metrics.jsonl", slice_lines);
  if (a.update && changed > 0) save_manifest(m, manifest_path);
  ctx.out << "analysed " << analysed << " lesion masks; " << changed << " ground-truth entries updated\n";
  return kOk;
}

struct CaptionsArgs {
  std::string manifest;
  std::string out;
  std::string lesions;
  int connectivity = 26;
};

int cmd_captions(const Context& ctx, const CaptionsArgs& a) {
  const DatasetManifest m = load_manifest(ctx.path(a.manifest));
  std::map<std::string, std::vector<LesionRecord>> by_volume;
  const bool have_records = !a.lesions.empty();
  if (have_records)
    for (auto& r : parse_lesion_records(read_text_file(ctx.path(a.lesions)))) by_volume[r.volume_id].push_back(r);

  std::string lines;
  for (const auto& e : m.volumes) {
    const std::string organ(to_string(e.organ_tag));
    int count = 0;
    std::optional<double> largest;
    auto take = [&](const std::vector<LesionRecord>& records) {
      for (const auto& r : records) {
        if (r.organ != organ) continue;
        ++count;
        largest = std::max(largest.value_or(0.0), r.length_cm);
      }
    };
    if (have_records && by_volume.contains(e.volume_id)) {
      take(by_volume[e.volume_id]);
    } else if (e.lesion_mask_path) {
      const auto rep = analyze_manifest_entry(m, e, parse_connectivity(a.connectivity));
      count = rep.organ_lesion_count;
      largest = rep.largest_length_cm;
    } else if (e.lesion_flag) {
      throw ValidationError("volume '" + e.volume_id +
                            "' has lesions but neither a lesion mask nor lesion records to describe them");
    }
    lines += caption_record_line(make_caption_record(e.volume_id, organ, count, largest));
  }
  write_file_atomic(ctx.path(a.out), lines);
  ctx.out << "wrote " << m.volumes.size() << " captions to " << ctx.path(a.out).string() << "\n";
  return kOk;
}

struct QueryArgs {
  std::string index_dir;
  std::string manifest;
  std::string volume;
  std::string caption_embedding;
  std::string method;
  std::size_t k = 10;
  std::size_t n_per_slice = kDefaultSlicesPerQuery;
  std::size_t caption_n = kDefaultSlicesPerQuery;
  std::string ensemble_first = "caption";
};

int cmd_query(const Context& ctx, const QueryArgs& a, const CLI::App* app) {
  const MethodSpec method = parse_method(a.method);
  if (a.volume.empty() && a.caption_embedding.empty())
    throw UsageError("query needs --volume or --caption-embedding", app);
  if (a.volume.empty() && method != MethodSpec::caption)
    throw UsageError("method '" + a.method + "' needs --volume", app);
  if (a.k == 0) throw ValidationError("--k must be positive");

  const DatasetManifest m = load_manifest(ctx.path(a.manifest));
  QueryInput input;
  if (!a.volume.empty()) {
    const VolumeEntry& entry = m.at(a.volume);
    input.volume_id = entry.volume_id;
    if (method != MethodSpec::caption) input.slices = load_volume_embeddings(m, entry);
    if (uses_caption(method) && a.caption_embedding.empty())
      input.caption = load_query_input(m, entry, MethodSpec::caption).caption;
  }
  if (!a.caption_embedding.empty()) {
    const auto cap = load_embeddings(ctx.path(a.caption_embedding), input.volume_id);
    if (cap.rows() != 1) throw ValidationError("caption embedding file must hold exactly one row");
    input.caption = std::vector<float>(cap.row(0).begin(), cap.row(0).end());
  }

  const std::vector<MethodSpec> methods{method};
  const IndexSet indexes = load_indexes(ctx.path(a.index_dir), methods);
  RetrievalOptions opts;
  opts.n_per_slice = a.n_per_slice;
  opts.caption_n = a.caption_n;
  opts.ensemble_first = a.ensemble_first == "slice-freq" ? EnsembleFirst::slice_freq : EnsembleFirst::caption;
  RankedList ranked = retrieve(indexes, method, input, a.k, opts);
  ranked.method = std::string(to_string(method));
  ctx.out << ranked_list_csv(ranked);
  return kOk;
}

struct EvaluateArgs {
  std::string manifest;
  std::string index_dir;
  std::vector<std::string> methods;
  std::string criterion = "group";
  std::string k = "3,5,10";
  std::string out;
  std::size_t ap_depth = 0;
  std::size_t n_per_slice = kDefaultSlicesPerQuery;
  std::size_t caption_n = kDefaultSlicesPerQuery;
  std::string ensemble_first = "caption";
};

int cmd_evaluate(const Context& ctx, const EvaluateArgs& a) {
  const DatasetManifest m = load_manifest(ctx.path(a.manifest));
  const RelevanceCriterion criterion = parse_criterion(a.criterion);
  const std::vector<MethodSpec> methods = parse_method_list(a.methods);

  ExperimentOptions opts;
  opts.k_list = parse_k_list(a.k);
  if (a.ap_depth > 0) opts.ap_depth = a.ap_depth;
  opts.retrieval.n_per_slice = a.n_per_slice;
  opts.retrieval.caption_n = a.caption_n;
  opts.retrieval.ensemble_first =
      a.ensemble_first == "slice-freq" ? EnsembleFirst::slice_freq : EnsembleFirst::caption;

  const IndexSet indexes = load_indexes(ctx.path(a.index_dir), methods);
  std::vector<MetricReport> reports;
  for (auto method : methods) reports.push_back(run_experiment(m, indexes, method, criterion, opts));

  const fs::path out_dir = ctx.path(a.out);
  for (const auto& r : reports) {
    write_file_atomic(out_dir / (r.method + ".csv"), report_csv(r));
    write_file_atomic(out_dir / (r.method + ".report.json"), report_json(r));
  }
  const std::string summary = summary_csv(reports, opts.k_list);
  write_file_atomic(out_dir / "summary.csv", summary);
  ctx.out << summary;
  return kOk;
}

struct StatsArgs {
  std::string lesions;
  double bin_width = 1.0;
  std::string out;
};

int cmd_stats(const Context& ctx, const StatsArgs& a) {
  const auto records = parse_lesion_records(read_text_file(ctx.path(a.lesions)));
  const std::string csv = histogram_csv(lesion_size_histogram(records, a.bin_width));
  if (a.out.empty())
    ctx.out << csv;
  else
    write_file_atomic(ctx.path(a.out), csv);
  return kOk;
}

struct SynthArgs {
  SynthConfig config;
  bool no_captions = false;
  std::string out;
};

int cmd_synth(const Context& ctx, SynthArgs a) {
  a.config.with_captions = !a.no_captions;
  const SynthDataset ds = synth_generate(a.config);
  write_synth_dataset(ds, ctx.path(a.out));
  ctx.out << "wrote " << ds.manifest.volumes.size() << " volumes to " << ctx.path(a.out).string() << "\n";
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"3D medical image retrieval engine and benchmark harness", "mir3d"};
  app.require_subcommand(1);
  Context ctx{out, err, {}};
  app.add_option("--workdir", ctx.workdir, "Resolve relative paths against this directory");

  const std::vector<std::string> kMethodNames = [] {
    std::vector<std::string> v;
    for (auto mth : kAllMethods) v.emplace_back(to_string(mth));
    return v;
  }();

  IngestArgs ingest;
  auto* sub_ingest = app.add_subcommand("ingest", "Validate a manifest, its embeddings and mask-derived labels");
  sub_ingest->add_option("--manifest", ingest.manifest, "Dataset manifest (JSON)")->required();
  sub_ingest->add_option("--connectivity", ingest.connectivity, "3D connectivity for lesion labelling")
      ->check(CLI::IsMember({6, 26}));

  BuildIndexArgs build;
  auto* sub_build = app.add_subcommand("build-index", "Build a slice or pooled-volume index over the train split");
  sub_build->add_option("--manifest", build.manifest, "Dataset manifest (JSON)")->required();
  sub_build->add_option("--mode", build.mode, "slice | volume")->required()->check(CLI::IsMember({"slice", "volume"}));
  sub_build->add_option("--pooling", build.pooling, "median | max | average | std (volume mode only)")
      ->check(CLI::IsMember({"median", "max", "average", "std"}));
  sub_build->add_option("--out", build.out, "Index directory")->required();

  LesionsArgs lesions;
  auto* sub_lesions = app.add_subcommand("lesions", "Extract lesion records and slice metrics from lesion masks");
  sub_lesions->add_option("--manifest", lesions.manifest, "Dataset manifest (JSON)")->required();
  sub_lesions->add_option("--out", lesions.out, "Output directory for lesions.jsonl and slice_metrics.jsonl")
      ->required();
  sub_lesions->add_option("--connectivity", lesions.connectivity, "6 or 26")->check(CLI::IsMember({6, 26}));
  sub_lesions->add_flag("--update-ground-truth", lesions.update,
                        "Rewrite manifest lesion_flag/lesion_group from the masks");

  CaptionsArgs captions;
  auto* sub_captions = app.add_subcommand("captions", "Generate template captions for every volume");
  sub_captions->add_option("--manifest", captions.manifest, "Dataset manifest (JSON)")->required();
  sub_captions->add_option("--out", captions.out, "Caption records output (JSON lines)")->required();
  sub_captions->add_option("--lesions", captions.lesions, "Lesion records from the lesions command");
  sub_captions->add_option("--connectivity", captions.connectivity, "6 or 26")->check(CLI::IsMember({6, 26}));

  QueryArgs query;
  auto* sub_query = app.add_subcommand("query", "Rank indexed volumes for one query");
  sub_query->add_option("--index-dir", query.index_dir, "Directory written by build-index")->required();
  sub_query->add_option("--manifest", query.manifest, "Dataset manifest (JSON)")->required();
  sub_query->add_option("--volume", query.volume, "Query volume id from the manifest");
  sub_query->add_option("--caption-embedding", query.caption_embedding, "EMB1 file with one caption embedding");
  sub_query->add_option("--method", query.method, "Retrieval method")->required()->check(CLI::IsMember(kMethodNames));
  sub_query->add_option("--k", query.k, "Number of volumes to return")->check(CLI::PositiveNumber);
  sub_query->add_option("--n-per-slice", query.n_per_slice, "Slices retrieved per query slice")
      ->check(CLI::PositiveNumber);
  sub_query->add_option("--caption-n", query.caption_n, "Slices retrieved per caption query")
      ->check(CLI::PositiveNumber);
  sub_query->add_option("--ensemble-first", query.ensemble_first, "caption | slice-freq")
      ->check(CLI::IsMember({"caption", "slice-freq"}));

  EvaluateArgs evaluate;
  auto* sub_eval = app.add_subcommand("evaluate", "Run test-split queries and report P@k and AP");
  sub_eval->add_option("--manifest", evaluate.manifest, "Dataset manifest (JSON)")->required();
  sub_eval->add_option("--index-dir", evaluate.index_dir, "Directory written by build-index")->required();
  sub_eval->add_option("--methods", evaluate.methods, "Comma-separated methods (default: all)")->delimiter(',');
  sub_eval->add_option("--criterion", evaluate.criterion, "flag | group")->check(CLI::IsMember({"flag", "group"}));
  sub_eval->add_option("--k", evaluate.k, "Comma-separated cut-offs for P@k");
  sub_eval->add_option("--out", evaluate.out, "Report directory")->required();
  sub_eval->add_option("--ap-depth", evaluate.ap_depth, "Truncate rankings before AP (0 = full list)");
  sub_eval->add_option("--n-per-slice", evaluate.n_per_slice, "Slices retrieved per query slice")
      ->check(CLI::PositiveNumber);
  sub_eval->add_option("--caption-n", evaluate.caption_n, "Slices retrieved per caption query")
      ->check(CLI::PositiveNumber);
  sub_eval->add_option("--ensemble-first", evaluate.ensemble_first, "caption | slice-freq")
      ->check(CLI::IsMember({"caption", "slice-freq"}));

  StatsArgs stats;
  auto* sub_stats = app.add_subcommand("stats", "Largest-lesion size histogram per organ");
  sub_stats->add_option("--lesions", stats.lesions, "Lesion records (JSON lines)")->required();
  sub_stats->add_option("--bin-width", stats.bin_width, "Bin width in cm")->check(CLI::PositiveNumber);
  sub_stats->add_option("--out", stats.out, "Histogram CSV (default: standard output)");

  SynthArgs synth;
  auto* sub_synth = app.add_subcommand("synth", "Generate a planted-cluster synthetic dataset");
  sub_synth->add_option("--out", synth.out, "Dataset directory")->required();
  sub_synth->add_option("--seed", synth.config.seed, "Random seed");
  sub_synth->add_option("--groups", synth.config.num_groups, "Number of lesion groups (2-4)");
  sub_synth->add_option("--volumes-per-group", synth.config.volumes_per_group, "Volumes per group");
  sub_synth->add_option("--slices", synth.config.slices_per_volume, "Slices per volume");
  sub_synth->add_option("--dim", synth.config.dim, "Embedding dimension");
  sub_synth->add_option("--separation", synth.config.cluster_separation, "Distance of group centres from origin");
  sub_synth->add_option("--sigma", synth.config.noise_sigma, "Per-component noise standard deviation");
  sub_synth->add_flag("--masks", synth.config.with_masks, "Also rasterize lesion and organ masks");
  sub_synth->add_flag("--no-captions", synth.no_captions, "Skip caption embeddings");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? kOk : kValidation;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err) == 0 ? kOk : kValidation;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kValidation;
  }

  try {
    if (*sub_ingest) return cmd_ingest(ctx, ingest);
    if (*sub_build) return cmd_build_index(ctx, build, sub_build);
    if (*sub_lesions) return cmd_lesions(ctx, lesions);
    if (*sub_captions) return cmd_captions(ctx, captions);
    if (*sub_query) return cmd_query(ctx, query, sub_query);
    if (*sub_eval) return cmd_evaluate(ctx, evaluate);
    if (*sub_stats) return cmd_stats(ctx, stats);
    if (*sub_synth) return cmd_synth(ctx, synth);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << e.app->help();
    return kValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  }
  return kValidation;
}

}  // namespace mir3d::cli
