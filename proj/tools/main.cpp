#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tempattr/clustering.hpp"
#include "tempattr/data.hpp"
#include "tempattr/encoders.hpp"
#include "tempattr/errors.hpp"
#include "tempattr/io.hpp"
#include "tempattr/masking.hpp"
#include "tempattr/ridge.hpp"
#include "tempattr/svg.hpp"
#include "tempattr/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tempattr;

namespace {

/// Deletes every tracked path unless commit() ran, so a failed command
/// leaves no partial outputs behind.
class OutputTracker {
 public:
  ~OutputTracker() {
    for (const fs::path& p : paths_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }

  fs::path track(fs::path p) {
    paths_.push_back(p);
    return p;
  }

  /// Tracks both the data file and its metadata sidecar.
  fs::path track_with_sidecar(fs::path p) {
    paths_.push_back(sidecar_path(p));
    return track(std::move(p));
  }

  void commit() { paths_.clear(); }

 private:
  std::vector<fs::path> paths_;
};

long long parse_int(std::string_view text) {
  long long v = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::BadArgs,
                "expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

/// "0..200", "0..200:5", "3", or comma-joined mixtures of those.
std::vector<Eigen::Index> parse_starts(const std::string& text) {
  std::vector<Eigen::Index> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view item(text.data() + pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) {
      throw Error(ErrorCode::BadArgs, "empty element in mask starts");
    }
    const std::size_t dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(parse_int(item));
      continue;
    }
    const std::size_t colon = item.find(':', dots + 2);
    const long long lo = parse_int(item.substr(0, dots));
    const long long hi = parse_int(
        item.substr(dots + 2, colon == std::string_view::npos
                                  ? std::string_view::npos
                                  : colon - dots - 2));
    const long long step =
        colon == std::string_view::npos ? 1 : parse_int(item.substr(colon + 1));
    if (step <= 0 || hi < lo) {
      throw Error(ErrorCode::BadArgs,
                  "bad range '" + std::string(item) + "' in mask starts");
    }
    for (long long t = lo; t <= hi; t += step) out.push_back(t);
  }
  return out;
}

void write_json_file(const json& j, const fs::path& path) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write " + path.string());
  }
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  }
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw Error(ErrorCode::IoError, "invalid JSON in " + path.string());
  }
  return j;
}

fs::path run_sidecar_path(const fs::path& model_path) {
  fs::path p = model_path;
  p.replace_extension(".run.json");
  return p;
}

fs::path ensure_out_dir(const std::string& out) {
  const fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::IoError, "cannot create " + dir.string());
  }
  return dir;
}

EpochSet filter_subject(EpochSet epochs, const std::string& subject) {
  if (subject.empty()) return epochs;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < epochs.n_trials(); ++i) {
    if (epochs.meta()[static_cast<std::size_t>(i)].subject_id == subject) {
      keep.push_back(i);
    }
  }
  if (keep.empty()) {
    throw Error(ErrorCode::EmptyInput, "no trials for subject " + subject);
  }
  return epochs.subset(keep);
}

EmbeddingMatrix take_rows(const EmbeddingMatrix& m, Eigen::Index begin,
                          Eigen::Index end) {
  const auto stride = static_cast<std::size_t>(m.dim());
  std::vector<double> data(
      m.data().begin() + static_cast<std::size_t>(begin) * stride,
      m.data().begin() + static_cast<std::size_t>(end) * stride);
  std::vector<std::string> ids(m.row_ids().begin() + begin,
                               m.row_ids().begin() + end);
  return EmbeddingMatrix(m.kind(), m.dim(), std::move(data), std::move(ids));
}

MaskValue parse_mask_value(const std::string& s) {
  return s == "mean" ? MaskValue::ChannelMean : MaskValue::Zero;
}

Linkage parse_linkage(const std::string& s) {
  if (s == "single") return Linkage::Single;
  if (s == "complete") return Linkage::Complete;
  return Linkage::Average;
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
  std::string out;
  std::string spec_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

PlantSpec default_plant_spec() {
  PlantSpec spec;
  spec.n_concepts = 8;
  spec.n_channels = 8;
  spec.n_timepoints = 250;
  for (int j = 0; j < 8; ++j) spec.windows.push_back({10 + 30 * j, 25});
  spec.snr = 5.0;
  spec.n_stimuli = 40;
  spec.trials_per_stimulus = 4;
  return spec;
}

int cmd_gen(const GenArgs& args) {
  PlantSpec spec = args.spec_path.empty() ? default_plant_spec()
                                          : read_plant_spec(args.spec_path);
  if (args.seed_given) spec.seed = args.seed;
  spec.validate();

  const SynthData data = generate(spec);
  const fs::path dir = ensure_out_dir(args.out);
  OutputTracker tracker;

  write_epochs(data.epochs, tracker.track_with_sidecar(dir / "epochs.epc"));
  write_embeddings(data.true_concepts,
                   tracker.track_with_sidecar(dir / "concepts.emb"),
                   data.names);
  write_plant_spec(spec, tracker.track(dir / "spec.json"));

  json config{{"command", "gen"},
              {"spec", args.spec_path.empty() ? "default" : args.spec_path},
              {"seed", spec.seed},
              {"n_stimuli", spec.n_stimuli},
              {"trials_per_stimulus", spec.trials_per_stimulus},
              {"n_concepts", spec.n_concepts},
              {"n_channels", spec.n_channels},
              {"n_timepoints", spec.n_timepoints},
              {"snr", spec.snr}};
  write_json_file(config, tracker.track(dir / "gen_config.json"));

  tracker.commit();
  std::cout << "generated " << data.epochs.n_trials() << " trials ("
            << spec.n_channels << "x" << spec.n_timepoints << "), "
            << spec.n_concepts << " concepts -> " << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string epochs;
  std::string concepts;
  std::string model;
  double lambda = 0.5;
  std::string encoder = "winmean";
  Eigen::Index window_len = 10;
  Eigen::Index encoder_dim = 1024;
  std::uint64_t encoder_seed = 0;
  std::string precomputed_dir;
  bool zscore = false;
  bool average = true;
  std::string subject;
  double holdout = 0.0;
};

std::map<std::string, EmbeddingMatrix> load_precomputed(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::IoError, dir.string() + " is not a directory");
  }
  std::map<std::string, EmbeddingMatrix> table;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".emb") continue;
    table.emplace(entry.path().stem().string(),
                  read_embeddings(entry.path()).matrix);
  }
  if (table.empty()) {
    throw Error(ErrorCode::IoError, "no .emb files in " + dir.string());
  }
  return table;
}

EncoderSpec build_encoder(const std::string& kind, Eigen::Index window_len,
                          Eigen::Index encoder_dim, std::uint64_t encoder_seed,
                          const std::string& precomputed_dir,
                          Eigen::Index n_channels, Eigen::Index n_timepoints) {
  if (kind == "flatten") {
    return EncoderSpec::flatten_projection(encoder_dim, encoder_seed,
                                           n_channels, n_timepoints);
  }
  if (kind == "winmean") {
    return EncoderSpec::window_mean(window_len, n_channels, n_timepoints);
  }
  if (precomputed_dir.empty()) {
    throw Error(ErrorCode::BadArgs,
                "--precomputed-dir is required with --encoder precomputed");
  }
  return EncoderSpec::precomputed(load_precomputed(precomputed_dir));
}

json encoder_config(const TrainArgs& args, const EpochSet& epochs) {
  return json{{"kind", args.encoder},
              {"window_len", args.window_len},
              {"out_dim", args.encoder_dim},
              {"seed", args.encoder_seed},
              {"precomputed_dir", args.precomputed_dir},
              {"n_channels", epochs.n_channels()},
              {"n_timepoints", epochs.n_timepoints()}};
}

int cmd_train(const TrainArgs& args) {
  EpochSet epochs = filter_subject(read_epochs(args.epochs), args.subject);
  if (args.average) epochs = average_repetitions(epochs);
  const EmbeddingsFile concepts = read_embeddings(args.concepts);

  const EncoderSpec encoder =
      build_encoder(args.encoder, args.window_len, args.encoder_dim,
                    args.encoder_seed, args.precomputed_dir,
                    epochs.n_channels(), epochs.n_timepoints());
  const EmbeddingMatrix x = encode_batch(encoder, epochs);
  const EmbeddingMatrix y = expand_to_trials(concepts.matrix, epochs);

  if (args.holdout < 0.0 || args.holdout >= 1.0) {
    throw Error(ErrorCode::BadArgs, "--holdout must be in [0, 1)");
  }
  const Eigen::Index n = x.n_rows();
  Eigen::Index n_eval = 0;
  if (args.holdout > 0.0) {
    n_eval = std::clamp<Eigen::Index>(
        static_cast<Eigen::Index>(std::llround(args.holdout * n)), 1, n - 2);
  }
  const Eigen::Index n_train = n - n_eval;

  RidgeOptions options;
  options.zscore_features = args.zscore;
  const RidgeModel model = ridge_fit(take_rows(x, 0, n_train),
                                     take_rows(y, 0, n_train), args.lambda,
                                     options);

  OutputTracker tracker;
  write_model(model, tracker.track(args.model));
  json run{{"encoder", encoder_config(args, epochs)},
           {"lambda", args.lambda},
           {"zscore_features", args.zscore},
           {"average", args.average},
           {"subject", args.subject}};
  write_json_file(run, tracker.track(run_sidecar_path(args.model)));

  json config = run;
  config["command"] = "train";
  config["holdout"] = args.holdout;
  write_json_file(config, tracker.track(fs::path(args.model).parent_path() /
                                        "train_config.json"));
  tracker.commit();

  std::cout << "model " << model.out_dim() << "x" << model.in_dim()
            << " lambda " << format_double(model.lambda) << " from " << n_train
            << " rows -> " << args.model << "\n";
  if (n_eval > 0) {
    const RidgeScore score =
        ridge_score(model, take_rows(x, n_train, n), take_rows(y, n_train, n));
    std::cout << "holdout rows " << n_eval << " mean_pearson "
              << format_double(score.mean_pearson) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// attribute

struct AttributeArgs {
  std::string epochs;
  std::string concepts;
  std::string model;
  std::string out;
  Eigen::Index mask_len = 50;
  std::string mask_starts = "0..200";
  std::string metric = "all";
  std::string mask_value = "zero";
  std::string reference = "true";
  double q = 0.1;
  int workers = 1;
  bool average = true;
  std::string subject;
  std::string precomputed_dir;
};

EncoderSpec encoder_from_run(const json& run, const std::string& dir_override) {
  if (!run.contains("encoder")) {
    throw Error(ErrorCode::IoError, "run sidecar has no encoder object");
  }
  const json& enc = run["encoder"];
  const std::string kind = enc.value("kind", "winmean");
  const std::string dir =
      dir_override.empty() ? enc.value("precomputed_dir", "") : dir_override;
  return build_encoder(kind, enc.value("window_len", Eigen::Index{10}),
                       enc.value("out_dim", Eigen::Index{1024}),
                       enc.value("seed", std::uint64_t{0}), dir,
                       enc.value("n_channels", Eigen::Index{0}),
                       enc.value("n_timepoints", Eigen::Index{0}));
}

void write_grid_pair(const AttributionGrid& grid, const fs::path& dir,
                     const std::string& stem, OutputTracker& tracker) {
  write_grid(grid, tracker.track_with_sidecar(dir / (stem + ".atg")));
  write_grid_csv(grid, tracker.track(dir / (stem + ".csv")));
}

int cmd_attribute(const AttributeArgs& args) {
  EpochSet epochs = filter_subject(read_epochs(args.epochs), args.subject);
  if (args.average) epochs = average_repetitions(epochs);
  const EmbeddingsFile concepts = read_embeddings(args.concepts);
  const RidgeModel model = read_model(args.model);
  const json run = read_json_file(run_sidecar_path(args.model));
  const EncoderSpec encoder = encoder_from_run(run, args.precomputed_dir);

  const MaskSpec mask(args.mask_len, parse_starts(args.mask_starts));
  mask.validate_for(epochs.n_timepoints());
  const EmbeddingMatrix y = expand_to_trials(concepts.matrix, epochs);

  SweepOptions options;
  options.mask_value = parse_mask_value(args.mask_value);
  options.reference = args.reference == "predicted" ? Reference::Predicted
                                                    : Reference::TrueConcepts;
  options.workers = args.workers;
  const SweepResult sweep = mask_sweep(epochs, encoder, model, mask, y, options);

  const fs::path dir = ensure_out_dir(args.out);
  OutputTracker tracker;
  const bool all = args.metric == "all";

  if (all || args.metric == "m1") {
    write_grid_pair(sweep.m1, dir, "m1_trials", tracker);
  }
  if (all || args.metric == "m2") {
    write_grid_pair(sweep.m2, dir, "m2_trials", tracker);
    const AggregateResult mean =
        aggregate_curves(sweep.m2, AggregateKind::MeanOverTrials, y);
    write_grid_pair(mean.grid, dir, "m2_mean", tracker);
    const AggregateResult per_concept = aggregate_curves(
        sweep.m2, AggregateKind::PerConceptTopQ, y, args.q,
        concepts.concept_names);
    write_grid_pair(per_concept.grid, dir, "m2_per_concept", tracker);
    if (!per_concept.empty_groups.empty()) {
      std::cerr << "note: empty top-q group for "
                << per_concept.empty_groups.size() << " concept(s)\n";
    }
  }
  if (all || args.metric == "m3") {
    for (std::size_t j = 0; j < sweep.m3.size(); ++j) {
      write_grid_pair(sweep.m3[j], dir, "m3_concept_" + std::to_string(j),
                      tracker);
    }
  }

  json config{{"command", "attribute"},
              {"mask_len", args.mask_len},
              {"mask_starts", args.mask_starts},
              {"n_starts", mask.starts.size()},
              {"metric", args.metric},
              {"mask_value", args.mask_value},
              {"reference", args.reference},
              {"q", args.q},
              {"workers", args.workers},
              {"average", args.average},
              {"subject", args.subject},
              {"lambda", model.lambda}};
  write_json_file(config, tracker.track(dir / "attribute_config.json"));
  tracker.commit();

  std::cout << "swept " << mask.starts.size() << " starts x "
            << epochs.n_trials() << " trials (L=" << args.mask_len << ") -> "
            << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// cluster

struct ClusterArgs {
  std::string grid;
  std::string out;
  std::string linkage = "average";
  Eigen::Index k = 5;
  std::string cost = "abs";
  Eigen::Index band = -1;
  int workers = 1;
};

AttributionGrid read_any_grid(const fs::path& path) {
  if (path.extension() == ".csv") return read_grid_csv(path);
  return read_grid(path);
}

int cmd_cluster(const ClusterArgs& args) {
  const AttributionGrid grid = read_any_grid(args.grid);

  DtwOptions dtw_options;
  dtw_options.cost = args.cost == "squared" ? DtwCost::Squared : DtwCost::Abs;
  if (args.band >= 0) dtw_options.band = args.band;
  const SymMatrix d = distance_matrix(grid, dtw_options, args.workers);
  const Dendrogram dend =
      agglomerate(d, parse_linkage(args.linkage), grid.row_ids());
  const std::vector<int> assignment = cluster_cut(dend, args.k);

  const fs::path dir = ensure_out_dir(args.out);
  OutputTracker tracker;
  write_distance_csv(d, grid.row_ids(), tracker.track(dir / "distances.csv"));
  write_dendrogram_json(dend, tracker.track(dir / "dendrogram.json"));
  write_assignments_csv(grid.row_ids(), assignment,
                        tracker.track(dir / "assignments.csv"));

  json config{{"command", "cluster"}, {"grid", args.grid},
              {"linkage", args.linkage}, {"k", args.k},
              {"cost", args.cost},      {"band", args.band},
              {"workers", args.workers}};
  write_json_file(config, tracker.track(dir / "cluster_config.json"));
  tracker.commit();

  std::cout << grid.n_rows() << " rows, " << linkage_name(parse_linkage(
            args.linkage)) << " linkage, k=" << args.k << " -> "
            << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// report

struct ReportArgs {
  std::string out;
  std::string curves;
  std::string dendrogram;
};

int cmd_report(const ReportArgs& args) {
  const fs::path dir = ensure_out_dir(args.out);

  fs::path curves_path(args.curves);
  if (args.curves.empty()) {
    curves_path = dir / "m2_per_concept.atg";
    if (!fs::exists(curves_path)) curves_path = dir / "m2_mean.atg";
    if (!fs::exists(curves_path)) {
      throw Error(ErrorCode::IoError,
                  "no curves grid in " + dir.string() + "; pass --curves");
    }
  }
  const fs::path dend_path =
      args.dendrogram.empty() ? dir / "dendrogram.json" : fs::path(args.dendrogram);

  const AttributionGrid grid = read_any_grid(curves_path);
  const Dendrogram dend = read_dendrogram_json(dend_path);

  CurvePlotOptions curve_options;
  curve_options.title = std::string(metric_name(grid.metric())) +
                        " attribution curves";
  curve_options.y_label = metric_name(grid.metric());
  DendrogramPlotOptions dend_options;
  dend_options.title = "dtw dendrogram";

  OutputTracker tracker;
  const fs::path curves_svg = tracker.track(dir / "curves.svg");
  const fs::path dend_svg = tracker.track(dir / "dendrogram.svg");
  {
    std::ofstream out(curves_svg);
    out << render_curves_svg(grid, curve_options);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + curves_svg.string());
  }
  {
    std::ofstream out(dend_svg);
    out << render_dendrogram_svg(dend, dend_options);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + dend_svg.string());
  }

  json config{{"command", "report"},
              {"curves", curves_path.string()},
              {"dendrogram", dend_path.string()}};
  write_json_file(config, tracker.track(dir / "report_config.json"));
  tracker.commit();

  std::cout << "curves: " << curves_svg.string() << ", dendrogram: "
            << dend_svg.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"temporal occlusion attribution pipeline"};
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic dataset");
  gen->add_option("--out", gen_args.out, "output directory")->required();
  gen->add_option("--spec", gen_args.spec_path, "recipe JSON (default: built-in)");
  gen->add_option("--seed", gen_args.seed, "generator seed override");

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "fit the concept decoder");
  train->add_option("--epochs", train_args.epochs, "epoch file")->required();
  train->add_option("--concepts", train_args.concepts, "concept embeddings")
      ->required();
  train->add_option("--model", train_args.model, "model output path")->required();
  train->add_option("--lambda", train_args.lambda, "ridge penalty")
      ->capture_default_str();
  train->add_option("--encoder", train_args.encoder, "signal encoder kind")
      ->check(CLI::IsMember({"winmean", "flatten", "precomputed"}))
      ->capture_default_str();
  train->add_option("--window-len", train_args.window_len,
                    "winmean window length")->capture_default_str();
  train->add_option("--encoder-dim", train_args.encoder_dim,
                    "flatten projection output dim")->capture_default_str();
  train->add_option("--encoder-seed", train_args.encoder_seed,
                    "flatten projection seed")->capture_default_str();
  train->add_option("--precomputed-dir", train_args.precomputed_dir,
                    "directory of <mask_key>.emb files");
  train->add_flag("--zscore-features", train_args.zscore,
                  "standardize feature columns before fitting");
  train->add_flag("--average,!--no-average", train_args.average,
                  "average repetitions before encoding");
  train->add_option("--subject", train_args.subject, "keep only this subject");
  train->add_option("--holdout", train_args.holdout,
                    "trailing fraction of rows scored, not fitted")
      ->capture_default_str();

  AttributeArgs attr_args;
  CLI::App* attribute =
      app.add_subcommand("attribute", "sweep a temporal mask over the epochs");
  attribute->add_option("--epochs", attr_args.epochs, "epoch file")->required();
  attribute->add_option("--concepts", attr_args.concepts, "concept embeddings")
      ->required();
  attribute->add_option("--model", attr_args.model, "trained model")->required();
  attribute->add_option("--out", attr_args.out, "output directory")->required();
  attribute->add_option("--mask-len", attr_args.mask_len, "mask length L")
      ->capture_default_str();
  attribute->add_option("--mask-starts", attr_args.mask_starts,
                        "mask start list, e.g. 0..200 or 0..200:5 or 0,50,100")
      ->capture_default_str();
  attribute->add_option("--metric", attr_args.metric, "which grids to write")
      ->check(CLI::IsMember({"all", "m1", "m2", "m3"}))
      ->capture_default_str();
  attribute->add_option("--mask-value", attr_args.mask_value, "fill for masked samples")
      ->check(CLI::IsMember({"zero", "mean"}))
      ->capture_default_str();
  attribute->add_option("--reference", attr_args.reference,
                        "correlation reference rows")
      ->check(CLI::IsMember({"true", "predicted"}))
      ->capture_default_str();
  attribute->add_option("--q", attr_args.q, "top fraction for per-concept curves")
      ->capture_default_str();
  attribute->add_option("--workers", attr_args.workers, "sweep worker threads")
      ->capture_default_str();
  attribute->add_flag("--average,!--no-average", attr_args.average,
                      "average repetitions before encoding");
  attribute->add_option("--subject", attr_args.subject, "keep only this subject");
  attribute->add_option("--precomputed-dir", attr_args.precomputed_dir,
                        "override the recorded precomputed embedding directory");

  ClusterArgs cluster_args;
  CLI::App* cluster =
      app.add_subcommand("cluster", "cluster attribution curves with dtw");
  cluster->add_option("--grid", cluster_args.grid, "curve grid (.atg or .csv)")
      ->required();
  cluster->add_option("--out", cluster_args.out, "output directory")->required();
  cluster->add_option("--linkage", cluster_args.linkage, "merge criterion")
      ->check(CLI::IsMember({"average", "single", "complete"}))
      ->capture_default_str();
  cluster->add_option("--k", cluster_args.k, "number of clusters")
      ->capture_default_str();
  cluster->add_option("--cost", cluster_args.cost, "dtw local cost")
      ->check(CLI::IsMember({"abs", "squared"}))
      ->capture_default_str();
  cluster->add_option("--band", cluster_args.band,
                      "Sakoe-Chiba radius (-1 = unbanded)")
      ->capture_default_str();
  cluster->add_option("--workers", cluster_args.workers,
                      "distance matrix worker threads")
      ->capture_default_str();

  ReportArgs report_args;
  CLI::App* report = app.add_subcommand("report", "render SVG figures");
  report->add_option("--out", report_args.out,
                     "directory holding the pipeline outputs")->required();
  report->add_option("--curves", report_args.curves, "curve grid override");
  report->add_option("--dendrogram", report_args.dendrogram,
                     "dendrogram JSON override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ERROR BadArgs: " << e.what() << "\n";
    return 2;
  }

  try {
    gen_args.seed_given = gen->count("--seed") > 0;
    if (gen->parsed()) return cmd_gen(gen_args);
    if (train->parsed()) return cmd_train(train_args);
    if (attribute->parsed()) return cmd_attribute(attr_args);
    if (cluster->parsed()) return cmd_cluster(cluster_args);
    if (report->parsed()) return cmd_report(report_args);
  } catch (const Error& e) {
    std::cerr << "ERROR " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "ERROR Unhandled: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
