#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tempattr/clustering.hpp"
#include "tempattr/data.hpp"
#include "tempattr/encoders.hpp"
#include "tempattr/errors.hpp"
#include "tempattr/io.hpp"
#include "tempattr/masking.hpp"
#include "tempattr/numeric.hpp"
#include "tempattr/ridge.hpp"
#include "tempattr/svg.hpp"
#include "tempattr/synthetic.hpp"

namespace py = pybind11;
using namespace tempattr;

namespace {

using CArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

RowMajorMatrixXd to_matrix(const CArray& a) {
  if (a.ndim() != 2) {
    throw Error(ErrorCode::DimMismatch, "expected a 2-d array");
  }
  RowMajorMatrixXd m(a.shape(0), a.shape(1));
  std::memcpy(m.data(), a.data(), sizeof(double) * a.size());
  return m;
}

py::array_t<double> from_matrix(const RowMajorMatrixXd& m) {
  py::array_t<double> a({m.rows(), m.cols()});
  std::memcpy(a.mutable_data(), m.data(),
              sizeof(double) * static_cast<std::size_t>(m.size()));
  return a;
}

MetricKind metric_from_name(const std::string& name) {
  if (name == "m1") return MetricKind::M1MaskedVsTruePearson;
  if (name == "m2") return MetricKind::M2DeltaPredTruePearson;
  if (name == "m3") return MetricKind::M3DeltaActivation;
  throw Error(ErrorCode::BadArgs, "unknown metric '" + name + "'");
}

MaskValue mask_value_from_name(const std::string& name) {
  if (name == "zero") return MaskValue::Zero;
  if (name == "mean") return MaskValue::ChannelMean;
  throw Error(ErrorCode::BadArgs, "unknown mask value '" + name + "'");
}

Linkage linkage_from_name(const std::string& name) {
  if (name == "single") return Linkage::Single;
  if (name == "complete") return Linkage::Complete;
  if (name == "average") return Linkage::Average;
  throw Error(ErrorCode::BadArgs, "unknown linkage '" + name + "'");
}

DtwOptions dtw_options(const std::string& cost, std::optional<Eigen::Index> band) {
  DtwOptions options;
  if (cost == "squared") {
    options.cost = DtwCost::Squared;
  } else if (cost != "abs") {
    throw Error(ErrorCode::BadArgs, "unknown dtw cost '" + cost + "'");
  }
  options.band = band;
  return options;
}

std::optional<ConceptNames> names_opt(
    const std::optional<std::vector<std::string>>& names) {
  if (!names) return std::nullopt;
  return ConceptNames(*names);
}

EpochSet make_epoch_set(const CArray& data, const py::sequence& meta,
                        double sample_rate_hz) {
  if (data.ndim() != 3) {
    throw Error(ErrorCode::DimMismatch,
                "epoch data must be (trials, channels, timepoints)");
  }
  std::vector<double> flat(data.data(), data.data() + data.size());
  std::vector<TrialMeta> trials;
  for (const auto& item : meta) {
    if (py::isinstance<TrialMeta>(item)) {
      trials.push_back(item.cast<TrialMeta>());
    } else {
      const auto seq = item.cast<py::sequence>();
      trials.push_back({seq[0].cast<std::string>(), seq[1].cast<std::string>(),
                        seq[2].cast<std::uint32_t>()});
    }
  }
  return EpochSet(data.shape(1), data.shape(2), sample_rate_hz,
                  std::move(flat), std::move(trials));
}

AttributionGrid make_grid(const std::string& metric,
                          std::vector<std::string> row_ids,
                          std::vector<Eigen::Index> starts,
                          Eigen::Index mask_length, const CArray& values,
                          const std::optional<py::array_t<bool>>& present,
                          int concept_index) {
  RowMajorMatrixXd m = to_matrix(values);
  std::vector<std::uint8_t> p;
  if (present) {
    py::array_t<bool, py::array::c_style | py::array::forcecast> pa(*present);
    if (pa.ndim() != 2 || pa.shape(0) != m.rows() || pa.shape(1) != m.cols()) {
      throw Error(ErrorCode::DimMismatch, "present must match the value shape");
    }
    const bool* pd = pa.data();
    p.assign(pd, pd + pa.size());
  } else {
    p.assign(static_cast<std::size_t>(m.size()), 1);
  }
  return AttributionGrid(metric_from_name(metric), std::move(row_ids),
                         std::move(starts), mask_length, std::move(m),
                         std::move(p), concept_index);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "temporal occlusion attribution for multichannel epochs";

  py::register_exception<Error>(m, "Error");

  m.def("pearson",
        [](Eigen::Ref<const Eigen::VectorXd> x,
           Eigen::Ref<const Eigen::VectorXd> y) { return pearson(x, y); },
        py::arg("x"), py::arg("y"));

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("next_u64", &Rng::next_u64)
      .def("next_unit", &Rng::next_unit)
      .def("next_gaussian", &Rng::next_gaussian);

  py::class_<TrialMeta>(m, "TrialMeta")
      .def(py::init([](std::string stimulus_id, std::string subject_id,
                       std::uint32_t repetition) {
             return TrialMeta{std::move(stimulus_id), std::move(subject_id),
                              repetition};
           }),
           py::arg("stimulus_id"), py::arg("subject_id") = "sub-01",
           py::arg("repetition") = 0)
      .def_readonly("stimulus_id", &TrialMeta::stimulus_id)
      .def_readonly("subject_id", &TrialMeta::subject_id)
      .def_readonly("repetition", &TrialMeta::repetition)
      .def("__repr__", [](const TrialMeta& t) {
        return "TrialMeta(" + trial_uid(t) + ")";
      });

  m.def("trial_uid", &trial_uid, py::arg("meta"));

  py::class_<EpochSet>(m, "EpochSet")
      .def(py::init(&make_epoch_set), py::arg("data"), py::arg("meta"),
           py::arg("sample_rate_hz") = 250.0)
      .def_property_readonly("n_trials", &EpochSet::n_trials)
      .def_property_readonly("n_channels", &EpochSet::n_channels)
      .def_property_readonly("n_timepoints", &EpochSet::n_timepoints)
      .def_property_readonly("sample_rate_hz", &EpochSet::sample_rate_hz)
      .def_property_readonly("meta", [](const EpochSet& s) { return s.meta(); })
      .def_property_readonly("data",
                             [](const EpochSet& s) {
                               py::array_t<double> a(
                                   {s.n_trials(), s.n_channels(),
                                    s.n_timepoints()});
                               std::memcpy(a.mutable_data(), s.data().data(),
                                           sizeof(double) * s.data().size());
                               return a;
                             })
      .def("epoch",
           [](const EpochSet& s, Eigen::Index trial) {
             return from_matrix(RowMajorMatrixXd(s.epoch(trial)));
           },
           py::arg("trial"))
      .def("subset", &EpochSet::subset, py::arg("trials"))
      .def("select_channels", &EpochSet::select_channels, py::arg("channels"))
      .def("crop_time", &EpochSet::crop_time, py::arg("t_begin"),
           py::arg("t_end"));

  m.def("average_repetitions", &average_repetitions, py::arg("epochs"));

  py::enum_<EmbeddingKind>(m, "EmbeddingKind")
      .value("Signal", EmbeddingKind::Signal)
      .value("Concept", EmbeddingKind::Concept);

  py::class_<EmbeddingMatrix>(m, "EmbeddingMatrix")
      .def(py::init([](EmbeddingKind kind, const CArray& values,
                       std::vector<std::string> row_ids) {
             RowMajorMatrixXd v = to_matrix(values);
             std::vector<double> data(v.data(), v.data() + v.size());
             return EmbeddingMatrix(kind, v.cols(), std::move(data),
                                    std::move(row_ids));
           }),
           py::arg("kind"), py::arg("values"), py::arg("row_ids"))
      .def_property_readonly("kind", &EmbeddingMatrix::kind)
      .def_property_readonly("n_rows", &EmbeddingMatrix::n_rows)
      .def_property_readonly("dim", &EmbeddingMatrix::dim)
      .def_property_readonly("row_ids",
                             [](const EmbeddingMatrix& m) { return m.row_ids(); })
      .def_property_readonly("values",
                             [](const EmbeddingMatrix& m) {
                               return from_matrix(
                                   RowMajorMatrixXd(m.as_matrix()));
                             })
      .def("row",
           [](const EmbeddingMatrix& m, Eigen::Index i) {
             return Eigen::VectorXd(m.row(i));
           },
           py::arg("i"))
      .def("find_row", &EmbeddingMatrix::find_row, py::arg("row_id"));

  m.def("expand_to_trials", &expand_to_trials, py::arg("per_stimulus"),
        py::arg("epochs"));

  py::class_<EncoderSpec>(m, "EncoderSpec")
      .def_static("flatten_projection", &EncoderSpec::flatten_projection,
                  py::arg("out_dim"), py::arg("seed"), py::arg("n_channels"),
                  py::arg("n_timepoints"))
      .def_static("window_mean", &EncoderSpec::window_mean,
                  py::arg("window_len"), py::arg("n_channels"),
                  py::arg("n_timepoints"))
      .def_static("precomputed",
                  [](std::map<std::string, EmbeddingMatrix> table) {
                    return EncoderSpec::precomputed(std::move(table));
                  },
                  py::arg("table"))
      .def_property_readonly("out_dim", &EncoderSpec::out_dim);

  m.def("encode",
        [](const EncoderSpec& spec, const CArray& epoch,
           const std::string& trial_id, const std::string& mask_key) {
          const RowMajorMatrixXd e = to_matrix(epoch);
          return encode(spec, EpochView(e.data(), e.rows(), e.cols()),
                        {trial_id, mask_key});
        },
        py::arg("spec"), py::arg("epoch"), py::arg("trial_id") = "",
        py::arg("mask_key") = "none");
  m.def("encode_batch", &encode_batch, py::arg("spec"), py::arg("epochs"));
  m.def("mask_key", &mask_key, py::arg("start"), py::arg("length"));

  py::class_<RidgeModel>(m, "RidgeModel")
      .def_property_readonly("weights",
                             [](const RidgeModel& r) { return r.weights; })
      .def_property_readonly("bias", [](const RidgeModel& r) { return r.bias; })
      .def_readonly("lambda_", &RidgeModel::lambda)
      .def_property_readonly("out_dim", &RidgeModel::out_dim)
      .def_property_readonly("in_dim", &RidgeModel::in_dim);

  py::class_<RidgeScore>(m, "RidgeScore")
      .def_readonly("per_dim", &RidgeScore::per_dim)
      .def_readonly("mean_pearson", &RidgeScore::mean_pearson);

  m.def("ridge_fit",
        [](const EmbeddingMatrix& x, const EmbeddingMatrix& y, double lambda,
           bool zscore_features) {
          RidgeOptions options;
          options.zscore_features = zscore_features;
          return ridge_fit(x, y, lambda, options);
        },
        py::arg("x"), py::arg("y"), py::arg("lambda_") = 0.5,
        py::arg("zscore_features") = false);
  m.def("ridge_predict", &ridge_predict, py::arg("model"), py::arg("embedding"));
  m.def("ridge_predict_batch",
        [](const RidgeModel& model, const EmbeddingMatrix& x) {
          return from_matrix(ridge_predict_batch(model, x));
        },
        py::arg("model"), py::arg("x"));
  m.def("ridge_score", &ridge_score, py::arg("model"), py::arg("x"),
        py::arg("y"));

  py::class_<MaskSpec>(m, "MaskSpec")
      .def(py::init<Eigen::Index, std::vector<Eigen::Index>>(), py::arg("length"),
           py::arg("starts"))
      .def_static("default_sweep", &MaskSpec::default_sweep)
      .def_readonly("length", &MaskSpec::length)
      .def_readonly("starts", &MaskSpec::starts)
      .def("validate_for", &MaskSpec::validate_for, py::arg("n_timepoints"));

  m.def("mask_epoch",
        [](const CArray& epoch, Eigen::Index start, Eigen::Index length,
           const std::string& mask_value) {
          const RowMajorMatrixXd e = to_matrix(epoch);
          return from_matrix(mask_epoch(EpochView(e.data(), e.rows(), e.cols()),
                                        start, length,
                                        mask_value_from_name(mask_value)));
        },
        py::arg("epoch"), py::arg("start"), py::arg("length"),
        py::arg("mask_value") = "zero");

  py::class_<AttributionGrid>(m, "AttributionGrid")
      .def(py::init(&make_grid), py::arg("metric"), py::arg("row_ids"),
           py::arg("starts"), py::arg("mask_length"), py::arg("values"),
           py::arg("present") = std::nullopt, py::arg("concept_index") = -1)
      .def_property_readonly("metric",
                             [](const AttributionGrid& g) {
                               return std::string(metric_name(g.metric()));
                             })
      .def_property_readonly("row_ids",
                             [](const AttributionGrid& g) { return g.row_ids(); })
      .def_property_readonly("starts",
                             [](const AttributionGrid& g) { return g.starts(); })
      .def_property_readonly("mask_length", &AttributionGrid::mask_length)
      .def_property_readonly("concept_index", &AttributionGrid::concept_index)
      .def_property_readonly("n_rows", &AttributionGrid::n_rows)
      .def_property_readonly("n_cols", &AttributionGrid::n_cols)
      .def_property_readonly("values",
                             [](const AttributionGrid& g) {
                               return from_matrix(g.values());
                             })
      .def_property_readonly("present",
                             [](const AttributionGrid& g) {
                               py::array_t<bool> a({g.n_rows(), g.n_cols()});
                               auto* out = a.mutable_data();
                               for (std::size_t i = 0; i < g.present().size(); ++i) {
                                 out[i] = g.present()[i] != 0;
                               }
                               return a;
                             })
      .def("is_present", &AttributionGrid::is_present, py::arg("row"),
           py::arg("col"))
      .def("all_present", &AttributionGrid::all_present);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("m1", &SweepResult::m1)
      .def_readonly("m2", &SweepResult::m2)
      .def_readonly("m3", &SweepResult::m3);

  m.def("mask_sweep",
        [](const EpochSet& epochs, const EncoderSpec& encoder,
           const RidgeModel& model, const MaskSpec& mask,
           const EmbeddingMatrix& true_concepts, const std::string& mask_value,
           const std::string& reference, int workers) {
          SweepOptions options;
          options.mask_value = mask_value_from_name(mask_value);
          if (reference == "predicted") {
            options.reference = Reference::Predicted;
          } else if (reference != "true") {
            throw Error(ErrorCode::BadArgs, "unknown reference '" + reference + "'");
          }
          options.workers = workers;
          return mask_sweep(epochs, encoder, model, mask, true_concepts, options);
        },
        py::arg("epochs"), py::arg("encoder"), py::arg("model"), py::arg("mask"),
        py::arg("true_concepts"), py::arg("mask_value") = "zero",
        py::arg("reference") = "true", py::arg("workers") = 1);

  py::class_<AggregateResult>(m, "AggregateResult")
      .def_readonly("grid", &AggregateResult::grid)
      .def_readonly("empty_groups", &AggregateResult::empty_groups);

  m.def("aggregate_curves",
        [](const AttributionGrid& grid, const std::string& kind,
           const EmbeddingMatrix& true_concepts, double q,
           const std::optional<std::vector<std::string>>& names) {
          AggregateKind k;
          if (kind == "mean") {
            k = AggregateKind::MeanOverTrials;
          } else if (kind == "top_q") {
            k = AggregateKind::PerConceptTopQ;
          } else {
            throw Error(ErrorCode::BadArgs, "unknown aggregate '" + kind + "'");
          }
          return aggregate_curves(grid, k, true_concepts, q, names_opt(names));
        },
        py::arg("grid"), py::arg("kind"), py::arg("true_concepts"),
        py::arg("q") = 0.1, py::arg("names") = std::nullopt);

  m.def("top_k_concepts",
        [](const RidgeModel& model, const EncoderSpec& encoder,
           const CArray& epoch, const std::vector<std::string>& names,
           Eigen::Index k) {
          const RowMajorMatrixXd e = to_matrix(epoch);
          return top_k_concepts(model, encoder,
                                EpochView(e.data(), e.rows(), e.cols()),
                                ConceptNames(names), k);
        },
        py::arg("model"), py::arg("encoder"), py::arg("epoch"), py::arg("names"),
        py::arg("k"));

  py::class_<SymMatrix>(m, "SymMatrix")
      .def_property_readonly("order", &SymMatrix::order)
      .def("dense", &SymMatrix::dense)
      .def("__getitem__",
           [](const SymMatrix& s, std::pair<Eigen::Index, Eigen::Index> ij) {
             return s(ij.first, ij.second);
           });

  m.def("dtw",
        [](Eigen::Ref<const Eigen::VectorXd> a,
           Eigen::Ref<const Eigen::VectorXd> b, const std::string& cost,
           std::optional<Eigen::Index> band) {
          return dtw(a, b, dtw_options(cost, band));
        },
        py::arg("a"), py::arg("b"), py::arg("cost") = "abs",
        py::arg("band") = std::nullopt);

  m.def("distance_matrix",
        [](const AttributionGrid& rows, const std::string& cost,
           std::optional<Eigen::Index> band, int workers) {
          return distance_matrix(rows, dtw_options(cost, band), workers);
        },
        py::arg("rows"), py::arg("cost") = "abs", py::arg("band") = std::nullopt,
        py::arg("workers") = 1);

  py::class_<Merge>(m, "Merge")
      .def_readonly("node_a", &Merge::node_a)
      .def_readonly("node_b", &Merge::node_b)
      .def_readonly("height", &Merge::height)
      .def_readonly("new_node_id", &Merge::new_node_id);

  py::class_<Dendrogram>(m, "Dendrogram")
      .def_readonly("n_leaves", &Dendrogram::n_leaves)
      .def_readonly("merges", &Dendrogram::merges)
      .def_readonly("leaf_labels", &Dendrogram::leaf_labels);

  m.def("agglomerate",
        [](const SymMatrix& d, const std::string& linkage,
           std::vector<std::string> leaf_labels) {
          return agglomerate(d, linkage_from_name(linkage),
                             std::move(leaf_labels));
        },
        py::arg("distances"), py::arg("linkage") = "average",
        py::arg("leaf_labels") = std::vector<std::string>{});
  m.def("agglomerate",
        [](const CArray& d, const std::string& linkage,
           std::vector<std::string> leaf_labels) {
          const RowMajorMatrixXd dense = to_matrix(d);
          return agglomerate(SymMatrix::from_dense_upper(dense),
                             linkage_from_name(linkage), std::move(leaf_labels));
        },
        py::arg("distances"), py::arg("linkage") = "average",
        py::arg("leaf_labels") = std::vector<std::string>{});

  m.def("cluster_cut", &cluster_cut, py::arg("dendrogram"), py::arg("k"));

  py::class_<PlantWindow>(m, "PlantWindow")
      .def(py::init([](Eigen::Index start, Eigen::Index length) {
             return PlantWindow{start, length};
           }),
           py::arg("start"), py::arg("length"))
      .def_readonly("start", &PlantWindow::start)
      .def_readonly("length", &PlantWindow::length);

  py::class_<PlantSpec>(m, "PlantSpec")
      .def(py::init<>())
      .def_readwrite("n_concepts", &PlantSpec::n_concepts)
      .def_readwrite("n_channels", &PlantSpec::n_channels)
      .def_readwrite("n_timepoints", &PlantSpec::n_timepoints)
      .def_readwrite("sample_rate_hz", &PlantSpec::sample_rate_hz)
      .def_readwrite("snr", &PlantSpec::snr)
      .def_readwrite("trials_per_stimulus", &PlantSpec::trials_per_stimulus)
      .def_readwrite("n_stimuli", &PlantSpec::n_stimuli)
      .def_readwrite("seed", &PlantSpec::seed)
      .def_property(
          "windows",
          [](const PlantSpec& s) {
            std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
            for (const PlantWindow& w : s.windows) {
              out.emplace_back(w.start, w.length);
            }
            return out;
          },
          [](PlantSpec& s,
             const std::vector<std::pair<Eigen::Index, Eigen::Index>>& v) {
            s.windows.clear();
            for (const auto& [start, length] : v) {
              s.windows.push_back({start, length});
            }
          })
      .def("validate", &PlantSpec::validate);

  py::class_<SynthData>(m, "SynthData")
      .def_readonly("epochs", &SynthData::epochs)
      .def_readonly("true_concepts", &SynthData::true_concepts)
      .def_property_readonly("names",
                             [](const SynthData& d) { return d.names.names; });

  m.def("generate", &generate, py::arg("spec"));

  py::class_<RecoveryScore>(m, "RecoveryScore")
      .def_readonly("per_concept_hit", &RecoveryScore::per_concept_hit)
      .def_readonly("hit_rate", &RecoveryScore::hit_rate);

  m.def("score_recovery", &score_recovery, py::arg("grid"), py::arg("spec"),
        py::arg("tolerance"));

  m.def("write_epochs", &write_epochs, py::arg("epochs"), py::arg("path"));
  m.def("read_epochs", &read_epochs, py::arg("path"));
  m.def("write_embeddings",
        [](const EmbeddingMatrix& matrix, const std::filesystem::path& path,
           const std::optional<std::vector<std::string>>& concept_names) {
          write_embeddings(matrix, path, names_opt(concept_names));
        },
        py::arg("matrix"), py::arg("path"), py::arg("concept_names") = std::nullopt);
  m.def("read_embeddings",
        [](const std::filesystem::path& path) {
          EmbeddingsFile f = read_embeddings(path);
          std::optional<std::vector<std::string>> names;
          if (f.concept_names) names = f.concept_names->names;
          return py::make_tuple(std::move(f.matrix), std::move(names));
        },
        py::arg("path"));
  m.def("write_model", &write_model, py::arg("model"), py::arg("path"));
  m.def("read_model", &read_model, py::arg("path"));
  m.def("write_grid", &write_grid, py::arg("grid"), py::arg("path"));
  m.def("read_grid", &read_grid, py::arg("path"));
  m.def("write_grid_csv", &write_grid_csv, py::arg("grid"), py::arg("path"));
  m.def("read_grid_csv",
        [](const std::filesystem::path& path, const std::string& metric,
           Eigen::Index mask_length) {
          return read_grid_csv(path, metric_from_name(metric), mask_length);
        },
        py::arg("path"), py::arg("metric") = "m2", py::arg("mask_length") = 0);
  m.def("write_dendrogram_json", &write_dendrogram_json, py::arg("dendrogram"),
        py::arg("path"));
  m.def("read_dendrogram_json", &read_dendrogram_json, py::arg("path"));
  m.def("read_plant_spec", &read_plant_spec, py::arg("path"));
  m.def("write_plant_spec", &write_plant_spec, py::arg("spec"), py::arg("path"));

  m.def("render_curves_svg",
        [](const AttributionGrid& grid, const std::string& title,
           const std::string& x_label, const std::string& y_label, int width,
           int height, std::size_t max_legend) {
          CurvePlotOptions options;
          options.title = title;
          options.x_label = x_label;
          options.y_label = y_label;
          options.width = width;
          options.height = height;
          options.max_legend = max_legend;
          return render_curves_svg(grid, options);
        },
        py::arg("grid"), py::arg("title") = "", py::arg("x_label") = "mask start",
        py::arg("y_label") = "value", py::arg("width") = 960,
        py::arg("height") = 540, py::arg("max_legend") = 24);
  m.def("render_dendrogram_svg",
        [](const Dendrogram& dend, const std::string& title, int width,
           int height) {
          DendrogramPlotOptions options;
          options.title = title;
          options.width = width;
          options.height = height;
          return render_dendrogram_svg(dend, options);
        },
        py::arg("dendrogram"), py::arg("title") = "", py::arg("width") = 960,
        py::arg("height") = 540);
}
