#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "tempattr/data.hpp"
#include "tempattr/io.hpp"
#include "tempattr/numeric.hpp"

using oracles::code_of;
using tempattr::AttributionGrid;
using tempattr::ConceptNames;
using tempattr::Dendrogram;
using tempattr::EmbeddingKind;
using tempattr::EmbeddingMatrix;
using tempattr::EpochSet;
using tempattr::Error;
using tempattr::ErrorCode;
using tempattr::MetricKind;
using tempattr::Rng;
using tempattr::RowMajorMatrixXd;
using tempattr::TrialMeta;
using tempattr::trial_uid;

namespace {

EpochSet two_trial_set() {
  // trial t, channel c, time k -> 100 t + 10 c + k
  std::vector<double> data;
  std::vector<TrialMeta> meta;
  for (int t = 0; t < 2; ++t) {
    for (int c = 0; c < 3; ++c) {
      for (int k = 0; k < 4; ++k) data.push_back(100.0 * t + 10.0 * c + k);
    }
    meta.push_back(TrialMeta{"stim_" + std::to_string(t), "sub-01", 0});
  }
  return EpochSet(3, 4, 250.0, std::move(data), std::move(meta));
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::size_t count_fields(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

}  // namespace

TEST_CASE("trial_uid joins stimulus, subject and repetition") {
  CHECK(trial_uid(TrialMeta{"stim_0007", "sub-02", 3}) == "stim_0007|sub-02|3");
  CHECK(trial_uid(TrialMeta{"a", "b", 0}) == "a|b|0");
}

TEST_CASE("epoch set stores trials channel-major then time") {
  const EpochSet e = two_trial_set();
  CHECK(e.n_trials() == 2);
  CHECK(e.n_channels() == 3);
  CHECK(e.n_timepoints() == 4);
  CHECK(e.sample_rate_hz() == 250.0);
  const auto v = e.epoch(1);
  CHECK(v(0, 0) == 100.0);
  CHECK(v(2, 3) == 123.0);
  CHECK(e.epoch(0)(1, 2) == 12.0);
}

TEST_CASE("epoch set construction validation") {
  std::vector<TrialMeta> one{TrialMeta{"s", "p", 0}};
  CHECK(code_of([&] { EpochSet(0, 4, 250.0, {}, {}); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([&] { EpochSet(1, 1, 0.0, {1.0}, one); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([&] { EpochSet(1, 2, 250.0, {1.0}, one); }) == ErrorCode::DimMismatch);
  CHECK(code_of([&] {
          EpochSet(1, 1, 250.0, {std::nan("")}, one);
        }) == ErrorCode::NonFinite);
  const EpochSet e = two_trial_set();
  CHECK(code_of([&] { e.epoch(2); }) == ErrorCode::OutOfRange);
  CHECK(code_of([&] { e.epoch(-1); }) == ErrorCode::OutOfRange);
}

TEST_CASE("subset reorders trials and keeps metadata aligned") {
  const EpochSet e = two_trial_set();
  const EpochSet r = e.subset({1, 0, 1});
  CHECK(r.n_trials() == 3);
  CHECK(r.meta()[0].stimulus_id == "stim_1");
  CHECK(r.meta()[1].stimulus_id == "stim_0");
  for (Eigen::Index c = 0; c < 3; ++c) {
    for (Eigen::Index k = 0; k < 4; ++k) {
      CHECK(r.epoch(0)(c, k) == e.epoch(1)(c, k));
      CHECK(r.epoch(1)(c, k) == e.epoch(0)(c, k));
      CHECK(r.epoch(2)(c, k) == e.epoch(1)(c, k));
    }
  }
  CHECK(code_of([&] { e.subset({2}); }) == ErrorCode::OutOfRange);
}

TEST_CASE("select_channels keeps the requested order") {
  const EpochSet e = two_trial_set();
  const EpochSet r = e.select_channels({2, 0});
  CHECK(r.n_channels() == 2);
  CHECK(r.n_timepoints() == 4);
  for (Eigen::Index t = 0; t < 2; ++t) {
    for (Eigen::Index k = 0; k < 4; ++k) {
      CHECK(r.epoch(t)(0, k) == e.epoch(t)(2, k));
      CHECK(r.epoch(t)(1, k) == e.epoch(t)(0, k));
    }
  }
  CHECK(code_of([&] { e.select_channels({}); }) == ErrorCode::EmptyInput);
  CHECK(code_of([&] { e.select_channels({3}); }) == ErrorCode::OutOfRange);
}

TEST_CASE("crop_time keeps the half-open interval") {
  const EpochSet e = two_trial_set();
  const EpochSet r = e.crop_time(1, 3);
  CHECK(r.n_timepoints() == 2);
  for (Eigen::Index t = 0; t < 2; ++t) {
    for (Eigen::Index c = 0; c < 3; ++c) {
      CHECK(r.epoch(t)(c, 0) == e.epoch(t)(c, 1));
      CHECK(r.epoch(t)(c, 1) == e.epoch(t)(c, 2));
    }
  }
  CHECK(e.crop_time(0, 4).data() == e.data());
  CHECK(code_of([&] { e.crop_time(2, 2); }) == ErrorCode::OutOfRange);
  CHECK(code_of([&] { e.crop_time(-1, 2); }) == ErrorCode::OutOfRange);
  CHECK(code_of([&] { e.crop_time(0, 5); }) == ErrorCode::OutOfRange);
}

TEST_CASE("average_repetitions is the identity when every trial is unique") {
  const EpochSet e = two_trial_set();
  const EpochSet a = tempattr::average_repetitions(e);
  CHECK(a.n_trials() == 2);
  CHECK(a.data() == e.data());
  CHECK(a.meta()[0].repetition == 0);
}

TEST_CASE("average_repetitions cancels mirrored repetitions") {
  std::vector<double> data{1.0, -2.0, 3.0, -1.0, 2.0, -3.0};
  std::vector<TrialMeta> meta{TrialMeta{"s", "p", 0}, TrialMeta{"s", "p", 1}};
  const EpochSet e(1, 3, 100.0, std::move(data), std::move(meta));
  const EpochSet a = tempattr::average_repetitions(e);
  CHECK(a.n_trials() == 1);
  for (double v : a.data()) CHECK(v == 0.0);
}

TEST_CASE("average_repetitions groups by stimulus and subject") {
  std::vector<double> data{1.0, 3.0, 10.0};
  std::vector<TrialMeta> meta{TrialMeta{"s", "p1", 0}, TrialMeta{"s", "p1", 1},
                              TrialMeta{"s", "p2", 0}};
  const EpochSet e(1, 1, 100.0, std::move(data), std::move(meta));
  const EpochSet a = tempattr::average_repetitions(e);
  CHECK(a.n_trials() == 2);
  CHECK(a.data()[0] == 2.0);
  CHECK(a.data()[1] == 10.0);
  CHECK(a.meta()[1].subject_id == "p2");
}

TEST_CASE("averaging 80 repetitions of 200 stimuli yields 200 pseudo-trials") {
  // Trials arrive repetition-major, so groups interleave; output order is
  // first appearance, i.e. stimulus order. Values are small integers, so the
  // means are exact: value s + rep averages to s + 39.5.
  std::vector<double> data;
  std::vector<TrialMeta> meta;
  for (int rep = 0; rep < 80; ++rep) {
    for (int s = 0; s < 200; ++s) {
      data.push_back(static_cast<double>(s + rep));
      meta.push_back(TrialMeta{"stim_" + std::to_string(s), "sub-01", static_cast<std::uint32_t>(rep)});
    }
  }
  const EpochSet e(1, 1, 250.0, std::move(data), std::move(meta));
  CHECK(e.n_trials() == 16000);
  const EpochSet a = tempattr::average_repetitions(e);
  REQUIRE(a.n_trials() == 200);
  for (int s = 0; s < 200; ++s) {
    CHECK(a.meta()[s].stimulus_id == "stim_" + std::to_string(s));
    CHECK(a.data()[s] == static_cast<double>(s) + 39.5);
  }
  const EpochSet again = tempattr::average_repetitions(a);
  CHECK(again.data() == a.data());
}

TEST_CASE("average_repetitions commutes with channel and time selection") {
  Rng rng(404);
  std::vector<double> data;
  std::vector<TrialMeta> meta;
  for (int s = 0; s < 3; ++s) {
    for (int rep = 0; rep < 4; ++rep) {
      for (int i = 0; i < 2 * 5; ++i) data.push_back(rng.next_gaussian());
      meta.push_back(TrialMeta{"stim_" + std::to_string(s), "sub-01", static_cast<std::uint32_t>(rep)});
    }
  }
  const EpochSet e(2, 5, 100.0, std::move(data), std::move(meta));
  const EpochSet avg = tempattr::average_repetitions(e);
  CHECK(tempattr::average_repetitions(e.select_channels({1})).data() ==
        avg.select_channels({1}).data());
  CHECK(tempattr::average_repetitions(e.crop_time(1, 4)).data() ==
        avg.crop_time(1, 4).data());
  CHECK(code_of([&] {
          tempattr::average_repetitions(EpochSet(1, 1, 100.0, {}, {}));
        }) == ErrorCode::EmptyInput);
}

TEST_CASE("embedding matrix validation and row lookup") {
  const EmbeddingMatrix m(EmbeddingKind::Concept, 3,
                          {1.0, 2.0, 3.0, 4.0, 5.0, 6.0}, {"r0", "r1"});
  CHECK(m.n_rows() == 2);
  CHECK(m.dim() == 3);
  CHECK(m.kind() == EmbeddingKind::Concept);
  CHECK(m.row(1)[0] == 4.0);
  CHECK(m.row(1)[2] == 6.0);
  CHECK(m.as_matrix()(0, 1) == 2.0);
  CHECK(m.find_row("r1") == Eigen::Index{1});
  CHECK(!m.find_row("nope").has_value());
  CHECK(code_of([&] { m.row(2); }) == ErrorCode::OutOfRange);
  CHECK(code_of([] {
          EmbeddingMatrix(EmbeddingKind::Signal, 2, {1.0}, {"a"});
        }) == ErrorCode::DimMismatch);
  CHECK(code_of([] {
          EmbeddingMatrix(EmbeddingKind::Signal, 0, {}, {});
        }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] {
          EmbeddingMatrix(EmbeddingKind::Signal, 1, {1.0, 2.0}, {"a", "a"});
        }) == ErrorCode::MetaMismatch);
  CHECK(code_of([] {
          EmbeddingMatrix(EmbeddingKind::Signal, 1, {std::nan("")}, {"a"});
        }) == ErrorCode::NonFinite);
}

TEST_CASE("concept names reject blanks and duplicates") {
  const ConceptNames names({"size", "animacy"});
  CHECK(names.size() == 2);
  CHECK(code_of([] { ConceptNames(std::vector<std::string>{}); }) ==
        ErrorCode::EmptyInput);
  CHECK(code_of([] { ConceptNames({"a", ""}); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { ConceptNames({"a", "a"}); }) == ErrorCode::InvalidSpec);
}

TEST_CASE("expand_to_trials copies each stimulus row to its trials") {
  const EmbeddingMatrix per_stim(EmbeddingKind::Concept, 2,
                                 {1.0, 2.0, 30.0, 40.0}, {"s0", "s1"});
  std::vector<TrialMeta> meta{TrialMeta{"s1", "p", 0}, TrialMeta{"s0", "p", 0},
                              TrialMeta{"s1", "p", 1}};
  const EpochSet epochs(1, 1, 100.0, {0.0, 0.0, 0.0}, meta);
  const EmbeddingMatrix t = tempattr::expand_to_trials(per_stim, epochs);
  REQUIRE(t.n_rows() == 3);
  CHECK(t.row(0)[0] == 30.0);
  CHECK(t.row(1)[0] == 1.0);
  CHECK(t.row(2)[1] == 40.0);
  CHECK(t.row_ids()[0] == "s1|p|0");
  CHECK(t.row_ids()[2] == "s1|p|1");

  const EpochSet unknown(1, 1, 100.0, {0.0}, {TrialMeta{"sX", "p", 0}});
  CHECK(code_of([&] { tempattr::expand_to_trials(per_stim, unknown); }) ==
        ErrorCode::RowMismatch);
}

TEST_CASE("format_double emits shortest round-trip text") {
  CHECK(tempattr::format_double(0.5) == "0.5");
  CHECK(tempattr::format_double(39.5) == "39.5");
  CHECK(tempattr::format_double(1.0) == "1");
  CHECK(tempattr::format_double(0.0) == "0");
  CHECK(tempattr::parse_double("0.5") == 0.5);
  CHECK(tempattr::parse_double("1e-3") == 1e-3);
  Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    const double scale = std::pow(10.0, std::floor(rng.next_unit() * 21.0) - 10.0);
    const double x = scale * rng.next_gaussian();
    CHECK(tempattr::parse_double(tempattr::format_double(x)) == x);
  }
  CHECK(code_of([] { tempattr::parse_double("abc"); }) == ErrorCode::IoError);
  CHECK(code_of([] { tempattr::parse_double(""); }) == ErrorCode::IoError);
  CHECK(code_of([] { tempattr::parse_double("1.5x"); }) == ErrorCode::IoError);
}

TEST_CASE("sidecar_path swaps the extension") {
  CHECK(tempattr::sidecar_path("dir/file.epc") ==
        std::filesystem::path("dir/file.meta.json"));
  CHECK(tempattr::sidecar_path("grid.atg") ==
        std::filesystem::path("grid.meta.json"));
}

TEST_CASE("epoch files round-trip bit-exactly") {
  oracles::TempDir dir("epc");
  Rng rng(77);
  std::vector<double> data;
  std::vector<TrialMeta> meta;
  for (int t = 0; t < 3; ++t) {
    for (int i = 0; i < 2 * 5; ++i) data.push_back(oracles::f32_value(rng));
    meta.push_back(TrialMeta{"stim_" + std::to_string(t), "sub-01", static_cast<std::uint32_t>(t % 2)});
  }
  const EpochSet e(2, 5, 250.0, std::move(data), std::move(meta));
  const auto path = dir.path() / "epochs.epc";
  tempattr::write_epochs(e, path);
  REQUIRE(std::filesystem::exists(tempattr::sidecar_path(path)));

  const EpochSet r = tempattr::read_epochs(path);
  CHECK(r.n_trials() == 3);
  CHECK(r.n_channels() == 2);
  CHECK(r.n_timepoints() == 5);
  CHECK(r.sample_rate_hz() == 250.0);
  CHECK(r.data() == e.data());
  for (int t = 0; t < 3; ++t) {
    CHECK(r.meta()[t].stimulus_id == e.meta()[t].stimulus_id);
    CHECK(r.meta()[t].subject_id == e.meta()[t].subject_id);
    CHECK(r.meta()[t].repetition == e.meta()[t].repetition);
  }
}

TEST_CASE("epoch reader rejects corrupted files") {
  oracles::TempDir dir("epc_bad");
  const EpochSet e(1, 2, 100.0, {1.0, 2.0}, {TrialMeta{"s", "p", 0}});
  const auto path = dir.path() / "epochs.epc";
  tempattr::write_epochs(e, path);

  SUBCASE("wrong magic") {
    std::string bytes = oracles::slurp(path);
    bytes[0] = 'X';
    std::ofstream(path, std::ios::binary) << bytes;
    CHECK(code_of([&] { tempattr::read_epochs(path); }) == ErrorCode::BadMagic);
  }
  SUBCASE("truncated payload") {
    std::string bytes = oracles::slurp(path);
    bytes.resize(bytes.size() - 3);
    std::ofstream(path, std::ios::binary) << bytes;
    CHECK(code_of([&] { tempattr::read_epochs(path); }) ==
          ErrorCode::TruncatedFile);
  }
  SUBCASE("trailing garbage") {
    std::string bytes = oracles::slurp(path);
    bytes += "zz";
    std::ofstream(path, std::ios::binary) << bytes;
    CHECK(code_of([&] { tempattr::read_epochs(path); }) ==
          ErrorCode::TruncatedFile);
  }
  SUBCASE("sidecar trial count mismatch") {
    const auto side = tempattr::sidecar_path(path);
    std::ofstream(side) << R"({"trials": []})";
    CHECK(code_of([&] { tempattr::read_epochs(path); }) ==
          ErrorCode::MetaMismatch);
  }
  SUBCASE("sidecar missing") {
    std::filesystem::remove(tempattr::sidecar_path(path));
    CHECK(code_of([&] { tempattr::read_epochs(path); }) == ErrorCode::IoError);
  }
}

TEST_CASE("embedding files preserve kind, ids and concept names") {
  oracles::TempDir dir("emb");
  Rng rng(90);
  std::vector<double> data;
  for (int i = 0; i < 6; ++i) data.push_back(oracles::f32_value(rng));
  const EmbeddingMatrix m(EmbeddingKind::Concept, 3, data, {"a", "b"});
  const auto path = dir.path() / "conc.emb";

  SUBCASE("with concept names") {
    tempattr::write_embeddings(m, path, ConceptNames({"x", "y", "z"}));
    const auto r = tempattr::read_embeddings(path);
    CHECK(r.matrix.kind() == EmbeddingKind::Concept);
    CHECK(r.matrix.data() == m.data());
    CHECK(r.matrix.row_ids() == m.row_ids());
    REQUIRE(r.concept_names.has_value());
    CHECK(r.concept_names->names == std::vector<std::string>{"x", "y", "z"});
  }
  SUBCASE("without concept names") {
    tempattr::write_embeddings(m, path);
    const auto r = tempattr::read_embeddings(path);
    CHECK(r.matrix.data() == m.data());
    CHECK(!r.concept_names.has_value());
  }
  SUBCASE("signal kind survives") {
    const EmbeddingMatrix s(EmbeddingKind::Signal, 3, data, {"a", "b"});
    tempattr::write_embeddings(s, path);
    CHECK(tempattr::read_embeddings(path).matrix.kind() ==
          EmbeddingKind::Signal);
  }
  SUBCASE("tampered sidecar row ids") {
    tempattr::write_embeddings(m, path);
    std::ofstream(tempattr::sidecar_path(path)) << R"({"row_ids": ["a"]})";
    CHECK(code_of([&] { tempattr::read_embeddings(path); }) ==
          ErrorCode::MetaMismatch);
  }
}

TEST_CASE("embeddings CSV uses one header row and no row-id column") {
  oracles::TempDir dir("emb_csv");
  const EmbeddingMatrix m(EmbeddingKind::Concept, 3, {0.12, 3.4, 5.0}, {"r"});
  const auto path = dir.path() / "conc.csv";

  tempattr::write_embeddings_csv(m, path, ConceptNames({"alpha", "beta", "gamma"}));
  auto lines = read_lines(path);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "alpha,beta,gamma");
  CHECK(lines[1] == "0.12,3.4,5");

  tempattr::write_embeddings_csv(m, path);
  lines = read_lines(path);
  CHECK(lines[0] == "0,1,2");
  CHECK(code_of([&] {
          tempattr::write_embeddings_csv(m, path, ConceptNames({"only"}));
        }) == ErrorCode::DimMismatch);
}

TEST_CASE("model files round-trip bit-exactly") {
  oracles::TempDir dir("rdg");
  Rng rng(15);
  tempattr::RidgeModel m;
  m.weights = oracles::random_matrix(rng, 3, 5);
  m.bias = oracles::random_matrix(rng, 3, 1).col(0);
  m.lambda = 0.5;
  m.feature_means = oracles::random_matrix(rng, 5, 1).col(0);
  m.target_means = oracles::random_matrix(rng, 3, 1).col(0);
  const auto path = dir.path() / "model.rdg";
  tempattr::write_model(m, path);

  const tempattr::RidgeModel r = tempattr::read_model(path);
  CHECK(r.lambda == 0.5);
  CHECK(r.weights == m.weights);
  CHECK(r.bias == m.bias);
  CHECK(r.feature_means == m.feature_means);
  CHECK(r.target_means == m.target_means);

  SUBCASE("non-finite payload is rejected") {
    std::string bytes = oracles::slurp(path);
    // lambda sits right after magic and the two dimension words
    for (int i = 0; i < 8; ++i) bytes[12 + i] = '\xff';
    std::ofstream(path, std::ios::binary) << bytes;
    CHECK(code_of([&] { tempattr::read_model(path); }) == ErrorCode::NonFinite);
  }
  SUBCASE("wrong magic") {
    std::string bytes = oracles::slurp(path);
    bytes[3] = '9';
    std::ofstream(path, std::ios::binary) << bytes;
    CHECK(code_of([&] { tempattr::read_model(path); }) == ErrorCode::BadMagic);
  }
}

TEST_CASE("grid files preserve values, missing cells and metadata") {
  oracles::TempDir dir("atg");
  Rng rng(52);
  RowMajorMatrixXd values(2, 3);
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index k = 0; k < 3; ++k) values(i, k) = oracles::f32_value(rng, 0.3);
  }
  std::vector<std::uint8_t> present{1, 1, 1, 1, 1, 0};
  values(1, 2) = 0.0;  // missing cells carry zero
  const AttributionGrid g(MetricKind::M3DeltaActivation, {"t0", "t1"},
                          {0, 10, 20}, 25, values, present, 4);
  const auto path = dir.path() / "grid.atg";
  tempattr::write_grid(g, path);

  const AttributionGrid r = tempattr::read_grid(path);
  CHECK(r.metric() == MetricKind::M3DeltaActivation);
  CHECK(r.mask_length() == 25);
  CHECK(r.concept_index() == 4);
  CHECK(r.starts() == std::vector<Eigen::Index>{0, 10, 20});
  CHECK(r.row_ids() == std::vector<std::string>{"t0", "t1"});
  CHECK(r.present() == present);
  CHECK(r.values() == g.values());
  CHECK(!r.is_present(1, 2));

  SUBCASE("tampered sidecar") {
    std::ofstream(tempattr::sidecar_path(path)) << R"({"row_ids": ["t0"]})";
    CHECK(code_of([&] { tempattr::read_grid(path); }) == ErrorCode::MetaMismatch);
  }
  SUBCASE("truncation") {
    std::string bytes = oracles::slurp(path);
    bytes.resize(bytes.size() - 1);
    std::ofstream(path, std::ios::binary) << bytes;
    CHECK(code_of([&] { tempattr::read_grid(path); }) == ErrorCode::TruncatedFile);
  }
}

TEST_CASE("grid CSV round-trips exactly and keeps missing cells empty") {
  oracles::TempDir dir("atg_csv");
  RowMajorMatrixXd values(2, 3);
  values << 0.25, -1.0 / 3.0, 0.0, 1e-7, 1.75, 0.0;
  std::vector<std::uint8_t> present{1, 1, 0, 1, 1, 1};
  const AttributionGrid g(MetricKind::M2DeltaPredTruePearson, {"t0", "t,1"},
                          {0, 50, 100}, 50, values, present);
  const auto path = dir.path() / "grid.csv";
  tempattr::write_grid_csv(g, path);

  const auto lines = read_lines(path);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "row_id,start_0,start_50,start_100");
  // one field per start plus the row id; the comma in "t,1" gets quoted
  CHECK(count_fields(lines[0]) == 4);
  CHECK(count_fields(lines[1]) == 4);
  CHECK(lines[1] == "t0,0.25,-0.3333333333333333,");
  CHECK(lines[2] == "\"t,1\",1e-07,1.75,0");

  const AttributionGrid r =
      tempattr::read_grid_csv(path, MetricKind::M2DeltaPredTruePearson, 50);
  CHECK(r.starts() == g.starts());
  CHECK(r.row_ids() == g.row_ids());  // quoted comma survives
  CHECK(r.present() == g.present());
  CHECK(r.values() == g.values());
  CHECK(r.mask_length() == 50);

  SUBCASE("bad header is rejected") {
    std::ofstream(path) << "start_0,start_1\n0,1\n";
    CHECK(code_of([&] { tempattr::read_grid_csv(path); }) == ErrorCode::IoError);
  }
  SUBCASE("ragged row is rejected") {
    std::ofstream(path) << "row_id,start_0,start_1\nt0,1.5\n";
    CHECK(code_of([&] { tempattr::read_grid_csv(path); }) == ErrorCode::IoError);
  }
}

TEST_CASE("distance CSV carries labels on both axes") {
  oracles::TempDir dir("dist");
  tempattr::SymMatrix d(3);
  d.set(0, 1, 1.5);
  d.set(0, 2, 2.5);
  d.set(1, 2, 4.0);
  const auto path = dir.path() / "dist.csv";
  tempattr::write_distance_csv(d, {"a", "b", "c"}, path);
  const auto lines = read_lines(path);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "label,a,b,c");
  CHECK(lines[1] == "a,0,1.5,2.5");
  CHECK(lines[2] == "b,1.5,0,4");
  CHECK(lines[3] == "c,2.5,4,0");
  CHECK(code_of([&] { tempattr::write_distance_csv(d, {"a"}, path); }) ==
        ErrorCode::DimMismatch);
}

TEST_CASE("dendrogram JSON round-trips") {
  oracles::TempDir dir("dend");
  Dendrogram d;
  d.n_leaves = 3;
  d.leaf_labels = {"a", "b", "c"};
  d.merges = {{0, 1, 1.0, 3}, {3, 2, 4.5, 4}};
  const auto path = dir.path() / "dend.json";
  tempattr::write_dendrogram_json(d, path);

  const Dendrogram r = tempattr::read_dendrogram_json(path);
  CHECK(r.n_leaves == 3);
  CHECK(r.leaf_labels == d.leaf_labels);
  REQUIRE(r.merges.size() == 2);
  CHECK(r.merges[0].node_a == 0);
  CHECK(r.merges[0].node_b == 1);
  CHECK(r.merges[0].height == 1.0);
  CHECK(r.merges[0].new_node_id == 3);
  CHECK(r.merges[1].height == 4.5);

  SUBCASE("malformed JSON") {
    std::ofstream(path) << "{not json";
    CHECK(code_of([&] { tempattr::read_dendrogram_json(path); }) ==
          ErrorCode::IoError);
  }
  SUBCASE("missing keys") {
    std::ofstream(path) << R"({"leaves": ["a"]})";
    CHECK(code_of([&] { tempattr::read_dendrogram_json(path); }) ==
          ErrorCode::MetaMismatch);
  }
}

TEST_CASE("assignment CSV lists one leaf per row") {
  oracles::TempDir dir("assign");
  const auto path = dir.path() / "clusters.csv";
  tempattr::write_assignments_csv({"x", "y", "z"}, {0, 1, 0}, path);
  const auto lines = read_lines(path);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "label,cluster");
  CHECK(lines[1] == "x,0");
  CHECK(lines[2] == "y,1");
  CHECK(lines[3] == "z,0");
  CHECK(code_of([&] {
          tempattr::write_assignments_csv({"x"}, {0, 1}, path);
        }) == ErrorCode::DimMismatch);
}

TEST_CASE("plant spec JSON round-trips") {
  oracles::TempDir dir("spec");
  tempattr::PlantSpec spec;
  spec.n_concepts = 2;
  spec.n_channels = 4;
  spec.n_timepoints = 100;
  spec.sample_rate_hz = 250.0;
  spec.windows = {{10, 20}, {60, 25}};
  spec.snr = 5.0;
  spec.trials_per_stimulus = 3;
  spec.n_stimuli = 7;
  spec.seed = 99;
  const auto path = dir.path() / "plant.json";
  tempattr::write_plant_spec(spec, path);

  const tempattr::PlantSpec r = tempattr::read_plant_spec(path);
  CHECK(r.n_concepts == 2);
  CHECK(r.n_channels == 4);
  CHECK(r.n_timepoints == 100);
  CHECK(r.sample_rate_hz == 250.0);
  REQUIRE(r.windows.size() == 2);
  CHECK(r.windows[1].start == 60);
  CHECK(r.windows[1].length == 25);
  CHECK(r.snr == 5.0);
  CHECK(r.trials_per_stimulus == 3);
  CHECK(r.n_stimuli == 7);
  CHECK(r.seed == 99);

  SUBCASE("missing field") {
    std::ofstream(path) << R"({"n_concepts": 1})";
    CHECK(code_of([&] { tempattr::read_plant_spec(path); }) ==
          ErrorCode::InvalidSpec);
  }
  SUBCASE("invalid values go through spec validation") {
    spec.windows[0].start = 95;  // runs past the last timepoint
    tempattr::write_plant_spec(spec, path);
    CHECK(code_of([&] { tempattr::read_plant_spec(path); }) ==
          ErrorCode::InvalidSpec);
  }
}
