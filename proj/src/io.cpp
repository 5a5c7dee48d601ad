#include "tempattr/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <utility>

#include "json.hpp"

namespace tempattr {

namespace {

using nlohmann::json;

constexpr std::uint32_t kMissingBits = 0x7FC00000u;  // canonical quiet NaN

std::string load_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  }
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw Error(ErrorCode::IoError, "cannot read " + path.string());
  }
  return bytes;
}

void store_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write " + path.string());
  }
}

class ByteWriter {
 public:
  void magic(const char (&m)[5]) { buf_.append(m, 4); }
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
      buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f32_bits(std::uint32_t bits) { u32(bits); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  const std::string& bytes() const { return buf_; }

 private:
  std::string buf_;
};

class ByteReader {
 public:
  ByteReader(std::string_view bytes, std::string name)
      : bytes_(bytes), name_(std::move(name)) {}

  void expect_magic(const char (&m)[5]) {
    if (bytes_.size() < 4 || bytes_.compare(0, 4, m, 4) != 0) {
      throw Error(ErrorCode::BadMagic, name_ + ": expected magic " + m);
    }
    pos_ = 4;
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += 8;
    return v;
  }
  std::uint32_t f32_bits() { return u32(); }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }

  void finish() {
    if (pos_ != bytes_.size()) {
      throw Error(ErrorCode::TruncatedFile,
                  name_ + ": " + std::to_string(bytes_.size() - pos_) +
                      " trailing bytes");
    }
  }

 private:
  void need(std::size_t n) {
    if (bytes_.size() - pos_ < n) {
      throw Error(ErrorCode::TruncatedFile,
                  name_ + ": payload shorter than header claims");
    }
  }

  std::string_view bytes_;
  std::string name_;
  std::size_t pos_ = 0;
};

json load_json(const std::filesystem::path& path) {
  const std::string text = load_file(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw Error(ErrorCode::IoError, "invalid JSON in " + path.string());
  }
  return j;
}

void store_json(const std::filesystem::path& path, const json& j) {
  store_file(path, j.dump(2) + "\n");
}

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\n\r") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char c : raw) {
    if (c == '"') quoted += "\"\"";
    else quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::vector<std::string> split_csv_line(std::string_view line,
                                        const std::string& where) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
    ++i;
  }
  if (quoted) {
    throw Error(ErrorCode::IoError, where + ": unterminated quoted field");
  }
  fields.push_back(std::move(field));
  return fields;
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(begin, end - begin);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!(end == text.size() && line.empty())) {
      lines.emplace_back(line);
    }
    begin = end + 1;
  }
  return lines;
}

Eigen::Index parse_start_header(const std::string& token,
                                const std::string& where) {
  constexpr std::string_view prefix = "start_";
  if (token.size() <= prefix.size() ||
      token.compare(0, prefix.size(), prefix) != 0) {
    throw Error(ErrorCode::IoError,
                where + ": bad grid column header '" + token + "'");
  }
  long long v = 0;
  const char* first = token.data() + prefix.size();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::IoError,
                where + ": bad grid column header '" + token + "'");
  }
  return static_cast<Eigen::Index>(v);
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) {
    throw Error(ErrorCode::IoError, "format_double failed");
  }
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw Error(ErrorCode::IoError,
                "bad number '" + std::string(text) + "'");
  }
  return v;
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  std::filesystem::path p = path;
  p.replace_extension(".meta.json");
  return p;
}

void write_epochs(const EpochSet& epochs, const std::filesystem::path& path) {
  ByteWriter w;
  w.magic("EPC1");
  w.u32(static_cast<std::uint32_t>(epochs.n_trials()));
  w.u32(static_cast<std::uint32_t>(epochs.n_channels()));
  w.u32(static_cast<std::uint32_t>(epochs.n_timepoints()));
  w.f32(static_cast<float>(epochs.sample_rate_hz()));
  for (double v : epochs.data()) w.f32(static_cast<float>(v));
  store_file(path, w.bytes());

  json trials = json::array();
  for (const TrialMeta& m : epochs.meta()) {
    trials.push_back({{"stimulus_id", m.stimulus_id},
                      {"subject_id", m.subject_id},
                      {"repetition", m.repetition}});
  }
  store_json(sidecar_path(path), json{{"trials", trials}});
}

EpochSet read_epochs(const std::filesystem::path& path) {
  const std::string bytes = load_file(path);
  ByteReader r(bytes, path.string());
  r.expect_magic("EPC1");
  const std::uint32_t n_trials = r.u32();
  const std::uint32_t n_channels = r.u32();
  const std::uint32_t n_timepoints = r.u32();
  const double rate = static_cast<double>(r.f32());
  const std::uint64_t count = static_cast<std::uint64_t>(n_trials) *
                              n_channels * n_timepoints;
  std::vector<double> data(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    data[i] = static_cast<double>(r.f32());
  }
  r.finish();

  const json meta = load_json(sidecar_path(path));
  if (!meta.is_object() || !meta.contains("trials") ||
      !meta["trials"].is_array()) {
    throw Error(ErrorCode::MetaMismatch,
                path.string() + ": sidecar lacks a trials array");
  }
  const json& trials = meta["trials"];
  if (trials.size() != n_trials) {
    throw Error(ErrorCode::MetaMismatch,
                path.string() + ": sidecar has " +
                    std::to_string(trials.size()) + " trials, header claims " +
                    std::to_string(n_trials));
  }
  std::vector<TrialMeta> parsed;
  parsed.reserve(n_trials);
  for (const json& t : trials) {
    if (!t.is_object() || !t.contains("stimulus_id") ||
        !t.contains("subject_id") || !t.contains("repetition") ||
        !t["stimulus_id"].is_string() || !t["subject_id"].is_string() ||
        !t["repetition"].is_number_unsigned()) {
      throw Error(ErrorCode::MetaMismatch,
                  path.string() + ": malformed trial record in sidecar");
    }
    parsed.push_back({t["stimulus_id"].get<std::string>(),
                      t["subject_id"].get<std::string>(),
                      t["repetition"].get<std::uint32_t>()});
  }
  return EpochSet(static_cast<Eigen::Index>(n_channels),
                  static_cast<Eigen::Index>(n_timepoints), rate,
                  std::move(data), std::move(parsed));
}

void write_embeddings(const EmbeddingMatrix& matrix,
                      const std::filesystem::path& path,
                      const std::optional<ConceptNames>& concept_names) {
  if (concept_names && concept_names->size() != matrix.dim()) {
    throw Error(ErrorCode::DimMismatch,
                "write_embeddings: concept names length != dim");
  }
  ByteWriter w;
  w.magic("EMB1");
  w.u32(static_cast<std::uint32_t>(matrix.n_rows()));
  w.u32(static_cast<std::uint32_t>(matrix.dim()));
  w.u8(static_cast<std::uint8_t>(matrix.kind()));
  for (double v : matrix.data()) w.f32(static_cast<float>(v));
  store_file(path, w.bytes());

  json meta{{"row_ids", matrix.row_ids()}};
  if (concept_names) meta["concept_names"] = concept_names->names;
  store_json(sidecar_path(path), meta);
}

EmbeddingsFile read_embeddings(const std::filesystem::path& path) {
  const std::string bytes = load_file(path);
  ByteReader r(bytes, path.string());
  r.expect_magic("EMB1");
  const std::uint32_t n_rows = r.u32();
  const std::uint32_t dim = r.u32();
  const std::uint8_t kind = r.u8();
  if (kind > 1) {
    throw Error(ErrorCode::MetaMismatch,
                path.string() + ": unknown embedding kind " +
                    std::to_string(kind));
  }
  const std::uint64_t count = static_cast<std::uint64_t>(n_rows) * dim;
  std::vector<double> data(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    data[i] = static_cast<double>(r.f32());
  }
  r.finish();

  const json meta = load_json(sidecar_path(path));
  if (!meta.is_object() || !meta.contains("row_ids") ||
      !meta["row_ids"].is_array()) {
    throw Error(ErrorCode::MetaMismatch,
                path.string() + ": sidecar lacks a row_ids array");
  }
  std::vector<std::string> row_ids;
  row_ids.reserve(meta["row_ids"].size());
  for (const json& id : meta["row_ids"]) {
    if (!id.is_string()) {
      throw Error(ErrorCode::MetaMismatch,
                  path.string() + ": non-string row id in sidecar");
    }
    row_ids.push_back(id.get<std::string>());
  }
  if (row_ids.size() != n_rows) {
    throw Error(ErrorCode::MetaMismatch,
                path.string() + ": sidecar has " +
                    std::to_string(row_ids.size()) + " row ids, header claims " +
                    std::to_string(n_rows));
  }

  std::optional<ConceptNames> names;
  if (meta.contains("concept_names")) {
    if (!meta["concept_names"].is_array()) {
      throw Error(ErrorCode::MetaMismatch,
                  path.string() + ": concept_names is not an array");
    }
    std::vector<std::string> parsed;
    for (const json& n : meta["concept_names"]) {
      if (!n.is_string()) {
        throw Error(ErrorCode::MetaMismatch,
                    path.string() + ": non-string concept name");
      }
      parsed.push_back(n.get<std::string>());
    }
    if (parsed.size() != dim) {
      throw Error(ErrorCode::MetaMismatch,
                  path.string() + ": concept_names length != dim");
    }
    names.emplace(std::move(parsed));
  }

  return EmbeddingsFile{
      EmbeddingMatrix(static_cast<EmbeddingKind>(kind),
                      static_cast<Eigen::Index>(dim), std::move(data),
                      std::move(row_ids)),
      std::move(names)};
}

void write_embeddings_csv(const EmbeddingMatrix& matrix,
                          const std::filesystem::path& path,
                          const std::optional<ConceptNames>& concept_names) {
  if (concept_names && concept_names->size() != matrix.dim()) {
    throw Error(ErrorCode::DimMismatch,
                "write_embeddings_csv: concept names length != dim");
  }
  std::string out;
  for (Eigen::Index j = 0; j < matrix.dim(); ++j) {
    if (j > 0) out += ',';
    out += concept_names ? csv_field(concept_names->names[j])
                         : std::to_string(j);
  }
  out += '\n';
  for (Eigen::Index i = 0; i < matrix.n_rows(); ++i) {
    const auto row = matrix.row(i);
    for (Eigen::Index j = 0; j < matrix.dim(); ++j) {
      if (j > 0) out += ',';
      out += format_double(row[j]);
    }
    out += '\n';
  }
  store_file(path, out);
}

void write_model(const RidgeModel& model, const std::filesystem::path& path) {
  ByteWriter w;
  w.magic("RDG1");
  w.u32(static_cast<std::uint32_t>(model.out_dim()));
  w.u32(static_cast<std::uint32_t>(model.in_dim()));
  w.f64(model.lambda);
  for (Eigen::Index i = 0; i < model.out_dim(); ++i) {
    for (Eigen::Index j = 0; j < model.in_dim(); ++j) {
      w.f64(model.weights(i, j));
    }
  }
  for (Eigen::Index i = 0; i < model.out_dim(); ++i) w.f64(model.bias[i]);
  for (Eigen::Index j = 0; j < model.in_dim(); ++j) w.f64(model.feature_means[j]);
  for (Eigen::Index i = 0; i < model.out_dim(); ++i) w.f64(model.target_means[i]);
  store_file(path, w.bytes());
}

RidgeModel read_model(const std::filesystem::path& path) {
  const std::string bytes = load_file(path);
  ByteReader r(bytes, path.string());
  r.expect_magic("RDG1");
  const std::uint32_t fc = r.u32();
  const std::uint32_t fe = r.u32();
  RidgeModel model;
  model.lambda = r.f64();
  model.weights.resize(fc, fe);
  for (std::uint32_t i = 0; i < fc; ++i) {
    for (std::uint32_t j = 0; j < fe; ++j) {
      model.weights(i, j) = r.f64();
    }
  }
  model.bias.resize(fc);
  for (std::uint32_t i = 0; i < fc; ++i) model.bias[i] = r.f64();
  model.feature_means.resize(fe);
  for (std::uint32_t j = 0; j < fe; ++j) model.feature_means[j] = r.f64();
  model.target_means.resize(fc);
  for (std::uint32_t i = 0; i < fc; ++i) model.target_means[i] = r.f64();
  r.finish();
  if (!model.weights.allFinite() || !model.bias.allFinite() ||
      !model.feature_means.allFinite() || !model.target_means.allFinite() ||
      !std::isfinite(model.lambda) || model.lambda < 0.0) {
    throw Error(ErrorCode::NonFinite,
                path.string() + ": model contains non-finite values");
  }
  return model;
}

void write_grid(const AttributionGrid& grid,
                const std::filesystem::path& path) {
  ByteWriter w;
  w.magic("ATG1");
  w.u32(static_cast<std::uint32_t>(grid.n_rows()));
  w.u32(static_cast<std::uint32_t>(grid.n_cols()));
  w.u8(static_cast<std::uint8_t>(grid.metric()));
  w.u32(static_cast<std::uint32_t>(grid.mask_length()));
  w.i32(grid.concept_index());
  for (Eigen::Index s : grid.starts()) w.i32(static_cast<std::int32_t>(s));
  for (Eigen::Index i = 0; i < grid.n_rows(); ++i) {
    for (Eigen::Index k = 0; k < grid.n_cols(); ++k) {
      if (grid.is_present(i, k)) {
        w.f32(static_cast<float>(grid.values()(i, k)));
      } else {
        w.f32_bits(kMissingBits);
      }
    }
  }
  store_file(path, w.bytes());
  store_json(sidecar_path(path), json{{"row_ids", grid.row_ids()}});
}

AttributionGrid read_grid(const std::filesystem::path& path) {
  const std::string bytes = load_file(path);
  ByteReader r(bytes, path.string());
  r.expect_magic("ATG1");
  const std::uint32_t n_rows = r.u32();
  const std::uint32_t n_cols = r.u32();
  const std::uint8_t metric = r.u8();
  if (metric > 2) {
    throw Error(ErrorCode::MetaMismatch,
                path.string() + ": unknown metric " + std::to_string(metric));
  }
  const std::uint32_t mask_length = r.u32();
  const std::int32_t concept_index = r.i32();
  std::vector<Eigen::Index> starts(n_cols);
  for (std::uint32_t k = 0; k < n_cols; ++k) {
    starts[k] = static_cast<Eigen::Index>(r.i32());
  }
  RowMajorMatrixXd values(n_rows, n_cols);
  std::vector<std::uint8_t> present(static_cast<std::size_t>(n_rows) * n_cols);
  for (std::uint32_t i = 0; i < n_rows; ++i) {
    for (std::uint32_t k = 0; k < n_cols; ++k) {
      const float v = std::bit_cast<float>(r.f32_bits());
      const std::size_t cell = static_cast<std::size_t>(i) * n_cols + k;
      if (std::isnan(v)) {
        values(i, k) = 0.0;
        present[cell] = 0;
      } else {
        values(i, k) = static_cast<double>(v);
        present[cell] = 1;
      }
    }
  }
  r.finish();

  const json meta = load_json(sidecar_path(path));
  if (!meta.is_object() || !meta.contains("row_ids") ||
      !meta["row_ids"].is_array()) {
    throw Error(ErrorCode::MetaMismatch,
                path.string() + ": sidecar lacks a row_ids array");
  }
  std::vector<std::string> row_ids;
  for (const json& id : meta["row_ids"]) {
    if (!id.is_string()) {
      throw Error(ErrorCode::MetaMismatch,
                  path.string() + ": non-string row id in sidecar");
    }
    row_ids.push_back(id.get<std::string>());
  }
  if (row_ids.size() != n_rows) {
    throw Error(ErrorCode::MetaMismatch,
                path.string() + ": sidecar has " +
                    std::to_string(row_ids.size()) + " row ids, header claims " +
                    std::to_string(n_rows));
  }

  return AttributionGrid(static_cast<MetricKind>(metric), std::move(row_ids),
                         std::move(starts),
                         static_cast<Eigen::Index>(mask_length),
                         std::move(values), std::move(present), concept_index);
}

void write_grid_csv(const AttributionGrid& grid,
                    const std::filesystem::path& path) {
  std::string out = "row_id";
  for (Eigen::Index s : grid.starts()) {
    out += ",start_" + std::to_string(s);
  }
  out += '\n';
  for (Eigen::Index i = 0; i < grid.n_rows(); ++i) {
    out += csv_field(grid.row_ids()[i]);
    for (Eigen::Index k = 0; k < grid.n_cols(); ++k) {
      out += ',';
      if (grid.is_present(i, k)) out += format_double(grid.values()(i, k));
    }
    out += '\n';
  }
  store_file(path, out);
}

AttributionGrid read_grid_csv(const std::filesystem::path& path,
                              MetricKind metric, Eigen::Index mask_length) {
  const std::vector<std::string> lines = split_lines(load_file(path));
  if (lines.empty()) {
    throw Error(ErrorCode::IoError, path.string() + ": empty grid CSV");
  }
  const std::vector<std::string> header =
      split_csv_line(lines[0], path.string());
  if (header.empty() || header[0] != "row_id") {
    throw Error(ErrorCode::IoError,
                path.string() + ": grid CSV must start with a row_id column");
  }
  const std::size_t n_cols = header.size() - 1;
  std::vector<Eigen::Index> starts(n_cols);
  for (std::size_t k = 0; k < n_cols; ++k) {
    starts[k] = parse_start_header(header[k + 1], path.string());
  }

  const std::size_t n_rows = lines.size() - 1;
  std::vector<std::string> row_ids;
  row_ids.reserve(n_rows);
  RowMajorMatrixXd values(n_rows, n_cols);
  std::vector<std::uint8_t> present(n_rows * n_cols, 0);
  for (std::size_t i = 0; i < n_rows; ++i) {
    const std::vector<std::string> fields =
        split_csv_line(lines[i + 1], path.string());
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::IoError,
                  path.string() + ": row " + std::to_string(i + 1) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(header.size()));
    }
    row_ids.push_back(fields[0]);
    for (std::size_t k = 0; k < n_cols; ++k) {
      if (fields[k + 1].empty()) {
        values(i, k) = 0.0;
      } else {
        values(i, k) = parse_double(fields[k + 1]);
        present[i * n_cols + k] = 1;
      }
    }
  }
  return AttributionGrid(metric, std::move(row_ids), std::move(starts),
                         mask_length, std::move(values), std::move(present));
}

void write_distance_csv(const SymMatrix& d,
                        const std::vector<std::string>& labels,
                        const std::filesystem::path& path) {
  if (static_cast<Eigen::Index>(labels.size()) != d.order()) {
    throw Error(ErrorCode::DimMismatch,
                "write_distance_csv: label count != matrix order");
  }
  std::string out = "label";
  for (const std::string& l : labels) {
    out += ',';
    out += csv_field(l);
  }
  out += '\n';
  for (Eigen::Index i = 0; i < d.order(); ++i) {
    out += csv_field(labels[i]);
    for (Eigen::Index j = 0; j < d.order(); ++j) {
      out += ',';
      out += format_double(d(i, j));
    }
    out += '\n';
  }
  store_file(path, out);
}

void write_dendrogram_json(const Dendrogram& dend,
                           const std::filesystem::path& path) {
  json merges = json::array();
  for (const Merge& m : dend.merges) {
    merges.push_back(json::array({m.node_a, m.node_b, m.height, m.new_node_id}));
  }
  store_json(path, json{{"leaves", dend.leaf_labels}, {"merges", merges}});
}

Dendrogram read_dendrogram_json(const std::filesystem::path& path) {
  const json j = load_json(path);
  if (!j.is_object() || !j.contains("leaves") || !j["leaves"].is_array() ||
      !j.contains("merges") || !j["merges"].is_array()) {
    throw Error(ErrorCode::MetaMismatch,
                path.string() + ": expected leaves and merges arrays");
  }
  Dendrogram dend;
  for (const json& leaf : j["leaves"]) {
    if (!leaf.is_string()) {
      throw Error(ErrorCode::MetaMismatch,
                  path.string() + ": non-string leaf label");
    }
    dend.leaf_labels.push_back(leaf.get<std::string>());
  }
  dend.n_leaves = static_cast<Eigen::Index>(dend.leaf_labels.size());
  for (const json& m : j["merges"]) {
    if (!m.is_array() || m.size() != 4 || !m[0].is_number_integer() ||
        !m[1].is_number_integer() || !m[2].is_number() ||
        !m[3].is_number_integer()) {
      throw Error(ErrorCode::MetaMismatch,
                  path.string() + ": malformed merge record");
    }
    dend.merges.push_back({m[0].get<int>(), m[1].get<int>(), m[2].get<double>(),
                           m[3].get<int>()});
  }
  if (dend.n_leaves < 1 ||
      static_cast<Eigen::Index>(dend.merges.size()) != dend.n_leaves - 1) {
    throw Error(ErrorCode::MetaMismatch,
                path.string() + ": merge count must be n_leaves - 1");
  }
  return dend;
}

void write_assignments_csv(const std::vector<std::string>& labels,
                           const std::vector<int>& assignment,
                           const std::filesystem::path& path) {
  if (labels.size() != assignment.size()) {
    throw Error(ErrorCode::DimMismatch,
                "write_assignments_csv: label count != assignment count");
  }
  std::string out = "label,cluster\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out += csv_field(labels[i]);
    out += ',';
    out += std::to_string(assignment[i]);
    out += '\n';
  }
  store_file(path, out);
}

PlantSpec read_plant_spec(const std::filesystem::path& path) {
  const json j = load_json(path);
  auto require = [&](const char* key) -> const json& {
    if (!j.is_object() || !j.contains(key)) {
      throw Error(ErrorCode::InvalidSpec,
                  path.string() + ": missing field '" + key + "'");
    }
    return j[key];
  };
  PlantSpec spec;
  try {
    spec.n_concepts = require("n_concepts").get<Eigen::Index>();
    spec.n_channels = require("n_channels").get<Eigen::Index>();
    spec.n_timepoints = require("n_timepoints").get<Eigen::Index>();
    spec.sample_rate_hz = require("sample_rate_hz").get<double>();
    spec.snr = require("snr").get<double>();
    spec.trials_per_stimulus = require("trials_per_stimulus").get<Eigen::Index>();
    spec.n_stimuli = require("n_stimuli").get<Eigen::Index>();
    spec.seed = require("seed").get<std::uint64_t>();
    const json& windows = require("windows");
    if (!windows.is_array()) {
      throw Error(ErrorCode::InvalidSpec,
                  path.string() + ": windows must be an array");
    }
    for (const json& w : windows) {
      if (!w.is_object() || !w.contains("start") || !w.contains("length")) {
        throw Error(ErrorCode::InvalidSpec,
                    path.string() + ": window needs start and length");
      }
      spec.windows.push_back(
          {w["start"].get<Eigen::Index>(), w["length"].get<Eigen::Index>()});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidSpec,
                path.string() + ": " + e.what());
  }
  spec.validate();
  return spec;
}

void write_plant_spec(const PlantSpec& spec,
                      const std::filesystem::path& path) {
  json windows = json::array();
  for (const PlantWindow& w : spec.windows) {
    windows.push_back({{"start", w.start}, {"length", w.length}});
  }
  store_json(path, json{{"n_concepts", spec.n_concepts},
                        {"n_channels", spec.n_channels},
                        {"n_timepoints", spec.n_timepoints},
                        {"sample_rate_hz", spec.sample_rate_hz},
                        {"windows", windows},
                        {"snr", spec.snr},
                        {"trials_per_stimulus", spec.trials_per_stimulus},
                        {"n_stimuli", spec.n_stimuli},
                        {"seed", spec.seed}});
}

}  // namespace tempattr
