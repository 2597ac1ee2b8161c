#include "tdec/io.hpp"

#include <fstream>
#include <sstream>

#include "tdec/error.hpp"
#include "tdec/format.hpp"

namespace tdec::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(trim(line.substr(pos)));
      return out;
    }
    out.push_back(trim(line.substr(pos, next - pos)));
    pos = next + 1;
  }
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  for (auto line : split(text, '\n'))
    if (!line.empty()) out.push_back(line);
  return out;
}

double cell_number(std::string_view cell, std::size_t row, std::size_t col) {
  double v = 0.0;
  if (!parse_double(cell, v)) throw FormatError("non-numeric cell '" + std::string(cell) + "'", row, col);
  return v;
}

Label cell_label(std::string_view cell, std::size_t row, std::size_t col) {
  const auto l = parse_label(cell);
  if (!l) throw FormatError("unknown label '" + std::string(cell) + "'", row, col);
  return *l;
}

Modality cell_modality(std::string_view cell, std::size_t row, std::size_t col) {
  const auto m = parse_modality(cell);
  if (!m) throw FormatError("unknown modality '" + std::string(cell) + "'", row, col);
  return *m;
}

json num(double v) { return round_g12(v); }

json num_array(std::span<const double> values) {
  json out = json::array();
  for (double v : values) out.push_back(num(v));
  return out;
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing JSON field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad JSON field '") + key + "': " + e.what());
  }
}

}  // namespace

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "'");
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("error writing '" + tmp.string() + "'");
  }
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "'");
}

std::string write_matrix_csv(const Matrix& m) {
  std::string out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += format_g12(m(r, c));
    }
    out += '\n';
  }
  return out;
}

Matrix parse_matrix_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw FormatError("matrix CSV is empty");
  const std::size_t n = split(lines[0], ',').size();
  if (lines.size() != n)
    throw FormatError("matrix CSV has " + std::to_string(lines.size()) + " rows and " +
                      std::to_string(n) + " columns; expected a square matrix");
  Matrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto cells = split(lines[r], ',');
    if (cells.size() != n) throw FormatError("ragged matrix row", r + 1, cells.size());
    for (std::size_t c = 0; c < n; ++c) m(r, c) = cell_number(cells[c], r + 1, c + 1);
  }
  return m;
}

std::string write_sidecar(const MatrixSidecar& s) {
  json j;
  j["channels"] = s.channel_names.size();
  j["channel_names"] = s.channel_names;
  j["num_delays"] = s.config.num_delays;
  j["delay_scale"] = s.config.delay_scale;
  j["sample_rate_hz"] = num(s.sample_rate_hz);
  j["segment_id"] = s.segment_id;
  j["subject_id"] = s.subject_id;
  j["modality"] = std::string(to_string(s.modality));
  return dump(j);
}

MatrixSidecar parse_sidecar(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("sidecar is not valid JSON: ") + e.what());
  }
  MatrixSidecar s;
  s.channel_names = field<std::vector<std::string>>(j, "channel_names");
  if (field<std::size_t>(j, "channels") != s.channel_names.size())
    throw FormatError("sidecar channel count does not match channel_names");
  s.config.num_delays = field<std::size_t>(j, "num_delays");
  s.config.delay_scale = field<std::size_t>(j, "delay_scale");
  s.sample_rate_hz = field<double>(j, "sample_rate_hz");
  s.segment_id = field<std::string>(j, "segment_id");
  s.subject_id = field<std::string>(j, "subject_id");
  const auto m = parse_modality(field<std::string>(j, "modality"));
  if (!m) throw FormatError("sidecar has an unknown modality");
  s.modality = *m;
  return s;
}

std::string write_spectrum_csv(std::span<const SpectrumRecord> records) {
  std::string out = "segment_id,subject_id,label,modality";
  const std::size_t dim = records.empty() ? 0 : records.front().spectrum.dim();
  for (std::size_t j = 0; j < dim; ++j) out += ",e" + std::to_string(j);
  out += '\n';
  for (const auto& r : records) {
    if (r.spectrum.dim() != dim) throw ValueError("spectra in one file must share a dimension");
    out += r.segment_id + "," + r.subject_id + "," + std::string(to_string(r.label)) + "," +
           std::string(to_string(r.modality));
    for (double v : r.spectrum.values) out += "," + format_g12(v);
    out += '\n';
  }
  return out;
}

std::vector<SpectrumRecord> parse_spectrum_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw FormatError("spectrum CSV is empty");
  const auto header = split(lines[0], ',');
  if (header.size() < 5 || header[0] != "segment_id" || header[1] != "subject_id" ||
      header[2] != "label" || header[3] != "modality")
    throw FormatError("spectrum CSV header must start with segment_id,subject_id,label,modality");
  const std::size_t dim = header.size() - 4;
  std::vector<SpectrumRecord> out;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split(lines[r], ',');
    if (cells.size() != header.size())
      throw FormatError("expected " + std::to_string(header.size()) + " cells", r, cells.size());
    SpectrumRecord rec;
    rec.segment_id = std::string(cells[0]);
    rec.subject_id = std::string(cells[1]);
    rec.label = cell_label(cells[2], r, 3);
    rec.modality = cell_modality(cells[3], r, 4);
    rec.spectrum.values.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) rec.spectrum.values[j] = cell_number(cells[4 + j], r, 5 + j);
    out.push_back(std::move(rec));
  }
  return out;
}

std::string write_feature_csv(std::span<const FeatureInstance> instances) {
  std::string out = "subject_id,label,modality,segment_id";
  const std::size_t dim = instances.empty() ? 0 : instances.front().features.size();
  for (std::size_t f = 0; f < dim; ++f) out += ",f" + std::to_string(f);
  out += '\n';
  for (const auto& inst : instances) {
    if (inst.features.size() != dim) throw ValueError("instances in one file must share a feature count");
    out += inst.subject_id + "," + std::string(to_string(inst.label)) + "," +
           std::string(to_string(inst.modality)) + "," + inst.segment_id;
    for (double v : inst.features) out += "," + format_g12(v);
    out += '\n';
  }
  return out;
}

std::vector<FeatureInstance> parse_feature_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw FormatError("feature CSV is empty");
  const auto header = split(lines[0], ',');
  if (header.size() < 5 || header[0] != "subject_id" || header[1] != "label" ||
      header[2] != "modality" || header[3] != "segment_id")
    throw FormatError("feature CSV header must start with subject_id,label,modality,segment_id");
  const std::size_t dim = header.size() - 4;
  std::vector<FeatureInstance> out;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split(lines[r], ',');
    if (cells.size() != header.size())
      throw FormatError("expected " + std::to_string(header.size()) + " cells", r, cells.size());
    FeatureInstance inst;
    inst.subject_id = std::string(cells[0]);
    inst.label = cell_label(cells[1], r, 2);
    inst.modality = cell_modality(cells[2], r, 3);
    inst.segment_id = std::string(cells[3]);
    inst.features.resize(dim);
    for (std::size_t f = 0; f < dim; ++f) inst.features[f] = cell_number(cells[4 + f], r, 5 + f);
    out.push_back(std::move(inst));
  }
  return out;
}

std::string write_labels_csv(const std::map<std::string, Label>& labels) {
  std::string out = "subject_id,label\n";
  for (const auto& [subject, label] : labels) out += subject + "," + std::string(to_string(label)) + "\n";
  return out;
}

std::map<std::string, Label> parse_labels_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines[0] != "subject_id,label")
    throw FormatError("label file header must be subject_id,label");
  std::map<std::string, Label> out;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split(lines[r], ',');
    if (cells.size() != 2) throw FormatError("expected 2 cells", r, cells.size());
    if (!out.emplace(std::string(cells[0]), cell_label(cells[1], r, 2)).second)
      throw FormatError("duplicate subject '" + std::string(cells[0]) + "'", r, 1);
  }
  return out;
}

json to_json(const SvmModel& m) {
  json j;
  j["gamma"] = num(m.gamma);
  j["bias"] = num(m.bias);
  json standardizer = json::array();
  for (std::size_t f = 0; f < m.standardizer.dim(); ++f)
    standardizer.push_back({num(m.standardizer.mean[f]), num(m.standardizer.stddev[f])});
  j["standardizer"] = standardizer;
  json svs = json::array();
  for (std::size_t i = 0; i < m.support_vectors.rows(); ++i)
    svs.push_back(num_array(m.support_vectors.row(i)));
  j["support_vectors"] = svs;
  j["dual_coefficients"] = num_array(m.dual_coefficients);
  j["params"] = {{"c", num(m.params.c)},
                 {"gamma", m.params.gamma ? json(num(*m.params.gamma)) : json("auto")},
                 {"kkt_tol", num(m.params.kkt_tol)},
                 {"max_passes", m.params.max_passes}};
  j["convergence_flag"] = m.converged;
  j["labels"] = {{"positive", std::string(to_string(m.positive))},
                 {"negative", std::string(to_string(m.negative))}};
  return j;
}

SvmModel svm_model_from_json(const json& j) {
  SvmModel m;
  m.gamma = field<double>(j, "gamma");
  m.bias = field<double>(j, "bias");
  for (const auto& pair : field<std::vector<std::vector<double>>>(j, "standardizer")) {
    if (pair.size() != 2 || !(pair[1] > 0.0)) throw FormatError("bad standardizer entry");
    m.standardizer.mean.push_back(pair[0]);
    m.standardizer.stddev.push_back(pair[1]);
  }
  const auto svs = field<std::vector<std::vector<double>>>(j, "support_vectors");
  m.dual_coefficients = field<std::vector<double>>(j, "dual_coefficients");
  if (svs.size() != m.dual_coefficients.size())
    throw FormatError("support vector and coefficient counts differ");
  m.support_vectors = Matrix(svs.size(), m.standardizer.dim());
  for (std::size_t i = 0; i < svs.size(); ++i) {
    if (svs[i].size() != m.standardizer.dim()) throw FormatError("support vector has wrong dimension");
    std::copy(svs[i].begin(), svs[i].end(), m.support_vectors.row(i).begin());
  }
  const auto& params = j.at("params");
  m.params.c = field<double>(params, "c");
  if (params.contains("gamma") && params["gamma"].is_number()) m.params.gamma = params["gamma"].get<double>();
  m.params.kkt_tol = field<double>(params, "kkt_tol");
  m.params.max_passes = field<std::size_t>(params, "max_passes");
  m.converged = field<bool>(j, "convergence_flag");
  const auto& labels = j.at("labels");
  const auto pos = parse_label(field<std::string>(labels, "positive"));
  const auto neg = parse_label(field<std::string>(labels, "negative"));
  if (!pos || !neg) throw FormatError("unknown label in model file");
  m.positive = *pos;
  m.negative = *neg;
  return m;
}

json to_json(const StackingModel& model) {
  json j;
  json bases = json::object();
  for (const auto& [modality, base] : model.base_models) bases[std::string(to_string(modality))] = to_json(base);
  j["base_models"] = bases;
  json weights = json::object();
  for (const auto& [modality, w] : model.meta.weights) weights[std::string(to_string(modality))] = num(w);
  j["meta"] = {{"weights", weights}, {"intercept", num(model.meta.intercept)}};
  j["labels"] = {{"positive", std::string(to_string(model.positive))},
                 {"negative", std::string(to_string(model.negative))}};
  return j;
}

StackingModel stacking_model_from_json(const json& j) {
  StackingModel model;
  for (const auto& [key, value] : j.at("base_models").items()) {
    const auto m = parse_modality(key);
    if (!m) throw FormatError("unknown modality '" + key + "' in stacking model");
    model.base_models.emplace(*m, svm_model_from_json(value));
  }
  const auto& meta = j.at("meta");
  for (const auto& [key, value] : meta.at("weights").items()) {
    const auto m = parse_modality(key);
    if (!m) throw FormatError("unknown modality '" + key + "' in stacking weights");
    model.meta.weights[*m] = value.get<double>();
  }
  model.meta.intercept = field<double>(meta, "intercept");
  if (j.contains("labels")) {
    const auto pos = parse_label(field<std::string>(j["labels"], "positive"));
    const auto neg = parse_label(field<std::string>(j["labels"], "negative"));
    if (!pos || !neg) throw FormatError("unknown label in stacking model");
    model.positive = *pos;
    model.negative = *neg;
  }
  return model;
}

json to_json(const CvReport& report) {
  json folds = json::array();
  for (const auto& fold : report.folds) {
    json preds = json::array();
    for (const auto& p : fold.predictions)
      preds.push_back({{"segment_id", p.segment_id},
                       {"label", std::string(to_string(p.truth))},
                       {"predicted", std::string(to_string(p.predicted))},
                       {"score", num(p.score)}});
    folds.push_back({{"held_out_subject", fold.held_out_subject},
                     {"predictions", preds},
                     {"accuracy", num(fold.accuracy)},
                     {"converged", fold.converged}});
  }
  json f1 = json::object();
  for (const auto& [label, value] : report.f1_per_class) f1[std::string(to_string(label))] = num(value);
  return {{"folds", folds},
          {"mean_accuracy", num(report.mean_accuracy)},
          {"f1_per_class", f1},
          {"convergence_warnings", report.convergence_warnings}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace tdec::io
