#include "tdec/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "tdec/error.hpp"
#include "tdec/format.hpp"

namespace tdec {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
}

std::vector<std::string_view> split_lines(std::string_view text) {
  auto lines = split(text, '\n');
  for (auto& l : lines)
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

}  // namespace

ChannelSet::ChannelSet(double sample_rate_hz, std::vector<std::string> channel_names,
                       Matrix samples, Modality modality)
    : rate_(sample_rate_hz),
      names_(std::move(channel_names)),
      samples_(std::move(samples)),
      modality_(modality) {
  if (!(rate_ > 0.0) || !std::isfinite(rate_)) throw ValueError("sample rate must be positive");
  if (names_.empty()) throw ValueError("channel set has no channels");
  if (samples_.cols() != names_.size())
    throw ValueError("sample matrix has " + std::to_string(samples_.cols()) + " columns but " +
                     std::to_string(names_.size()) + " channel names");
  std::set<std::string> seen;
  for (const auto& n : names_)
    if (!seen.insert(n).second) throw ValueError("duplicate channel name '" + n + "'");
  for (std::size_t r = 0; r < samples_.rows(); ++r)
    for (std::size_t c = 0; c < samples_.cols(); ++c)
      if (!std::isfinite(samples_(r, c)))
        throw ValueError("non-finite sample at row " + std::to_string(r + 1) + ", column " +
                         std::to_string(c + 1));
}

ChannelSet parse_channel_csv(std::string_view text, double sample_rate_hz, Modality modality) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw FormatError("channel CSV is empty");

  std::vector<std::string> names;
  for (auto cell : split(lines[0], ',')) {
    auto name = unquote(cell);
    if (name.empty()) throw FormatError("empty channel name in header", 0, names.size() + 1);
    names.push_back(std::move(name));
  }
  {
    std::set<std::string_view> seen;
    for (std::size_t c = 0; c < names.size(); ++c)
      if (!seen.insert(names[c]).second)
        throw FormatError("duplicate channel name '" + names[c] + "'", 0, c + 1);
  }

  const std::size_t rows = lines.size() - 1;
  if (rows == 0) throw FormatError("channel CSV has a header but no samples");
  Matrix samples(rows, names.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const auto cells = split(lines[r + 1], ',');
    if (cells.size() != names.size())
      throw FormatError("expected " + std::to_string(names.size()) + " cells, found " +
                            std::to_string(cells.size()),
                        r + 1, std::min(cells.size(), names.size()) + 1);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      if (!parse_double(cells[c], v))
        throw FormatError("non-numeric cell '" + std::string(trim(cells[c])) + "'", r + 1, c + 1);
      if (!std::isfinite(v))
        throw ValueError("non-finite value '" + std::string(trim(cells[c])) + "' at row " +
                         std::to_string(r + 1) + ", column " + std::to_string(c + 1));
      samples(r, c) = v;
    }
  }
  return ChannelSet(sample_rate_hz, std::move(names), std::move(samples), modality);
}

std::string write_channel_csv(const ChannelSet& cs) {
  std::string out;
  const auto& names = cs.channel_names();
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (c) out += ',';
    out += names[c];
  }
  out += '\n';
  const Matrix& m = cs.samples();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += format_exact(m(r, c));
    }
    out += '\n';
  }
  return out;
}

SegmentManifest make_manifest(std::vector<ManifestEntry> entries) {
  for (const auto& e : entries) {
    if (!std::isfinite(e.start_s) || !std::isfinite(e.end_s))
      throw ValueError("manifest entry for '" + e.speaker + "' has a non-finite time");
    if (e.start_s < 0.0)
      throw ValueError("manifest entry for '" + e.speaker + "' starts before 0");
    if (!(e.end_s > e.start_s))
      throw ValueError("manifest entry for '" + e.speaker + "' ends at " + format_g12(e.end_s) +
                       " s, not after its start " + format_g12(e.start_s) + " s");
  }
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.speaker != b.speaker) return a.speaker < b.speaker;
    return a.start_s < b.start_s;
  });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const auto& prev = entries[i - 1];
    const auto& cur = entries[i];
    if (prev.speaker == cur.speaker && cur.start_s < prev.end_s)
      throw ValueError("overlapping entries for speaker '" + cur.speaker + "': [" +
                       format_g12(prev.start_s) + ", " + format_g12(prev.end_s) + ") and [" +
                       format_g12(cur.start_s) + ", " + format_g12(cur.end_s) + ")");
  }
  return SegmentManifest{std::move(entries)};
}

SegmentManifest parse_segment_manifest(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw FormatError("manifest must be a JSON array");
  std::vector<ManifestEntry> entries;
  entries.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    const auto where = " in manifest entry " + std::to_string(i);
    if (!item.is_object()) throw FormatError("expected an object" + where);
    if (!item.contains("speaker") || !item["speaker"].is_string())
      throw FormatError("missing string field 'speaker'" + where);
    for (const char* key : {"start_s", "end_s"})
      if (!item.contains(key) || !item[key].is_number())
        throw FormatError(std::string("missing numeric field '") + key + "'" + where);
    entries.push_back({item["speaker"].get<std::string>(), item["start_s"].get<double>(),
                       item["end_s"].get<double>()});
  }
  return make_manifest(std::move(entries));
}

std::string write_segment_manifest(const SegmentManifest& manifest) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& e : manifest.entries)
    doc.push_back({{"speaker", e.speaker}, {"start_s", e.start_s}, {"end_s", e.end_s}});
  return doc.dump(1) + "\n";
}

Segment::Segment(const ChannelSet& source, std::size_t start_index, std::size_t end_index,
                 std::string id)
    : source_(&source), start_(start_index), end_(end_index), id_(std::move(id)) {
  if (!(start_ < end_ && end_ <= source.num_samples()))
    throw ValueError("segment [" + std::to_string(start_) + ", " + std::to_string(end_) +
                     ") is outside a signal of " + std::to_string(source.num_samples()) +
                     " samples");
}

std::vector<Segment> extract_segments(const ChannelSet& cs, const SegmentManifest& manifest,
                                      std::string_view speaker_id, double min_duration_s) {
  if (!(min_duration_s >= 0.0)) throw ValueError("minimum segment duration must be nonnegative");
  const double rate = cs.sample_rate_hz();
  const auto rows = static_cast<long long>(cs.num_samples());
  const auto to_index = [&](double t) {
    return std::clamp(static_cast<long long>(std::llround(t * rate)), 0LL, rows);
  };

  std::vector<Segment> out;
  std::size_t ordinal = 0;
  for (const auto& e : manifest.entries) {
    if (e.speaker != speaker_id) continue;
    const std::size_t k = ordinal++;
    const long long start = to_index(e.start_s);
    const long long end = to_index(e.end_s);
    if (end <= start) continue;
    const double duration = static_cast<double>(end - start) / rate;
    if (!(duration > min_duration_s)) continue;
    out.emplace_back(cs, static_cast<std::size_t>(start), static_cast<std::size_t>(end),
                     std::string(speaker_id) + "_" + std::to_string(k));
  }
  return out;
}

}  // namespace tdec
