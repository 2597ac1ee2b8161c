#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tdec/matrix.hpp"
#include "tdec/types.hpp"

namespace tdec {

// Uniformly sampled multichannel time series; rows are time, columns channels.
// Immutable once constructed; the constructor enforces the invariants.
class ChannelSet {
 public:
  ChannelSet(double sample_rate_hz, std::vector<std::string> channel_names, Matrix samples,
             Modality modality);

  double sample_rate_hz() const noexcept { return rate_; }
  const std::vector<std::string>& channel_names() const noexcept { return names_; }
  const Matrix& samples() const noexcept { return samples_; }
  Modality modality() const noexcept { return modality_; }
  std::size_t num_channels() const noexcept { return names_.size(); }
  std::size_t num_samples() const noexcept { return samples_.rows(); }

 private:
  double rate_;
  std::vector<std::string> names_;
  Matrix samples_;
  Modality modality_;
};

struct ManifestEntry {
  std::string speaker;
  double start_s = 0.0;
  double end_s = 0.0;
  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

// Speaker turns; entries are grouped by speaker and sorted by start time.
struct SegmentManifest {
  std::vector<ManifestEntry> entries;
};

// Half-open sample range [start_index, end_index) of a ChannelSet. Non-owning:
// must not outlive its source.
class Segment {
 public:
  Segment(const ChannelSet& source, std::size_t start_index, std::size_t end_index,
          std::string id = {});

  const ChannelSet& source() const noexcept { return *source_; }
  std::size_t start_index() const noexcept { return start_; }
  std::size_t end_index() const noexcept { return end_; }
  std::size_t length() const noexcept { return end_ - start_; }
  double duration_s() const noexcept {
    return static_cast<double>(length()) / source_->sample_rate_hz();
  }
  const std::string& id() const noexcept { return id_; }

  std::span<const double> row(std::size_t t) const { return source_->samples().row(start_ + t); }
  double at(std::size_t t, std::size_t channel) const {
    return source_->samples()(start_ + t, channel);
  }

 private:
  const ChannelSet* source_;
  std::size_t start_;
  std::size_t end_;
  std::string id_;
};

inline constexpr double kDefaultMinSegmentSeconds = 5.0;

ChannelSet parse_channel_csv(std::string_view text, double sample_rate_hz, Modality modality);
// Shortest round-trip formatting; parse_channel_csv(write_channel_csv(cs)) reproduces cs exactly.
std::string write_channel_csv(const ChannelSet& cs);

SegmentManifest parse_segment_manifest(std::string_view json_text);
std::string write_segment_manifest(const SegmentManifest& manifest);
// Validates and canonicalizes (group by speaker, sort by start). Throws ValueError.
SegmentManifest make_manifest(std::vector<ManifestEntry> entries);

// Segments of `speaker_id` strictly longer than min_duration_s. Each segment id
// is "<speaker>_<k>" where k is the 0-based ordinal of the entry among that
// speaker's manifest entries, so ids line up across modalities.
std::vector<Segment> extract_segments(const ChannelSet& cs, const SegmentManifest& manifest,
                                      std::string_view speaker_id,
                                      double min_duration_s = kDefaultMinSegmentSeconds);

}  // namespace tdec
