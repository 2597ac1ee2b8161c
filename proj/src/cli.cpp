#include "tdec/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <set>

#include <CLI11.hpp>

#include "tdec/cv.hpp"
#include "tdec/embedding.hpp"
#include "tdec/error.hpp"
#include "tdec/format.hpp"
#include "tdec/fusion.hpp"
#include "tdec/ingest.hpp"
#include "tdec/io.hpp"
#include "tdec/presets.hpp"
#include "tdec/spectrum.hpp"
#include "tdec/synth.hpp"

namespace tdec::cli {

namespace fs = std::filesystem;

namespace {

struct Settings {
  // shared flags
  std::uint64_t seed = 42;
  std::string out_dir = ".";
  std::string preset;
  std::optional<std::size_t> delay_scale;
  std::optional<std::size_t> num_delays;
  std::optional<double> rate;
  double min_segment_s = kDefaultMinSegmentSeconds;
  std::string ranges;
  double c = 1.0;
  std::string gamma = "auto";
  std::string reference = "HC";

  // synth
  std::string subjects = "6,6";
  std::string rank = "5,2";
  std::optional<std::size_t> channels;
  std::size_t segments = 3;
  double segment_s = 10.0;
  double gap_s = 2.0;
  double noise = 0.05;
  double halflife = 4.0;
  double jitter = 0.0;

  // corr
  std::string input;
  std::string manifest;
  std::string speaker;
  std::string cohort;

  // eig / features / plotdata
  std::vector<std::string> matrices;
  std::string labels;
  std::string spectra;

  // cv / fuse
  std::vector<std::string> features;
  std::string standardize = "fold";
  std::string save_model;
};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

// Re-throws with the same exit category and a location prefix.
[[noreturn]] void rethrow_with_context(const Error& e, const std::string& context) {
  throw Error(e.kind(), context + ": " + e.what());
}

std::vector<std::size_t> parse_counts(const std::string& text, const char* flag) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const auto token = trim(std::string_view(text).substr(pos, comma - pos));
    double v = 0.0;
    if (!parse_double(token, v) || v < 0.0 || v != static_cast<double>(static_cast<std::size_t>(v)))
      throw FormatError(std::string("bad value '") + std::string(token) + "' for " + flag);
    out.push_back(static_cast<std::size_t>(v));
    pos = comma + 1;
  }
  return out;
}

struct ResolvedModality {
  Modality modality = Modality::OTHER;
  double rate = 0.0;
  EmbeddingConfig embedding;
  std::vector<IndexRange> ranges;
  std::size_t channels = 6;
};

ResolvedModality resolve(const Settings& s, bool need_embedding) {
  ResolvedModality r;
  if (!s.preset.empty()) {
    const auto p = parse_preset(s.preset);
    if (!p) throw FormatError("unknown preset '" + s.preset + "' (expected tv or fau)");
    r.modality = p->modality;
    r.rate = p->sample_rate_hz;
    r.embedding = p->embedding;
    r.ranges = p->ranges;
    r.channels = p->channels;
  }
  if (s.rate) r.rate = *s.rate;
  if (s.delay_scale) r.embedding.delay_scale = *s.delay_scale;
  if (s.num_delays) r.embedding.num_delays = *s.num_delays;
  if (!s.ranges.empty()) r.ranges = parse_ranges(s.ranges);
  if (need_embedding) {
    if (!(r.rate > 0.0)) throw FormatError("a sample rate is required (--preset or --rate)");
    if (s.preset.empty() && (!s.delay_scale || !s.num_delays))
      throw FormatError("--delay-scale and --num-delays are required without --preset");
    if (r.embedding.delay_scale < 1 || r.embedding.num_delays < 1)
      throw FormatError("--delay-scale and --num-delays must be at least 1");
  }
  return r;
}

SvmParams svm_params(const Settings& s) {
  SvmParams p;
  p.c = s.c;
  if (s.gamma != "auto") {
    double g = 0.0;
    if (!parse_double(s.gamma, g)) throw FormatError("bad value '" + s.gamma + "' for --gamma");
    p.gamma = g;
  }
  try {
    p.validate();
  } catch (const ValueError& e) {
    throw FormatError(e.what());
  }
  return p;
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
  return buf;
}

void print_summary(std::ostream& out, const std::string& method, const std::string& ranges,
                   const CvReport& report) {
  const auto f1 = [&](Label l) {
    const auto it = report.f1_per_class.find(l);
    return it == report.f1_per_class.end() ? std::string("-") : percent(it->second);
  };
  out << "Method | Index range | Accuracy | F1(S)/F1(H)\n";
  out << method << " | " << (ranges.empty() ? "-" : ranges) << " | "
      << percent(report.mean_accuracy) << "% | " << f1(Label::SZ) << "/" << f1(Label::HC) << "\n";
  out << "folds: " << report.folds.size();
  if (report.convergence_warnings > 0)
    out << " (" << report.convergence_warnings << " with unconverged SVM training)";
  out << "\n";
}

// ---------------------------------------------------------------- synth

int cmd_synth(const Settings& s, std::ostream& out) {
  const std::string preset = s.preset.empty() ? "tv" : s.preset;
  const auto p = parse_preset(preset);
  if (!p) throw FormatError("unknown preset '" + preset + "' (expected tv or fau)");

  const auto counts = parse_counts(s.subjects, "--subjects");
  auto ranks = parse_counts(s.rank, "--rank");
  if (counts.empty() || counts.size() > 3)
    throw FormatError("--subjects takes one to three counts (SZ,HC,MDD)");
  if (ranks.size() == 1) ranks.resize(counts.size(), ranks.front());
  if (ranks.size() != counts.size()) throw FormatError("--rank needs one value per class");

  static const Label order[] = {Label::SZ, Label::HC, Label::MDD};
  std::vector<ClassSpec> classes;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    ClassSpec cls;
    cls.label = order[k];
    cls.subjects = counts[k];
    cls.tmpl.channels = s.channels.value_or(p->channels);
    cls.tmpl.sample_rate_hz = s.rate.value_or(p->sample_rate_hz);
    cls.tmpl.latent_rank = ranks[k];
    cls.tmpl.noise_amplitude = s.noise;
    cls.tmpl.smoothing_halflife_samples = s.halflife;
    cls.tmpl.modality = p->modality;
    cls.tmpl.validate();
    classes.push_back(cls);
  }
  CohortOptions options;
  options.segments_per_subject = s.segments;
  options.segment_s = s.segment_s;
  options.gap_s = s.gap_s;
  options.jitter = s.jitter;
  options.seed = s.seed;

  const auto cohort = generate_cohort(classes, options);
  const fs::path dir(s.out_dir);
  const std::string mod = lower(to_string(p->modality));
  std::map<std::string, Label> labels;
  for (const auto& rec : cohort) {
    io::write_file_atomic(dir / (rec.subject_id + "_" + mod + ".csv"), write_channel_csv(rec.signals));
    io::write_file_atomic(dir / (rec.subject_id + "_manifest.json"), write_segment_manifest(rec.manifest));
    labels[rec.subject_id] = rec.label;
  }
  io::write_file_atomic(dir / "labels.csv", io::write_labels_csv(labels));
  out << "synth: wrote " << cohort.size() << " subjects (" << to_string(p->modality) << ", "
      << s.segments << " segments each) to " << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- corr

struct CorrJob {
  fs::path channels;
  fs::path manifest;
  std::string speaker;
};

int cmd_corr(const Settings& s, std::ostream& out, std::ostream& err) {
  const auto cfg = resolve(s, true);
  if (!(s.min_segment_s >= 0.0)) throw FormatError("--min-segment-s must be nonnegative");

  std::vector<CorrJob> jobs;
  if (!s.cohort.empty()) {
    const fs::path dir(s.cohort);
    const auto labels = io::parse_labels_csv(io::read_text_file(dir / "labels.csv"));
    const std::string mod = lower(to_string(cfg.modality));
    for (const auto& [subject, label] : labels)
      jobs.push_back({dir / (subject + "_" + mod + ".csv"), dir / (subject + "_manifest.json"), subject});
  } else {
    if (s.input.empty() || s.manifest.empty() || s.speaker.empty())
      throw FormatError("corr needs --input, --manifest and --speaker (or --cohort)");
    jobs.push_back({s.input, s.manifest, s.speaker});
  }

  const fs::path dir(s.out_dir);
  const std::string mod = lower(to_string(cfg.modality));
  std::size_t written = 0;
  std::size_t dim = 0;
  for (const auto& job : jobs) {
    const std::string text = io::read_text_file(job.channels);
    std::optional<ChannelSet> cs;
    SegmentManifest manifest;
    try {
      cs.emplace(parse_channel_csv(text, cfg.rate, cfg.modality));
    } catch (const Error& e) {
      rethrow_with_context(e, job.channels.string());
    }
    try {
      manifest = parse_segment_manifest(io::read_text_file(job.manifest));
    } catch (const Error& e) {
      rethrow_with_context(e, job.manifest.string());
    }
    const auto segments = extract_segments(*cs, manifest, job.speaker, s.min_segment_s);
    if (segments.empty())
      err << "warning: no segments of speaker '" << job.speaker << "' longer than "
          << format_g12(s.min_segment_s) << " s in " << job.manifest.string() << "\n";
    for (const auto& seg : segments) {
      CorrelationMatrix m;
      try {
        m = channel_delay_correlation(seg, cfg.embedding);
      } catch (const Error& e) {
        rethrow_with_context(e, job.channels.string() + " segment " + seg.id());
      }
      const std::string stem = seg.id() + "_" + mod + ".matrix";
      io::write_file_atomic(dir / (stem + ".csv"), io::write_matrix_csv(m.values));
      io::write_file_atomic(dir / (stem + ".json"),
                            io::write_sidecar({m.channel_names, m.config, m.sample_rate_hz, seg.id(),
                                               job.speaker, cfg.modality}));
      dim = m.dim();
      ++written;
    }
  }
  out << "corr: wrote " << written << " matrices";
  if (written > 0) out << " (" << dim << "x" << dim << ")";
  out << " for " << jobs.size() << " speaker(s) to " << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- eig

int cmd_eig(const Settings& s, std::ostream& out) {
  if (s.labels.empty()) throw FormatError("eig needs --labels");
  const auto labels = io::parse_labels_csv(io::read_text_file(s.labels));

  std::vector<fs::path> files;
  for (const auto& m : s.matrices) {
    const fs::path p(m);
    if (fs::is_directory(p)) {
      for (const auto& entry : fs::directory_iterator(p)) {
        const auto name = entry.path().filename().string();
        if (name.size() > 11 && name.ends_with(".matrix.csv")) files.push_back(entry.path());
      }
    } else {
      files.push_back(p);
    }
  }
  if (files.empty()) throw FormatError("eig needs matrix files or a directory containing them");
  std::sort(files.begin(), files.end());

  std::map<Modality, std::vector<io::SpectrumRecord>> by_modality;
  for (const auto& file : files) {
    std::string stem = file.string();
    if (stem.ends_with(".csv")) stem.resize(stem.size() - 4);
    io::MatrixSidecar meta;
    Matrix values;
    try {
      meta = io::parse_sidecar(io::read_text_file(stem + ".json"));
      values = io::parse_matrix_csv(io::read_text_file(file));
    } catch (const Error& e) {
      rethrow_with_context(e, file.string());
    }
    const auto label = labels.find(meta.subject_id);
    if (label == labels.end())
      throw DataError(file.string() + ": subject '" + meta.subject_id + "' has no label");
    io::SpectrumRecord rec{meta.segment_id, meta.subject_id, label->second, meta.modality, {}};
    try {
      rec.spectrum = eigenspectrum(values);
    } catch (const Error& e) {
      rethrow_with_context(e, file.string());
    }
    by_modality[meta.modality].push_back(std::move(rec));
  }

  const fs::path dir(s.out_dir);
  for (const auto& [modality, records] : by_modality) {
    const auto path = dir / ("spectra_" + lower(to_string(modality)) + ".csv");
    io::write_file_atomic(path, io::write_spectrum_csv(records));
    out << "eig: wrote " << records.size() << " spectra of dimension "
        << records.front().spectrum.dim() << " to " << path.string() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- features

int cmd_features(const Settings& s, std::ostream& out) {
  if (s.spectra.empty()) throw FormatError("features needs --spectra");
  std::vector<IndexRange> explicit_ranges;
  if (!s.ranges.empty()) explicit_ranges = parse_ranges(s.ranges);
  const auto records = io::parse_spectrum_csv(io::read_text_file(s.spectra));
  if (records.empty()) throw DataError(s.spectra + ": no spectra");

  std::map<Modality, std::vector<FeatureInstance>> by_modality;
  for (const auto& rec : records) {
    std::vector<IndexRange> ranges = explicit_ranges;
    if (ranges.empty()) {
      std::optional<ModalityPreset> p =
          s.preset.empty() ? preset_for(rec.modality) : parse_preset(s.preset);
      if (!p) throw FormatError("no default index ranges for modality " +
                                std::string(to_string(rec.modality)) + "; pass --ranges");
      ranges = p->ranges;
    }
    try {
      by_modality[rec.modality].push_back(pool_features(normalize(rec.spectrum), ranges, rec.subject_id,
                                                         rec.label, rec.modality, rec.segment_id));
    } catch (const Error& e) {
      rethrow_with_context(e, s.spectra + " segment " + rec.segment_id);
    }
  }
  const fs::path dir(s.out_dir);
  for (const auto& [modality, instances] : by_modality) {
    const auto path = dir / ("features_" + lower(to_string(modality)) + ".csv");
    io::write_file_atomic(path, io::write_feature_csv(instances));
    out << "features: wrote " << instances.size() << " instances with "
        << instances.front().features.size() << " features to " << path.string() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- cv / fuse

std::string ranges_for_summary(const Settings& s, Modality modality) {
  if (!s.ranges.empty()) return format_ranges(parse_ranges(s.ranges));
  if (const auto p = preset_for(modality)) return format_ranges(p->ranges);
  return {};
}

int cmd_cv(const Settings& s, std::ostream& out) {
  if (s.features.size() != 1) throw FormatError("cv needs exactly one --features file");
  const auto params = svm_params(s);
  StandardizeScope scope;
  if (s.standardize == "fold")
    scope = StandardizeScope::PerFold;
  else if (s.standardize == "all")
    scope = StandardizeScope::AllInstances;
  else
    throw FormatError("--standardize must be 'fold' or 'all'");

  const auto instances = io::parse_feature_csv(io::read_text_file(s.features.front()));
  if (instances.empty()) throw DataError(s.features.front() + ": no instances");
  const Modality modality = instances.front().modality;
  CvReport report;
  try {
    report = loso_cv(instances, params, scope);
  } catch (const ValueError& e) {
    throw DataError(e.what());
  }

  const fs::path path = fs::path(s.out_dir) / ("cv_" + lower(to_string(modality)) + ".json");
  io::write_file_atomic(path, io::dump(io::to_json(report)));
  if (!s.save_model.empty()) io::write_file_atomic(s.save_model, io::dump(io::to_json(fit_svm(instances, params))));
  print_summary(out, std::string(to_string(modality)), ranges_for_summary(s, modality), report);
  out << "report: " << path.string() << "\n";
  return 0;
}

int cmd_fuse(const Settings& s, std::ostream& out) {
  if (s.features.size() != 2) throw FormatError("fuse needs two --features files");
  const auto params = svm_params(s);
  ModalityDatasets datasets;
  for (const auto& file : s.features) {
    auto instances = io::parse_feature_csv(io::read_text_file(file));
    if (instances.empty()) throw DataError(file + ": no instances");
    const Modality m = instances.front().modality;
    if (datasets.contains(m)) throw DataError("both feature files hold modality " + std::string(to_string(m)));
    datasets.emplace(m, std::move(instances));
  }
  CvReport report;
  try {
    report = fused_loso_cv(datasets, params);
  } catch (const ValueError& e) {
    throw DataError(e.what());
  }
  const fs::path path = fs::path(s.out_dir) / "fused_cv.json";
  io::write_file_atomic(path, io::dump(io::to_json(report)));
  if (!s.save_model.empty())
    io::write_file_atomic(s.save_model, io::dump(io::to_json(stack_train(datasets, params))));
  print_summary(out, "Multi-modal", {}, report);
  out << "report: " << path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- plotdata

int cmd_plotdata(const Settings& s, std::ostream& out) {
  if (s.spectra.empty()) throw FormatError("plotdata needs --spectra");
  const auto records = io::parse_spectrum_csv(io::read_text_file(s.spectra));
  if (records.empty()) throw DataError(s.spectra + ": no spectra");
  const Modality modality = records.front().modality;

  std::vector<LabeledSpectrum> labeled;
  for (const auto& rec : records)
    labeled.push_back({rec.subject_id, std::string(to_string(rec.label)), normalize(rec.spectrum)});
  const auto means = group_means(labeled);
  if (!means.contains(s.reference))
    throw DataError("reference group '" + s.reference + "' is not present in " + s.spectra);
  const auto diffs = difference_curves(means, s.reference);

  const std::size_t dim = means.begin()->second.dim();
  std::string csv = "index,normalized_index";
  for (const auto& [group, unused] : means) csv += ",log10_" + group;
  for (const auto& [group, unused] : diffs) csv += ",diff_" + group + "_vs_" + s.reference;
  csv += '\n';
  for (std::size_t j = 0; j < dim; ++j) {
    csv += std::to_string(j + 1) + "," +
           format_g12(dim > 1 ? static_cast<double>(j) / static_cast<double>(dim - 1) : 0.0);
    for (const auto& [group, spec] : means) csv += "," + format_g12(std::log10(std::max(spec.values[j], kLogFloor)));
    for (const auto& [group, diff] : diffs) csv += "," + format_g12(diff[j]);
    csv += '\n';
  }
  const auto path = fs::path(s.out_dir) / ("plotdata_" + lower(to_string(modality)) + ".csv");
  io::write_file_atomic(path, csv);
  out << "plotdata: " << means.size() << " group(s), " << diffs.size()
      << " difference curve(s) relative to " << s.reference << " in " << path.string() << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Time-delay embedded correlation eigenspectra and subject classification"};
  app.require_subcommand(1);
  app.add_option("--seed", s.seed, "master seed");
  app.add_option("--out-dir", s.out_dir, "output directory");
  app.add_option("--preset", s.preset, "modality preset")->check(CLI::IsMember({"tv", "fau"}));
  app.add_option("--delay-scale", s.delay_scale, "samples between delayed copies");
  app.add_option("--num-delays", s.num_delays, "delayed copies per channel");
  app.add_option("--rate", s.rate, "sampling rate in Hz");
  app.add_option("--min-segment-s", s.min_segment_s, "keep segments strictly longer than this");
  app.add_option("--ranges", s.ranges, "normalized index ranges lo:hi,lo:hi");
  app.add_option("--c", s.c, "SVM box constraint");
  app.add_option("--gamma", s.gamma, "RBF gamma or 'auto'");
  app.add_option("--reference", s.reference, "reference group for difference curves");

  auto* synth = app.add_subcommand("synth", "generate a synthetic cohort");
  synth->add_option("--subjects", s.subjects, "subjects per class, SZ,HC[,MDD]");
  synth->add_option("--rank", s.rank, "latent rank per class (or one for all)");
  synth->add_option("--channels", s.channels, "channels per recording");
  synth->add_option("--segments", s.segments, "subject segments per recording");
  synth->add_option("--segment-s", s.segment_s, "segment duration in seconds");
  synth->add_option("--gap-s", s.gap_s, "interviewer turn between segments");
  synth->add_option("--noise", s.noise, "measurement noise amplitude");
  synth->add_option("--halflife", s.halflife, "latent smoothing half-life in samples");
  synth->add_option("--jitter", s.jitter, "relative per-subject jitter");

  auto* corr = app.add_subcommand("corr", "channel-delay correlation matrices per segment");
  corr->add_option("--input", s.input, "channel CSV");
  corr->add_option("--manifest", s.manifest, "segment manifest JSON");
  corr->add_option("--speaker", s.speaker, "speaker id to extract");
  corr->add_option("--cohort", s.cohort, "directory written by synth (all subjects)");

  auto* eig = app.add_subcommand("eig", "eigenspectra of correlation matrices");
  eig->add_option("matrices", s.matrices, "matrix CSV files or directories")->required();
  eig->add_option("--labels", s.labels, "subject label CSV");

  auto* features = app.add_subcommand("features", "pool normalized eigenspectra into features");
  features->add_option("--spectra", s.spectra, "spectrum CSV");

  auto* cv = app.add_subcommand("cv", "leave-one-subject-out SVM cross-validation");
  cv->add_option("--features", s.features, "feature CSV");
  cv->add_option("--standardize", s.standardize, "fold (default) or all");
  cv->add_option("--save-model", s.save_model, "also train on all data and write the model");

  auto* fuse = app.add_subcommand("fuse", "stacked two-modality cross-validation");
  fuse->add_option("--features", s.features, "feature CSV, once per modality");
  fuse->add_option("--save-model", s.save_model, "also train on all data and write the model");

  auto* plotdata = app.add_subcommand("plotdata", "averaged eigenspectra and difference curves");
  plotdata->add_option("--spectra", s.spectra, "spectrum CSV");

  for (auto* sub : {synth, corr, eig, features, cv, fuse, plotdata}) sub->fallthrough();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nrun with --help for usage\n";
    return static_cast<int>(ErrorKind::Format);
  }

  try {
    if (synth->parsed()) return cmd_synth(s, out);
    if (corr->parsed()) return cmd_corr(s, out, err);
    if (eig->parsed()) return cmd_eig(s, out);
    if (features->parsed()) return cmd_features(s, out);
    if (cv->parsed()) return cmd_cv(s, out);
    if (fuse->parsed()) return cmd_fuse(s, out);
    if (plotdata->parsed()) return cmd_plotdata(s, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::Io);
  }
  return static_cast<int>(ErrorKind::Format);
}

}  // namespace tdec::cli
