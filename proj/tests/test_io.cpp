#include <doctest.h>

#include "support/fixtures.hpp"
#include "tdec/error.hpp"
#include "tdec/format.hpp"
#include "tdec/io.hpp"
#include "tdec/presets.hpp"
#include "tdec/rng.hpp"

using namespace tdec;

TEST_CASE("number formatting") {
  CHECK(format_g12(0.0) == "0");
  CHECK(format_g12(1.0 / 3.0) == "0.333333333333");
  CHECK(format_g12(1e-20) == "1e-20");
  CHECK(round_g12(1.0 / 3.0) == 0.333333333333);
  CHECK(format_exact(0.1) == "0.1");
  double v = 0;
  CHECK(parse_double(" 2.5 ", v));
  CHECK(v == 2.5);
  CHECK_FALSE(parse_double("2.5x", v));
  CHECK_FALSE(parse_double("", v));
}

TEST_CASE("presets encode the configuration constants") {
  const auto& tv = tv_preset();
  CHECK(tv.sample_rate_hz == 100.0);
  CHECK(tv.embedding.delay_scale == 7);
  CHECK(tv.embedding.num_delays == 15);
  CHECK(tv.ranges == std::vector<IndexRange>{{0, 0.03}, {0.95, 1}});
  const auto& fau = fau_preset();
  CHECK(fau.sample_rate_hz == 28.0);
  CHECK(fau.embedding.delay_scale == 3);
  CHECK(fau.embedding.num_delays == 15);
  CHECK(fau.ranges == std::vector<IndexRange>{{0, 0.02}, {0.96, 1}});
  CHECK(format_ranges(fau.ranges) == "[0-0.02],[0.96-1]");
}

TEST_CASE("range parsing") {
  CHECK(parse_ranges("0:0.02,0.96:1") == std::vector<IndexRange>{{0, 0.02}, {0.96, 1}});
  try {
    parse_ranges("0:0.1,0.5:0.4");
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("0.5:0.4") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_ranges("0-1"), FormatError);
  CHECK_THROWS_AS(parse_ranges("a:1"), FormatError);
  CHECK_THROWS_AS(parse_ranges("0:2"), FormatError);
  CHECK_THROWS_AS(parse_ranges(""), FormatError);
}

TEST_CASE("matrix and sidecar round trip") {
  Xoshiro256 rng(1);
  Matrix m(4, 4);
  for (double& v : m.data()) v = round_g12(rng.normal());
  CHECK(io::parse_matrix_csv(io::write_matrix_csv(m)) == m);
  CHECK_THROWS_AS(io::parse_matrix_csv("1,2\n3\n"), FormatError);

  io::MatrixSidecar sc{{"a", "b"}, {7, 15}, 100.0, "S_0", "S", Modality::TV};
  const auto back = io::parse_sidecar(io::write_sidecar(sc));
  CHECK(back.channel_names == sc.channel_names);
  CHECK(back.config.delay_scale == 7);
  CHECK(back.config.num_delays == 15);
  CHECK(back.sample_rate_hz == 100.0);
  CHECK(back.segment_id == "S_0");
  CHECK(back.modality == Modality::TV);
}

TEST_CASE("spectrum, feature and label CSV round trip") {
  std::vector<io::SpectrumRecord> recs{{"S_0", "S", Label::SZ, Modality::FAU, {{1.5, 0.25, 0.25}, false}}};
  const auto back = io::parse_spectrum_csv(io::write_spectrum_csv(recs));
  REQUIRE(back.size() == 1);
  CHECK(back[0].spectrum.values == recs[0].spectrum.values);
  CHECK(back[0].label == Label::SZ);
  CHECK(back[0].modality == Modality::FAU);

  const auto feats = fixture::separable_cohort(2, 2, 5);
  const auto fback = io::parse_feature_csv(io::write_feature_csv(feats));
  REQUIRE(fback.size() == feats.size());
  for (std::size_t i = 0; i < feats.size(); ++i) {
    CHECK(fback[i].subject_id == feats[i].subject_id);
    CHECK(fback[i].segment_id == feats[i].segment_id);
    CHECK(fback[i].label == feats[i].label);
    for (std::size_t f = 0; f < 2; ++f) CHECK(fback[i].features[f] == round_g12(feats[i].features[f]));
  }
  CHECK_THROWS_AS(io::parse_feature_csv("subject_id,label,modality,segment_id,f0\nS,XX,TV,s,1\n"), FormatError);

  const std::map<std::string, Label> labels{{"A", Label::SZ}, {"B", Label::HC}};
  CHECK(io::parse_labels_csv(io::write_labels_csv(labels)) == labels);
}

TEST_CASE("models survive serialization") {
  const auto data = fixture::noisy_cohort(4, 3, 2, 1.5);
  const auto model = fit_svm(data, {});
  const auto back = io::svm_model_from_json(nlohmann::json::parse(io::dump(io::to_json(model))));
  for (const auto& f : data)
    CHECK(std::abs(svm_decision(back, f.features) - svm_decision(model, f.features)) < 1e-9);
  CHECK(io::dump(io::to_json(back)) == io::dump(io::to_json(model)));

  const auto fdata = fixture::complementary_cohort(2, 3, 3);
  const auto stack = stack_train(fdata);
  const auto sback = io::stacking_model_from_json(nlohmann::json::parse(io::dump(io::to_json(stack))));
  CHECK(io::dump(io::to_json(sback)) == io::dump(io::to_json(stack)));
}

TEST_CASE("missing files are I/O errors") {
  CHECK_THROWS_AS(io::read_text_file("/nonexistent/definitely/not/here.csv"), IoError);
  fixture::TempDir dir("io");
  io::write_file_atomic(dir.path() / "x.txt", "hello");
  CHECK(fixture::read_file(dir.path() / "x.txt") == "hello");
}
