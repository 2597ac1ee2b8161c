#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "tdec/embedding.hpp"
#include "tdec/error.hpp"
#include "tdec/presets.hpp"
#include "tdec/rng.hpp"
#include "tdec/simd/kernels.hpp"
#include "tdec/synth.hpp"

using namespace tdec;

namespace {

ChannelSet noise_set(std::size_t rows, std::size_t channels, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  Matrix m(rows, channels);
  for (double& v : m.data()) v = rng.normal();
  std::vector<std::string> names;
  for (std::size_t c = 0; c < channels; ++c) names.push_back("c" + std::to_string(c));
  return ChannelSet(100.0, names, std::move(m), Modality::OTHER);
}

}  // namespace

TEST_CASE("embedding shape and lag layout") {
  const auto cs = noise_set(500, 6, 1);
  const Segment seg(cs, 0, 500);
  const EmbeddingConfig cfg{7, 15};
  const Matrix e = embed(seg, cfg);
  CHECK(e.rows() == 500 - 98);
  CHECK(e.cols() == 90);
  // Column c*D + k at row t is channel c at time t + window - k*d.
  for (std::size_t t : {0, 1, 200, 401})
    for (std::size_t c = 0; c < 6; ++c)
      for (std::size_t k = 0; k < 15; ++k) CHECK(e(t, c * 15 + k) == seg.at(t + 98 - k * 7, c));
}

TEST_CASE("single delay is the identity embedding") {
  const auto cs = noise_set(40, 1, 2);
  const Segment seg(cs, 5, 40);
  const Matrix e = embed(seg, {1, 1});
  REQUIRE(e.rows() == 35);
  for (std::size_t t = 0; t < 35; ++t) CHECK(e(t, 0) == seg.at(t, 0));
}

TEST_CASE("too-short segments report the required length") {
  const auto cs = noise_set(90, 6, 3);
  const Segment seg(cs, 0, 90);
  try {
    embed(seg, {7, 15});
    FAIL("expected InsufficientLengthError");
  } catch (const InsufficientLengthError& e) {
    CHECK(e.length() == 90);
    CHECK(e.required() == 100);
    CHECK(e.exit_code() == 3);
  }
  CHECK_NOTHROW(embed(seg, {1, 15}));
  CHECK_NOTHROW(embed(Segment(noise_set(100, 6, 3), 0, 100), {7, 15}));
  CHECK_THROWS_AS(embed(seg, {0, 15}), ValueError);
  CHECK_THROWS_AS(embed(seg, {1, 0}), ValueError);
}

TEST_CASE("preset dimensions") {
  for (const auto* p : {&tv_preset(), &fau_preset()}) {
    SynthSpec spec;
    spec.channels = p->channels;
    spec.sample_rate_hz = p->sample_rate_hz;
    spec.latent_rank = 3;
    spec.seed = 5;
    spec.length_samples = static_cast<std::size_t>(10 * p->sample_rate_hz);
    const auto cs = generate(spec);
    const Segment seg(cs, 0, cs.num_samples());
    const auto corr = channel_delay_correlation(seg, p->embedding);
    CHECK(corr.dim() == p->channels * 15);
    CHECK(corr.channel_count == p->channels);
  }
  CHECK(tv_preset().channels * tv_preset().embedding.num_delays == 90);
  CHECK(fau_preset().channels * fau_preset().embedding.num_delays == 255);
}

TEST_CASE("trivial correlation matrices") {
  SUBCASE("identical channels") {
    Matrix m(50, 2);
    Xoshiro256 rng(4);
    for (std::size_t r = 0; r < 50; ++r) m(r, 0) = m(r, 1) = rng.normal();
    const ChannelSet cs(10.0, {"a", "b"}, m, Modality::OTHER);
    const auto corr = channel_delay_correlation(Segment(cs, 0, 50), {1, 1});
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) CHECK(corr.values(i, j) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("single channel") {
    const auto cs = noise_set(30, 1, 5);
    const auto corr = channel_delay_correlation(Segment(cs, 0, 30), {1, 1});
    REQUIRE(corr.dim() == 1);
    CHECK(corr.values(0, 0) == 1.0);
  }
}

TEST_CASE("correlation matches an independent Pearson computation") {
  const auto cs = noise_set(300, 3, 6);
  const Segment seg(cs, 10, 290);
  const EmbeddingConfig cfg{4, 5};
  const auto corr = channel_delay_correlation(seg, cfg);
  const std::size_t rows = seg.length() - cfg.window();
  auto column = [&](std::size_t c, std::size_t k) {
    std::vector<double> v(rows);
    for (std::size_t t = 0; t < rows; ++t) v[t] = seg.at(t + cfg.window() - k * cfg.delay_scale, c);
    return v;
  };
  for (std::size_t i = 0; i < 15; ++i)
    for (std::size_t j = 0; j < 15; ++j) {
      const double expected = i == j ? 1.0 : oracle::pearson(column(i / 5, i % 5), column(j / 5, j % 5));
      CHECK(std::abs(corr.values(i, j) - expected) < 1e-12);
      CHECK(corr.values(i, j) == corr.values(j, i));
    }
}

TEST_CASE("constant channel is reported with its lag") {
  Matrix m(40, 2);
  Xoshiro256 rng(9);
  for (std::size_t r = 0; r < 40; ++r) {
    m(r, 0) = rng.normal();
    m(r, 1) = r < 30 ? 2.0 : rng.normal();
  }
  const ChannelSet cs(10.0, {"moving", "flat"}, m, Modality::OTHER);
  try {
    channel_delay_correlation(Segment(cs, 0, 30), {2, 3});
    FAIL("expected DegenerateChannelError");
  } catch (const DegenerateChannelError& e) {
    CHECK(e.channel() == "flat");
    CHECK(e.lag_samples() == 0);
  }
}

TEST_CASE("correlation is identical under every SIMD backend") {
  const auto cs = noise_set(400, 6, 12);
  const Segment seg(cs, 0, 400);
  const auto original = simd::active().backend;
  simd::set_active(simd::Backend::Scalar);
  const auto ref = channel_delay_correlation(seg, {7, 15});
  for (auto b : simd::available_backends()) {
    simd::set_active(b);
    const auto got = channel_delay_correlation(seg, {7, 15});
    double worst = 0.0;
    for (std::size_t i = 0; i < got.values.data().size(); ++i)
      worst = std::max(worst, std::abs(got.values.data()[i] - ref.values.data()[i]));
    CHECK(worst < 1e-12);
  }
  simd::set_active(original);
}
