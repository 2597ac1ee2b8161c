#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "tdec/error.hpp"
#include "tdec/jacobi.hpp"
#include "tdec/presets.hpp"
#include "tdec/rng.hpp"
#include "tdec/spectrum.hpp"
#include "tdec/synth.hpp"

using namespace tdec;

namespace {

Eigenspectrum spec(std::vector<double> v, bool normalized) { return {std::move(v), normalized}; }

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("analytic eigenspectra") {
  CHECK(eigenspectrum(Matrix::identity(3)).values == std::vector<double>{1, 1, 1});
  Matrix m(2, 2, 0.5);
  m(0, 0) = m(1, 1) = 1.0;
  const auto e = eigenspectrum(m);
  CHECK(e.values[0] == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(e.values[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_FALSE(e.normalized);
}

TEST_CASE("eigenvalues match power iteration on random Gram matrices") {
  Xoshiro256 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 2 + rng.next() % 11;
    const Matrix r = oracle::random_correlation_matrix(rng, dim, dim + 5 + rng.next() % 40);
    const auto got = eigenspectrum(r).values;
    const auto want = oracle::power_iteration_eigenvalues(r);
    for (std::size_t i = 0; i < dim; ++i) CHECK(std::abs(got[i] - std::max(want[i], 0.0)) < 1e-8);
    CHECK(std::abs(sum(got) - static_cast<double>(dim)) < 1e-6 * static_cast<double>(dim));
  }
}

TEST_CASE("jacobi rejects bad input") {
  CHECK_THROWS_AS(jacobi_eigenvalues(Matrix(2, 3)), ValueError);
  Matrix asym = Matrix::identity(2);
  asym(0, 1) = 0.3;
  CHECK_THROWS_AS(jacobi_eigenvalues(asym), ValueError);
  Matrix hard(3, 3, 0.4);
  for (int i = 0; i < 3; ++i) hard(i, i) = 1.0 + i;
  CHECK_THROWS_AS(jacobi_eigenvalues(hard, {1e-300, 0}), NumericalError);
  Matrix indefinite(2, 2, 2.0);
  indefinite(0, 0) = indefinite(1, 1) = 1.0;
  CHECK_THROWS_AS(eigenspectrum(indefinite), NumericalError);
}

TEST_CASE("normalization") {
  auto n = normalize(spec({1.5, 0.5}, false));
  CHECK(n.values == std::vector<double>{0.75, 0.25});
  CHECK(n.normalized);
  n = normalize(spec({1, 1, 1}, false));
  for (double v : n.values) CHECK(v == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK_THROWS_AS(normalize(spec({0, 0}, false)), ValueError);

  Xoshiro256 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(90);
    for (double& x : v) x = std::exp(3 * rng.normal());
    std::sort(v.begin(), v.end(), std::greater<>());
    CHECK(std::abs(sum(normalize(spec(v, false)).values) - 1.0) < 1e-9);
  }
}

TEST_CASE("averaging spectra") {
  const Eigenspectrum a = spec({0.75, 0.25}, true), b = spec({0.65, 0.35}, true);
  const std::vector<Eigenspectrum> ok{a, b};
  const auto avg = average_spectra(ok);
  CHECK(avg.values[0] == doctest::Approx(0.70).epsilon(1e-15));
  CHECK(avg.values[1] == doctest::Approx(0.30).epsilon(1e-15));
  CHECK(avg.normalized);

  const std::vector<Eigenspectrum> unsorted{a, spec({0.25, 0.75}, true)};
  CHECK_THROWS_AS(average_spectra(unsorted), ValueError);
  const std::vector<Eigenspectrum> mixed_dim{a, spec({0.5, 0.3, 0.2}, true)};
  CHECK_THROWS_AS(average_spectra(mixed_dim), ValueError);
  const std::vector<Eigenspectrum> mixed_flag{a, spec({1.5, 0.5}, false)};
  CHECK_THROWS_AS(average_spectra(mixed_flag), ValueError);
  CHECK_THROWS_AS(average_spectra(std::span<const Eigenspectrum>{}), ValueError);

  const std::vector<Eigenspectrum> same{a, a, a};
  CHECK(average_spectra(same).values == a.values);
}

TEST_CASE("index selection follows j/(dim-1)") {
  // Enumerate with integer arithmetic: lo <= j/(dim-1) <= hi with ranges in
  // hundredths is 100*j >= lo100*(dim-1) and 100*j <= hi100*(dim-1).
  auto enumerate = [](std::size_t dim, int lo100, int hi100) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < dim; ++j) {
      const long long a = 100LL * static_cast<long long>(j), m = static_cast<long long>(dim - 1);
      if (a >= lo100 * m && a <= hi100 * m) out.push_back(j);
    }
    return out;
  };
  CHECK(selected_indices(90, {0, 0.03}) == std::vector<std::size_t>{0, 1, 2});
  CHECK(selected_indices(90, {0.95, 1}) == std::vector<std::size_t>{85, 86, 87, 88, 89});
  for (std::size_t dim : {2, 3, 10, 90, 100, 255})
    for (auto [lo, hi] : std::vector<std::pair<int, int>>{{0, 2}, {0, 3}, {95, 100}, {96, 100}, {0, 100}, {40, 60}})
      CHECK(selected_indices(dim, {lo / 100.0, hi / 100.0}) == enumerate(dim, lo, hi));
  CHECK(selected_indices(1, {0, 1}) == std::vector<std::size_t>{0});
}

TEST_CASE("pooling") {
  const auto n = normalize(spec({4, 3, 2, 1}, false));
  const std::vector<IndexRange> all{{0, 1}};
  const auto f = pool_features(n, all, "S1", Label::SZ, Modality::TV, "S1_0");
  REQUIRE(f.features.size() == 1);
  CHECK(std::abs(f.features[0] - 0.25) < 1e-12);
  CHECK(f.subject_id == "S1");
  CHECK(f.segment_id == "S1_0");

  const std::vector<IndexRange> top{{0, 0.4}};  // j/3 <= 0.4 -> {0, 1}
  CHECK(pool_features(n, top, "S", Label::SZ, Modality::TV, "x").features[0] ==
        doctest::Approx(0.35).epsilon(1e-14));

  const std::vector<IndexRange> empty{{0.4, 0.5}};
  CHECK_THROWS_AS(pool_features(n, empty, "S", Label::SZ, Modality::TV, "x"), ValueError);
  const std::vector<IndexRange> reversed{{0.5, 0.4}};
  CHECK_THROWS_AS(pool_features(n, reversed, "S", Label::SZ, Modality::TV, "x"), ValueError);
  CHECK_THROWS_AS(pool_features(spec({4, 3}, false), all, "S", Label::SZ, Modality::TV, "x"), ValueError);
}

TEST_CASE("difference curves") {
  std::map<std::string, Eigenspectrum> groups;
  groups["HC"] = spec({0.5, 0.3, 0.2}, true);
  groups["SZ"] = spec({0.5, 0.3, 0.2}, true);
  groups["MDD"] = spec({1.0, 0.6, 0.4}, true);
  const auto d = difference_curves(groups, "HC");
  CHECK(d.size() == 2);
  for (double v : d.at("SZ")) CHECK(v == 0.0);
  for (double v : d.at("MDD")) CHECK(v == doctest::Approx(std::log10(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(difference_curves(groups, "XX"), ValueError);
}

TEST_CASE("group means average subjects before groups") {
  std::vector<LabeledSpectrum> s{
      {"A", "HC", spec({0.9, 0.1}, true)},
      {"A", "HC", spec({0.9, 0.1}, true)},
      {"A", "HC", spec({0.9, 0.1}, true)},
      {"B", "HC", spec({0.5, 0.5}, true)},
  };
  const auto g = group_means(s);
  CHECK(g.at("HC").values[0] == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("spectrum properties on synthetic segments") {
  const auto& p = tv_preset();
  SynthSpec sp;
  sp.channels = 6;
  sp.latent_rank = 3;
  sp.seed = 17;
  const auto cs = generate(sp);
  const Segment seg(cs, 0, cs.num_samples());
  const auto base = eigenspectrum(channel_delay_correlation(seg, p.embedding));
  CHECK(std::abs(sum(base.values) - 90.0) < 90.0 * 1e-6);
  const auto norm = normalize(base);

  SUBCASE("channel permutation leaves the spectrum unchanged") {
    const std::vector<std::size_t> perm{3, 0, 5, 1, 4, 2};
    Matrix m(cs.num_samples(), 6);
    std::vector<std::string> names(6);
    for (std::size_t c = 0; c < 6; ++c) {
      names[c] = cs.channel_names()[perm[c]];
      for (std::size_t t = 0; t < cs.num_samples(); ++t) m(t, c) = cs.samples()(t, perm[c]);
    }
    const ChannelSet permuted(cs.sample_rate_hz(), names, m, Modality::TV);
    const auto e = eigenspectrum(channel_delay_correlation(Segment(permuted, 0, m.rows()), p.embedding));
    for (std::size_t i = 0; i < 90; ++i) CHECK(std::abs(e.values[i] - base.values[i]) < 1e-9);
  }
  SUBCASE("scaling all channels leaves the normalized spectrum unchanged") {
    for (double k : {1e-3, 0.5, 7.0, 1e4}) {
      Matrix m = cs.samples();
      for (double& v : m.data()) v *= k;
      const ChannelSet scaled(cs.sample_rate_hz(), cs.channel_names(), m, Modality::TV);
      const auto e = normalize(eigenspectrum(channel_delay_correlation(Segment(scaled, 0, m.rows()), p.embedding)));
      for (std::size_t i = 0; i < 90; ++i) CHECK(std::abs(e.values[i] - norm.values[i]) < 1e-10);
    }
  }
}

TEST_CASE("low-rank synthetic signals concentrate mass in the top eigenvalues") {
  for (std::size_t rank = 1; rank <= 4; ++rank) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      SynthSpec sp;
      sp.channels = 6;
      sp.latent_rank = rank;
      sp.noise_amplitude = 0.01;
      sp.seed = seed;
      const auto cs = generate(sp);
      const auto e = normalize(eigenspectrum(channel_delay_correlation(Segment(cs, 0, cs.num_samples()), {1, 1})));
      double top = 0.0;
      for (std::size_t i = 0; i < rank; ++i) top += e.values[i];
      CHECK(top >= 0.9);
    }
  }
}

TEST_CASE("complex group has larger high-rank eigenvalues than simple group") {
  const auto cohort = fixture::small_cohort(Modality::TV, 5, 2, 3, 8);
  const auto& p = tv_preset();
  std::vector<LabeledSpectrum> labeled;
  for (const auto& rec : cohort)
    for (const auto& seg : extract_segments(rec.signals, rec.manifest, rec.subject_id))
      labeled.push_back({rec.subject_id, std::string(to_string(rec.label)),
                         normalize(eigenspectrum(channel_delay_correlation(seg, p.embedding)))});
  const auto d = difference_curves(group_means(labeled), "HC").at("SZ");
  for (std::size_t j : selected_indices(90, {0.95, 1})) CHECK(d[j] > 0.0);
}
