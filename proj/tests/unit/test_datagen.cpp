#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "qres/datagen.hpp"
#include "qres/errors.hpp"

using namespace qres;
using Catch::Matchers::WithinAbs;

TEST_CASE("envelopes peak at their center") {
  for (auto kind : {EnvelopeKind::Gaussian, EnvelopeKind::Lorentzian, EnvelopeKind::Triangular}) {
    CHECK(envelope_value(kind, 0.7, 0.7, 0.3) == 1.0);
  }
  CHECK(envelope_value(EnvelopeKind::Triangular, 1.0, 0.5, 0.5) == 0.0);
  CHECK(envelope_value(EnvelopeKind::Triangular, 1.4, 0.5, 0.5) == 0.0);
  CHECK_THAT(envelope_value(EnvelopeKind::Triangular, 0.75, 0.5, 0.5), WithinAbs(0.5, 1e-15));
  CHECK_THAT(envelope_value(EnvelopeKind::Lorentzian, 0.9, 0.4, 0.5), WithinAbs(0.5, 1e-15));
  CHECK_THAT(envelope_value(EnvelopeKind::Lorentzian, -0.1, 0.4, 0.5), WithinAbs(0.5, 1e-15));
  CHECK_THAT(envelope_value(EnvelopeKind::Gaussian, 1.5, 1.0, 0.5), WithinAbs(std::exp(-0.5), 1e-15));
  CHECK_THROWS_AS(envelope_value(EnvelopeKind::Gaussian, 0.0, 0.0, 0.0), SpecError);
}

TEST_CASE("target function zeros") {
  CHECK(target_function({}, 0.3) == 0.0);
  const std::vector<FrequencyComponent> one = {{3.0, 1.0, 0.5, 2.0, EnvelopeKind::Gaussian}};
  for (int m = 0; m < 12; ++m) {
    CHECK_THAT(target_function(one, m / 6.0), WithinAbs(0.0, 1e-14));
  }
  CHECK(target_function(default_components(), 0.0) == 0.0);
}

TEST_CASE("target function sums weighted sinusoids") {
  const auto comps = default_components();
  const double x = 0.913;
  double expected = 0;
  for (const auto& c : comps) {
    expected += c.amplitude * envelope_value(c.envelope, x, c.center, c.width) *
                std::sin(2 * std::numbers::pi * c.omega * x);
  }
  CHECK_THAT(target_function(comps, x), WithinAbs(expected, 1e-15));
}

TEST_CASE("default component table") {
  const auto c = default_components();
  REQUIRE(c.size() == 5);
  const double omegas[] = {0.5, 3, 7, 12, 20};
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(c[k].omega == omegas[k]);
    CHECK(c[k].amplitude == 1.0);
  }
  CHECK(c[1].envelope == EnvelopeKind::Lorentzian);
  CHECK(c[2].envelope == EnvelopeKind::Triangular);
  CHECK(c[4].width < c[0].width);
}

TEST_CASE("dominant component") {
  const std::vector<FrequencyComponent> one = {{1.0, 0.5, 0.2, 1.0, EnvelopeKind::Gaussian}};
  CHECK(dominant_component(one, 1.7) == 0);
  const std::vector<FrequencyComponent> twins = {one[0], one[0]};
  CHECK(dominant_component(twins, 0.4) == 0);
  CHECK_THROWS_AS(dominant_component({}, 0.0), SpecError);

  const auto comps = default_components();
  const double x = comps[0].center;
  std::size_t best = 0;
  for (std::size_t k = 1; k < comps.size(); ++k) {
    const auto& c = comps[k];
    const auto& b = comps[best];
    if (c.amplitude * envelope_value(c.envelope, x, c.center, c.width) >
        b.amplitude * envelope_value(b.envelope, x, b.center, b.width)) {
      best = k;
    }
  }
  CHECK(best == 0);
  CHECK(dominant_component(comps, x) == 0);
  CHECK(dominant_component(comps, comps[4].center) == 4);
}

TEST_CASE("dominant component is invariant to a common amplitude scale") {
  auto comps = default_components();
  comps[1].amplitude = 0.6;
  comps[3].amplitude = 1.7;
  auto scaled = comps;
  for (auto& c : scaled) c.amplitude *= 3.25;
  for (int i = 0; i <= 400; ++i) {
    const double x = i / 200.0;
    CHECK(dominant_component(comps, x) == dominant_component(scaled, x));
  }
}

TEST_CASE("split sizes") {
  DatasetSpec spec;
  auto s = split_sizes(spec);
  CHECK(s.train == 3500);
  CHECK(s.val == 750);
  CHECK(s.test == 750);
  for (std::size_t n : {7u, 13u, 101u, 999u, 2500u}) {
    spec.n_total = n;
    s = split_sizes(spec);
    CHECK(s.train + s.val + s.test == n);
    CHECK(s.val == static_cast<std::size_t>(std::llround(0.15 * static_cast<double>(n))));
  }
}

TEST_CASE("generated dataset") {
  DatasetSpec spec;
  const auto data = generate_dataset(spec);
  REQUIRE(data.size() == 5000);
  std::size_t counts[3] = {0, 0, 0};
  double bound = 0;
  for (const auto& c : spec.components) bound += std::abs(c.amplitude);
  for (const auto& s : data) {
    ++counts[static_cast<int>(s.split)];
    CHECK(s.x >= 0.0);
    CHECK(s.x < 2.0);
    CHECK(s.y == target_function(spec.components, s.x));
    CHECK(std::abs(s.y) <= bound);
    CHECK(s.dominant == dominant_component(spec.components, s.x));
  }
  CHECK(counts[0] == 3500);
  CHECK(counts[1] == 750);
  CHECK(counts[2] == 750);
  CHECK(generate_dataset(spec) == data);
  spec.seed = 1;
  CHECK_FALSE(generate_dataset(spec) == data);
}

TEST_CASE("noise is added only when requested") {
  DatasetSpec spec;
  spec.n_total = 500;
  spec.noise_sigma = 0.1;
  const auto noisy = generate_dataset(spec);
  double sq = 0;
  for (const auto& s : noisy) {
    const double e = s.y - target_function(spec.components, s.x);
    sq += e * e;
  }
  CHECK_THAT(std::sqrt(sq / 500), WithinAbs(0.1, 0.015));
}

TEST_CASE("dataset CSV round-trips") {
  DatasetSpec spec;
  spec.n_total = 200;
  const auto data = generate_dataset(spec);
  std::stringstream buf;
  write_dataset_csv(buf, data);
  CHECK(buf.str().rfind("x,y,split,dominant\n", 0) == 0);
  CHECK(read_dataset_csv(buf) == data);
  std::stringstream bad("x,y,split\n0.1,0.2,train\n");
  CHECK_THROWS_AS(read_dataset_csv(bad), Error);
  std::stringstream bad_split("x,y,split,dominant\n0.1,0.2,holdout,0\n");
  CHECK_THROWS_AS(read_dataset_csv(bad_split), Error);
}

TEST_CASE("split_dataset keeps order within each split") {
  DatasetSpec spec;
  spec.n_total = 100;
  const auto data = generate_dataset(spec);
  const auto splits = split_dataset(data);
  CHECK(splits.train.x.size() == 70);
  CHECK(splits.val.x.size() == 15);
  CHECK(splits.test.x.size() == 15);
  std::size_t j = 0;
  for (const auto& s : data) {
    if (s.split != Split::Test) continue;
    CHECK(splits.test.x[j] == s.x);
    CHECK(splits.test.y[j] == s.y);
    ++j;
  }
}

TEST_CASE("components text round-trips") {
  const auto comps = default_components();
  CHECK(parse_components(format_components(comps)) == comps);
  CHECK_THROWS_AS(parse_components("1:2:3"), Error);
  CHECK_THROWS_AS(parse_components("1:0:0.5:1:boxcar"), Error);
}

TEST_CASE("invalid dataset settings are rejected") {
  DatasetSpec spec;
  spec.x_max = spec.x_min;
  CHECK_THROWS_AS(spec.validate(), SpecError);
  spec = {};
  spec.n_total = 0;
  CHECK_THROWS_AS(spec.validate(), SpecError);
  spec = {};
  spec.fractions = {0.5, 0.3, 0.3};
  CHECK_THROWS_AS(spec.validate(), SpecError);
  spec = {};
  spec.noise_sigma = -1;
  CHECK_THROWS_AS(spec.validate(), SpecError);
  spec = {};
  spec.components[2].width = 0;
  CHECK_THROWS_AS(spec.validate(), SpecError);
}
