#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qres/errors.hpp"
#include "qres/model.hpp"

using namespace qres;
using Catch::Matchers::WithinAbs;

namespace {

double squared_error(const QuantumModule& m, std::span<const double> f, double y) {
  const double d = forward(m, f) - y;
  return d * d;
}

QuantumModule random_module(const CircuitConfig& cfg, std::uint64_t seed) {
  QuantumModule m = initialize_module(cfg, seed);
  std::mt19937_64 rng(seed ^ 0x5eed);
  std::uniform_real_distribution<double> d(-1.5, 1.5);
  for (auto& w : m.readout_weights) w = d(rng);
  m.readout_bias = d(rng);
  return m;
}

}  // namespace

TEST_CASE("squash maps raw parameters through pi tanh") {
  const std::vector<double> raw = {0.0, 1.0, -1.0, 40.0, -40.0};
  const auto eff = effective_params(raw);
  CHECK(eff[0] == 0.0);
  // tanh(1) to 40 digits: 0.7615941559557648881194582826047935904128
  const double tanh1 = 0.7615941559557648881194582826047935904128;
  CHECK_THAT(eff[1], WithinAbs(std::numbers::pi * tanh1, 1e-12));
  CHECK_THAT(eff[2], WithinAbs(-std::numbers::pi * tanh1, 1e-12));
  CHECK(eff[3] <= std::numbers::pi);
  CHECK_THAT(eff[3], WithinAbs(std::numbers::pi, 1e-12));
}

TEST_CASE("effective parameters stay inside (-pi, pi)") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d(0, 5);
  std::vector<double> raw(10000);
  for (auto& r : raw) r = d(rng);
  for (double e : effective_params(raw)) {
    CHECK(std::abs(e) <= std::numbers::pi);
  }
  for (double e : effective_params(std::vector<double>{3.0, -3.0, 0.5})) {
    CHECK(std::abs(e) < std::numbers::pi);
  }
}

TEST_CASE("zero module predicts its bias") {
  QuantumModule m = make_module({3, 1, 1, EncodingMode::Full});
  m.readout_bias = 0.42;
  for (double x : {-1.0, 0.0, 0.7, 1.9}) CHECK(forward(m, std::span(&x, 1)) == 0.42);
}

TEST_CASE("single-qubit RY_ONLY module at x = 0.5") {
  QuantumModule m = make_module({1, 1, 1, EncodingMode::RyOnly});
  m.readout_weights = {1.0};
  const double x = 0.5;
  CHECK_THAT(forward(m, std::span(&x, 1)), WithinAbs(0.0, 1e-15));
  const double x2 = 0.25;
  CHECK_THAT(forward(m, std::span(&x2, 1)), WithinAbs(std::cos(std::numbers::pi / 4), 1e-15));
}

TEST_CASE("predictions are bounded by |b| + sum |w|") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> xs(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const CircuitConfig cfg{1 + trial % 4, 1 + trial % 2, 1 + trial % 2, EncodingMode::Full};
    const QuantumModule m = random_module(cfg, static_cast<std::uint64_t>(trial));
    double bound = std::abs(m.readout_bias);
    for (double w : m.readout_weights) bound += std::abs(w);
    for (int i = 0; i < 10; ++i) {
      std::vector<double> f(static_cast<std::size_t>(cfg.input_dim));
      for (auto& v : f) v = xs(rng);
      CHECK(std::abs(forward(m, f)) <= bound + 1e-12);
    }
  }
}

TEST_CASE("exact prediction gives zero gradient") {
  const QuantumModule m = random_module({3, 2, 1, EncodingMode::Full}, 7);
  const double x = 0.3;
  const double y = forward(m, std::span(&x, 1));
  const auto fb = forward_backward(m, std::span(&x, 1), y);
  CHECK(fb.loss == 0.0);
  for (double g : fb.gradient) CHECK(g == 0.0);
}

TEST_CASE("zero readout weights isolate the readout gradient") {
  QuantumModule m = initialize_module({3, 1, 1, EncodingMode::Full}, 9);
  std::fill(m.readout_weights.begin(), m.readout_weights.end(), 0.0);
  const double x = 0.8;
  const auto fb = forward_backward(m, std::span(&x, 1), 1.0);
  const std::size_t p = m.raw_params.size();
  for (std::size_t k = 0; k < p; ++k) CHECK(fb.gradient[k] == 0.0);
  bool any_nonzero = false;
  for (std::size_t q = 0; q < 3; ++q) any_nonzero |= fb.gradient[p + q] != 0.0;
  CHECK(any_nonzero);
  CHECK_THAT(fb.gradient.back(), WithinAbs(2 * (fb.prediction - 1.0), 1e-15));
}

TEST_CASE("forward_backward matches finite differences on every trainable scalar") {
  const double h = 1e-5;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3;
    const int layers = 1 + (trial / 3) % 2;
    const int dim = 1 + trial % 2;
    const CircuitConfig cfg{n, layers, dim, trial % 5 == 4 ? EncodingMode::RyOnly : EncodingMode::Full};
    const QuantumModule m = random_module(cfg, 100 + static_cast<std::uint64_t>(trial));
    std::vector<double> f = {0.37, -0.81};
    f.resize(static_cast<std::size_t>(dim));
    const double y = 0.25;
    const auto fb = forward_backward(m, f, y);
    CHECK_THAT(fb.prediction, WithinAbs(forward(m, f), 1e-14));
    CHECK_THAT(fb.loss, WithinAbs(squared_error(m, f, y), 1e-14));

    const auto base = m.trainable_values();
    REQUIRE(fb.gradient.size() == base.size());
    for (std::size_t k = 0; k < base.size(); ++k) {
      QuantumModule plus = m, minus = m;
      auto vp = base, vm = base;
      vp[k] += h;
      vm[k] -= h;
      plus.assign_trainable(vp);
      minus.assign_trainable(vm);
      const double fd = (squared_error(plus, f, y) - squared_error(minus, f, y)) / (2 * h);
      const double scale = std::max(std::abs(fd), 1e-3);
      CHECK(std::abs(fb.gradient[k] - fd) / scale < 1e-5);
    }
  }
}

TEST_CASE("initialization is seeded and shaped") {
  const CircuitConfig cfg{4, 2, 2, EncodingMode::Full};
  const QuantumModule a = initialize_module(cfg, 42);
  const QuantumModule b = initialize_module(cfg, 42);
  const QuantumModule c = initialize_module(cfg, 43);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(a.raw_params.size() == ParameterLayout::of(cfg).total_count);
  CHECK(a.readout_weights.size() == 4);
  CHECK(a.readout_bias == 0.0);
  for (double w : a.readout_weights) CHECK(std::abs(w) <= 0.1);
  double mean = 0, sq = 0;
  for (double r : a.raw_params) mean += r, sq += r * r;
  mean /= static_cast<double>(a.raw_params.size());
  sq /= static_cast<double>(a.raw_params.size());
  CHECK(std::abs(mean) < 0.3);
  CHECK(std::abs(sq - 1.0) < 0.4);
}

TEST_CASE("trainable values round-trip") {
  QuantumModule m = random_module({2, 1, 1, EncodingMode::Full}, 1);
  auto v = m.trainable_values();
  REQUIRE(v.size() == m.trainable_count());
  CHECK(v.back() == m.readout_bias);
  for (auto& x : v) x += 1.0;
  m.assign_trainable(v);
  CHECK(m.trainable_values() == v);
  CHECK_THROWS_AS(m.assign_trainable(std::vector<double>(3, 0.0)), StructuralError);
}

TEST_CASE("checkpoint round-trips bit for bit") {
  const QuantumModule m = random_module({3, 2, 2, EncodingMode::RyOnly}, 11);
  std::stringstream buf;
  write_checkpoint(buf, m);
  CHECK(buf.str().rfind("format qres-module-v1\n", 0) == 0);
  const QuantumModule back = read_checkpoint(buf);
  CHECK(back == m);
}

TEST_CASE("malformed checkpoints are rejected") {
  std::stringstream bad1("format other\n");
  CHECK_THROWS_AS(read_checkpoint(bad1), Error);
  const QuantumModule m = random_module({2, 1, 1, EncodingMode::Full}, 2);
  std::stringstream good;
  write_checkpoint(good, m);
  std::string text = good.str();
  std::stringstream truncated(text.substr(0, text.size() / 2));
  CHECK_THROWS_AS(read_checkpoint(truncated), Error);
}

TEST_CASE("invalid modules are rejected") {
  QuantumModule m = make_module({2, 1, 1, EncodingMode::Full});
  m.raw_params.pop_back();
  CHECK_THROWS_AS(m.validate(), StructuralError);
  QuantumModule n = make_module({2, 1, 1, EncodingMode::Full});
  n.readout_bias = std::nan("");
  CHECK_THROWS_AS(n.validate(), InputError);
  const QuantumModule ok = make_module({2, 1, 1, EncodingMode::Full});
  const std::vector<double> two = {0.1, 0.2};
  CHECK_THROWS_AS(forward(ok, two), StructuralError);
}
