#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "dft_oracle.hpp"
#include "qres/errors.hpp"
#include "qres/spectral.hpp"

using namespace qres;
using Catch::Matchers::WithinAbs;
using qres::testing::direct_dft_amplitudes;
using qres::testing::max_relative_error;

namespace {

std::vector<double> sample(const GridSpec& grid, double (*f)(double)) {
  const auto x = dense_grid(grid);
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = f(x[i]);
  return v;
}

double sin3(double x) { return std::sin(2 * std::numbers::pi * 3 * x); }

}  // namespace

TEST_CASE("dense grid is half-open") {
  const auto g = dense_grid({0.0, 2.0, 4});
  CHECK(g == std::vector<double>{0.0, 0.5, 1.0, 1.5});
  const auto d = dense_grid(GridSpec{});
  REQUIRE(d.size() == 2000);
  CHECK_THAT(d[1] - d[0], WithinAbs(0.001, 1e-15));
  CHECK(d.back() < 2.0);
  CHECK_THROWS_AS((GridSpec{1.0, 1.0, 10}.validate()), ConfigError);
  CHECK_THROWS_AS((GridSpec{0.0, 1.0, 1}.validate()), ConfigError);
}

TEST_CASE("constant signal is all DC") {
  const GridSpec grid{0.0, 2.0, 64};
  const auto r = amplitude_spectrum(std::vector<double>(64, -1.75), grid);
  REQUIRE(r.amplitudes.size() == 33);
  CHECK_THAT(r.amplitudes[0], WithinAbs(1.75, 1e-14));
  for (std::size_t k = 1; k < r.amplitudes.size(); ++k) CHECK(r.amplitudes[k] < 1e-14);
}

TEST_CASE("bin-aligned sinusoid reads amplitude one") {
  const GridSpec grid;
  const auto r = amplitude_spectrum(sample(grid, sin3), grid);
  CHECK(r.frequencies[6] == 3.0);
  CHECK_THAT(r.amplitudes[6], WithinAbs(1.0, 1e-9));
  for (std::size_t k = 0; k < r.amplitudes.size(); ++k) {
    if (k != 6) CHECK(r.amplitudes[k] < 1e-9);
  }
  CHECK_THAT(amplitude_at(r, 3.0), WithinAbs(1.0, 1e-9));
  CHECK(amplitude_at(r, 3.1) == r.amplitudes[6]);
}

TEST_CASE("two sinusoids are recovered independently") {
  const GridSpec grid;
  const auto x = dense_grid(grid);
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    v[i] = 0.3 * std::sin(2 * std::numbers::pi * 0.5 * x[i]) +
           1.7 * std::cos(2 * std::numbers::pi * 12 * x[i]);
  }
  const auto r = amplitude_spectrum(v, grid);
  CHECK_THAT(amplitude_at(r, 0.5), WithinAbs(0.3, 1e-9));
  CHECK_THAT(amplitude_at(r, 12.0), WithinAbs(1.7, 1e-9));
  const auto oracle = direct_dft_amplitudes(v);
  CHECK(max_relative_error(r.amplitudes, oracle) < 1e-9);
}

TEST_CASE("fast transform equals the direct DFT") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d(0, 1);
  for (std::size_t n : {15u, 16u, 17u, 256u, 1000u, 2000u, 4096u}) {
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    const auto r = amplitude_spectrum(v, {0.0, 2.0, n});
    const auto oracle = direct_dft_amplitudes(v);
    REQUIRE(r.amplitudes.size() == oracle.size());
    CHECK(max_relative_error(r.amplitudes, oracle) < 1e-9);
  }
}

TEST_CASE("Parseval") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> d(0, 1);
  for (std::size_t n : {16u, 255u, 2000u}) {
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    const auto r = amplitude_spectrum(v, {0.0, 2.0, n});
    double time_energy = 0;
    for (double x : v) time_energy += x * x;
    time_energy /= static_cast<double>(n);
    // A_k^2 / 2 for interior bins, A_k^2 for DC and Nyquist.
    double freq_energy = 0;
    for (std::size_t k = 0; k < r.amplitudes.size(); ++k) {
      const bool edge = k == 0 || (n % 2 == 0 && k == n / 2);
      freq_energy += r.amplitudes[k] * r.amplitudes[k] * (edge ? 1.0 : 0.5);
    }
    CHECK(std::abs(freq_energy - time_energy) / time_energy < 1e-9);
  }
}

TEST_CASE("amplitude_at picks the nearest bin and checks Nyquist") {
  const GridSpec grid;
  const auto zero = amplitude_spectrum(std::vector<double>(2000, 0.0), grid);
  CHECK(amplitude_at(zero, 0.0) == 0.0);
  CHECK(zero.frequencies[1] == 0.5);
  CHECK_NOTHROW(amplitude_at(zero, 500.0));
  CHECK_THROWS_AS(amplitude_at(zero, 500.5), InputError);
  CHECK_THROWS_AS(amplitude_at(zero, -1.0), InputError);
  CHECK_THROWS_AS(amplitude_spectrum(std::vector<double>(10, 0.0), grid), InputError);
}

TEST_CASE("stage spectra of exact and zero predictors") {
  const GridSpec grid{0.0, 2.0, 200};
  const auto y = sample(grid, sin3);
  const std::vector<double> freqs = {0.5, 3.0};
  const std::vector<std::vector<double>> preds = {std::vector<double>(200, 0.0), y};
  const auto stages = stage_spectra(preds, y, grid, freqs);
  REQUIRE(stages.size() == 2);
  const auto truth = amplitude_spectrum(y, grid);

  CHECK(stages[0].stage == 1);
  CHECK(stages[0].target_amplitudes == std::vector<double>{0.0, 0.0});
  CHECK(stages[0].residual.amplitudes == truth.amplitudes);

  CHECK(stages[1].stage == 2);
  CHECK_THAT(stages[1].target_amplitudes[1], WithinAbs(1.0, 1e-9));
  for (double a : stages[1].residual.amplitudes) CHECK(a == 0.0);
}

TEST_CASE("ensemble stage spectra match explicit predictions") {
  const GridSpec grid{0.0, 2.0, 100};
  const auto x = dense_grid(grid);
  const auto y = sample(grid, sin3);
  QuantumModule m1 = initialize_module({2, 1, 1, EncodingMode::Full}, 1);
  QuantumModule m2 = initialize_module({2, 1, 2, EncodingMode::Full}, 2);
  m1.readout_weights = {0.5, -0.5};
  m2.readout_weights = {0.3, 0.2};
  const ResidualEnsemble ens{{m1, m2}};
  const std::vector<double> freqs = {3.0};
  const auto a = stage_spectra(ens, y, grid, freqs);
  const auto b = stage_spectra(ensemble_stage_predictions(ens, x), y, grid, freqs);
  REQUIRE(a.size() == 2);
  for (std::size_t s = 0; s < 2; ++s) {
    CHECK(a[s].target_amplitudes == b[s].target_amplitudes);
    CHECK(a[s].residual.amplitudes == b[s].residual.amplitudes);
  }
}

TEST_CASE("spectrum CSV layouts") {
  const GridSpec grid{0.0, 2.0, 4};
  const std::vector<double> y = {1.0, 1.0, 1.0, 1.0};
  const std::vector<std::vector<double>> preds = {y};
  const std::vector<double> freqs = {0.5};
  const auto stages = stage_spectra(preds, y, grid, freqs);
  const auto truth = amplitude_spectrum(y, grid);
  std::ostringstream spec, bars;
  write_spectrum_csv(spec, truth, stages);
  write_frequency_bars_csv(bars, truth, freqs, stages);
  CHECK(spec.str() ==
        "freq_hz,amp_true,amp_pred_s1,amp_resid_s1\n0,1,1,0\n0.5,0,0,0\n1,0,0,0\n");
  CHECK(bars.str() == "target_freq,true_amp,stage,pred_amp\n0.5,0,1,0\n");
}
