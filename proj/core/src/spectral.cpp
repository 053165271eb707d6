#include "qres/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>

#include "qres/errors.hpp"
#include "qres/format.hpp"

namespace qres {

void GridSpec::validate() const {
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw ConfigError("grid needs x_min < x_max");
  }
  if (n_points < 2) throw ConfigError("grid needs at least 2 points");
}

std::vector<double> dense_grid(const GridSpec& spec) {
  spec.validate();
  std::vector<double> x(spec.n_points);
  const double step = spec.length() / static_cast<double>(spec.n_points);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = spec.x_min + static_cast<double>(i) * step;
  return x;
}

namespace {

// Planning in FFTW is not thread-safe; execution on a private plan is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

std::vector<std::complex<double>> real_dft(std::span<const double> values) {
  const std::size_t n = values.size();
  const std::size_t bins = n / 2 + 1;
  std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
  std::unique_ptr<fftw_complex, FftwFree> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)));
  if (!in || !out) throw std::bad_alloc();

  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
  }
  std::copy(values.begin(), values.end(), in.get());
  fftw_execute(plan);
  std::vector<std::complex<double>> result(bins);
  for (std::size_t k = 0; k < bins; ++k) result[k] = {out.get()[k][0], out.get()[k][1]};
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return result;
}

}  // namespace

SpectrumReport amplitude_spectrum(std::span<const double> values, const GridSpec& grid) {
  grid.validate();
  if (values.size() != grid.n_points) {
    throw InputError("amplitude_spectrum: " + std::to_string(values.size()) +
                     " values for a grid of " + std::to_string(grid.n_points));
  }
  const std::size_t n = values.size();
  const auto spectrum = real_dft(values);
  const double nd = static_cast<double>(n);

  SpectrumReport report;
  report.frequencies.resize(spectrum.size());
  report.amplitudes.resize(spectrum.size());
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const bool unpaired = k == 0 || (n % 2 == 0 && k == n / 2);
    report.frequencies[k] = static_cast<double>(k) / grid.length();
    report.amplitudes[k] = (unpaired ? 1.0 : 2.0) * std::abs(spectrum[k]) / nd;
  }
  return report;
}

double amplitude_at(const SpectrumReport& report, double freq) {
  if (report.frequencies.size() < 2) throw InputError("spectrum has fewer than two bins");
  const double spacing = report.frequencies[1] - report.frequencies[0];
  const double nyquist = report.frequencies.back();
  if (!(freq >= 0.0) || freq > nyquist + 0.5 * spacing) {
    throw InputError("frequency " + format_double(freq) + " outside [0, Nyquist]");
  }
  auto k = static_cast<std::size_t>(std::llround(freq / spacing));
  k = std::min(k, report.amplitudes.size() - 1);
  return report.amplitudes[k];
}

std::vector<StageSpectrum> stage_spectra(std::span<const std::vector<double>> stage_predictions,
                                         std::span<const double> y_true, const GridSpec& grid,
                                         std::span<const double> target_freqs) {
  if (y_true.size() != grid.n_points) throw InputError("stage_spectra: y_true length mismatch");
  std::vector<StageSpectrum> out;
  out.reserve(stage_predictions.size());
  std::vector<double> residual(grid.n_points);
  for (std::size_t s = 0; s < stage_predictions.size(); ++s) {
    const auto& pred = stage_predictions[s];
    if (pred.size() != grid.n_points) throw InputError("stage_spectra: prediction length mismatch");
    StageSpectrum st;
    st.stage = static_cast<int>(s + 1);
    st.prediction = amplitude_spectrum(pred, grid);
    for (std::size_t i = 0; i < residual.size(); ++i) residual[i] = y_true[i] - pred[i];
    st.residual = amplitude_spectrum(residual, grid);
    for (double f : target_freqs) st.target_amplitudes.push_back(amplitude_at(st.prediction, f));
    out.push_back(std::move(st));
  }
  return out;
}

std::vector<StageSpectrum> stage_spectra(const ResidualEnsemble& ensemble,
                                         std::span<const double> y_true, const GridSpec& grid,
                                         std::span<const double> target_freqs, unsigned threads) {
  const auto x = dense_grid(grid);
  const auto preds = ensemble_stage_predictions(ensemble, x, threads);
  return stage_spectra(preds, y_true, grid, target_freqs);
}

void write_spectrum_csv(std::ostream& out, const SpectrumReport& truth,
                        std::span<const StageSpectrum> stages) {
  out << "freq_hz,amp_true";
  for (const auto& s : stages) out << ",amp_pred_s" << s.stage;
  for (const auto& s : stages) out << ",amp_resid_s" << s.stage;
  out << '\n';
  for (std::size_t k = 0; k < truth.frequencies.size(); ++k) {
    out << format_double(truth.frequencies[k]) << ',' << format_double(truth.amplitudes[k]);
    for (const auto& s : stages) out << ',' << format_double(s.prediction.amplitudes.at(k));
    for (const auto& s : stages) out << ',' << format_double(s.residual.amplitudes.at(k));
    out << '\n';
  }
}

void write_frequency_bars_csv(std::ostream& out, const SpectrumReport& truth,
                              std::span<const double> target_freqs,
                              std::span<const StageSpectrum> stages) {
  out << "target_freq,true_amp,stage,pred_amp\n";
  for (std::size_t f = 0; f < target_freqs.size(); ++f) {
    const double true_amp = amplitude_at(truth, target_freqs[f]);
    for (const auto& s : stages) {
      out << format_double(target_freqs[f]) << ',' << format_double(true_amp) << ',' << s.stage
          << ',' << format_double(s.target_amplitudes.at(f)) << '\n';
    }
  }
}

}  // namespace qres
