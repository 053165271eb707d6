#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "qres/training.hpp"

namespace qres {

/// Uniform half-open grid over [x_min, x_max).
struct GridSpec {
  double x_min = 0.0;
  double x_max = 2.0;
  std::size_t n_points = 2000;

  void validate() const;
  double length() const { return x_max - x_min; }
};

std::vector<double> dense_grid(const GridSpec& spec);

/// One-sided amplitude spectrum; frequencies[k] = k / (x_max - x_min).
struct SpectrumReport {
  std::vector<double> frequencies;
  std::vector<double> amplitudes;
};

/// Real-input DFT normalized so a unit-amplitude, bin-aligned sinusoid
/// reads 1: A_0 = |X_0|/N, A_k = 2|X_k|/N for 0 < k < N/2, and
/// A_{N/2} = |X_{N/2}|/N for even N.
SpectrumReport amplitude_spectrum(std::span<const double> values, const GridSpec& grid);

/// Amplitude of the bin nearest to freq. Throws InputError for
/// frequencies outside [0, Nyquist].
double amplitude_at(const SpectrumReport& report, double freq);

struct StageSpectrum {
  int stage = 1;
  std::vector<double> target_amplitudes;  // prediction amplitude per target frequency
  SpectrumReport prediction;
  SpectrumReport residual;                // of y_true - F_s
};

/// Spectra of the cumulative predictions of each stage, given as one grid
/// evaluation per stage.
std::vector<StageSpectrum> stage_spectra(std::span<const std::vector<double>> stage_predictions,
                                         std::span<const double> y_true, const GridSpec& grid,
                                         std::span<const double> target_freqs);

std::vector<StageSpectrum> stage_spectra(const ResidualEnsemble& ensemble,
                                         std::span<const double> y_true, const GridSpec& grid,
                                         std::span<const double> target_freqs,
                                         unsigned threads = 1);

/// "freq_hz,amp_true,amp_pred_s1..S,amp_resid_s1..S", one row per bin.
void write_spectrum_csv(std::ostream& out, const SpectrumReport& truth,
                        std::span<const StageSpectrum> stages);

/// "target_freq,true_amp,stage,pred_amp", one row per (frequency, stage).
void write_frequency_bars_csv(std::ostream& out, const SpectrumReport& truth,
                              std::span<const double> target_freqs,
                              std::span<const StageSpectrum> stages);

}  // namespace qres
