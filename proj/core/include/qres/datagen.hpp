#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace qres {

enum class EnvelopeKind { Gaussian, Lorentzian, Triangular };

std::string to_string(EnvelopeKind kind);
EnvelopeKind parse_envelope_kind(const std::string& text);

/// a * e(x; center, width) * sin(2 pi omega x)
struct FrequencyComponent {
  double omega = 0.0;  // Hz
  double center = 0.0;
  double width = 1.0;
  double amplitude = 1.0;
  EnvelopeKind envelope = EnvelopeKind::Gaussian;

  friend bool operator==(const FrequencyComponent&, const FrequencyComponent&) = default;
};

/// The five-component benchmark table: 0.5 Hz Gaussian, 3 Hz Lorentzian,
/// 7 Hz triangular, 12 Hz and 20 Hz narrow Gaussians, unit amplitudes.
std::vector<FrequencyComponent> default_components();

/// "omega:center:width:amplitude:envelope;..." (envelope as to_string).
std::string format_components(std::span<const FrequencyComponent> components);
std::vector<FrequencyComponent> parse_components(const std::string& text);

struct SplitFractions {
  double train = 0.70;
  double val = 0.15;
  double test = 0.15;
};

struct DatasetSpec {
  std::vector<FrequencyComponent> components = default_components();
  std::size_t n_total = 5000;
  double x_min = 0.0;
  double x_max = 2.0;
  double noise_sigma = 0.0;
  SplitFractions fractions;
  std::uint64_t seed = 0;

  /// Throws SpecError on empty domain, non-positive sizes, bad fractions
  /// or invalid components.
  void validate() const;
};

enum class Split { Train, Val, Test };

std::string to_string(Split split);
Split parse_split(const std::string& text);

struct LabeledSample {
  double x = 0.0;
  double y = 0.0;
  Split split = Split::Train;
  std::size_t dominant = 0;

  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

/// Peak-normalized envelope: 1 at x == center. Throws SpecError if width <= 0.
double envelope_value(EnvelopeKind kind, double x, double center, double width);

/// Noise-free target sum_k a_k e_k(x) sin(2 pi omega_k x).
double target_function(std::span<const FrequencyComponent> components, double x);

/// argmax_k a_k e_k(x), lowest index on ties. Throws SpecError if empty.
std::size_t dominant_component(std::span<const FrequencyComponent> components, double x);

struct SplitSizes {
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;
};

/// val = round(f_val n), test = round(f_test n), train takes the rest.
SplitSizes split_sizes(const DatasetSpec& spec);

/// Samples in draw order. x ~ U[x_min, x_max), y = target + N(0, sigma^2),
/// split assigned through a seeded permutation of indices.
std::vector<LabeledSample> generate_dataset(const DatasetSpec& spec);

/// CSV with header "x,y,split,dominant"; split written as train/val/test.
void write_dataset_csv(std::ostream& out, std::span<const LabeledSample> samples);
std::vector<LabeledSample> read_dataset_csv(std::istream& in);

struct SplitColumns {
  std::vector<double> x;
  std::vector<double> y;
};

struct DatasetSplits {
  SplitColumns train;
  SplitColumns val;
  SplitColumns test;
};

/// Groups samples by split, preserving order within each split.
DatasetSplits split_dataset(std::span<const LabeledSample> samples);

}  // namespace qres
