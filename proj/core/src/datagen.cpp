#include "qres/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "qres/errors.hpp"
#include "qres/format.hpp"

namespace qres {

std::string to_string(EnvelopeKind kind) {
  switch (kind) {
    case EnvelopeKind::Gaussian:
      return "gaussian";
    case EnvelopeKind::Lorentzian:
      return "lorentzian";
    case EnvelopeKind::Triangular:
      return "triangular";
  }
  return "unknown";
}

EnvelopeKind parse_envelope_kind(const std::string& text) {
  if (text == "gaussian") return EnvelopeKind::Gaussian;
  if (text == "lorentzian") return EnvelopeKind::Lorentzian;
  if (text == "triangular") return EnvelopeKind::Triangular;
  throw SpecError("unknown envelope '" + text + "'");
}

std::vector<FrequencyComponent> default_components() {
  return {
      {0.5, 1.0, 0.8, 1.0, EnvelopeKind::Gaussian},
      {3.0, 0.4, 0.25, 1.0, EnvelopeKind::Lorentzian},
      {7.0, 1.0, 0.5, 1.0, EnvelopeKind::Triangular},
      {12.0, 1.5, 0.12, 1.0, EnvelopeKind::Gaussian},
      {20.0, 1.8, 0.08, 1.0, EnvelopeKind::Gaussian},
  };
}

std::string format_components(std::span<const FrequencyComponent> components) {
  std::string out;
  for (std::size_t k = 0; k < components.size(); ++k) {
    const auto& c = components[k];
    if (k) out += ';';
    out += format_double(c.omega) + ':' + format_double(c.center) + ':' + format_double(c.width) +
           ':' + format_double(c.amplitude) + ':' + to_string(c.envelope);
  }
  return out;
}

std::vector<FrequencyComponent> parse_components(const std::string& text) {
  std::vector<FrequencyComponent> out;
  std::stringstream entries(text);
  std::string entry;
  while (std::getline(entries, entry, ';')) {
    if (entry.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream parts(entry);
    std::string field;
    while (std::getline(parts, field, ':')) fields.push_back(field);
    if (fields.size() != 5) {
      throw SpecError("component '" + entry + "' needs omega:center:width:amplitude:envelope");
    }
    try {
      out.push_back({parse_double(fields[0]), parse_double(fields[1]), parse_double(fields[2]),
                     parse_double(fields[3]), parse_envelope_kind(fields[4])});
    } catch (const InputError& e) {
      throw SpecError("component '" + entry + "': " + e.what());
    }
  }
  return out;
}

void DatasetSpec::validate() const {
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw SpecError("domain must satisfy x_min < x_max");
  }
  if (n_total == 0) throw SpecError("n_total must be positive");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw SpecError("noise_sigma must be finite and >= 0");
  }
  const double fr[] = {fractions.train, fractions.val, fractions.test};
  for (double f : fr) {
    if (!(f > 0.0)) throw SpecError("split fractions must be positive");
  }
  if (std::abs(fr[0] + fr[1] + fr[2] - 1.0) > 1e-9) {
    throw SpecError("split fractions must sum to 1");
  }
  for (const auto& c : components) {
    if (!(c.width > 0.0)) throw SpecError("component width must be positive");
    if (!(c.omega >= 0.0)) throw SpecError("component frequency must be >= 0");
    if (!std::isfinite(c.center) || !std::isfinite(c.amplitude) || !std::isfinite(c.omega) ||
        !std::isfinite(c.width)) {
      throw SpecError("component fields must be finite");
    }
  }
}

std::string to_string(Split split) {
  switch (split) {
    case Split::Train:
      return "train";
    case Split::Val:
      return "val";
    case Split::Test:
      return "test";
  }
  return "unknown";
}

Split parse_split(const std::string& text) {
  if (text == "train") return Split::Train;
  if (text == "val") return Split::Val;
  if (text == "test") return Split::Test;
  throw InputError("unknown split '" + text + "'");
}

double envelope_value(EnvelopeKind kind, double x, double center, double width) {
  if (!(width > 0.0)) throw SpecError("envelope width must be positive");
  const double u = (x - center) / width;
  switch (kind) {
    case EnvelopeKind::Gaussian:
      return std::exp(-0.5 * u * u);
    case EnvelopeKind::Lorentzian:
      return 1.0 / (1.0 + u * u);
    case EnvelopeKind::Triangular:
      return std::max(0.0, 1.0 - std::abs(u));
  }
  throw SpecError("unknown envelope kind");
}

double target_function(std::span<const FrequencyComponent> components, double x) {
  double y = 0.0;
  for (const auto& c : components) {
    y += c.amplitude * envelope_value(c.envelope, x, c.center, c.width) *
         std::sin(2.0 * std::numbers::pi * c.omega * x);
  }
  return y;
}

std::size_t dominant_component(std::span<const FrequencyComponent> components, double x) {
  if (components.empty()) throw SpecError("dominant_component needs at least one component");
  std::size_t best = 0;
  double best_weight = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < components.size(); ++k) {
    const auto& c = components[k];
    const double w = c.amplitude * envelope_value(c.envelope, x, c.center, c.width);
    if (w > best_weight) {
      best = k;
      best_weight = w;
    }
  }
  return best;
}

SplitSizes split_sizes(const DatasetSpec& spec) {
  const double n = static_cast<double>(spec.n_total);
  SplitSizes s;
  s.val = static_cast<std::size_t>(std::llround(spec.fractions.val * n));
  s.test = static_cast<std::size_t>(std::llround(spec.fractions.test * n));
  if (s.val + s.test > spec.n_total) throw SpecError("split fractions leave no training samples");
  s.train = spec.n_total - s.val - s.test;
  return s;
}

std::vector<LabeledSample> generate_dataset(const DatasetSpec& spec) {
  spec.validate();
  if (spec.components.empty()) throw SpecError("dataset needs at least one component");
  const SplitSizes sizes = split_sizes(spec);

  // Independent streams so changing sigma does not move the x draws.
  std::mt19937_64 x_rng(derive_seed(spec.seed, 1));
  std::mt19937_64 noise_rng(derive_seed(spec.seed, 2));
  std::mt19937_64 split_rng(derive_seed(spec.seed, 3));

  std::uniform_real_distribution<double> ux(spec.x_min, spec.x_max);
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<LabeledSample> samples(spec.n_total);
  for (auto& s : samples) {
    s.x = ux(x_rng);
    s.y = target_function(spec.components, s.x);
    if (spec.noise_sigma > 0.0) s.y += spec.noise_sigma * noise(noise_rng);
    s.dominant = dominant_component(spec.components, s.x);
  }

  std::vector<std::size_t> order(spec.n_total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), split_rng);
  for (std::size_t i = 0; i < order.size(); ++i) {
    Split split = Split::Train;
    if (i >= sizes.train + sizes.val) {
      split = Split::Test;
    } else if (i >= sizes.train) {
      split = Split::Val;
    }
    samples[order[i]].split = split;
  }
  return samples;
}

void write_dataset_csv(std::ostream& out, std::span<const LabeledSample> samples) {
  out << "x,y,split,dominant\n";
  for (const auto& s : samples) {
    out << format_double(s.x) << ',' << format_double(s.y) << ',' << to_string(s.split) << ','
        << s.dominant << '\n';
  }
}

std::vector<LabeledSample> read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "x,y,split,dominant") {
    throw InputError("dataset CSV must start with header 'x,y,split,dominant'");
  }
  std::vector<LabeledSample> samples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 4) {
      throw InputError("dataset CSV line " + std::to_string(line_no) + ": expected 4 fields");
    }
    LabeledSample s;
    s.x = parse_double(fields[0]);
    s.y = parse_double(fields[1]);
    s.split = parse_split(fields[2]);
    s.dominant = static_cast<std::size_t>(std::stoull(fields[3]));
    samples.push_back(s);
  }
  return samples;
}

DatasetSplits split_dataset(std::span<const LabeledSample> samples) {
  DatasetSplits out;
  for (const auto& s : samples) {
    SplitColumns& dst =
        s.split == Split::Train ? out.train : (s.split == Split::Val ? out.val : out.test);
    dst.x.push_back(s.x);
    dst.y.push_back(s.y);
  }
  return out;
}

}  // namespace qres
