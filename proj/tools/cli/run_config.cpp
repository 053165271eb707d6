#include "cli/run_config.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "qres/errors.hpp"
#include "qres/format.hpp"

namespace qres::cli {

namespace {

std::uint64_t parse_u64(const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw InputError("expected a non-negative integer, got '" + text + "'");
  }
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw InputError("integer out of range: '" + text + "'");
  }
}

int parse_int(const std::string& text) {
  const bool negative = !text.empty() && text[0] == '-';
  const std::uint64_t magnitude = parse_u64(negative ? text.substr(1) : text);
  if (magnitude > 1'000'000'000ULL) throw InputError("integer out of range: '" + text + "'");
  const int v = static_cast<int>(magnitude);
  return negative ? -v : v;
}

double parse_real(const std::string& text) {
  const double v = parse_double(text);
  if (!std::isfinite(v)) throw InputError("expected a finite number, got '" + text + "'");
  return v;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (int v : parse_int_list(text)) {
    if (v < 0) throw InputError("seeds must be non-negative");
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

std::string format_u64_list(const std::vector<std::uint64_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

struct KeyBinding {
  ConfigKey key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<KeyBinding>& bindings() {
  static const std::vector<KeyBinding> table = {
      {{"run_id", "name of the run directory under output_dir"},
       [](RunConfig& c, const std::string& v) {
         if (v.empty() || v.find('/') != std::string::npos || v == "." || v == "..") {
           throw InputError("run_id must be a plain directory name");
         }
         c.run_id = v;
       },
       [](const RunConfig& c) { return c.run_id; }},
      {{"output_dir", "directory receiving <run_id>/"},
       [](RunConfig& c, const std::string& v) {
         if (v.empty()) throw InputError("output_dir must not be empty");
         c.output_dir = v;
       },
       [](const RunConfig& c) { return c.output_dir.string(); }},
      {{"seed", "training and probe seed"},
       [](RunConfig& c, const std::string& v) { c.seed = parse_u64(v); },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      {{"data_seed", "dataset sampling and split seed"},
       [](RunConfig& c, const std::string& v) { c.data_seed = parse_u64(v); },
       [](const RunConfig& c) { return std::to_string(c.data_seed); }},
      {{"threads", "worker threads, 0 = all cores (results do not depend on it)"},
       [](RunConfig& c, const std::string& v) {
         c.threads = static_cast<unsigned>(parse_u64(v));
       },
       [](const RunConfig& c) { return std::to_string(c.threads); }},
      {{"data_file", "existing dataset CSV to train on (empty: generate)"},
       [](RunConfig& c, const std::string& v) { c.data_file = v; },
       [](const RunConfig& c) { return c.data_file; }},
      {{"n_total", "number of generated samples"},
       [](RunConfig& c, const std::string& v) { c.dataset.n_total = parse_u64(v); },
       [](const RunConfig& c) { return std::to_string(c.dataset.n_total); }},
      {{"x_min", "domain lower bound"},
       [](RunConfig& c, const std::string& v) { c.dataset.x_min = parse_real(v); },
       [](const RunConfig& c) { return format_double(c.dataset.x_min); }},
      {{"x_max", "domain upper bound"},
       [](RunConfig& c, const std::string& v) { c.dataset.x_max = parse_real(v); },
       [](const RunConfig& c) { return format_double(c.dataset.x_max); }},
      {{"noise_sigma", "standard deviation of additive Gaussian noise"},
       [](RunConfig& c, const std::string& v) { c.dataset.noise_sigma = parse_real(v); },
       [](const RunConfig& c) { return format_double(c.dataset.noise_sigma); }},
      {{"train_fraction", "training split fraction"},
       [](RunConfig& c, const std::string& v) { c.dataset.fractions.train = parse_real(v); },
       [](const RunConfig& c) { return format_double(c.dataset.fractions.train); }},
      {{"val_fraction", "validation split fraction"},
       [](RunConfig& c, const std::string& v) { c.dataset.fractions.val = parse_real(v); },
       [](const RunConfig& c) { return format_double(c.dataset.fractions.val); }},
      {{"test_fraction", "test split fraction"},
       [](RunConfig& c, const std::string& v) { c.dataset.fractions.test = parse_real(v); },
       [](const RunConfig& c) { return format_double(c.dataset.fractions.test); }},
      {{"components", "omega:center:width:amplitude:envelope;... target components"},
       [](RunConfig& c, const std::string& v) { c.dataset.components = parse_components(v); },
       [](const RunConfig& c) { return format_components(c.dataset.components); }},
      {{"qubits", "qubits per module"},
       [](RunConfig& c, const std::string& v) { c.circuit.n_qubits = parse_int(v); },
       [](const RunConfig& c) { return std::to_string(c.circuit.n_qubits); }},
      {{"layers", "variational layers per module"},
       [](RunConfig& c, const std::string& v) { c.circuit.n_layers = parse_int(v); },
       [](const RunConfig& c) { return std::to_string(c.circuit.n_layers); }},
      {{"encoding", "full | ry_only"},
       [](RunConfig& c, const std::string& v) { c.circuit.encoding = parse_encoding_mode(v); },
       [](const RunConfig& c) { return to_string(c.circuit.encoding); }},
      {{"batch_size", "samples per optimizer step"},
       [](RunConfig& c, const std::string& v) { c.train.batch_size = parse_u64(v); },
       [](const RunConfig& c) { return std::to_string(c.train.batch_size); }},
      {{"learning_rate", "Adam step size"},
       [](RunConfig& c, const std::string& v) { c.train.learning_rate = parse_real(v); },
       [](const RunConfig& c) { return format_double(c.train.learning_rate); }},
      {{"epochs", "epochs per stage"},
       [](RunConfig& c, const std::string& v) { c.train.epochs_per_stage = parse_int(v); },
       [](const RunConfig& c) { return std::to_string(c.train.epochs_per_stage); }},
      {{"stages", "number of residual stages"},
       [](RunConfig& c, const std::string& v) { c.train.n_stages = parse_int(v); },
       [](const RunConfig& c) { return std::to_string(c.train.n_stages); }},
      {{"adam_beta1", "Adam first-moment decay"},
       [](RunConfig& c, const std::string& v) { c.train.adam_beta1 = parse_real(v); },
       [](const RunConfig& c) { return format_double(c.train.adam_beta1); }},
      {{"adam_beta2", "Adam second-moment decay"},
       [](RunConfig& c, const std::string& v) { c.train.adam_beta2 = parse_real(v); },
       [](const RunConfig& c) { return format_double(c.train.adam_beta2); }},
      {{"adam_epsilon", "Adam denominator offset"},
       [](RunConfig& c, const std::string& v) { c.train.adam_epsilon = parse_real(v); },
       [](const RunConfig& c) { return format_double(c.train.adam_epsilon); }},
      {{"grid_points", "points of the spectral analysis grid"},
       [](RunConfig& c, const std::string& v) { c.grid_points = parse_u64(v); },
       [](const RunConfig& c) { return std::to_string(c.grid_points); }},
      {{"barren_qubits", "qubit counts of the gradient-variance sweep"},
       [](RunConfig& c, const std::string& v) { c.barren.qubit_values = parse_int_list(v); },
       [](const RunConfig& c) { return format_int_list(c.barren.qubit_values); }},
      {{"barren_layers", "layer counts of the gradient-variance sweep"},
       [](RunConfig& c, const std::string& v) { c.barren.layer_values = parse_int_list(v); },
       [](const RunConfig& c) { return format_int_list(c.barren.layer_values); }},
      {{"n_inits", "random initializations per sweep cell"},
       [](RunConfig& c, const std::string& v) { c.barren.n_inits = parse_u64(v); },
       [](const RunConfig& c) { return std::to_string(c.barren.n_inits); }},
      {{"probe_batch", "fixed probe points per sweep"},
       [](RunConfig& c, const std::string& v) { c.barren.probe_batch = parse_u64(v); },
       [](const RunConfig& c) { return std::to_string(c.barren.probe_batch); }},
      {{"sweep_qubits", "qubit counts for sweep-qubits"},
       [](RunConfig& c, const std::string& v) { c.sweep_qubits = parse_int_list(v); },
       [](const RunConfig& c) { return format_int_list(c.sweep_qubits); }},
      {{"sweep_seeds", "training seeds for sweep-qubits"},
       [](RunConfig& c, const std::string& v) { c.sweep_seeds = parse_u64_list(v); },
       [](const RunConfig& c) { return format_u64_list(c.sweep_seeds); }},
  };
  return table;
}

[[noreturn]] void reject(const std::string& key, const std::string& why) {
  throw ConfigError("config key '" + key + "': " + why);
}

template <class F>
void check(const std::string& key, F&& validate) {
  try {
    validate();
  } catch (const Error& e) {
    reject(key, e.what());
  }
}

void validate(const RunConfig& c) {
  check("qubits", [&] { CircuitConfig{c.circuit.n_qubits, 1, 1, c.circuit.encoding}.validate(); });
  check("layers", [&] { CircuitConfig{1, c.circuit.n_layers, 1, c.circuit.encoding}.validate(); });
  if (c.train.batch_size == 0) reject("batch_size", "must be positive");
  if (!(c.train.learning_rate > 0)) reject("learning_rate", "must be positive");
  if (c.train.epochs_per_stage < 1) reject("epochs", "must be >= 1");
  if (c.train.n_stages < 1) reject("stages", "must be >= 1");
  if (!(c.train.adam_beta1 > 0 && c.train.adam_beta1 < 1)) reject("adam_beta1", "must be in (0, 1)");
  if (!(c.train.adam_beta2 > 0 && c.train.adam_beta2 < 1)) reject("adam_beta2", "must be in (0, 1)");
  if (!(c.train.adam_epsilon > 0)) reject("adam_epsilon", "must be positive");
  if (c.dataset.n_total == 0) reject("n_total", "must be positive");
  if (!(c.dataset.x_max > c.dataset.x_min)) reject("x_max", "must exceed x_min");
  if (!(c.dataset.noise_sigma >= 0)) reject("noise_sigma", "must be >= 0");
  if (!(c.dataset.fractions.train > 0)) reject("train_fraction", "must be positive");
  if (!(c.dataset.fractions.val > 0)) reject("val_fraction", "must be positive");
  if (!(c.dataset.fractions.test > 0)) reject("test_fraction", "must be positive");
  if (c.dataset.components.empty()) reject("components", "needs at least one component");
  check("components", [&] {
    for (const auto& comp : c.dataset.components) {
      DatasetSpec one = c.dataset;
      one.components = {comp};
      one.fractions = {};
      one.validate();
    }
  });
  check("train_fraction", [&] {
    c.dataset.validate();
    split_sizes(c.dataset);
  });
  if (c.grid_points < 2) reject("grid_points", "must be >= 2");
  const double nyquist = static_cast<double>(c.grid_points / 2) / c.grid().length();
  for (const auto& comp : c.dataset.components) {
    if (comp.omega > nyquist) {
      reject("grid_points", "Nyquist frequency " + format_double(nyquist) +
                                " Hz is below the " + format_double(comp.omega) +
                                " Hz component");
    }
  }
  check("barren_qubits", [&] {
    for (int q : c.barren.qubit_values) CircuitConfig{q, 1, 1, EncodingMode::Full}.validate();
    if (c.barren.qubit_values.empty()) throw ConfigError("empty list");
  });
  check("barren_layers", [&] {
    for (int l : c.barren.layer_values) CircuitConfig{1, l, 1, EncodingMode::Full}.validate();
    if (c.barren.layer_values.empty()) throw ConfigError("empty list");
  });
  if (c.barren.n_inits < 2) reject("n_inits", "must be >= 2");
  if (c.barren.probe_batch < 1) reject("probe_batch", "must be >= 1");
  check("sweep_qubits", [&] {
    for (int q : c.sweep_qubits) CircuitConfig{q, 1, 1, EncodingMode::Full}.validate();
    if (c.sweep_qubits.empty()) throw ConfigError("empty list");
  });
  if (c.sweep_seeds.empty()) reject("sweep_seeds", "empty list");
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& b : bindings()) out.push_back(b.key);
    return out;
  }();
  return keys;
}

RunConfig make_run_config(const KeyValues& values) {
  RunConfig c;
  for (const auto& [key, value] : values) {
    const auto& table = bindings();
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const KeyBinding& b) { return b.key.name == key; });
    if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
    try {
      it->set(c, value);
    } catch (const Error& e) {
      reject(key, e.what());
    }
  }
  validate(c);

  c.dataset.seed = c.data_seed;
  c.train.seed = c.seed;
  c.train.threads = c.threads;
  c.barren.seed = c.seed;
  c.barren.threads = c.threads;
  c.barren.encoding = c.circuit.encoding;
  c.barren.components = c.dataset.components;
  c.barren.x_min = c.dataset.x_min;
  c.barren.x_max = c.dataset.x_max;
  return c;
}

KeyValues snapshot(const RunConfig& config) {
  KeyValues out;
  for (const auto& b : bindings()) out[b.key.name] = b.get(config);
  return out;
}

namespace {
std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}
}  // namespace

KeyValues load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());

  KeyValues out;
  if (path.extension() == ".json") {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config " + path.string() + ": " + e.what());
    }
    if (!doc.contains("config") || !doc["config"].is_object()) {
      throw ConfigError("config " + path.string() + " has no \"config\" object");
    }
    for (const auto& [k, v] : doc["config"].items()) {
      if (!v.is_string()) throw ConfigError("config key '" + k + "' must be a string");
      out[k] = v.get<std::string>();
    }
    return out;
  }

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto dash = item.find('-', 1);
    if (dash == std::string::npos) {
      out.push_back(parse_int(item));
      continue;
    }
    const int lo = parse_int(item.substr(0, dash));
    const int hi = parse_int(item.substr(dash + 1));
    if (hi < lo) throw InputError("empty range '" + item + "'");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw InputError("empty list");
  return out;
}

std::string format_int_list(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

}  // namespace qres::cli
