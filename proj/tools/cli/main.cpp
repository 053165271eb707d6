#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/manifest.hpp"
#include "qres/errors.hpp"

int main(int argc, char** argv) {
  using namespace qres::cli;

  CLI::App app{"Stage-wise residual quantum regression experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  struct Invocation {
    std::string config_file;
    std::map<std::string, std::optional<std::string>> flags;
  };
  std::map<std::string, Invocation> invocations;

  const std::map<std::string, std::string> descriptions = {
      {"gen-data", "generate the localized-frequency dataset"},
      {"train", "train the residual ensemble and analyse its spectra"},
      {"baseline", "train a single module for stages x epochs epochs"},
      {"sweep-qubits", "residual and baseline runs over qubit counts and seeds"},
      {"barren", "gradient-variance sweep over qubits and layers"},
  };
  for (const auto& name : subcommand_names()) {
    CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
    Invocation& inv = invocations[name];
    sub->add_option("--config", inv.config_file,
                    "key = value config file, or a manifest.json to replay");
    for (const auto& key : config_keys()) {
      sub->add_option("--" + key.name, inv.flags[key.name], key.help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitSuccess : kExitValidation;
  }

  for (const auto& name : subcommand_names()) {
    if (!app.got_subcommand(name)) continue;
    const Invocation& inv = invocations.at(name);
    KeyValues values;
    try {
      if (!inv.config_file.empty()) values = load_config_file(inv.config_file);
    } catch (const qres::Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitValidation;
    }
    for (const auto& [key, value] : inv.flags) {
      if (value) values[key] = *value;
    }
    return run_subcommand(name, values, std::cerr);
  }
  return kExitValidation;
}
