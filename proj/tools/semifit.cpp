#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "semifit/commands.hpp"
#include "semifit/config.hpp"

int main(int argc, char** argv) {
  using namespace semifit;
  CLI::App app{"Fitted finite volume solver for vertical advection-diffusion-reaction columns"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset;
  std::string out_dir;

  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&, const std::filesystem::path&, std::ostream&);
  };
  const Entry entries[] = {
      {"solve", "March the configured problem and write the solution CSV", cmd_solve},
      {"runge", "Three-grid Runge convergence rates at t = T", cmd_runge},
      {"compare", "Compare against the truncated-domain reference solver", cmd_compare},
      {"check-conditions", "Sample the positivity sign conditions", cmd_check_conditions},
  };
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    auto* c = sub->add_option("--config", config_path, "JSON run configuration");
    auto* p = sub->add_option("--preset", preset, "Bundled configuration (paper-s4)");
    c->excludes(p);
    sub->add_option("--out", out_dir, "Output directory (overrides $SEMIFIT_OUT_DIR and output.directory)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  RunConfig cfg;
  try {
    if (!preset.empty()) {
      cfg = parse_config(preset_text(preset));
    } else if (!config_path.empty()) {
      cfg = load_config(config_path);
    } else {
      std::cerr << "config error: one of --config or --preset is required\n";
      return kExitConfig;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  const std::optional<std::string> cli_out = out_dir.empty() ? std::nullopt : std::optional<std::string>(out_dir);
  const auto out = resolve_output_directory(cli_out, cfg);
  for (const auto& e : entries) {
    if (app.got_subcommand(e.name)) return e.run(cfg, out, std::cerr);
  }
  return kExitConfig;
}
