// mhinr: command-line front end for the experiment drivers.
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mhinr/mhinr.hpp"

namespace ex = mhinr::experiments;

namespace {

struct SubcommandArgs {
  ex::ExperimentKind kind;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> flags;  // setting key -> raw value
  std::optional<std::string> config;
  bool paper_scale = false;
};

void add_setting_flags(SubcommandArgs& args) {
  args.app->add_option("--config", args.config, "key = value settings file (flags override it)");
  args.app->add_flag("--paper-scale", args.paper_scale, "use full-size experiment settings");
  for (const auto& key : ex::setting_keys()) {
    args.app->add_option_function<std::string>(
        "--" + key, [&args, key](const std::string& v) { args.flags[key] = v; }, "setting '" + key + "'");
  }
}

ex::ExperimentConfig resolve(const SubcommandArgs& args) {
  ex::Settings file_settings;
  if (args.config) file_settings = ex::parse_config_text(ex::read_text(*args.config));
  const ex::Settings flags(args.flags.begin(), args.flags.end());
  ex::ExperimentConfig cfg = ex::resolve_config(args.kind, args.paper_scale, file_settings, flags);
  ex::validate(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-head implicit neural representations"};
  app.require_subcommand(1);

  std::map<std::string, SubcommandArgs> subs;
  auto add = [&](ex::ExperimentKind kind, const std::string& help) {
    auto& args = subs[ex::to_string(kind)];
    args.kind = kind;
    args.app = app.add_subcommand(ex::to_string(kind), help);
    add_setting_flags(args);
  };
  add(ex::ExperimentKind::Fit, "train one model on an image or Perlin target");
  add(ex::ExperimentKind::SweepOctaves, "PSNR over Perlin octaves and head grids");
  add(ex::ExperimentKind::SweepHeads, "train at half resolution, evaluate at full resolution");
  add(ex::ExperimentKind::Compare, "multi-head vs parameter-matched Siren and Fourier features");
  add(ex::ExperimentKind::Perlin, "write a Perlin noise PGM");

  std::string plot_csv, plot_out;
  auto* plot = app.add_subcommand("plot", "re-render a sweep plot from its CSV");
  plot->add_option("csv", plot_csv, "sweep CSV")->required();
  plot->add_option("--out", plot_out, "SVG path (default: CSV path with .svg)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (plot->parsed()) {
      std::filesystem::path out = plot_out.empty() ? std::filesystem::path(plot_csv).replace_extension(".svg")
                                                   : std::filesystem::path(plot_out);
      ex::write_text(out, ex::plot_csv(ex::read_csv(plot_csv)));
      std::cout << out.string() << "\n";
      return 0;
    }
    for (auto& [name, args] : subs) {
      if (!args.app->parsed()) continue;
      const ex::ExperimentConfig cfg = resolve(args);
      if (args.kind == ex::ExperimentKind::Perlin) {
        const auto stats = ex::cmd_perlin(cfg);
        std::cout << cfg.out_file.string() << " min " << ex::format_double(stats.min) << " max "
                  << ex::format_double(stats.max) << " mean " << ex::format_double(stats.mean) << "\n";
        return 0;
      }
      ex::CommandResult result;
      switch (args.kind) {
        case ex::ExperimentKind::Fit: result = ex::cmd_fit(cfg); break;
        case ex::ExperimentKind::SweepOctaves: result = ex::cmd_sweep_octaves(cfg); break;
        case ex::ExperimentKind::SweepHeads: result = ex::cmd_sweep_heads(cfg); break;
        case ex::ExperimentKind::Compare: result = ex::cmd_compare(cfg); break;
        case ex::ExperimentKind::Perlin: break;
      }
      for (const auto& p : result.outputs) std::cout << p.string() << "\n";
      return result.exit_code;
    }
  } catch (const mhinr::ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
