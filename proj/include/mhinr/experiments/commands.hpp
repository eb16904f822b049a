#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mhinr/experiments/config.hpp"
#include "mhinr/experiments/csv.hpp"
#include "mhinr/experiments/report.hpp"
#include "mhinr/experiments/svg_plot.hpp"
#include "mhinr/metrics/psnr.hpp"
#include "mhinr/models/checkpoint.hpp"
#include "mhinr/models/counting.hpp"
#include "mhinr/models/trainer.hpp"
#include "mhinr/signal/perlin.hpp"
#include "mhinr/signal/pgm.hpp"
#include "mhinr/signal/resample.hpp"

namespace mhinr::experiments {

using Logger = std::function<void(const std::string&)>;

inline Logger stderr_logger() {
  return [](const std::string& line) { std::cerr << line << std::endl; };
}

inline constexpr const char* kSweepOctavesSchema = "mhinr.sweep_octaves/1";
inline constexpr const char* kSweepHeadsSchema = "mhinr.sweep_heads/1";
inline constexpr const char* kCompareSchema = "mhinr.compare/1";

struct CommandResult {
  int exit_code = 0;
  std::vector<std::string> failures;  // one entry per failed grid point
  std::vector<std::filesystem::path> outputs;
};

/// Shrinks img by an integer box factor to reach dims; equal dims pass through.
inline signal::Image resize_to(const signal::Image& img, const Dims& dims) {
  if (img.rows() == dims.rows && img.cols() == dims.cols) return img;
  detail::require(dims.rows > 0 && dims.cols > 0 && img.rows() % dims.rows == 0 && img.cols() % dims.cols == 0 &&
                      img.rows() / dims.rows == img.cols() / dims.cols,
                  "cannot box-resize " + std::to_string(img.rows()) + "x" + std::to_string(img.cols()) + " to " +
                      to_string(dims));
  return signal::box_downsample(img, img.rows() / dims.rows);
}

inline std::string perlin_description(const signal::PerlinSpec& p, const Dims& dims) {
  return "perlin:octaves=" + std::to_string(p.octaves) + ";base_frequency=" + format_double(p.base_frequency) +
         ";persistence=" + format_double(p.persistence) + ";lacunarity=" + format_double(p.lacunarity) +
         ";seed=" + std::to_string(p.seed) + ";dims=" + to_string(dims);
}

/// The image a command trains on: --image or a Perlin target. fit resizes an
/// image only when --dims was given; compare always works at its dims.
inline signal::Image load_target(const ExperimentConfig& cfg, std::string* description = nullptr) {
  if (cfg.image) {
    signal::Image img = signal::load_image(*cfg.image);
    if (cfg.dims_explicit || cfg.kind == ExperimentKind::Compare) img = resize_to(img, cfg.dims);
    if (description) *description = cfg.image->string();
    return img;
  }
  if (description) *description = perlin_description(cfg.perlin, cfg.dims);
  return signal::perlin2d(cfg.perlin, cfg.dims.rows, cfg.dims.cols);
}

inline models::ModelSpec multihead_for(const ExperimentConfig& cfg, const Dims& heads, std::size_t alpha) {
  models::ModelSpec spec = models::multihead_spec(heads.rows, heads.cols, alpha, cfg.seed);
  spec.body_widths = cfg.body_widths;
  spec.epochs = cfg.epochs;
  return spec;
}

struct FitOutcome {
  RunReport report;
  models::InrNetwork network;
  signal::Image reconstruction;
};

// Trains one model on img and fills a report (FLOPs at flops_dims).
inline FitOutcome run_training(const models::ModelSpec& spec, const signal::Image& img, double lr,
                               const std::string& target, const Dims& flops_dims, const Logger& log) {
  const auto start = std::chrono::steady_clock::now();
  models::InrNetwork net = models::build(spec);
  models::TrainOptions options;
  options.epochs = spec.epochs;
  options.adam.lr = lr;
  const std::size_t every = std::max<std::size_t>(1, spec.epochs / 4);
  options.on_epoch = [&](std::size_t epoch, double loss) {
    if (log && (epoch % every == 0 || epoch == 1)) {
      log("  epoch " + std::to_string(epoch) + "/" + std::to_string(spec.epochs) + " loss " + format_double(loss));
    }
  };
  auto result = models::train(net, img, options);
  RunReport report;
  report.spec = spec;
  report.target = target;
  report.learning_rate = lr;
  report.losses = std::move(result.losses);
  report.train_psnr_db = result.train.psnr_db;
  report.train_mse = result.train.mse;
  report.flops = models::count_flops(spec, flops_dims.rows, flops_dims.cols);
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(report), std::move(net), std::move(result.reconstruction)};
}

inline void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

// fit: trains one model; writes report.csv, report.json, target.pgm,
// recon.pgm, model.ckpt (and eval.pgm when --eval-dims is set).
inline CommandResult cmd_fit(const ExperimentConfig& cfg, const Logger& log = stderr_logger()) {
  validate(cfg);
  ensure_dir(cfg.out_dir);
  std::string target;
  const signal::Image img = load_target(cfg, &target);
  models::ModelSpec spec;
  if (cfg.model == models::ModelKind::MultiHead) {
    spec = multihead_for(cfg, cfg.heads, cfg.alpha);
  } else {
    spec.kind = cfg.model;
    spec.body_widths = cfg.body_widths;
    spec.seed = cfg.seed;
    spec.epochs = cfg.epochs;
  }
  if (log) log("fit " + models::to_string(spec.kind) + " (" + std::to_string(models::count_params(spec)) +
               " params) on " + target);
  const Dims flops_dims = cfg.eval_dims.value_or(Dims{img.rows(), img.cols()});
  auto outcome = run_training(spec, img, cfg.lr, target, flops_dims, log);
  CommandResult result;
  if (cfg.eval_dims) {
    const signal::Image rendered = models::evaluate(outcome.network, cfg.eval_dims->rows, cfg.eval_dims->cols);
    signal::Image truth = cfg.image ? resize_to(signal::load_image(*cfg.image), *cfg.eval_dims)
                                    : signal::perlin2d(cfg.perlin, cfg.eval_dims->rows, cfg.eval_dims->cols);
    outcome.report.eval_psnr_db = metrics::psnr(rendered, truth).psnr_db;
    signal::save_image(rendered, cfg.out_dir / "eval.pgm");
    result.outputs.push_back(cfg.out_dir / "eval.pgm");
  }
  write_csv(cfg.out_dir / "report.csv", report_to_table(outcome.report));
  write_text(cfg.out_dir / "report.json", report_to_json(outcome.report).dump(2) + "\n");
  signal::save_image(img, cfg.out_dir / "target.pgm");
  signal::save_image(outcome.reconstruction, cfg.out_dir / "recon.pgm");
  models::save_checkpoint(outcome.network, cfg.out_dir / "model.ckpt");
  for (const char* name : {"report.csv", "report.json", "target.pgm", "recon.pgm", "model.ckpt"}) {
    result.outputs.push_back(cfg.out_dir / name);
  }
  if (log) log("train PSNR " + format_double(outcome.report.train_psnr_db) + " dB");
  return result;
}

inline std::string heads_label(std::size_t hx, std::size_t hy) {
  if (hx == hy) return hx == 1 ? "1" : std::to_string(hx) + "^2";
  return std::to_string(hx) + "x" + std::to_string(hy);
}

// Plot for a sweep-octaves table: PSNR vs octave, one curve per head grid.
inline LinePlot sweep_octaves_plot(const CsvTable& t) {
  LinePlot plot;
  plot.title = "PSNR vs Perlin octave";
  plot.x_label = "octave";
  plot.y_label = "train PSNR (dB)";
  std::vector<std::string> order;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.at(i, "status") != "ok") continue;
    const std::string name = heads_label(parse_count(t.at(i, "heads_x")), parse_count(t.at(i, "heads_y"))) + " heads";
    auto it = std::find_if(plot.series.begin(), plot.series.end(), [&](const auto& s) { return s.name == name; });
    if (it == plot.series.end()) {
      plot.series.push_back({name, {}, {}});
      it = plot.series.end() - 1;
    }
    it->xs.push_back(t.number(i, "octave"));
    it->ys.push_back(t.number(i, "train_psnr_db"));
  }
  std::sort(plot.series.begin(), plot.series.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return plot;
}

inline LinePlot sweep_heads_plot(const CsvTable& t) {
  LinePlot plot;
  plot.title = "Generalization vs number of heads";
  plot.x_label = "heads (log2 scale)";
  plot.y_label = "PSNR (dB)";
  PlotSeries train{"train", {}, {}}, eval{"eval (2x resolution)", {}, {}};
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.at(i, "status") != "ok") continue;
    const double x = std::log2(t.number(i, "heads"));
    train.xs.push_back(x);
    train.ys.push_back(t.number(i, "train_psnr_db"));
    eval.xs.push_back(x);
    eval.ys.push_back(t.number(i, "eval_psnr_db"));
    plot.x_ticks.push_back(x);
    plot.x_tick_labels.push_back(heads_label(parse_count(t.at(i, "heads_x")), parse_count(t.at(i, "heads_y"))));
  }
  plot.series = {train, eval};
  return plot;
}

/// Re-renders the plot of any sweep CSV; compare tables have no plot.
inline std::string plot_csv(const CsvTable& t) {
  if (t.schema == kSweepOctavesSchema) return render_svg(sweep_octaves_plot(t));
  if (t.schema == kSweepHeadsSchema) return render_svg(sweep_heads_plot(t));
  throw ContractError("no plot defined for CSV schema '" + t.schema + "'");
}

inline std::string failure_message(const std::vector<std::string>& failures) {
  std::string msg = std::to_string(failures.size()) + " sweep point(s) failed:";
  for (const auto& f : failures) msg += "\n  " + f;
  return msg;
}

// sweep-octaves: one model per (octave, head grid) on Perlin targets;
// writes sweep_octaves.csv and sweep_octaves.svg plus the targets.
inline CommandResult cmd_sweep_octaves(const ExperimentConfig& cfg, const Logger& log = stderr_logger()) {
  validate(cfg);
  ensure_dir(cfg.out_dir);
  auto octaves = cfg.octave_list;
  std::sort(octaves.begin(), octaves.end());
  auto heads = cfg.head_list;
  std::sort(heads.begin(), heads.end(), [](const Dims& a, const Dims& b) {
    return std::pair(a.rows * a.cols, a.rows) < std::pair(b.rows * b.cols, b.rows);
  });
  CsvTable table;
  table.schema = kSweepOctavesSchema;
  table.header = {"octave", "heads_x", "heads_y", "heads", "alpha", "epochs", "seed", "train_psnr_db", "train_mse",
                  "status"};
  CommandResult result;
  for (auto octave : octaves) {
    signal::PerlinSpec p = cfg.perlin;
    p.octaves = octave;
    const signal::Image target = signal::perlin2d(p, cfg.dims.rows, cfg.dims.cols);
    const auto target_path = cfg.out_dir / ("target_octave" + std::to_string(octave) + ".pgm");
    signal::save_image(target, target_path);
    result.outputs.push_back(target_path);
    for (const auto& h : heads) {
      const std::string point = "octave=" + std::to_string(octave) + " heads=" + to_string(h);
      if (log) log("sweep-octaves " + point);
      std::vector<std::string> row{std::to_string(octave), std::to_string(h.rows), std::to_string(h.cols),
                                   std::to_string(h.rows * h.cols), std::to_string(cfg.alpha),
                                   std::to_string(cfg.epochs), std::to_string(cfg.seed)};
      try {
        const auto outcome =
            run_training(multihead_for(cfg, h, cfg.alpha), target, cfg.lr, perlin_description(p, cfg.dims), cfg.dims, log);
        row.insert(row.end(), {format_double(outcome.report.train_psnr_db), format_double(outcome.report.train_mse), "ok"});
        if (log) log("  PSNR " + format_double(outcome.report.train_psnr_db) + " dB");
      } catch (const std::exception& e) {
        row.insert(row.end(), {"", "", std::string("failed: ") + e.what()});
        result.failures.push_back(point + ": " + e.what());
      }
      table.rows.push_back(std::move(row));
    }
  }
  write_csv(cfg.out_dir / "sweep_octaves.csv", table);
  write_text(cfg.out_dir / "sweep_octaves.svg", plot_csv(table));
  result.outputs.push_back(cfg.out_dir / "sweep_octaves.csv");
  result.outputs.push_back(cfg.out_dir / "sweep_octaves.svg");
  result.exit_code = result.failures.empty() ? 0 : 1;
  if (!result.failures.empty() && log) log(failure_message(result.failures));
  return result;
}

// sweep-heads: box-downsample the original by 2, train each head grid on the
// small image, evaluate at the original size. Writes sweep_heads.csv/.svg.
inline CommandResult cmd_sweep_heads(const ExperimentConfig& cfg, const Logger& log = stderr_logger()) {
  validate(cfg);
  ensure_dir(cfg.out_dir);
  const signal::Image original = resize_to(signal::load_image(*cfg.image), cfg.dims);
  const signal::Image small = signal::box_downsample(original, 2);
  auto heads = cfg.head_list;
  std::sort(heads.begin(), heads.end(), [](const Dims& a, const Dims& b) {
    return std::pair(a.rows * a.cols, a.rows) < std::pair(b.rows * b.cols, b.rows);
  });
  CsvTable table;
  table.schema = kSweepHeadsSchema;
  table.header = {"heads_x", "heads_y", "heads", "alpha", "epochs", "seed", "params", "train_psnr_db", "eval_psnr_db",
                  "status"};
  CommandResult result;
  signal::save_image(small, cfg.out_dir / "train_target.pgm");
  for (const auto& h : heads) {
    const std::string point = "heads=" + to_string(h);
    if (log) log("sweep-heads " + point);
    const auto spec = multihead_for(cfg, h, cfg.alpha);
    std::vector<std::string> row{std::to_string(h.rows), std::to_string(h.cols), std::to_string(h.rows * h.cols),
                                 std::to_string(cfg.alpha), std::to_string(cfg.epochs), std::to_string(cfg.seed),
                                 std::to_string(models::count_params(spec))};
    try {
      auto outcome = run_training(spec, small, cfg.lr, cfg.image->string(), Dims{original.rows(), original.cols()}, log);
      const signal::Image rendered = models::evaluate(outcome.network, original.rows(), original.cols());
      const double eval_db = metrics::psnr(rendered, original).psnr_db;
      row.insert(row.end(), {format_double(outcome.report.train_psnr_db), format_double(eval_db), "ok"});
      const auto path = cfg.out_dir / ("eval_heads" + std::to_string(h.rows) + "x" + std::to_string(h.cols) + ".pgm");
      signal::save_image(rendered, path);
      result.outputs.push_back(path);
      if (log) log("  train " + format_double(outcome.report.train_psnr_db) + " dB, eval " + format_double(eval_db) + " dB");
    } catch (const std::exception& e) {
      row.insert(row.end(), {"", "", std::string("failed: ") + e.what()});
      result.failures.push_back(point + ": " + e.what());
    }
    table.rows.push_back(std::move(row));
  }
  write_csv(cfg.out_dir / "sweep_heads.csv", table);
  write_text(cfg.out_dir / "sweep_heads.svg", plot_csv(table));
  result.outputs.push_back(cfg.out_dir / "sweep_heads.csv");
  result.outputs.push_back(cfg.out_dir / "sweep_heads.svg");
  result.exit_code = result.failures.empty() ? 0 : 1;
  if (!result.failures.empty() && log) log(failure_message(result.failures));
  return result;
}

/// Images placed left to right with a 4-pixel white gutter.
inline signal::Image side_by_side(const std::vector<signal::Image>& images) {
  detail::require(!images.empty(), "side_by_side: no images");
  const std::size_t rows = images.front().rows();
  const std::size_t gutter = 4;
  std::size_t cols = 0;
  for (const auto& img : images) {
    detail::require(img.rows() == rows, "side_by_side: images differ in height");
    cols += img.cols();
  }
  cols += gutter * (images.size() - 1);
  std::vector<double> px(rows * cols, 1.0);
  std::size_t offset = 0;
  for (const auto& img : images) {
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < img.cols(); ++c) px[r * cols + offset + c] = img.at(r, c);
    }
    offset += img.cols() + gutter;
  }
  return signal::Image(rows, cols, std::move(px));
}

// compare: per multi-head fan-in alpha, trains the multi-head model and
// parameter-matched Siren and Fourier-feature baselines on the same image.
// Writes compare.csv, per-model reconstructions and a side-by-side strip
// (target | multi-head | siren | fourier) per budget.
inline CommandResult cmd_compare(const ExperimentConfig& cfg, const Logger& log = stderr_logger()) {
  validate(cfg);
  ensure_dir(cfg.out_dir);
  std::string target_desc;
  const signal::Image img = load_target(cfg, &target_desc);
  detail::require(img.rows() % cfg.compare_heads.rows == 0 && img.cols() % cfg.compare_heads.cols == 0,
                  "compare: image size not divisible by the head grid");
  CsvTable table;
  table.schema = kCompareSchema;
  table.header = {"budget", "model", "params", "body_width", "alpha", "ff_features", "epochs", "lr", "train_psnr_db",
                  "flops_per_forward", "forwards_per_image", "flops_per_image", "flops_ratio", "status"};
  CommandResult result;
  signal::save_image(img, cfg.out_dir / "target.pgm");
  for (auto alpha : cfg.compare_alphas) {
    const auto mh = multihead_for(cfg, cfg.compare_heads, alpha);
    const std::size_t budget = models::count_params(mh);
    models::ModelSpec base;
    base.body_widths = cfg.body_widths;
    base.seed = cfg.seed;
    base.epochs = cfg.epochs;
    std::vector<models::ModelSpec> specs{mh};
    for (auto kind : {models::ModelKind::Siren, models::ModelKind::FourierFeature}) {
      try {
        specs.push_back(models::match_params(kind, budget, base));
      } catch (const std::exception& e) {
        result.failures.push_back("budget=" + std::to_string(budget) + " model=" + models::to_string(kind) + ": " +
                                  e.what());
      }
    }
    const auto mh_flops = models::count_flops(mh, cfg.render.rows, cfg.render.cols);
    std::vector<signal::Image> strip{img};
    for (const auto& spec : specs) {
      const std::string point = "budget=" + std::to_string(budget) + " model=" + models::to_string(spec.kind);
      if (log) log("compare " + point + " (" + std::to_string(models::count_params(spec)) + " params)");
      const double lr = spec.kind == models::ModelKind::MultiHead ? cfg.lr : cfg.baseline_lr.value_or(cfg.lr);
      const auto flops = models::count_flops(spec, cfg.render.rows, cfg.render.cols);
      std::vector<std::string> row{std::to_string(budget),
                                   models::to_string(spec.kind),
                                   std::to_string(models::count_params(spec)),
                                   std::to_string(spec.body_widths.back()),
                                   spec.kind == models::ModelKind::MultiHead ? std::to_string(spec.alpha) : "",
                                   spec.kind == models::ModelKind::FourierFeature ? std::to_string(spec.ff_features) : "",
                                   std::to_string(spec.epochs),
                                   format_double(lr)};
      try {
        auto outcome = run_training(spec, img, lr, target_desc, cfg.render, log);
        const double ratio = static_cast<double>(flops.flops_per_image) / static_cast<double>(mh_flops.flops_per_image);
        row.insert(row.end(), {format_double(outcome.report.train_psnr_db), std::to_string(flops.flops_per_forward),
                               std::to_string(flops.forwards_per_image), std::to_string(flops.flops_per_image),
                               format_double(ratio), "ok"});
        const auto path = cfg.out_dir / ("recon_" + models::to_string(spec.kind) + "_" + std::to_string(budget) + ".pgm");
        signal::save_image(outcome.reconstruction, path);
        result.outputs.push_back(path);
        strip.push_back(outcome.reconstruction);
        if (log) log("  train PSNR " + format_double(outcome.report.train_psnr_db) + " dB");
      } catch (const std::exception& e) {
        row.insert(row.end(), {"", "", "", "", "", std::string("failed: ") + e.what()});
        result.failures.push_back(point + ": " + e.what());
      }
      table.rows.push_back(std::move(row));
    }
    const auto strip_path = cfg.out_dir / ("side_by_side_" + std::to_string(budget) + ".pgm");
    signal::save_image(side_by_side(strip), strip_path);
    result.outputs.push_back(strip_path);
  }
  write_csv(cfg.out_dir / "compare.csv", table);
  result.outputs.push_back(cfg.out_dir / "compare.csv");
  result.exit_code = result.failures.empty() ? 0 : 1;
  if (!result.failures.empty() && log) log(failure_message(result.failures));
  return result;
}

struct PerlinStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

// perlin: writes the target image to cfg.out_file and returns its statistics.
inline PerlinStats cmd_perlin(const ExperimentConfig& cfg) {
  validate(cfg);
  const signal::Image img = signal::perlin2d(cfg.perlin, cfg.dims.rows, cfg.dims.cols);
  if (cfg.out_file.has_parent_path()) ensure_dir(cfg.out_file.parent_path());
  signal::save_image(img, cfg.out_file);
  return {img.min(), img.max(), img.mean()};
}

}  // namespace mhinr::experiments
