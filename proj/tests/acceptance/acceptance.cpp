// Acceptance checks. `acceptance --criterion N` runs one criterion; no
// argument runs all seven. One PASS/FAIL line per criterion; the exit code
// is nonzero if any ran criterion failed. Experiment artifacts go to
// ./acceptance_out/criterion_N.
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/test_support.hpp"
#include "mhinr/mhinr.hpp"

using namespace mhinr;
using namespace mhinr::experiments;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok " : "FAILED ") + what);
  }
};

std::string fmt(double v, int precision = 2) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(precision);
  s << v;
  return s.str();
}

fs::path out_dir(int id) {
  const fs::path dir = fs::path("acceptance_out") / ("criterion_" + std::to_string(id));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const fs::path kCamera = fs::path(MHINR_TEST_DATA_DIR) / "camera_512.pgm";

Logger progress() {
  return [](const std::string& line) { std::cerr << "    " << line << "\n"; };
}

double within(double value, double target) { return std::abs(value - target) / target; }

// 1. Parameter counts of the reference configurations.
Outcome parameter_arithmetic() {
  Outcome o;
  const auto a64 = models::count_params(models::multihead_spec(64, 64, 64));
  const auto a256 = models::count_params(models::multihead_spec(64, 64, 256));
  // Head layer alone: the body is shared by every head count.
  const auto body = models::count_params(models::multihead_spec(1, 1, 256)) - 257;
  const auto dense = models::count_params(models::multihead_spec(256, 256, 256)) - body;
  o.check(a64 == 464384, "64^2 heads, alpha=64: " + std::to_string(a64) + " == 464384");
  o.check(within(a64, 0.464e6) <= 0.005, "within 0.5% of 0.464M");
  o.check(a256 == 1250816, "64^2 heads, alpha=256: " + std::to_string(a256) + " == 1250816");
  o.check(within(a256, 1.250e6) <= 0.005, "within 0.5% of 1.250M");
  o.check(dense == 16842752, "256^2 dense heads, head layer: " + std::to_string(dense) + " == 16842752");
  o.check(std::abs(static_cast<double>(dense) / 1e6 - 16.7) < 0.15, "about 16.7M");
  return o;
}

// 2. FLOPs ratio of parameter-matched 1.250M models at 512x512.
Outcome flops_ratio() {
  Outcome o;
  const auto mh = models::multihead_spec(64, 64, 256);
  const auto mh_flops = models::count_flops(mh, 512, 512).flops_per_image;
  for (auto kind : {models::ModelKind::Siren, models::ModelKind::FourierFeature}) {
    const auto spec = models::match_params(kind, models::count_params(mh));
    const double ratio =
        static_cast<double>(models::count_flops(spec, 512, 512).flops_per_image) / static_cast<double>(mh_flops);
    o.check(within(ratio, 4096.0) <= 0.02, models::to_string(kind) + " (" + std::to_string(models::count_params(spec)) +
                                               " params) / multihead = " + fmt(ratio, 1) + ", 4096 +- 2%");
  }
  return o;
}

// 3. Analytic gradients against central differences.
Outcome gradient_correctness() {
  Outcome o;
  for (auto kind : {models::ModelKind::MultiHead, models::ModelKind::Siren, models::ModelKind::FourierFeature}) {
    double worst = 0.0;
    std::size_t checked = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      nn::Rng shape(seed * 7919);
      models::ModelSpec spec;
      spec.kind = kind;
      const std::size_t depth = 1 + shape.below(3);
      spec.body_widths.clear();
      for (std::size_t l = 0; l < depth; ++l) spec.body_widths.push_back(3 + shape.below(5));
      spec.heads_x = 1 + shape.below(3);
      spec.heads_y = 1 + shape.below(3);
      spec.alpha = 1 + shape.below(spec.body_widths.back());
      spec.ff_features = 2 + shape.below(3);
      spec.ff_sigma = 1.0;
      spec.seed = seed;
      auto net = models::build(spec);
      nn::Rng rng(seed + 100);
      const std::size_t batch = 2 + shape.below(4);
      const nn::Tensor coords = testing::random_tensor(2, batch, rng);
      const nn::Tensor target = testing::random_tensor(net.output_count(), batch, rng, 0.0, 1.0);
      net.zero_grad();
      nn::mse_loss(net.forward(coords), target);
      net.backward();
      auto params = net.parameters();
      std::vector<std::vector<double>> analytic;
      for (auto* p : params) analytic.emplace_back(p->grad().begin(), p->grad().end());
      const auto numeric =
          testing::finite_difference_grads(params, [&] { return nn::mse_value(net.forward(coords), target); });
      for (std::size_t t = 0; t < params.size(); ++t) {
        for (std::size_t i = 0; i < analytic[t].size(); ++i) {
          worst = std::max(worst, testing::relative_error(analytic[t][i], numeric[t][i]));
          ++checked;
        }
      }
    }
    o.check(worst < 1e-4, models::to_string(kind) + ": " + std::to_string(checked) +
                              " entries, max relative error " + format_double(worst) + " < 1e-4");
  }
  return o;
}

// 4. Spectral bias on 64x64 Perlin targets.
Outcome spectral_bias() {
  Outcome o;
  ExperimentConfig cfg = default_config(ExperimentKind::SweepOctaves);
  cfg.dims = {64, 64};
  cfg.octave_list = {1, 2, 3, 4, 5};
  cfg.head_list = {{1, 1}, {8, 8}, {64, 64}};
  cfg.alpha = 32;
  cfg.epochs = 2000;
  cfg.out_dir = out_dir(4);
  const auto result = cmd_sweep_octaves(cfg, progress());
  o.check(result.exit_code == 0, "all sweep points trained");
  const CsvTable t = read_csv(cfg.out_dir / "sweep_octaves.csv");
  auto psnr = [&](std::size_t octave, std::size_t heads) {
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      if (parse_count(t.at(i, "octave")) == octave && parse_count(t.at(i, "heads")) == heads) {
        return t.number(i, "train_psnr_db");
      }
    }
    throw ContractError("missing sweep point");
  };
  std::vector<double> one_head;
  std::string curve;
  for (std::size_t oct = 1; oct <= 5; ++oct) {
    one_head.push_back(psnr(oct, 1));
    curve += (curve.empty() ? "" : " ") + fmt(one_head.back());
  }
  const double rho = metrics::spearman_trend(one_head);
  o.check(rho <= -0.7, "(a) 1-head PSNR by octave [" + curve + "] dB, Spearman " + fmt(rho) + " <= -0.7");
  double min_pixel = 1e9;
  for (std::size_t oct = 1; oct <= 5; ++oct) min_pixel = std::min(min_pixel, psnr(oct, 64 * 64));
  o.check(min_pixel > 40.0, "(b) 64^2 heads: min PSNR over octaves " + fmt(min_pixel) + " > 40 dB");
  const double p1 = psnr(5, 1), p8 = psnr(5, 64), p64 = psnr(5, 4096);
  o.check(p64 >= p8 - 0.5 && p8 >= p1 - 0.5,
          "(c) octave 5: 64^2 " + fmt(p64) + " >= 8^2 " + fmt(p8) + " >= 1 " + fmt(p1) + " (0.5 dB slack)");
  return o;
}

// 5. Generalization: train at 128x128, evaluate at 256x256.
Outcome generalization() {
  Outcome o;
  ExperimentConfig cfg = default_config(ExperimentKind::SweepHeads);
  cfg.image = kCamera;
  cfg.dims = {256, 256};
  cfg.head_list = {{1, 1}, {4, 4}, {16, 16}, {32, 32}, {64, 64}, {128, 128}};
  cfg.alpha = 32;
  cfg.out_dir = out_dir(5);
  const auto result = cmd_sweep_heads(cfg, progress());
  o.check(result.exit_code == 0, "all sweep points trained");
  const CsvTable t = read_csv(cfg.out_dir / "sweep_heads.csv");
  std::vector<double> train, eval;
  std::string table;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    train.push_back(t.number(i, "train_psnr_db"));
    eval.push_back(t.number(i, "eval_psnr_db"));
    table += (table.empty() ? "" : ", ") + t.at(i, "heads") + ": " + fmt(train.back()) + "/" + fmt(eval.back());
  }
  o.notes.push_back("heads: train/eval dB = " + table);
  bool monotone = true;
  for (std::size_t i = 1; i < train.size(); ++i) monotone = monotone && train[i] >= train[i - 1] - 0.5;
  o.check(monotone, "train PSNR non-decreasing in heads (0.5 dB slack)");
  const auto peak = static_cast<std::size_t>(std::max_element(eval.begin(), eval.end()) - eval.begin());
  o.check(peak + 1 < eval.size(), "eval PSNR peaks at " + t.at(peak, "heads") + " heads, before the maximum");
  const double gap = train.back() - eval.back();
  o.check(gap >= 3.0, "per-pixel heads: train - eval = " + fmt(gap) + " >= 3 dB");
  return o;
}

// 6. Degenerate configurations and round trips.
Outcome degeneracy() {
  Outcome o;
  {
    nn::Rng rng(3);
    const std::size_t width = 16;
    const nn::Tensor w = testing::random_tensor(1, width, rng), b = testing::random_tensor(1, 1, rng);
    std::vector<std::uint32_t> idx(width);
    for (std::uint32_t i = 0; i < width; ++i) idx[i] = i;
    nn::SparseHeadLayer sparse(width, idx, w, b);
    nn::DenseLayer dense(w, b, nn::Activation::identity());
    const nn::Tensor z = testing::random_tensor(width, 32, rng);
    const nn::Tensor a = sparse.forward(z), d = dense.forward(z);
    double worst = 0.0;
    for (std::size_t j = 0; j < 32; ++j) worst = std::max(worst, std::abs(a(0, j) - d(0, j)));
    o.check(worst <= 1e-12, "sparse(alpha=width) == dense, max diff " + format_double(worst));
  }
  {
    auto net = models::build(models::multihead_spec(1, 1, 256, 9));
    std::vector<nn::DenseLayer> mlp = net.body();
    nn::DenseLayer out(net.heads().weight(), net.heads().bias(), nn::Activation::identity());
    nn::Rng rng(4);
    const nn::Tensor coords = testing::random_tensor(2, 64, rng);
    const nn::Tensor got = net.forward(coords);
    nn::Tensor h = coords;
    for (auto& layer : mlp) h = layer.forward(h);
    const nn::Tensor want = out.forward(h);
    double worst = 0.0;
    for (std::size_t j = 0; j < 64; ++j) worst = std::max(worst, std::abs(got(0, j) - want(0, j)));
    o.check(worst <= 1e-12, "1-head multi-head == plain MLP, max diff " + format_double(worst));
  }
  {
    signal::PerlinSpec ps;
    ps.octaves = 4;
    const signal::Image img = signal::perlin2d(ps, 48, 36);
    bool same = true;
    for (auto [hx, hy] : {std::pair{1u, 1u}, {4u, 3u}, {48u, 36u}, {6u, 2u}}) {
      const signal::CellGrid grid(48, 36, hx, hy);
      same = same && signal::assemble(signal::partition(img, grid), grid) == img;
    }
    o.check(same, "partition/assemble identity over 4 grids");
    std::vector<double> px(256);
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = static_cast<double>(i) / 255.0;
    const signal::Image levels(16, 16, px);
    o.check(signal::decode_pgm(signal::encode_pgm(levels)) == levels, "PGM round trip of all 256 levels");
  }
  {
    const fs::path dir = out_dir(6);
    ExperimentConfig cfg = default_config(ExperimentKind::SweepOctaves);
    cfg.dims = {16, 16};
    cfg.octave_list = {1, 4};
    cfg.head_list = {{1, 1}, {4, 4}};
    cfg.epochs = 40;
    std::vector<std::string> csvs;
    for (const char* run : {"a", "b"}) {
      cfg.out_dir = dir / run;
      cmd_sweep_octaves(cfg, nullptr);
      csvs.push_back(read_text(cfg.out_dir / "sweep_octaves.csv"));
    }
    o.check(csvs[0] == csvs[1], "seeded sweep-octaves CSV byte-identical across runs");
    ExperimentConfig fit = default_config(ExperimentKind::Fit);
    fit.dims = {16, 16};
    fit.heads = {2, 2};
    fit.epochs = 40;
    std::vector<std::string> reports;
    for (const char* run : {"fit_a", "fit_b"}) {
      fit.out_dir = dir / run;
      cmd_fit(fit, nullptr);
      reports.push_back(read_text(fit.out_dir / "report.csv"));
    }
    o.check(reports[0] == reports[1], "seeded fit report.csv byte-identical across runs");
  }
  return o;
}

// 7. Comparison pipeline at the 0.464M budget on a 128x128 natural image.
Outcome comparison() {
  Outcome o;
  ExperimentConfig cfg = default_config(ExperimentKind::Compare);
  cfg.image = kCamera;
  cfg.dims = {128, 128};
  cfg.render = {128, 128};
  cfg.compare_alphas = {64};
  cfg.epochs = 300;
  cfg.out_dir = out_dir(7);
  const auto result = cmd_compare(cfg, progress());
  o.check(result.exit_code == 0, "all three models trained");
  const CsvTable t = read_csv(cfg.out_dir / "compare.csv");
  double mh_psnr = 0.0, best_baseline = -1e9;
  std::string best;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string model = t.at(i, "model");
    const double db = t.number(i, "train_psnr_db");
    o.notes.push_back(model + ": " + t.at(i, "params") + " params, " + fmt(db) + " dB, " + t.at(i, "flops_per_image") +
                      " FLOPs/image");
    if (model == "multihead") {
      mh_psnr = db;
      o.check(t.at(i, "params") == "464384", "multi-head budget is 464384 parameters");
    } else {
      if (db > best_baseline) best_baseline = db, best = model;
      const double ratio = t.number(i, "flops_ratio");
      o.check(ratio >= 500.0, model + " FLOPs/image is " + fmt(ratio, 1) + "x the multi-head's (>= 500)");
    }
    o.check(fs::exists(cfg.out_dir / ("recon_" + model + "_464384.pgm")), model + " reconstruction on disk");
  }
  o.check(mh_psnr >= best_baseline - 3.0,
          "multi-head " + fmt(mh_psnr) + " dB within 3 dB of best baseline (" + best + " " + fmt(best_baseline) + " dB)");
  return o;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria{
    {"parameter arithmetic", parameter_arithmetic},
    {"FLOPs ratio", flops_ratio},
    {"gradient correctness", gradient_correctness},
    {"spectral bias at desk scale", spectral_bias},
    {"generalization at desk scale", generalization},
    {"degeneracy and round trips", degeneracy},
    {"comparison pipeline", comparison},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      ids.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--criterion N]...\n";
      return 2;
    }
  }
  if (ids.empty()) {
    for (int id = 1; id <= static_cast<int>(kCriteria.size()); ++id) ids.push_back(id);
  }
  bool all = true;
  for (int id : ids) {
    if (id < 1 || id > static_cast<int>(kCriteria.size())) {
      std::cerr << "no criterion " << id << "\n";
      return 2;
    }
    const auto& [name, run] = kCriteria[static_cast<std::size_t>(id - 1)];
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome.check(false, std::string("exception: ") + e.what());
    }
    for (const auto& note : outcome.notes) std::cout << "  " << note << "\n";
    std::cout << "criterion " << id << " (" << name << "): " << (outcome.pass ? "PASS" : "FAIL") << std::endl;
    all = all && outcome.pass;
  }
  return all ? 0 : 1;
}
