#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mhinr/experiments/csv.hpp"
#include "mhinr/models/counting.hpp"
#include "mhinr/models/model_spec.hpp"

namespace mhinr::experiments {

inline constexpr const char* kReportSchema = "mhinr.report/1";

// Outcome of one training run. The CSV form carries every field except
// wall_time_s so that reruns with the same seed are byte-identical; the
// JSON form carries everything.
struct RunReport {
  models::ModelSpec spec;
  std::string target;  // image path or Perlin description
  double learning_rate = 1e-3;
  std::vector<double> losses;
  double train_psnr_db = 0.0;
  double train_mse = 0.0;
  std::optional<double> eval_psnr_db;
  models::FlopsReport flops;
  double wall_time_s = 0.0;

  std::uint64_t seed() const { return spec.seed; }
};

namespace report_detail {

inline std::string join_widths(const std::vector<std::size_t>& ws) {
  std::string s;
  for (std::size_t i = 0; i < ws.size(); ++i) s += (i ? ";" : "") + std::to_string(ws[i]);
  return s;
}

inline std::vector<std::size_t> split_widths(const std::string& s) {
  std::vector<std::size_t> ws;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = s.find(';', start);
    ws.push_back(parse_count(s.substr(start, end - start)));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return ws;
}

}  // namespace report_detail

inline CsvTable report_to_table(const RunReport& r) {
  CsvTable t;
  t.schema = kReportSchema;
  t.header = {"section", "key", "value"};
  auto add = [&](const char* section, const std::string& key, const std::string& value) {
    t.rows.push_back({section, key, value});
  };
  const auto& s = r.spec;
  add("spec", "kind", models::to_string(s.kind));
  add("spec", "body_widths", report_detail::join_widths(s.body_widths));
  add("spec", "heads_x", std::to_string(s.heads_x));
  add("spec", "heads_y", std::to_string(s.heads_y));
  add("spec", "alpha", std::to_string(s.alpha));
  add("spec", "omega0", format_double(s.omega0));
  add("spec", "ff_features", std::to_string(s.ff_features));
  add("spec", "ff_sigma", format_double(s.ff_sigma));
  add("spec", "seed", std::to_string(s.seed));
  add("spec", "epochs", std::to_string(s.epochs));
  add("run", "target", r.target);
  add("run", "learning_rate", format_double(r.learning_rate));
  add("run", "params", std::to_string(models::count_params(s)));
  add("result", "train_psnr_db", format_double(r.train_psnr_db));
  add("result", "train_mse", format_double(r.train_mse));
  add("result", "eval_psnr_db", r.eval_psnr_db ? format_double(*r.eval_psnr_db) : "");
  add("flops", "flops_per_forward", std::to_string(r.flops.flops_per_forward));
  add("flops", "forwards_per_image", std::to_string(r.flops.forwards_per_image));
  add("flops", "flops_per_image", std::to_string(r.flops.flops_per_image));
  add("flops", "convention", r.flops.convention);
  for (std::size_t i = 0; i < r.losses.size(); ++i) add("loss", std::to_string(i + 1), format_double(r.losses[i]));
  return t;
}

inline RunReport report_from_table(const CsvTable& t) {
  if (t.schema != kReportSchema) throw IoError("report: unsupported schema '" + t.schema + "'");
  RunReport r;
  const auto ks = t.column("section"), kk = t.column("key"), kv = t.column("value");
  for (const auto& row : t.rows) {
    const std::string& section = row[ks];
    const std::string& key = row[kk];
    const std::string& v = row[kv];
    if (section == "spec") {
      if (key == "kind") r.spec.kind = models::parse_model_kind(v);
      else if (key == "body_widths") r.spec.body_widths = report_detail::split_widths(v);
      else if (key == "heads_x") r.spec.heads_x = parse_count(v);
      else if (key == "heads_y") r.spec.heads_y = parse_count(v);
      else if (key == "alpha") r.spec.alpha = parse_count(v);
      else if (key == "omega0") r.spec.omega0 = parse_double(v);
      else if (key == "ff_features") r.spec.ff_features = parse_count(v);
      else if (key == "ff_sigma") r.spec.ff_sigma = parse_double(v);
      else if (key == "seed") r.spec.seed = parse_count(v);
      else if (key == "epochs") r.spec.epochs = parse_count(v);
    } else if (section == "run") {
      if (key == "target") r.target = v;
      else if (key == "learning_rate") r.learning_rate = parse_double(v);
    } else if (section == "result") {
      if (key == "train_psnr_db") r.train_psnr_db = parse_double(v);
      else if (key == "train_mse") r.train_mse = parse_double(v);
      else if (key == "eval_psnr_db" && !v.empty()) r.eval_psnr_db = parse_double(v);
    } else if (section == "flops") {
      if (key == "flops_per_forward") r.flops.flops_per_forward = parse_count(v);
      else if (key == "forwards_per_image") r.flops.forwards_per_image = parse_count(v);
      else if (key == "flops_per_image") r.flops.flops_per_image = parse_count(v);
      else if (key == "convention") r.flops.convention = v;
    } else if (section == "loss") {
      if (parse_count(key) != r.losses.size() + 1) throw IoError("report: loss rows out of order");
      r.losses.push_back(parse_double(v));
    }
  }
  r.spec.validate();
  return r;
}

inline nlohmann::json report_to_json(const RunReport& r) {
  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["spec"] = models::to_json(r.spec);
  j["target"] = r.target;
  j["learning_rate"] = r.learning_rate;
  j["params"] = models::count_params(r.spec);
  j["losses"] = r.losses;
  j["train_psnr_db"] = r.train_psnr_db;
  j["train_mse"] = r.train_mse;
  j["eval_psnr_db"] = r.eval_psnr_db ? nlohmann::json(*r.eval_psnr_db) : nlohmann::json(nullptr);
  j["flops"] = {{"flops_per_forward", r.flops.flops_per_forward},
                {"forwards_per_image", r.flops.forwards_per_image},
                {"flops_per_image", r.flops.flops_per_image},
                {"convention", r.flops.convention}};
  j["wall_time_s"] = r.wall_time_s;
  j["seed"] = r.spec.seed;
  return j;
}

inline RunReport report_from_json(const nlohmann::json& j) {
  if (j.at("schema").get<std::string>() != kReportSchema) throw IoError("report: unsupported schema");
  RunReport r;
  r.spec = models::spec_from_json(j.at("spec"));
  r.target = j.at("target").get<std::string>();
  r.learning_rate = j.at("learning_rate").get<double>();
  r.losses = j.at("losses").get<std::vector<double>>();
  r.train_psnr_db = j.at("train_psnr_db").get<double>();
  r.train_mse = j.at("train_mse").get<double>();
  if (!j.at("eval_psnr_db").is_null()) r.eval_psnr_db = j.at("eval_psnr_db").get<double>();
  const auto& f = j.at("flops");
  r.flops.flops_per_forward = f.at("flops_per_forward").get<std::uint64_t>();
  r.flops.forwards_per_image = f.at("forwards_per_image").get<std::uint64_t>();
  r.flops.flops_per_image = f.at("flops_per_image").get<std::uint64_t>();
  r.flops.convention = f.at("convention").get<std::string>();
  r.wall_time_s = j.at("wall_time_s").get<double>();
  return r;
}

}  // namespace mhinr::experiments
