// Copyright 2026 The RCA Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rca/cli/cli.h"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "rca/analysis/analysis.h"
#include "rca/core/attention.h"
#include "rca/dumpio/dataset.h"
#include "rca/dumpio/dump.h"
#include "rca/dumpio/manifest.h"
#include "rca/error.h"
#include "rca/fitap/fitap.h"
#include "rca/fitap/report.h"
#include "rca/plot/svg.h"

namespace rca::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct RcaFlags {
  std::string scheme = "inverse";
  double gamma = 1.0;
  double theta = 0.0;
  double m = 0.0;
  CLI::Option* theta_opt = nullptr;
  CLI::Option* m_opt = nullptr;

  void Register(CLI::App* app) {
    app->add_option("--scheme", scheme, "Reweighting scheme")
        ->check(CLI::IsMember({"inverse", "gaussian"}));
    app->add_option("--gamma", gamma, "Reverse-contrast strength (> 0)");
    theta_opt = app->add_option("--theta", theta, "Floor threshold");
    m_opt = app->add_option("--m", m, "Explicit central value (default: derived)");
  }

  bool has_theta() const { return theta_opt->count() > 0; }

  core::RcaConfig ToConfig() const {
    core::RcaConfig cfg;
    cfg.scheme = scheme == "gaussian" ? core::Scheme::kGaussian : core::Scheme::kInverseDistance;
    cfg.gamma = gamma;
    if (has_theta()) cfg.floor_theta = theta;
    if (m_opt->count() > 0) cfg.central_value = m;
    cfg.Validate();
    return cfg;
  }
};

std::shared_ptr<spdlog::logger> MakeLogger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("rca", sink);
  logger->set_pattern("[%l] %v");
  logger->set_level(spdlog::level::warn);
  if (const char* env = std::getenv("RCA_LOG")) {
    logger->set_level(spdlog::level::from_str(env));
  }
  return logger;
}

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::string MatrixCsv(const core::Matrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      out += fmt::format("{}{}", j == 0 ? "" : ",", m(i, j));
    }
    out += "\n";
  }
  return out;
}

std::string SafeName(const std::string& s) {
  std::string out;
  for (char c : s) {
    out += std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_';
  }
  return out.empty() ? "_" : out;
}

json CorrelationJson(const std::optional<fitap::Correlation>& c) {
  if (!c) return nullptr;
  return {{"r", c->r}, {"p", c->p}, {"n", c->n}};
}

// ---------------------------------------------------------------------------
// transform

struct TransformArgs {
  std::string dump;
  std::string out;
  std::string csv_dir;
  RcaFlags rca;
};

void RunTransform(const TransformArgs& args, std::ostream& out, spdlog::logger& log) {
  const dumpio::AttentionDump input = dumpio::read_dump(args.dump);
  const core::RcaConfig cfg = args.rca.ToConfig();
  const core::AttentionStack stack = input.stack();
  const core::ValueMatrix values = input.value_matrix();
  const double m = cfg.central_value.value_or(core::central_value(stack));
  log.info("central value m = {}", m);

  const core::ReweightedAttention attn = core::apply_rca(stack, cfg);
  const core::HiddenStates hidden = core::aggregate(attn, values);
  const core::AttentionStack rca_stack(1, attn.tokens(), attn.matrix().data(),
                                       core::kReweightedRowSumTolerance);

  dumpio::AttentionDump result = dumpio::make_dump(rca_stack, values, hidden);
  result.image_id = input.image_id;
  result.category = input.category;
  result.metadata = input.metadata;
  result.metadata["rca_scheme"] = args.rca.scheme;
  result.metadata["rca_gamma"] = fmt::format("{}", cfg.gamma);
  result.metadata["rca_m"] = fmt::format("{}", m);
  result.theta_hint = cfg.floor_theta ? cfg.floor_theta : input.theta_hint;

  const fs::path out_path(args.out);
  if (out_path.has_parent_path()) EnsureDir(out_path.parent_path());
  dumpio::write_dump(result, out_path);

  const fs::path csv_dir = args.csv_dir.empty() ? out_path.parent_path() : fs::path(args.csv_dir);
  if (!csv_dir.empty()) EnsureDir(csv_dir);
  const std::string stem = out_path.stem().string();
  dumpio::write_text_file(csv_dir / (stem + "_attention_before.csv"),
                          MatrixCsv(stack.head_max()));
  dumpio::write_text_file(csv_dir / (stem + "_attention_after.csv"), MatrixCsv(attn.matrix()));
  out << fmt::format("wrote {} (n={}, m={})\n", out_path.string(), attn.tokens(), m);
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
  std::string gt;
  std::string responses;
  std::string out;
  std::string thresholds = "0.5:0.05:0.95";
};

void RunEvaluate(const EvaluateArgs& args, std::ostream& out, spdlog::logger& log) {
  const std::vector<double> thresholds = parse_threshold_ladder(args.thresholds);
  const dumpio::Dataset data = dumpio::load_dataset(args.gt, args.responses);
  log.info("loaded {} images, {} annotations, {} categories, {} responses", data.counts.images,
           data.counts.annotations, data.counts.categories, data.counts.responses);

  std::size_t dropped = 0;
  const auto dets = dumpio::detections_from_responses(data.responses, &dropped);
  if (dropped > 0) log.warn("{} parsed boxes were degenerate and dropped", dropped);

  const fitap::EvalReport report = fitap::evaluate(dets, data.ground_truth, thresholds);

  const fs::path dir(args.out);
  EnsureDir(dir / "curves");
  json j = fitap::report_to_json(report);
  j["counts"] = {{"images", data.counts.images},
                 {"annotations", data.counts.annotations},
                 {"categories", data.counts.categories},
                 {"responses", data.counts.responses},
                 {"detections", dets.size()},
                 {"dropped_boxes", dropped}};
  dumpio::write_text_file(dir / "report.json", j.dump(2) + "\n");
  dumpio::write_text_file(dir / "ap_by_threshold.csv", fitap::thresholds_csv(report));
  dumpio::write_text_file(dir / "ap_by_category.csv", fitap::categories_csv(report));
  for (const auto& cat : report.categories) {
    for (std::size_t t = 0; t < report.thresholds.size(); ++t) {
      const std::string base = fmt::format("{}_t{:03d}", SafeName(cat.category),
                                           static_cast<int>(std::lround(report.thresholds[t] * 100)));
      dumpio::write_text_file(dir / "curves" / (base + ".csv"),
                              fitap::pr_curve_csv(cat.curves[t]));
      dumpio::write_text_file(
          dir / "curves" / (base + ".svg"),
          fitap::pr_curve_svg(cat.curves[t], fmt::format("{}  IoU>={:.2f}  AP={:.2f}", cat.category,
                                                         report.thresholds[t], cat.ap[t])));
    }
  }
  out << fmt::format("FitAP = {:.6f} over {} categories, {} detections\n", report.fitap,
                     report.categories.size(), dets.size());
}

// ---------------------------------------------------------------------------
// analyze

struct SweepArgs {
  std::size_t tokens = 64;
  std::size_t heads = 4;
  std::size_t dims = 256;
  double tau_min = 0.01;
  double tau_max = 100.0;
  std::size_t tau_count = 20;
  std::size_t seeds = 50;
  std::uint64_t seed = 0;
  double theta = -1.5;
  long token = -1;
  std::string out;
  std::string emit_dumps;
  RcaFlags rca;
};

void RunSweep(const SweepArgs& args, std::ostream& out, spdlog::logger& log) {
  if (args.tau_count < 2) throw UsageError("sweep needs --tau-count >= 2");
  analysis::SweepConfig cfg;
  cfg.family.tokens = args.tokens;
  cfg.family.heads = args.heads;
  cfg.family.dims = args.dims;
  cfg.family.seed = args.seed;
  cfg.family.Validate();
  cfg.taus = analysis::log_tau_grid(args.tau_min, args.tau_max, args.tau_count);
  cfg.seeds_per_tau = args.seeds;
  cfg.theta = args.theta;
  cfg.rca = args.rca.ToConfig();
  if (args.token >= 0) cfg.token = static_cast<std::size_t>(args.token);

  const auto points = analysis::sharpness_sweep(cfg);
  const auto summary = analysis::summarize_sweep(points);
  if (!summary.spearman) log.warn("sweep trend undefined: {}", summary.note);

  const fs::path dir(args.out);
  EnsureDir(dir);
  dumpio::write_text_file(dir / "sweep.csv", analysis::sweep_csv(points));
  json j;
  j["taus"] = summary.taus;
  j["mean_m"] = summary.mean_m;
  j["mean_s_count"] = summary.mean_s;
  j["spearman"] = CorrelationJson(summary.spearman);
  j["pearson"] = CorrelationJson(summary.pearson);
  j["note"] = summary.note;
  j["theta"] = args.theta;
  j["seeds_per_tau"] = args.seeds;
  j["seed"] = args.seed;
  j["scheme"] = args.rca.scheme;
  j["gamma"] = cfg.rca.gamma;
  dumpio::write_text_file(dir / "summary.json", j.dump(2) + "\n");

  plot::Chart chart;
  chart.title = "subthreshold count vs central value";
  chart.x_label = "m";
  chart.y_label = "|S|";
  std::vector<double> xs, ys;
  plot::Series scatter{"instances", {}, "#1f77b4", false, false, true};
  for (const auto& p : points) {
    scatter.points.emplace_back(p.m, static_cast<double>(p.s_count));
    xs.push_back(p.m);
    ys.push_back(static_cast<double>(p.s_count));
  }
  plot::Series means{"mean per tau", {}, "#d62728", false, false, true};
  for (std::size_t k = 0; k < summary.taus.size(); ++k) {
    means.points.emplace_back(summary.mean_m[k], summary.mean_s[k]);
  }
  std::tie(chart.x_min, chart.x_max) = plot::padded_range(xs);
  std::tie(chart.y_min, chart.y_max) = plot::padded_range(ys);
  chart.series = {scatter, means};
  dumpio::write_text_file(dir / "sweep.svg", plot::render_svg(chart));

  if (!args.emit_dumps.empty()) {
    const fs::path dump_dir(args.emit_dumps);
    EnsureDir(dump_dir);
    dumpio::DumpManifest manifest;
    for (std::size_t t = 0; t < cfg.taus.size(); ++t) {
      for (std::size_t s = 0; s < cfg.seeds_per_tau; ++s) {
        analysis::SyntheticFamilyConfig family = cfg.family;
        family.tau = cfg.taus[t];
        family.seed = cfg.family.seed + s;
        const auto inst = analysis::gen_synthetic_attention(family);
        auto dump = dumpio::make_dump(inst.stack, inst.values,
                                      analysis::rca_hidden_states(inst, cfg.rca));
        dump.image_id = fmt::format("synthetic-t{:02d}-s{:03d}", t, s);
        dump.category = "synthetic";
        dump.theta_hint = cfg.theta;
        dump.metadata = {{"seed", std::to_string(family.seed)},
                         {"tau", fmt::format("{}", family.tau)}};
        const std::string name = dump.image_id + ".rcad";
        dumpio::write_dump(dump, dump_dir / name);
        manifest.entries.push_back(dumpio::describe_dump(dump_dir, name));
      }
    }
    dumpio::write_manifest(manifest, dump_dir / "manifest.json");
  }

  if (summary.spearman) {
    out << fmt::format("sweep: {} points, spearman r = {:.4f} (p = {:.3g})\n", points.size(),
                       summary.spearman->r, summary.spearman->p);
  } else {
    out << fmt::format("sweep: {} points, trend undefined ({})\n", points.size(), summary.note);
  }
}

struct AuditArgs {
  std::size_t instances = 10000;
  std::uint64_t seed = 0;
  std::string out;
};

int RunAudit(const AuditArgs& args, std::ostream& out) {
  const auto report = analysis::audit_flooring_bound(args.instances, args.seed);
  json j{{"instances", report.instances},
         {"violations", report.violations},
         {"empty_below", report.empty_below},
         {"min_slack", report.min_slack},
         {"max_slack", report.max_slack},
         {"seed", args.seed}};
  if (!args.out.empty()) {
    EnsureDir(args.out);
    dumpio::write_text_file(fs::path(args.out) / "audit.json", j.dump(2) + "\n");
  }
  out << fmt::format("audit: {} instances, {} violations, min slack {:.3g}\n", report.instances,
                     report.violations, report.min_slack);
  return report.violations == 0 ? kExitOk : kExitInternal;
}

struct CorrelateArgs {
  std::string dumps;
  double theta = 0.0;
  CLI::Option* theta_opt = nullptr;
  long token = -1;
  std::string out;
};

void RunCorrelate(const CorrelateArgs& args, std::ostream& out, spdlog::logger& log) {
  std::vector<dumpio::AttentionDump> dumps;
  for (const auto& path : dumpio::list_dumps(args.dumps)) dumps.push_back(dumpio::read_dump(path));
  log.info("read {} dumps", dumps.size());

  double theta = args.theta;
  if (args.theta_opt->count() == 0) {
    if (dumps.empty() || !dumps.front().theta_hint) {
      throw UsageError("--theta is required when dumps carry no theta hint");
    }
    theta = *dumps.front().theta_hint;
  }
  std::optional<std::size_t> token;
  if (args.token >= 0) token = static_cast<std::size_t>(args.token);
  const auto study = analysis::correlation_study(dumps, theta, token);

  const fs::path dir(args.out);
  EnsureDir(dir);
  dumpio::write_text_file(dir / "scatter.csv", analysis::scatter_csv(study.points));
  json j{{"pearson", CorrelationJson(study.pearson)},
         {"spearman", CorrelationJson(study.spearman)},
         {"theta", theta},
         {"dumps", study.points.size()}};
  dumpio::write_text_file(dir / "summary.json", j.dump(2) + "\n");

  plot::Chart chart;
  chart.title = fmt::format("r = {:.2f}, p = {:.2g}", study.pearson.r, study.pearson.p);
  chart.x_label = "m";
  chart.y_label = "|S|";
  std::vector<double> xs, ys;
  plot::Series scatter{"", {}, "#1f77b4", false, false, true};
  for (const auto& p : study.points) {
    scatter.points.emplace_back(p.m, static_cast<double>(p.s_count));
    xs.push_back(p.m);
    ys.push_back(static_cast<double>(p.s_count));
  }
  std::tie(chart.x_min, chart.x_max) = plot::padded_range(xs);
  std::tie(chart.y_min, chart.y_max) = plot::padded_range(ys);
  chart.series = {scatter};
  dumpio::write_text_file(dir / "scatter.svg", plot::render_svg(chart));
  out << fmt::format("correlate: {} dumps, pearson r = {:.4f} (p = {:.3g})\n",
                     study.points.size(), study.pearson.r, study.pearson.p);
}

int ExitCodeFor(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const SchemaError*>(&e) ||
      dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const NotFoundError*>(&e) ||
      dynamic_cast<const DumpFormatError*>(&e) || dynamic_cast<const InvalidInputError*>(&e) ||
      dynamic_cast<const NoGroundTruthError*>(&e)) {
    return kExitUsage;
  }
  return kExitInternal;
}

}  // namespace

std::vector<double> parse_threshold_ladder(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw ConfigError("bad threshold value '" + s + "'");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (b == std::string::npos) throw ConfigError("threshold range must be start:step:stop");
    const double start = number(text.substr(0, a));
    const double step = number(text.substr(a + 1, b - a - 1));
    const double stop = number(text.substr(b + 1));
    if (!(step > 0.0) || stop < start) throw ConfigError("bad threshold range " + text);
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long k = 0; k < count; ++k) {
      out.push_back(std::round((start + static_cast<double>(k) * step) * 1e6) / 1e6);
    }
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto comma = text.find(',', pos);
      const auto end = comma == std::string::npos ? text.size() : comma;
      out.push_back(number(text.substr(pos, end - pos)));
      pos = end + 1;
    }
  }
  for (double t : out) {
    if (!(t > 0.0 && t <= 1.0)) throw ConfigError("IoU thresholds must lie in (0, 1]");
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto log = MakeLogger(err);

  CLI::App app{"Reverse contrast attention and confidence-free detection evaluation"};
  app.name("rca");
  app.require_subcommand(1);

  TransformArgs transform_args;
  auto* transform = app.add_subcommand("transform", "Apply RCA to an attention dump");
  transform->add_option("--dump", transform_args.dump, "Input RCAD dump")->required();
  transform->add_option("--out", transform_args.out, "Output RCAD dump")->required();
  transform->add_option("--csv-dir", transform_args.csv_dir,
                        "Directory for attention CSVs (default: next to --out)");
  transform_args.rca.Register(transform);

  EvaluateArgs evaluate_args;
  auto* evaluate = app.add_subcommand("evaluate", "FitAP of parsed responses against ground truth");
  evaluate->add_option("--gt", evaluate_args.gt, "COCO-style ground truth JSON")->required();
  evaluate->add_option("--responses", evaluate_args.responses, "Responses JSON lines")
      ->required();
  evaluate->add_option("--out", evaluate_args.out, "Output directory")->required();
  evaluate->add_option("--thresholds", evaluate_args.thresholds,
                       "IoU ladder, start:step:stop or comma list");

  auto* analyze = app.add_subcommand("analyze", "Flooring-bound analyses");
  analyze->require_subcommand(1);

  SweepArgs sweep_args;
  auto* sweep = analyze->add_subcommand("sweep", "Sharpness sweep of |S| against m");
  sweep->add_option("--tokens", sweep_args.tokens);
  sweep->add_option("--heads", sweep_args.heads);
  sweep->add_option("--dims", sweep_args.dims);
  sweep->add_option("--tau-min", sweep_args.tau_min);
  sweep->add_option("--tau-max", sweep_args.tau_max);
  sweep->add_option("--tau-count", sweep_args.tau_count, "Grid points (>= 2)");
  sweep->add_option("--seeds", sweep_args.seeds, "Seeds per temperature");
  sweep->add_option("--seed", sweep_args.seed, "Base seed");
  sweep->add_option("--token", sweep_args.token, "Designated token (default: last)");
  sweep->add_option("--out", sweep_args.out, "Output directory")->required();
  sweep->add_option("--emit-dumps", sweep_args.emit_dumps, "Also write one RCAD dump per point");
  sweep_args.rca.Register(sweep);

  AuditArgs audit_args;
  auto* audit = analyze->add_subcommand("audit", "Randomized audit of the flooring bound");
  audit->add_option("--instances", audit_args.instances);
  audit->add_option("--seed", audit_args.seed);
  audit->add_option("--out", audit_args.out, "Output directory");

  CorrelateArgs correlate_args;
  auto* correlate = analyze->add_subcommand("correlate", "Correlate |S| with m over dumps");
  correlate->add_option("--dumps", correlate_args.dumps, "Directory of RCAD dumps")->required();
  correlate_args.theta_opt =
      correlate->add_option("--theta", correlate_args.theta, "Floor threshold");
  correlate->add_option("--token", correlate_args.token, "Designated token (default: last)");
  correlate->add_option("--out", correlate_args.out, "Output directory")->required();

  std::vector<std::string> argv_storage{"rca"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*transform) {
      RunTransform(transform_args, out, *log);
    } else if (*evaluate) {
      RunEvaluate(evaluate_args, out, *log);
    } else if (*sweep) {
      if (sweep_args.rca.has_theta()) sweep_args.theta = sweep_args.rca.theta;
      RunSweep(sweep_args, out, *log);
    } else if (*audit) {
      return RunAudit(audit_args, out);
    } else if (*correlate) {
      RunCorrelate(correlate_args, out, *log);
    }
  } catch (const std::exception& e) {
    log->error("{}", e.what());
    err.flush();
    return ExitCodeFor(e);
  }
  return kExitOk;
}

}  // namespace rca::cli
