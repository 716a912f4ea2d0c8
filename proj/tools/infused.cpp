/*
 * Copyright 2026 The infused authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "infused/dataset.hpp"
#include "infused/errors.hpp"
#include "infused/eval.hpp"
#include "infused/selection.hpp"
#include "infused/structural_info.hpp"

namespace fs = std::filesystem;
using namespace infused;

namespace {

struct IoOptions {
  std::string input;
  std::string label = "label";
  bool no_header = false;
  std::string out_dir;
  int threads = 0;
};

struct HpOptions {
  Hyperparams hp;
  CLI::Option* delta1_opt = nullptr;
  CLI::Option* delta2_opt = nullptr;

  Hyperparams resolve() const {
    Hyperparams out = hp;
    // classical pairing: dual steps default to the augmentation weights
    if (delta1_opt->count() == 0) out.delta1 = out.mu1;
    if (delta2_opt->count() == 0) out.delta2 = out.mu2;
    return out;
  }
};

std::string default_out_dir() {
  const char* env = std::getenv("INFUSED_OUT_DIR");
  return env && *env ? env : ".";
}

void add_io_options(CLI::App* cmd, IoOptions& io, bool needs_input = true) {
  if (needs_input) {
    cmd->add_option("-i,--input", io.input, "input CSV file")->required();
    cmd->add_option("--label", io.label,
                    "label column, by name or 0-based index (default: label)");
    cmd->add_flag("--no-header", io.no_header,
                  "input has no header row (select the label by index)");
  }
  io.out_dir = default_out_dir();
  cmd->add_option("-o,--out", io.out_dir,
                  "output directory (default: $INFUSED_OUT_DIR or .)");
  cmd->add_option("--threads", io.threads,
                  "cap the number of worker threads (0 = library default)");
}

void add_hp_options(CLI::App* cmd, HpOptions& opt) {
  cmd->add_option("--lambda1", opt.hp.lambda1,
                  "weight of the l1 penalty on coefficients (lambda1)");
  cmd->add_option("--lambda2", opt.hp.lambda2,
                  "weight of the l1 penalty on successive coefficient "
                  "differences (lambda2)");
  cmd->add_option("--lambda3", opt.hp.lambda3,
                  "weight of the feature-interaction reward (lambda3)");
  cmd->add_option("--mu1", opt.hp.mu1,
                  "augmentation weight for the p = beta constraint (mu1)");
  cmd->add_option("--mu2", opt.hp.mu2,
                  "augmentation weight for the q = C beta constraint (mu2)");
  opt.delta1_opt = cmd->add_option(
      "--delta1", opt.hp.delta1, "dual ascent step for u (delta1, default mu1)");
  opt.delta2_opt = cmd->add_option(
      "--delta2", opt.hp.delta2, "dual ascent step for v (delta2, default mu2)");
  cmd->add_option("--tol", opt.hp.tol, "relative convergence tolerance");
  cmd->add_option("--max-iter", opt.hp.max_iter, "iteration cap");
}

void apply_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

Dataset load(const IoOptions& io) {
  return load_csv(io.input, io.label, !io.no_header);
}

fs::path prepare_out_dir(const IoOptions& io) {
  fs::path dir(io.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec && !fs::is_directory(dir)) {
    throw DataError("cannot create output directory: " + dir.string());
  }
  return dir;
}

void warn_constant_features(const Dataset& d, const SelectionResult& r) {
  for (std::size_t j = 0; j < r.degenerate.size(); ++j) {
    if (r.degenerate[j]) {
      const std::string name = j < d.feature_names.size()
                                   ? d.feature_names[j]
                                   : "f" + std::to_string(j + 1);
      std::cerr << "warning: feature '" << name
                << "' carries no structure (constant values or constant "
                   "class means); it earns no interaction score\n";
    }
  }
}

int run_select(const IoOptions& io, const HpOptions& hp_opt, bool reorder,
               bool dump_graphs) {
  apply_threads(io.threads);
  const Dataset d = load(io);
  const fs::path dir = prepare_out_dir(io);

  FitOptions opts;
  opts.reorder_by_relevance = reorder;
  const SelectionResult r = fit(d, hp_opt.resolve(), opts);
  warn_constant_features(d, r);
  if (r.mu1_shifts > 0) {
    std::cerr << "warning: mu1 was doubled " << r.mu1_shifts
              << " time(s) to keep the system matrix positive definite\n";
  }

  const fs::path trace_path = dir / "trace.csv";
  write_trace_csv(trace_path.string(), r.trace);
  const fs::path result_path = dir / "result.json";
  write_result_json(result_path.string(), r, trace_path.string());

  if (dump_graphs) {
    const fs::path gdir = dir / "graphs";
    fs::create_directories(gdir);
    const Dataset sd = standardize(d);
    const GraphSet gs = build_graph_set(sd);
    for (int j = 0; j < sd.features(); ++j) {
      if (gs.degenerate[j]) continue;
      const std::string stem = "feature_" + std::to_string(j + 1);
      write_graph_csv((gdir / (stem + "_kernel.csv")).string(),
                      (gdir / (stem + "_prob.csv")).string(), gs.graphs[j]);
    }
  }

  std::cout << "selected " << r.selected.size() << " of " << d.features()
            << " features; wrote " << result_path.string() << " and "
            << trace_path.string() << '\n';
  return 0;
}

int run_trace(const IoOptions& io, const HpOptions& hp_opt) {
  apply_threads(io.threads);
  const Dataset d = load(io);
  const fs::path dir = prepare_out_dir(io);
  const SelectionResult r = fit(d, hp_opt.resolve());
  const fs::path trace_path = dir / "trace.csv";
  write_trace_csv(trace_path.string(), r.trace);
  std::cout << "converged=" << (r.converged ? 1 : 0)
            << " iterations=" << r.iterations
            << " objective=" << r.trace.back().objective << " trace="
            << trace_path.string() << '\n';
  return 0;
}

int run_eval(const IoOptions& io, const HpOptions& hp_opt, const CvConfig& cv,
             std::vector<int> ks, bool reorder) {
  apply_threads(io.threads);
  const Dataset d = load(io);
  const fs::path dir = prepare_out_dir(io);
  FitOptions opts;
  opts.reorder_by_relevance = reorder;
  const auto rows = cv_accuracy_curve(d, hp_opt.resolve(), cv, ks, opts);
  const fs::path curve_path = dir / "curve.csv";
  write_curve_csv(curve_path.string(), rows);
  std::cout << "wrote " << curve_path.string() << " (" << rows.size()
            << " rows)\n";
  return 0;
}

int run_synth(const SyntheticSpec& spec_in, std::vector<int> informative_1b,
              const IoOptions& io) {
  SyntheticSpec spec = spec_in;
  spec.informative.clear();
  for (int j : informative_1b) spec.informative.push_back(j - 1);
  const SyntheticData synth = generate_synthetic(spec);
  const fs::path dir = prepare_out_dir(io);

  const fs::path data_path = dir / "synthetic.csv";
  write_csv(data_path.string(), synth.dataset);

  nlohmann::json truth;
  std::vector<int> inf_1b;
  for (int j : synth.informative) inf_1b.push_back(j + 1);
  truth["informative"] = inf_1b;
  truth["samples"] = spec.samples;
  truth["features"] = spec.features;
  truth["classes"] = spec.classes;
  truth["noise_sigma"] = spec.noise_sigma;
  truth["seed"] = spec.seed;
  const fs::path truth_path = dir / "truth.json";
  std::ofstream out(truth_path);
  if (!out) throw DataError("cannot write file: " + truth_path.string());
  out << truth.dump(2) << '\n';

  std::cout << "wrote " << data_path.string() << " and " << truth_path.string()
            << '\n';
  return 0;
}

int run_dump_interaction(const IoOptions& io) {
  apply_threads(io.threads);
  const Dataset d = load(io);
  const fs::path dir = prepare_out_dir(io);
  const Dataset sd = standardize(d);
  const Matrix U = compute_interaction(build_graph_set(sd));
  const fs::path path = dir / "interaction.csv";
  write_interaction_csv(path.string(), U, sd.feature_names);
  std::cout << "wrote " << path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "infused: feature selection by structural-information fused lasso"};
  app.require_subcommand(1);

  IoOptions io_select, io_trace, io_eval, io_synth, io_dump;
  HpOptions hp_select, hp_trace, hp_eval;
  bool reorder_select = false, reorder_eval = false, dump_graphs = false;

  auto* sel = app.add_subcommand(
      "select", "fit the model and write ranking, selection and trace");
  add_io_options(sel, io_select);
  add_hp_options(sel, hp_select);
  sel->add_flag("--reorder", reorder_select,
                "order features by interaction relevance before the fused "
                "penalty is applied");
  sel->add_flag("--dump-graphs", dump_graphs,
                "also write each feature's kernel and distribution as CSV");

  auto* trc = app.add_subcommand(
      "trace", "run one solve and write the per-iteration trace");
  add_io_options(trc, io_trace);
  add_hp_options(trc, hp_trace);

  CvConfig cv;
  std::vector<int> ks;
  auto* evl = app.add_subcommand(
      "eval", "cross-validated accuracy versus number of selected features");
  add_io_options(evl, io_eval);
  add_hp_options(evl, hp_eval);
  evl->add_option("--folds", cv.folds, "cross-validation folds");
  evl->add_option("--repeats", cv.repeats, "number of repetitions");
  evl->add_option("--seed", cv.seed, "random seed for the fold shuffles");
  evl->add_option("--k", ks, "subset sizes to evaluate, e.g. --k 1,2,5")
      ->required()
      ->delimiter(',');
  evl->add_flag("--reorder", reorder_eval,
                "order features by interaction relevance before the fused "
                "penalty is applied");

  SyntheticSpec spec;
  std::vector<int> informative_1b;
  auto* syn = app.add_subcommand(
      "synth", "generate a synthetic dataset with known informative features");
  syn->add_option("--samples", spec.samples, "number of samples")->required();
  syn->add_option("--features", spec.features, "number of features")
      ->required();
  syn->add_option("--classes", spec.classes, "number of classes");
  syn->add_option("--informative", informative_1b,
                  "1-based informative feature ids, e.g. --informative 1,2,3")
      ->required()
      ->delimiter(',');
  syn->add_option("--noise-sigma", spec.noise_sigma,
                  "noise standard deviation");
  syn->add_option("--seed", spec.seed, "random seed");
  add_io_options(syn, io_synth, /*needs_input=*/false);

  auto* dmp = app.add_subcommand(
      "dump-interaction", "write the feature interaction matrix as CSV");
  add_io_options(dmp, io_dump);

  try {
    app.parse(argc, argv);
    if (sel->parsed()) {
      return run_select(io_select, hp_select, reorder_select, dump_graphs);
    }
    if (trc->parsed()) return run_trace(io_trace, hp_trace);
    if (evl->parsed()) return run_eval(io_eval, hp_eval, cv, ks, reorder_eval);
    if (syn->parsed()) return run_synth(spec, informative_1b, io_synth);
    if (dmp->parsed()) return run_dump_interaction(io_dump);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
