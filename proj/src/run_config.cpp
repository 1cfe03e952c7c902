#include "sqn/run_config.hpp"

#include <algorithm>
#include <cstdio>
#include <memory>
#include <stdexcept>

#include "CLI11.hpp"
#include "sqn/dataset.hpp"

namespace sqn {
namespace {

void add_options(CLI::App& app, RunConfig& cfg) {
  app.add_option("--opt", cfg.optimizer, "optimizer: sgd, sqn or olbfgs")
      ->check(CLI::IsMember({"sgd", "sqn", "olbfgs"}));
  app.add_option("--objective", cfg.objective, "objective: binary, multiclass or quadratic")
      ->check(CLI::IsMember({"binary", "multiclass", "quadratic"}));
  app.add_option("--data", cfg.data_path, "libsvm/svmlight dataset file");
  app.add_option("--synthetic", cfg.synthetic, "synthetic binary problem: dim count")
      ->expected(2);

  app.add_option("--quad-dim", cfg.quad_dim)->check(CLI::PositiveNumber);
  app.add_option("--quad-curv-min", cfg.quad_curv_min)->check(CLI::PositiveNumber);
  app.add_option("--quad-curv-max", cfg.quad_curv_max)->check(CLI::PositiveNumber);
  app.add_option("--quad-noise", cfg.quad_noise)->check(CLI::NonNegativeNumber);
  app.add_option("--quad-examples", cfg.quad_examples)->check(CLI::PositiveNumber);

  app.add_option("--sigma", cfg.sigma, "l2 regularization weight")
      ->check(CLI::NonNegativeNumber);

  app.add_option("--b", cfg.b, "gradient batch size")->check(CLI::PositiveNumber);
  app.add_option("--bH", cfg.bH, "Hessian batch size")->check(CLI::PositiveNumber);
  app.add_option("--L", cfg.L, "iterations between correction pairs")
      ->check(CLI::PositiveNumber);
  app.add_option("--M", cfg.M, "quasi-Newton memory size")->check(CLI::NonNegativeNumber);
  app.add_option("--beta", cfg.beta, "step length numerator (step = beta/k)")
      ->check(CLI::PositiveNumber);
  app.add_option("--eps-curv", cfg.epsilon_curv, "curvature acceptance threshold")
      ->check(CLI::NonNegativeNumber);

  app.add_option("--epochs", cfg.epochs, "stop after this many training epochs");
  app.add_option("--max-iters", cfg.max_iters, "stop after this many iterations");

  app.add_option("--seed-data", cfg.seed_data);
  app.add_option("--seed-grad", cfg.seed_grad);
  app.add_option("--seed-hess", cfg.seed_hess);

  app.add_option("--checkpoint-every", cfg.checkpoint_every)->check(CLI::PositiveNumber);
  app.add_option("--split", cfg.split_fraction, "train fraction; remainder is the test set");
  app.add_flag("--monitor-errors", cfg.monitor_errors,
               "record gradient/Hessian-vector relative errors per checkpoint");
  app.add_flag("--scale-work", cfg.scale_work, "divide the work column by the dimension");
  app.add_option("--out", cfg.output, "checkpoint CSV path");
  app.add_option("--dump-data", cfg.dump_data, "write the dataset in libsvm format");
  app.set_config("--config", "", "key=value config file mirroring these flags");
}

void validate(const RunConfig& cfg) {
  const bool quadratic = cfg.objective == "quadratic";
  const bool has_data = !cfg.data_path.empty();
  const bool has_synthetic = !cfg.synthetic.empty();
  if (quadratic) {
    if (has_data || has_synthetic) {
      throw std::runtime_error("config: the quadratic objective takes no dataset");
    }
  } else {
    if (has_data == has_synthetic) {
      throw std::runtime_error("config: provide exactly one of --data / --synthetic");
    }
  }
  if (has_synthetic && (cfg.synthetic[0] < 1 || cfg.synthetic[1] < 1)) {
    throw std::runtime_error("config: synthetic dim and count must be positive");
  }
  if (cfg.epochs && cfg.max_iters) {
    throw std::runtime_error("config: set at most one of --epochs / --max-iters");
  }
  if (cfg.epochs && !(*cfg.epochs > 0.0)) {
    throw std::runtime_error("config: --epochs must be positive");
  }
  if (cfg.max_iters && *cfg.max_iters < 1) {
    throw std::runtime_error("config: --max-iters must be positive");
  }
  if (cfg.split_fraction && !(*cfg.split_fraction > 0.0 && *cfg.split_fraction < 1.0)) {
    throw std::runtime_error("config: --split must lie in (0, 1)");
  }
  if (cfg.output.empty()) throw std::runtime_error("config: --out must not be empty");
}

Method method_from(const std::string& name) {
  if (name == "sgd") return Method::Sgd;
  if (name == "sqn") return Method::Sqn;
  return Method::Olbfgs;
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"stochastic quasi-Newton experiment runner"};
  add_options(app, cfg);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw std::runtime_error(std::string("config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  return parse_config({"--config", path});
}

RunArtifacts execute_run(const RunConfig& cfg) {
  // Assemble dataset and oracle.  The bundle keeps every piece alive for the
  // duration of the run.
  std::unique_ptr<Dataset> full_data;
  std::unique_ptr<Dataset> train_data;
  std::unique_ptr<Dataset> test_data;
  std::unique_ptr<ObjectiveOracle> train_base;
  std::unique_ptr<ObjectiveOracle> test_base;
  std::unique_ptr<ObjectiveOracle> train_ridge;
  std::unique_ptr<ObjectiveOracle> test_ridge;

  const ObjectiveOracle* train_oracle = nullptr;
  const ObjectiveOracle* test_oracle = nullptr;

  if (cfg.objective == "quadratic") {
    DenseVector curvature(cfg.quad_dim);
    for (int i = 0; i < cfg.quad_dim; ++i) {
      const double t = cfg.quad_dim > 1 ? static_cast<double>(i) / (cfg.quad_dim - 1) : 0.0;
      curvature[i] = cfg.quad_curv_min + t * (cfg.quad_curv_max - cfg.quad_curv_min);
    }
    train_base = std::make_unique<NoisyQuadratic>(std::move(curvature), cfg.quad_noise,
                                                  cfg.seed_data, cfg.quad_examples);
  } else {
    if (!cfg.data_path.empty()) {
      full_data = std::make_unique<Dataset>(parse_libsvm_file(cfg.data_path));
    } else {
      full_data =
          std::make_unique<Dataset>(generate_synthetic_binary(cfg.synthetic[0], cfg.synthetic[1],
                                                              cfg.seed_data)
                                        .data);
    }
    if (!cfg.dump_data.empty()) write_libsvm_file(*full_data, cfg.dump_data);

    const Dataset* train_view = full_data.get();
    if (cfg.split_fraction) {
      auto [train, test] = train_test_split(*full_data, *cfg.split_fraction, cfg.seed_data);
      train_data = std::make_unique<Dataset>(std::move(train));
      test_data = std::make_unique<Dataset>(std::move(test));
      train_view = train_data.get();
    }
    if (cfg.objective == "binary") {
      train_base = std::make_unique<BinaryLogistic>(*train_view);
      if (test_data) test_base = std::make_unique<BinaryLogistic>(*test_data);
    } else {
      train_base = std::make_unique<MulticlassLogistic>(*train_view);
      if (test_data) test_base = std::make_unique<MulticlassLogistic>(*test_data);
    }
  }

  train_oracle = train_base.get();
  if (test_base) test_oracle = test_base.get();
  if (cfg.sigma > 0.0) {
    train_ridge = std::make_unique<RidgeWrapped>(*train_base, cfg.sigma);
    train_oracle = train_ridge.get();
    if (test_base) {
      test_ridge = std::make_unique<RidgeWrapped>(*test_base, cfg.sigma);
      test_oracle = test_ridge.get();
    }
  }

  OptimizerConfig ocfg;
  ocfg.method = method_from(cfg.optimizer);
  ocfg.batch_size = cfg.b;
  ocfg.hessian_batch_size = cfg.bH;
  ocfg.update_spacing = cfg.L;
  ocfg.memory_size = cfg.M;
  ocfg.beta = cfg.beta;
  ocfg.epsilon_curv = cfg.epsilon_curv;

  StopRule stop;
  if (cfg.max_iters) {
    stop.max_iters = cfg.max_iters;
  } else {
    stop.max_epochs = cfg.epochs.value_or(1.0);
  }

  MonitorConfig monitor;
  monitor.errors = cfg.monitor_errors;
  monitor.test_oracle = test_oracle;

  // Quadratic runs start away from the minimizer; data-fitting runs at zero.
  DenseVector w0(train_oracle->dim(), cfg.objective == "quadratic" ? 1.0 : 0.0);

  RunOutcome outcome = run(ocfg, *train_oracle, w0, stop, cfg.checkpoint_every, monitor,
                           RunSeeds{cfg.seed_grad, cfg.seed_hess});

  RunArtifacts art;
  art.records = std::move(outcome.records);
  art.counters = outcome.counters;
  if (cfg.scale_work) {
    const double inv_n = 1.0 / train_oracle->dim();
    for (RunRecord& r : art.records) r.work *= inv_n;
  }
  art.final_train_fx = art.records.back().train_fx;
  emit_csv(art.records, cfg.output);
  return art;
}

std::string compare_runs(const RunConfig& a, const RunConfig& b) {
  if (a.seed_data != b.seed_data) {
    throw std::runtime_error("compare: the two configurations must share --seed-data");
  }
  if (a.output == b.output) {
    throw std::runtime_error("compare: the two configurations must write distinct CSVs");
  }
  const RunArtifacts ra = execute_run(a);
  const RunArtifacts rb = execute_run(b);
  char line[256];
  std::string out;
  std::snprintf(line, sizeof line, "%s: final train_fx=%.17g adp=%lld\n", a.optimizer.c_str(),
                ra.final_train_fx, ra.counters.adp);
  out += line;
  std::snprintf(line, sizeof line, "%s: final train_fx=%.17g adp=%lld\n", b.optimizer.c_str(),
                rb.final_train_fx, rb.counters.adp);
  out += line;
  return out;
}

}  // namespace sqn
