#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sqn/dataset.hpp"
#include "sqn/run_config.hpp"

namespace {

int cmd_run(const std::vector<std::string>& args) {
  const sqn::RunConfig cfg = sqn::parse_config(args);
  const sqn::RunArtifacts art = sqn::execute_run(cfg);
  std::printf("%s: iterations=%lld adp=%lld final train_fx=%.17g "
              "seeds(data=%llu grad=%llu hess=%llu) -> %s\n",
              cfg.optimizer.c_str(), art.counters.iterations, art.counters.adp,
              art.final_train_fx, static_cast<unsigned long long>(cfg.seed_data),
              static_cast<unsigned long long>(cfg.seed_grad),
              static_cast<unsigned long long>(cfg.seed_hess), cfg.output.c_str());
  return 0;
}

int cmd_compare(const std::vector<std::string>& args) {
  CLI::App app{"run two configurations on the same dataset and summarize both"};
  std::string path_a, path_b, out_a, out_b;
  app.add_option("--a", path_a, "config file for the first run")->required();
  app.add_option("--b", path_b, "config file for the second run")->required();
  app.add_option("--out-a", out_a, "override the first run's CSV path");
  app.add_option("--out-b", out_b, "override the second run's CSV path");
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  sqn::RunConfig a = sqn::load_config_file(path_a);
  sqn::RunConfig b = sqn::load_config_file(path_b);
  if (!out_a.empty()) a.output = out_a;
  if (!out_b.empty()) b.output = out_b;
  std::fputs(sqn::compare_runs(a, b).c_str(), stdout);
  return 0;
}

int cmd_gen(const std::vector<std::string>& args) {
  CLI::App app{"generate a synthetic binary dataset in libsvm format"};
  std::vector<int> shape;
  std::uint64_t seed = 1;
  std::string out;
  app.add_option("--synthetic", shape, "dim count")->expected(2)->required();
  app.add_option("--seed-data", seed);
  app.add_option("--out", out)->required();
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const sqn::SyntheticBinary gen = sqn::generate_synthetic_binary(shape[0], shape[1], seed);
  sqn::write_libsvm_file(gen.data, out);
  std::printf("wrote %d examples of dimension %d -> %s\n", gen.data.size(), gen.data.dim(),
              out.c_str());
  return 0;
}

void usage() {
  std::fputs(
      "usage: sqn <run|compare|gen> [flags]\n"
      "  run      execute one optimizer configuration and write its CSV\n"
      "  compare  run two config files on the same dataset seed\n"
      "  gen      write a synthetic dataset in libsvm format\n"
      "pass --help to a subcommand for its flags\n",
      stderr);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    usage();
    return 1;
  }
  const std::string cmd = argv[1];
  const std::vector<std::string> rest(argv + 2, argv + argc);
  try {
    if (cmd == "run") return cmd_run(rest);
    if (cmd == "compare") return cmd_compare(rest);
    if (cmd == "gen") return cmd_gen(rest);
    usage();
    return 1;
  } catch (const sqn::HelpRequested& e) {
    std::puts(e.what());
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
