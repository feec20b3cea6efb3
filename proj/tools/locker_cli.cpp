#include <chrono>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "locker/cli/checks.hpp"
#include "locker/cli/experiment.hpp"

using namespace locker;

int main(int argc, char** argv) {
  CLI::App app{"Parcel locker demand control: streams, VFA training, evaluation and self-tests"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  std::string config_path, scale_name = "desk", output;
  long long seed = -1;
  int jobs = 0;
  bool mismatch = false;
  app.add_option("--config", config_path, "experiment JSON document")->check(CLI::ExistingFile);
  app.add_option("--scale", scale_name, "preset the config starts from")->check(CLI::IsMember({"paper", "desk"}));
  app.add_option("--seed", seed, "master seed (streams and training runs)")->check(CLI::NonNegativeNumber);
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--output", output, "output directory");
  app.add_flag("--mismatch", mismatch, "train and evaluate every feature x allocation scheme pair");

  auto* generate = app.add_subcommand("generate", "write the scenario streams");
  auto* train = app.add_subcommand("train", "train every weight set the policies need");
  auto* evaluate = app.add_subcommand("evaluate", "run the evaluation and write the CSV files");
  auto* report = app.add_subcommand("report", "summarize results.csv of the output directory");
  auto* selftest = app.add_subcommand("selftest", "run the brute-force oracle suites");
  bool quick = false;
  int w_end_shift = 0;
  double ub_w = 0.0;
  selftest->add_flag("--quick", quick, "smaller samples");
  selftest->add_option("--inject-w-end-shift", w_end_shift, "mutation check: shift the window-end constraint");
  selftest->add_option("--inject-ub-w", ub_w, "mutation check: replace the window-length bound");

  CLI11_PARSE(app, argc, argv);

  try {
    if (selftest->parsed()) {
      checks::SelftestOptions opt;
      opt.quick = quick;
      opt.mut.w_end_shift = w_end_shift;
      opt.mut.ub_w_override = ub_w;
      int failed = 0;
      for (const auto& r : checks::selftest(opt)) {
        std::printf("%s  %-24s %7.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds, r.detail.c_str());
        failed += !r.passed;
      }
      std::printf("%d suite(s) failed\n", failed);
      return failed ? 1 : 0;
    }

    const cli::Scale scale = cli::parse_scale(scale_name);
    cli::ExperimentConfig x = config_path.empty() ? cli::preset(scale) : cli::load_experiment(config_path, scale);
    if (seed >= 0) x.seed = static_cast<std::uint64_t>(seed);
    if (jobs > 0) x.jobs = jobs;
    if (!output.empty()) x.output = output;
    if (mismatch) x.mismatch = true;
    x = cli::experiment_from_json(nlohmann::json::object(), x);  // validate the overrides

    if (report->parsed()) {
      std::cout << cli::format_report(cli::cmd_report(x.output, x.baseline));
      return 0;
    }
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> files;
    if (generate->parsed()) files = cli::cmd_generate(x);
    if (train->parsed()) files = cli::cmd_train(x, true);
    if (evaluate->parsed()) {
      auto out = cli::cmd_evaluate(x);
      files = out.files;
      std::cout << cli::format_report(cli::cmd_report(x.output, x.baseline));
    }
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
    std::cerr << "experiment " << cli::experiment_hash(x) << ", "
              << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() << " s\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
