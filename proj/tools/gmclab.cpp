// gmclab: run experiments, evaluate kappa, summarize results files.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <memory>

#include "gmclab/config.hpp"
#include "gmclab/errors.hpp"
#include "gmclab/experiments.hpp"
#include "gmclab/results.hpp"

namespace {

constexpr int kConfigExit = 2;
constexpr int kNumericExit = 3;

struct RunOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::string out;
};

int run(gmclab::harness::Experiment experiment, const RunOptions& opt) {
  using namespace gmclab::harness;
  auto cfg = load_config(opt.config, experiment);
  if (opt.seed) cfg.master_seed = *opt.seed;
  if (opt.workers) cfg.workers = *opt.workers;
  if (!opt.out.empty()) cfg.output_path = opt.out;
  cfg.validate();

  std::unique_ptr<std::ofstream> sink;
  if (!cfg.output_path.empty()) {
    sink = std::make_unique<std::ofstream>(cfg.output_path);
    if (!*sink) throw gmclab::ConfigError("cannot open output path '" + cfg.output_path + "'");
  }
  const auto report = run_experiment(cfg, sink.get());
  std::cout << report.dump(2) << '\n';
  return report["failures"].empty() ? 0 : kNumericExit;
}

int kappa(double gamma_sq) {
  using namespace gmclab::harness;
  RunConfig cfg;
  cfg.experiment = Experiment::Kappa;
  cfg.gamma_sq = gamma_sq;
  cfg.replicas = 1;
  std::cout << run_experiment(cfg).dump(2) << '\n';
  return 0;
}

int report(const std::string& in, const std::string& format) {
  using namespace gmclab::harness;
  const auto file = read_results(in);
  if (format == "csv")
    write_results_csv(std::cout, file);
  else
    std::cout << summarize_results(file).dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using gmclab::harness::Experiment;
  CLI::App app{"Gaussian multiplicative chaos simulation lab"};
  app.require_subcommand(1);

  RunOptions opt;
  const std::vector<std::pair<std::string, Experiment>> runs{
      {"decay", Experiment::Decay},       {"fourth_moment", Experiment::FourthMoment},
      {"limit_law", Experiment::LimitLaw}, {"capacity", Experiment::Capacity},
      {"convolve", Experiment::Convolve}, {"toy_model", Experiment::ToyModel}};
  std::vector<std::pair<CLI::App*, Experiment>> commands;
  for (const auto& [name, e] : runs) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", opt.config, "config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "master seed (overrides the config)");
    sub->add_option("--workers", opt.workers, "worker threads (overrides the config)")->check(CLI::PositiveNumber);
    sub->add_option("--out", opt.out, "JSON-lines records output (overrides the config)");
    commands.emplace_back(sub, e);
  }

  double gamma_sq = 0.0;
  auto* kappa_cmd = app.add_subcommand("kappa", "evaluate kappa(gamma) by quadrature");
  kappa_cmd->add_option("--gamma-sq", gamma_sq, "gamma^2 in [0, 1)")->required();

  std::string in, format = "json";
  auto* report_cmd = app.add_subcommand("report", "summarize a results file");
  report_cmd->add_option("--in", in, "results file")->required()->check(CLI::ExistingFile);
  report_cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    for (const auto& [cmd, e] : commands)
      if (cmd->parsed()) return run(e, opt);
    if (kappa_cmd->parsed()) return kappa(gamma_sq);
    if (report_cmd->parsed()) return report(in, format);
  } catch (const gmclab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const gmclab::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const gmclab::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumericExit;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
