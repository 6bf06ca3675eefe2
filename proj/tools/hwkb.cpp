#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hwkb/convergence_harness.hpp"
#include "hwkb/functional_norms.hpp"
#include "hwkb/hartree_solver.hpp"
#include "hwkb/run_config.hpp"

using namespace hwkb;

namespace {

enum Exit { kOk = 0, kValidationFailed = 1, kConfigError = 2, kRuntimeError = 3 };

struct Options {
  std::string config;
  int threads = 0;
  std::uint64_t seed = 20240601;
  std::string fault;
};

RunConfig load(const Options& o) {
  RunConfig rc = load_config(o.config);
  if (o.threads > 0) rc.sweep.threads = o.threads;
  if (o.fault == "kernel-constant") rc.sweep.kernel = rc.sweep.kernel.with_corrupted_constant(1.1);
  return rc;
}

int simulate(const Options& o) {
  const RunConfig rc = load(o);
  const SweepConfig& c = rc.sweep;
  if (c.epsilons.size() != 1) throw ConfigError("simulate needs exactly one entry in \"epsilons\"");
  const double eps = c.epsilons.front();
  const ModeFamily fam = c.family();
  const Trajectory tr = evolve(initial_data(fam, eps), c.kernel, SolverParams::make(eps, c.dt_factor, c.final_time),
                               c.sample_times);

  std::error_code ec;
  std::filesystem::create_directories(c.output, ec);
  if (ec) throw IoError("cannot create output directory " + c.output + ": " + ec.message());
  const std::filesystem::path file = std::filesystem::path(c.output) / "trajectory.csv";
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot open " + file.string() + " for writing");
  out << "t,l2,wiener,l2w,mass_drift\n";
  const double m0 = tr.mass_log.front();
  char buf[160];
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    const NormReport n = norm_report(tr.states[i]);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", tr.sample_times[i], n.l2, n.wiener, n.l2w,
                  std::abs(tr.mass_log[i] - m0) / m0);
    out << buf;
  }
  out.close();
  if (!out) throw IoError("failed writing " + file.string());
  std::cout << "wrote " << file.string() << " (" << tr.states.size() << " samples, max mass drift "
            << tr.max_mass_drift() << ")\n";
  return kOk;
}

int sweep(const Options& o) {
  const RunConfig rc = load(o);
  const SweepResult res = run_sweep(rc.sweep);
  persist(res, rc.echo, rc.sweep.output);
  std::cout << "beta expected " << res.beta_expected;
  if (res.beta_fitted) std::cout << ", fitted " << *res.beta_fitted;
  std::cout << '\n';
  for (const auto& [name, c] : res.checks)
    std::cout << (c.pass ? "PASS " : "FAIL ") << name << " margin " << c.margin << '\n';
  for (double e : res.failed_epsilons) std::cerr << "eps " << e << " tripped the divergence guard\n";
  std::cout << "artifacts in " << rc.sweep.output << '\n';
  return kOk;
}

int validate(const Options& o) {
  const RunConfig rc = load(o);
  const ValidationReport rep = validate_suite(rc.sweep, o.seed);
  for (const auto& l : rep.lines)
    std::cout << (l.pass ? "PASS " : "FAIL ") << l.name << " margin " << l.margin << " (" << l.detail << ")\n";
  return rep.all_pass() ? kOk : kValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical Hartree WKB lab"};
  app.require_subcommand(1);
  Options opts;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config, "JSON run configuration")->required();
    sub->add_option("--threads", opts.threads, "worker threads for the sweep")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", opts.seed, "seed for the property campaigns");
    sub->add_option("--inject-fault", opts.fault)->group("")->check(CLI::IsMember({"kernel-constant"}));
  };
  CLI::App* sim = app.add_subcommand("simulate", "integrate one eps and write trajectory norms");
  CLI::App* swp = app.add_subcommand("sweep", "eps sweep, rate fit and artifacts");
  CLI::App* val = app.add_subcommand("validate", "property campaigns and cross-checks");
  for (CLI::App* s : {sim, swp, val}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*sim) return simulate(opts);
    if (*swp) return sweep(opts);
    return validate(opts);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DivergenceError& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
