// krm_exp: experiment runner for kernel random matrices.

#include <omp.h>

#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>

#include "krm/errors.hpp"
#include "krm/experiments.hpp"
#include "krm/version.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kInvalidConfig = 2, kNumerical = 3 };

// --threads wins over KRM_THREADS; otherwise the OpenMP runtime default applies.
int apply_threads(int requested) {
  if (requested <= 0) {
    if (const char* env = std::getenv("KRM_THREADS")) {
      try {
        requested = std::stoi(env);
      } catch (const std::exception&) {
        throw krm::ConfigError(std::string("KRM_THREADS is not an integer: ") + env);
      }
      if (requested <= 0) throw krm::ConfigError("KRM_THREADS must be positive");
    }
  }
  if (requested > 0) omp_set_num_threads(requested);
  return requested;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel random matrix experiments"};
  app.set_version_flag("--version", krm::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  int threads = 0;

  const struct {
    const char* name;
    const char* help;
  } commands[] = {
      {"table1", "HS residual ||A - A~|| as a function of M"},
      {"fixed-c-hist", "fixed-c histogram of nonzero eig(A~)/N against eig(T_M)"},
      {"hermite", "scaled-Hermite approximation of the sinc kernel"},
      {"survey", "normalized sinc spectrum across bandwidths"},
      {"bounds", "closed-form bounds next to their empirical counterparts"},
      {"pswf", "PSWF eigenvalue table with Nystrom deltas"},
  };
  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "base seed (overrides the configuration)");
    sub->add_option("--out", out_dir, "output directory (overrides the configuration)");
    sub->add_option("--threads", threads, "OpenMP threads (overrides KRM_THREADS)")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidConfig;
  }

  try {
    const krm::ExperimentKind kind = krm::parse_experiment_kind(app.get_subcommands().front()->get_name());
    krm::ExperimentConfig cfg =
        config_path.empty() ? krm::default_config(kind) : krm::load_config(config_path, kind);
    if (seed) cfg.base_seed = *seed;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    apply_threads(threads);
    krm::run_experiment(cfg);
    std::printf("%s: wrote results to %s\n", krm::to_string(kind).c_str(), cfg.output_dir.string().c_str());
    return kOk;
  } catch (const krm::ConfigError& e) {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return kInvalidConfig;
  } catch (const krm::DomainError& e) {
    std::fprintf(stderr, "invalid parameters: %s\n", e.what());
    return kInvalidConfig;
  } catch (const krm::ResolutionError& e) {
    std::fprintf(stderr, "invalid parameters: %s\n", e.what());
    return kInvalidConfig;
  } catch (const krm::DimensionError& e) {
    std::fprintf(stderr, "invalid parameters: %s\n", e.what());
    return kInvalidConfig;
  } catch (const krm::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailure;
  }
}
