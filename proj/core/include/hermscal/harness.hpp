#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hermscal/estimator.hpp"
#include "hermscal/rosenblatt.hpp"
#include "hermscal/spectral_model.hpp"

namespace hermscal {

enum class ExperimentKind { SpectrumScaling, Rate, CrossScale, LimitDistribution, Constants };

std::string to_string(ExperimentKind k);

struct GridPoint {
  int q0 = 1;
  double d = 0.4;
  int K = 0;
  std::string family;  // empty: the spec-level bank
};

/// Declarative Monte Carlo experiment, normalized with defaults filled in.
struct ExperimentSpec {
  std::string name;
  ExperimentKind kind = ExperimentKind::SpectrumScaling;
  std::vector<GridPoint> grid;
  std::vector<std::size_t> N;
  nlohmann::json fstar = {{"kind", "constant"}, {"value", 1.0}};
  bool normalized = true;
  bool allow_short_memory = false;
  std::string family = "haar";
  int j_min = 1;
  int j_max = 1;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  WeightMode weight_mode = WeightMode::LeastSquares;
  int weight_p = 2;
  std::optional<double> nulling_d;
  std::optional<int> j0;
  std::map<std::string, double> tolerances;
  // limit_distribution: the Rosenblatt oracle used for comparison
  RosenblattMethod oracle_method = RosenblattMethod::PartialSum;
  std::size_t oracle_samples = 2000;
  std::size_t oracle_n = std::size_t{1} << 16;
  std::string output = "results";

  SpectralModel model(double d) const;
  nlohmann::json to_json() const;
};

/// Schema validation plus the fail-fast admissibility checks. Errors are
/// SpecError carrying a JSON pointer.
ExperimentSpec validate_spec(const nlohmann::json& j);

struct CatalogEntry {
  std::string kind;
  std::string description;
  std::string anchor;
};
std::vector<CatalogEntry> list_experiments();

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=", ">=", "<", ">"
  bool pass = false;
};

struct ResultBundle {
  std::filesystem::path directory;
  std::vector<std::string> files;
  std::vector<Check> checks;
  nlohmann::json manifest;
  nlohmann::json summary;

  bool all_passed() const;
};

struct RunOptions {
  unsigned workers = 1;
  std::optional<std::filesystem::path> out_dir;
  std::string spec_path;
};

/// Workers from HERMSCAL_WORKERS, else 1.
unsigned default_workers();

ResultBundle run_experiment(const ExperimentSpec& spec, const RunOptions& opts = {});

/// FNV-1a 64-bit of a byte string.
std::uint64_t fnv1a64(const std::string& bytes);

enum ExitCode : int { kExitOk = 0, kExitInvalid = 2, kExitTolerance = 3, kExitNumerical = 4 };

}  // namespace hermscal
