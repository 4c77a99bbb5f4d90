#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hermscal/asymptotics.hpp"
#include "hermscal/error.hpp"
#include "hermscal/gaussian_synth.hpp"
#include "hermscal/harness.hpp"
#include "hermscal/wavelet_bank.hpp"

using nlohmann::json;
using namespace hermscal;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("", "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecError("", path + ": " + e.what());
  }
}

int cmd_validate(const std::string& path) {
  const auto spec = validate_spec(load_json(path));
  std::cout << std::setw(2) << spec.to_json() << '\n';
  return kExitOk;
}

int cmd_run(const std::string& path, unsigned workers, const std::string& out) {
  const auto spec = validate_spec(load_json(path));
  RunOptions opts;
  opts.workers = workers;
  opts.spec_path = path;
  if (!out.empty()) opts.out_dir = out;
  const auto bundle = run_experiment(spec, opts);
  for (const auto& c : bundle.checks)
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << c.value << ' ' << c.relation
              << ' ' << c.threshold << '\n';
  std::cout << "results in " << bundle.directory.string() << '\n';
  return bundle.all_passed() ? kExitOk : kExitTolerance;
}

int cmd_constants(const std::string& model_path, const std::string& bank_path,
                  std::optional<int> q0, std::optional<int> K) {
  const auto mj = load_json(model_path);
  const auto model = SpectralModel::from_json(mj);
  const int q = q0.value_or(mj.value("q0", 1));
  const int k = K.value_or(mj.value("K", 0));
  FilterBank bank;
  try {
    bank = bank_from_json(load_json(bank_path));
  } catch (const json::exception& e) {
    throw SpecError("", bank_path + ": " + e.what());
  }
  const auto c = compute_limit_constants(model, bank, q, k);
  auto out = constants_to_json(c);
  json spectrum = json::array();
  for (int j = 1; j <= bank.levels; ++j)
    spectrum.push_back({{"j", j}, {"predicted", predicted_spectrum(c, j)}});
  out["predicted_spectrum"] = spectrum;
  out["bank"] = bank.family;
  std::cout << std::setw(2) << out << '\n';
  return kExitOk;
}

int cmd_sample(const std::string& model_path, std::size_t n, std::uint64_t seed,
               std::uint64_t replicate, std::optional<int> q0, std::optional<int> K,
               bool gaussian, const std::string& out, const std::string& format) {
  const auto mj = load_json(model_path);
  ProcessConfig pc;
  pc.model = SpectralModel::from_json(mj);
  pc.q0 = q0.value_or(mj.value("q0", 1));
  pc.K = K.value_or(mj.value("K", 0));
  pc.N = n;
  pc.seed = seed;
  pc.allow_short_memory = mj.value("allow_short_memory", false);
  Synthesizer synth(pc);
  const auto values = gaussian ? synth.gaussian(replicate).samples : synth.path(replicate).samples;
  if (format == "binary") {
    if (out.empty()) throw SpecError("", "--format binary needs --out");
    write_path_binary(out, values);
  } else if (out.empty()) {
    std::cout << "value\n" << std::setprecision(17);
    for (double v : values) std::cout << v << '\n';
  } else {
    write_path_csv(out, values);
  }
  return kExitOk;
}

int cmd_list() {
  for (const auto& e : list_experiments())
    std::cout << std::left << std::setw(20) << e.kind << e.description << "\n"
              << std::setw(20) << "" << e.anchor << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hermscal: wavelet scalograms of Hermite-transformed long-memory processes"};
  app.set_version_flag("--version", HERMSCAL_VERSION);
  app.require_subcommand(1);

  std::string spec_path, model_path, bank_path, out, format = "csv";
  unsigned workers = default_workers();
  std::size_t n = 1024;
  std::uint64_t seed = 0, replicate = 0;
  std::optional<int> q0, K;
  bool gaussian = false;

  auto* validate = app.add_subcommand("validate", "check an experiment spec and echo it normalized");
  validate->add_option("spec", spec_path, "experiment spec (JSON)")->required();

  auto* run = app.add_subcommand("run", "run an experiment; exit 3 if a tolerance fails");
  run->add_option("spec", spec_path, "experiment spec (JSON)")->required();
  run->add_option("--workers", workers, "worker threads (default $HERMSCAL_WORKERS or 1)")
      ->check(CLI::PositiveNumber);
  run->add_option("--out", out, "output directory (default: spec 'output')");

  auto* constants = app.add_subcommand("constants", "limit constants and predicted spectrum");
  constants->add_option("model", model_path, "model JSON {d, fstar, normalized}")->required();
  constants->add_option("bank", bank_path, "bank JSON {family, levels[, taps]}")->required();
  constants->add_option("--q0", q0, "Hermite rank");
  constants->add_option("--K", K, "integration order");

  auto* sample = app.add_subcommand("sample", "synthesize one path");
  sample->add_option("model", model_path, "model JSON {d, fstar, normalized[, q0, K]}")->required();
  sample->add_option("--n", n, "path length")->required()->check(CLI::Range(2ul, 1ul << 30));
  sample->add_option("--seed", seed, "master seed")->required();
  sample->add_option("--replicate", replicate, "replicate index");
  sample->add_option("--q0", q0, "Hermite rank");
  sample->add_option("--K", K, "integration order");
  sample->add_flag("--gaussian", gaussian, "emit the underlying Gaussian X instead of Y");
  sample->add_option("--out", out, "output file (default: CSV on stdout)");
  sample->add_option("--format", format, "csv or binary")->check(CLI::IsMember({"csv", "binary"}));

  auto* list = app.add_subcommand("list", "experiment kinds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*validate) return cmd_validate(spec_path);
    if (*run) return cmd_run(spec_path, workers, out);
    if (*constants) return cmd_constants(model_path, bank_path, q0, K);
    if (*sample) return cmd_sample(model_path, n, seed, replicate, q0, K, gaussian, out, format);
    if (*list) return cmd_list();
  } catch (const SpecError& e) {
    std::cerr << "invalid spec: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
