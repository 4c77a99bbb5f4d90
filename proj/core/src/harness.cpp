#include "hermscal/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hermscal/asymptotics.hpp"
#include "hermscal/error.hpp"
#include "hermscal/scalogram.hpp"
#include "hermscal/stats.hpp"
#include "hermscal/wavelet_bank.hpp"

#ifndef HERMSCAL_VERSION
#define HERMSCAL_VERSION "unknown"
#endif

namespace hermscal {
namespace {

using nlohmann::json;

const std::map<std::string, ExperimentKind> kKinds = {
    {"spectrum_scaling", ExperimentKind::SpectrumScaling},
    {"rate", ExperimentKind::Rate},
    {"cross_scale", ExperimentKind::CrossScale},
    {"limit_distribution", ExperimentKind::LimitDistribution},
    {"constants", ExperimentKind::Constants},
};

std::map<std::string, double> default_tolerances(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::SpectrumScaling: return {{"slope", 0.15}, {"d0_mean", 0.05}};
    case ExperimentKind::Rate: return {{"exponent", 0.15}};
    case ExperimentKind::CrossScale: return {{"corr_min_rosenblatt", 0.9}, {"corr_max_gaussian", 0.8}};
    case ExperimentKind::LimitDistribution: return {{"ks_p", 0.01}, {"skew_se", 3.0}};
    case ExperimentKind::Constants: return {{"spectrum_rel", 0.2}};
  }
  return {};
}

const json& require(const json& j, const std::string& key, const std::string& ptr) {
  if (!j.is_object() || !j.contains(key)) throw SpecError(ptr + "/" + key, "is required");
  return j.at(key);
}

template <class T>
T as(const json& v, const std::string& ptr, const char* what) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw SpecError(ptr, std::string("must be ") + what);
  }
}

long as_int(const json& v, const std::string& ptr) {
  if (!v.is_number_integer()) throw SpecError(ptr, "must be an integer");
  return v.get<long>();
}

double as_number(const json& v, const std::string& ptr) {
  if (!v.is_number()) throw SpecError(ptr, "must be a number");
  return v.get<double>();
}

bool family_known(const std::string& f) {
  const auto fams = available_families();
  return f == "db1" || std::find(fams.begin(), fams.end(), f) != fams.end();
}

double fmt_number(double v) { return v; }

std::string hex64(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

Check make_check(std::string name, double value, double threshold, const std::string& rel) {
  Check c{std::move(name), value, threshold, rel, false};
  if (rel == "<=") c.pass = value <= threshold;
  else if (rel == "<") c.pass = value < threshold;
  else if (rel == ">=") c.pass = value >= threshold;
  else c.pass = value > threshold;
  if (!std::isfinite(value)) c.pass = false;
  return c;
}

std::string point_label(const GridPoint& g, const std::string& fam) {
  std::ostringstream os;
  os << "q0=" << g.q0 << ",d=" << g.d << ",K=" << g.K << "," << fam;
  return os.str();
}

class Writer {
 public:
  explicit Writer(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }
  std::ofstream open(const std::string& name) {
    files_.push_back(name);
    std::ofstream out(dir_ / name);
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    out << std::setprecision(17);
    return out;
  }
  std::string path(const std::string& name) {
    files_.push_back(name);
    return (dir_ / name).string();
  }
  const std::vector<std::string>& files() const { return files_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

ProcessConfig process_for(const ExperimentSpec& s, const GridPoint& g, std::size_t N) {
  ProcessConfig pc;
  pc.model = s.model(g.d);
  pc.q0 = g.q0;
  pc.K = g.K;
  pc.N = N;
  pc.seed = s.seed;
  pc.allow_short_memory = s.allow_short_memory;
  return pc;
}

std::string family_of(const ExperimentSpec& s, const GridPoint& g) {
  return g.family.empty() ? s.family : g.family;
}

EstimatorWeights weights_of(const ExperimentSpec& s) {
  return regression_weights(s.weight_p, s.weight_mode, s.nulling_d.value_or(std::nan("")));
}

std::vector<int> scale_range(const ExperimentSpec& s) {
  std::vector<int> v;
  for (int j = s.j_min; j <= s.j_max; ++j) v.push_back(j);
  return v;
}

std::vector<double> d0_hats(const SpectrumEstimate& est, int j0, const EstimatorWeights& w) {
  std::vector<double> out;
  for (const auto& t : est.tables) out.push_back(estimate_d0(t, j0, w, 1).d0_hat);
  return out;
}

int resolve_j0(const ExperimentSpec& s, std::size_t N, std::size_t T) {
  return s.j0 ? *s.j0 : default_j0(N, T, s.weight_p);
}

// Runs the Monte Carlo for one grid point with every scale needed downstream.
SpectrumEstimate simulate(const ExperimentSpec& s, const GridPoint& g, std::size_t N, int J,
                          const std::vector<int>& scales, unsigned workers) {
  const auto bank = make_filter_bank(family_of(s, g), J);
  return wavelet_spectrum_mc(process_for(s, g, N), bank, scales, s.replicates, workers);
}

void write_tables(Writer& w, const std::string& name, const SpectrumEstimate& est) {
  const auto fl = centered_fluctuations(est.tables, est.scales);
  write_scalogram_csv(w.path(name), est.tables, fl);
}

json run_spectrum(const ExperimentSpec& s, Writer& w, std::vector<Check>& checks, unsigned workers) {
  auto spec_csv = w.open("spectrum.csv");
  spec_csv << "point,q0,d,K,family,N,j,n_j,mean_sigma2,se_sigma2\n";
  auto slope_csv = w.open("slopes.csv");
  slope_csv << "point,q0,d,K,family,N,slope,expected_slope,j0,mean_d0_hat,sd_d0_hat,d0\n";
  const auto weights = weights_of(s);
  json summary = json::array();
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    const auto& g = s.grid[i];
    const auto fam = family_of(s, g);
    const auto me = memory_exponents(g.q0, g.d, g.K);
    for (std::size_t n = 0; n < s.N.size(); ++n) {
      const std::size_t N = s.N[n];
      const std::size_t T = make_filter_bank(fam, 1).T();
      const int j0 = resolve_j0(s, N, T);
      const int J = std::max(s.j_max, j0 + s.weight_p - 1);
      std::vector<int> all;
      for (int j = 1; j <= J; ++j) all.push_back(j);
      const auto est = simulate(s, g, N, J, all, workers);

      std::vector<double> xs, ys;
      for (std::size_t k = 0; k < all.size(); ++k) {
        const int j = all[k];
        spec_csv << i << ',' << g.q0 << ',' << g.d << ',' << g.K << ',' << fam << ',' << N << ','
                 << j << ',' << est.tables.front().at(j).n_j << ',' << est.mean[k] << ','
                 << est.se[k] << '\n';
        if (j >= s.j_min && j <= s.j_max) {
          xs.push_back(j);
          ys.push_back(std::log2(est.mean[k]));
        }
      }
      const double slope = stats::ols(xs, ys).slope;
      const double expected = 2.0 * me.d0;
      const auto dh = d0_hats(est, j0, weights);
      const double md = stats::mean(dh), sd = std::sqrt(stats::variance(dh));
      slope_csv << i << ',' << g.q0 << ',' << g.d << ',' << g.K << ',' << fam << ',' << N << ','
                << slope << ',' << expected << ',' << j0 << ',' << md << ',' << sd << ','
                << me.d0 << '\n';
      const std::string label = point_label(g, fam) + ",N=" + std::to_string(N);
      checks.push_back(make_check("slope[" + label + "]", std::abs(slope - expected),
                                  s.tolerances.at("slope"), "<="));
      checks.push_back(make_check("d0_mean[" + label + "]", std::abs(md - me.d0),
                                  s.tolerances.at("d0_mean"), "<="));
      write_tables(w, "scalogram_" + std::to_string(i) + "_" + std::to_string(n) + ".csv", est);
      summary.push_back({{"point", i}, {"N", N}, {"slope", slope}, {"expected_slope", expected},
                         {"j0", j0}, {"mean_d0_hat", md}, {"d0", me.d0}});
    }
  }
  return summary;
}

json run_rate(const ExperimentSpec& s, Writer& w, std::vector<Check>& checks, unsigned workers) {
  auto sum_csv = w.open("rate_summary.csv");
  sum_csv << "point,q0,d,K,family,fitted_exponent,expected_exponent,exponent_se,d0_exponent,"
             "d0_exponent_se\n";
  json summary = json::array();
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    const auto& g = s.grid[i];
    RateConfig rc;
    rc.process = process_for(s, g, s.N.front());
    rc.Ns = s.N;
    rc.family = family_of(s, g);
    rc.replicates = s.replicates;
    rc.weights = weights_of(s);
    rc.workers = workers;
    const auto rep = rate_experiment(rc);
    write_rate_csv(w.path("rate_" + std::to_string(i) + ".csv"), rep);
    sum_csv << i << ',' << g.q0 << ',' << g.d << ',' << g.K << ',' << rc.family << ','
            << rep.fitted_exponent << ',' << rep.expected_exponent << ',' << rep.exponent_se << ','
            << rep.d0_exponent << ',' << rep.d0_exponent_se << '\n';
    checks.push_back(make_check("exponent[" + point_label(g, rc.family) + "]",
                                std::abs(rep.fitted_exponent - rep.expected_exponent),
                                s.tolerances.at("exponent"), "<="));
    checks.push_back(make_check("d0_exponent[" + point_label(g, rc.family) + "]",
                                std::abs(rep.d0_exponent - rep.expected_exponent),
                                s.tolerances.at("exponent"), "<="));
    summary.push_back({{"point", i},
                       {"fitted_exponent", rep.fitted_exponent},
                       {"d0_exponent", rep.d0_exponent},
                       {"expected_exponent", rep.expected_exponent}});
  }
  return summary;
}

json run_cross(const ExperimentSpec& s, Writer& w, std::vector<Check>& checks, unsigned workers) {
  auto csv = w.open("cross_scale.csv");
  csv << "point,q0,d,K,family,N,j,correlation\n";
  json summary = json::array();
  const auto scales = scale_range(s);
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    const auto& g = s.grid[i];
    const auto fam = family_of(s, g);
    const std::size_t N = s.N.front();
    const auto est = simulate(s, g, N, s.j_max, scales, workers);
    const auto fl = centered_fluctuations(est.tables, scales);
    double top = 0;
    for (int j = s.j_min + 1; j <= s.j_max; ++j) {
      const double c = stats::correlation(fl.column(j), fl.column(j - 1));
      csv << i << ',' << g.q0 << ',' << g.d << ',' << g.K << ',' << fam << ',' << N << ',' << j
          << ',' << c << '\n';
      if (j == s.j_max) top = c;
    }
    const std::string label = point_label(g, fam) + ",j=" + std::to_string(s.j_max);
    if (g.q0 >= 2)
      checks.push_back(make_check("corr[" + label + "]", top,
                                  s.tolerances.at("corr_min_rosenblatt"), ">"));
    else
      checks.push_back(make_check("corr[" + label + "]", top,
                                  s.tolerances.at("corr_max_gaussian"), "<"));
    write_scalogram_csv(w.path("scalogram_" + std::to_string(i) + ".csv"), est.tables, fl);
    summary.push_back({{"point", i}, {"correlation", top}});
  }
  return summary;
}

json run_limit(const ExperimentSpec& s, Writer& w, std::vector<Check>& checks, unsigned workers) {
  auto csv = w.open("limit_summary.csv");
  csv << "point,q0,d,K,family,N,j,skewness,skewness_se,ks_statistic,ks_p,d0_ks_statistic,d0_ks_p\n";
  json summary = json::array();
  const auto weights = weights_of(s);
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    const auto& g = s.grid[i];
    const auto fam = family_of(s, g);
    const std::size_t N = s.N.front();
    const std::size_t T = make_filter_bank(fam, 1).T();
    const int j = s.j_max;
    const int j0 = resolve_j0(s, N, T);
    const int J = std::max(j, j0 + s.weight_p - 1);
    std::vector<int> all;
    for (int k = 1; k <= J; ++k) all.push_back(k);
    const auto est = simulate(s, g, N, J, all, workers);
    const auto fl = centered_fluctuations(est.tables, all);
    const auto x = stats::studentize(fl.column(j));
    const double sk = stats::skewness(x), se = stats::skewness_se(x.size());
    const std::string label = point_label(g, fam) + ",j=" + std::to_string(j);
    double ks_d = NAN, ks_p = NAN, d0_d = NAN, d0_p = NAN;
    if (g.q0 >= 2) {
      RosenblattOptions ro;
      ro.n_internal = s.oracle_n;
      ro.workers = workers;
      const auto oracle =
          rosenblatt_oracle_sample(g.d, s.oracle_method, s.oracle_samples, s.seed ^ 0x5EEDULL, ro)
              .studentized();
      const auto ks = stats::ks_two_sample(x, oracle);
      ks_d = ks.statistic;
      ks_p = ks.p_value;
      checks.push_back(make_check("ks_p[" + label + "]", ks_p, s.tolerances.at("ks_p"), ">"));
      checks.push_back(make_check("skewness_z[" + label + "]", sk / se, s.tolerances.at("skew_se"), ">"));
      // d̂0 fluctuations, oriented so the Rosenblatt factor enters with a positive sign.
      auto dh = d0_hats(est, j0, weights);
      const double sign = limit_multiplier(weights, g.d) < 0 ? -1.0 : 1.0;
      for (double& v : dh) v *= sign;
      const auto ks0 = stats::ks_two_sample(stats::studentize(dh), oracle);
      d0_d = ks0.statistic;
      d0_p = ks0.p_value;
      checks.push_back(make_check("d0_ks_p[" + point_label(g, fam) + ",j0=" + std::to_string(j0) + "]",
                                  d0_p, s.tolerances.at("ks_p"), ">"));
    } else {
      checks.push_back(make_check("abs_skewness_z[" + label + "]", std::abs(sk / se),
                                  s.tolerances.at("skew_se"), "<"));
    }
    csv << i << ',' << g.q0 << ',' << g.d << ',' << g.K << ',' << fam << ',' << N << ',' << j
        << ',' << sk << ',' << se << ',' << ks_d << ',' << ks_p << ',' << d0_d << ',' << d0_p
        << '\n';
    write_scalogram_csv(w.path("scalogram_" + std::to_string(i) + ".csv"), est.tables, fl);
    summary.push_back({{"point", i}, {"skewness", sk}, {"skewness_se", se}, {"ks_p", fmt_number(ks_p)},
                       {"d0_ks_p", fmt_number(d0_p)}});
  }
  return summary;
}

json run_constants(const ExperimentSpec& s, Writer& w, std::vector<Check>& checks,
                   unsigned workers) {
  auto csv = w.open("constants_spectrum.csv");
  csv << "point,q0,d,K,family,j,predicted,mc_mean,mc_se,rel_error\n";
  json summary = json::array();
  const auto scales = scale_range(s);
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    const auto& g = s.grid[i];
    const auto fam = family_of(s, g);
    const auto bank = make_filter_bank(fam, std::max(s.j_max, 1));
    const auto c = compute_limit_constants(s.model(g.d), bank, g.q0, g.K);
    auto cj = constants_to_json(c);
    {
      std::ofstream out(w.path("constants_" + std::to_string(i) + ".json"));
      out << std::setw(2) << cj << '\n';
    }
    std::optional<SpectrumEstimate> est;
    if (s.replicates >= 2)
      est = wavelet_spectrum_mc(process_for(s, g, s.N.front()), bank, scales, s.replicates, workers);
    for (std::size_t k = 0; k < scales.size(); ++k) {
      const double pred = predicted_spectrum(c, scales[k]);
      const double mc = est ? est->mean[k] : NAN, se = est ? est->se[k] : NAN;
      const double rel = est ? std::abs(pred / mc - 1.0) : NAN;
      csv << i << ',' << g.q0 << ',' << g.d << ',' << g.K << ',' << fam << ',' << scales[k] << ','
          << pred << ',' << mc << ',' << se << ',' << rel << '\n';
      if (est && scales[k] == s.j_max)
        checks.push_back(make_check("spectrum_rel[" + point_label(g, fam) + ",j=" +
                                        std::to_string(scales[k]) + "]",
                                    rel, s.tolerances.at("spectrum_rel"), "<="));
    }
    summary.push_back({{"point", i}, {"constants", cj}});
  }
  return summary;
}

}  // namespace

std::string to_string(ExperimentKind k) {
  for (const auto& [name, kind] : kKinds)
    if (kind == k) return name;
  return "?";
}

SpectralModel ExperimentSpec::model(double d) const {
  return SpectralModel::from_json({{"d", d}, {"fstar", fstar}, {"normalized", normalized}});
}

json ExperimentSpec::to_json() const {
  json grid_j = json::array();
  for (const auto& g : grid) {
    json p{{"q0", g.q0}, {"d", g.d}, {"K", g.K}};
    if (!g.family.empty()) p["bank"] = g.family;
    grid_j.push_back(p);
  }
  json w{{"mode", hermscal::to_string(weight_mode)}, {"p", weight_p}};
  if (nulling_d) w["nulling_d"] = *nulling_d;
  json j{{"name", name},
         {"kind", hermscal::to_string(kind)},
         {"grid", grid_j},
         {"N", N},
         {"fstar", fstar},
         {"normalized", normalized},
         {"allow_short_memory", allow_short_memory},
         {"bank", family},
         {"scales", {{"min", j_min}, {"max", j_max}}},
         {"replicates", replicates},
         {"seed", seed},
         {"weights", w},
         {"tolerances", tolerances},
         {"oracle",
          {{"method", hermscal::to_string(oracle_method)},
           {"samples", oracle_samples},
           {"n_internal", oracle_n}}},
         {"output", output}};
  if (j0) j["j0"] = *j0;
  return j;
}

ExperimentSpec validate_spec(const json& j) {
  if (!j.is_object()) throw SpecError("", "spec must be a JSON object");
  static const std::vector<std::string> known = {
      "name", "kind", "grid", "N", "fstar", "normalized", "allow_short_memory", "bank", "scales",
      "replicates", "seed", "weights", "j0", "tolerances", "oracle", "output", "description"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw SpecError("/" + key, "unknown field");

  ExperimentSpec s;
  s.name = as<std::string>(require(j, "name", ""), "/name", "a string");
  const auto kind = as<std::string>(require(j, "kind", ""), "/kind", "a string");
  if (!kKinds.count(kind)) throw SpecError("/kind", "unknown experiment kind '" + kind + "'");
  s.kind = kKinds.at(kind);

  const auto& rep = require(j, "replicates", "");
  const long R = as_int(rep, "/replicates");
  const long minR = s.kind == ExperimentKind::Constants ? 0 : 2;
  if (R < minR || (R == 1)) throw SpecError("/replicates", "must be ≥ 2 (or 0 for constants)");
  s.replicates = static_cast<std::size_t>(R);

  const auto& Nj = require(j, "N", "");
  if (Nj.is_array()) {
    if (Nj.empty()) throw SpecError("/N", "must not be empty");
    for (std::size_t i = 0; i < Nj.size(); ++i) {
      const long n = as_int(Nj[i], "/N/" + std::to_string(i));
      if (n < 2) throw SpecError("/N/" + std::to_string(i), "must be ≥ 2");
      s.N.push_back(static_cast<std::size_t>(n));
    }
  } else {
    const long n = as_int(Nj, "/N");
    if (n < 2) throw SpecError("/N", "must be ≥ 2");
    s.N.push_back(static_cast<std::size_t>(n));
  }
  if (s.kind == ExperimentKind::Rate && s.N.size() < 4)
    throw SpecError("/N", "rate experiments need at least 4 sample sizes");

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long>() >= 0))
      throw SpecError("/seed", "must be a non-negative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("bank")) {
    s.family = as<std::string>(j["bank"], "/bank", "a string");
    if (!family_known(s.family)) throw SpecError("/bank", "unknown wavelet family '" + s.family + "'");
  }
  if (j.contains("fstar")) s.fstar = j["fstar"];
  if (j.contains("normalized")) s.normalized = as<bool>(j["normalized"], "/normalized", "a boolean");
  if (j.contains("allow_short_memory"))
    s.allow_short_memory = as<bool>(j["allow_short_memory"], "/allow_short_memory", "a boolean");
  if (j.contains("output")) s.output = as<std::string>(j["output"], "/output", "a string");

  const bool needs_scales = s.kind != ExperimentKind::Rate;
  if (needs_scales) {
    const auto& sc = require(j, "scales", "");
    s.j_min = static_cast<int>(as_int(require(sc, "min", "/scales"), "/scales/min"));
    s.j_max = static_cast<int>(as_int(require(sc, "max", "/scales"), "/scales/max"));
    if (s.j_min < 1) throw SpecError("/scales/min", "must be ≥ 1");
    if (s.j_max < s.j_min) throw SpecError("/scales/max", "must be ≥ scales/min");
    if (s.kind == ExperimentKind::CrossScale && s.j_max == s.j_min)
      throw SpecError("/scales", "cross_scale needs at least two scales");
  } else if (j.contains("scales")) {
    throw SpecError("/scales", "not used by rate experiments (scale follows ⌊log2 N / 2⌋)");
  }

  if (j.contains("weights")) {
    const auto& w = j["weights"];
    if (!w.is_object()) throw SpecError("/weights", "must be an object");
    if (w.contains("mode")) {
      try {
        s.weight_mode = weight_mode_from_string(as<std::string>(w["mode"], "/weights/mode", "a string"));
      } catch (const DomainError& e) {
        throw SpecError("/weights/mode", e.what());
      }
    }
    if (w.contains("p")) s.weight_p = static_cast<int>(as_int(w["p"], "/weights/p"));
    if (s.weight_p < 2) throw SpecError("/weights/p", "must be ≥ 2");
    if (w.contains("nulling_d")) s.nulling_d = as_number(w["nulling_d"], "/weights/nulling_d");
    if (s.weight_mode == WeightMode::Nulling) {
      if (!s.nulling_d) throw SpecError("/weights/nulling_d", "is required for nulling weights");
      if (s.weight_p < 3) throw SpecError("/weights/p", "nulling weights need p ≥ 3");
    }
  }
  if (j.contains("j0")) {
    if (s.kind == ExperimentKind::Rate) throw SpecError("/j0", "not used by rate experiments");
    s.j0 = static_cast<int>(as_int(j["j0"], "/j0"));
    if (*s.j0 < 1) throw SpecError("/j0", "must be ≥ 1");
  }

  s.tolerances = default_tolerances(s.kind);
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (!t.is_object()) throw SpecError("/tolerances", "must be an object");
    for (const auto& [k, v] : t.items()) {
      if (!s.tolerances.count(k)) throw SpecError("/tolerances/" + k, "unknown tolerance for " + kind);
      s.tolerances[k] = as_number(v, "/tolerances/" + k);
    }
  }
  if (j.contains("oracle")) {
    const auto& o = j["oracle"];
    if (o.contains("method")) {
      try {
        s.oracle_method = rosenblatt_method_from_string(as<std::string>(o["method"], "/oracle/method", "a string"));
      } catch (const DomainError& e) {
        throw SpecError("/oracle/method", e.what());
      }
    }
    if (o.contains("samples")) {
      const long v = as_int(o["samples"], "/oracle/samples");
      if (v < 10) throw SpecError("/oracle/samples", "must be ≥ 10");
      s.oracle_samples = static_cast<std::size_t>(v);
    }
    if (o.contains("n_internal")) {
      const long v = as_int(o["n_internal"], "/oracle/n_internal");
      if (v < 16) throw SpecError("/oracle/n_internal", "must be ≥ 16");
      s.oracle_n = static_cast<std::size_t>(v);
    }
  }

  // model shape check once, independent of d
  try {
    (void)s.model(0.25);
  } catch (const std::exception& e) {
    throw SpecError("/fstar", e.what());
  }

  const auto& grid = require(j, "grid", "");
  if (!grid.is_array() || grid.empty()) throw SpecError("/grid", "must be a non-empty array");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::string ptr = "/grid/" + std::to_string(i);
    const auto& e = grid[i];
    if (!e.is_object()) throw SpecError(ptr, "must be an object");
    for (const auto& [key, value] : e.items())
      if (key != "q0" && key != "d" && key != "K" && key != "bank")
        throw SpecError(ptr + "/" + key, "unknown key");
    GridPoint g;
    g.q0 = static_cast<int>(as_int(require(e, "q0", ptr), ptr + "/q0"));
    g.d = as_number(require(e, "d", ptr), ptr + "/d");
    g.K = e.contains("K") ? static_cast<int>(as_int(e["K"], ptr + "/K")) : 0;
    if (e.contains("bank")) {
      g.family = as<std::string>(e["bank"], ptr + "/bank", "a string");
      if (!family_known(g.family)) throw SpecError(ptr + "/bank", "unknown wavelet family");
    }
    if (g.q0 < 1) throw SpecError(ptr + "/q0", "must be ≥ 1");
    if (g.K < 0) throw SpecError(ptr + "/K", "must be ≥ 0");
    if (!(g.d > 0.0 && g.d < 0.5)) throw SpecError(ptr + "/d", "must lie in (0, 1/2)");
    if (!s.allow_short_memory && !is_long_memory(g.q0, g.d))
      throw SpecError(ptr, "q0=" + std::to_string(g.q0) + ", d=" + std::to_string(g.d) +
                               " violates the long-memory condition q0 < 1/(1−2d)");
    const auto fam = g.family.empty() ? s.family : g.family;
    const auto report = check_admissibility(make_filter_bank(fam, 1), g.q0, g.d, g.K);
    if (!report.pass)
      throw SpecError(ptr, fam + " has M=" + std::to_string(report.M) + " < K + δ(q0) = " +
                               std::to_string(report.required));
    if (s.kind == ExperimentKind::LimitDistribution && g.q0 >= 2 && !(g.d > 0.25))
      throw SpecError(ptr + "/d", "Rosenblatt comparison needs d > 1/4");
    s.grid.push_back(g);
  }

  // every requested scale must be available at the smallest N
  if (needs_scales) {
    const std::size_t Nmin = *std::min_element(s.N.begin(), s.N.end());
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
      const auto fam = s.grid[i].family.empty() ? s.family : s.grid[i].family;
      const auto T = make_filter_bank(fam, 1).T();
      if (!n_coeffs(Nmin, T, s.j_max).available)
        throw SpecError("/scales/max", "scale " + std::to_string(s.j_max) +
                                           " has no coefficients at N=" + std::to_string(Nmin));
    }
  }
  return s;
}

std::vector<CatalogEntry> list_experiments() {
  return {
      {"spectrum_scaling", "log2 slope of the Monte Carlo wavelet spectrum over a scale range, and mean of d0_hat",
       "sigma2_j ~ q0! f*(0)^q0 L_q0 2^{2j(delta(q0)+K)}"},
      {"rate", "SD of the scalogram fluctuation and of d0_hat against n_j, j = floor(log2 N / 2)",
       "fluctuations scale as n_j^{-1/2} (q0=1) or n_j^{2d-1} (q0>=2)"},
      {"cross_scale", "correlation of scalogram fluctuations at neighbouring scales",
       "q0>=2: one Rosenblatt factor drives every scale (correlation -> 1)"},
      {"limit_distribution", "studentized scalogram and d0_hat fluctuations against the Rosenblatt oracle",
       "n^{1-2d} 2^{-2j(delta+K)} (S_nj - E S_nj) -> f*(0)^q0 L_{q0-1} Z_d(1); Gaussian for q0=1"},
      {"constants", "limit constants L_p, Gamma_11 and the predicted spectrum, optionally against Monte Carlo",
       "L_p(g) = int |g(sum u)|^2 |sum u|^{-2K} prod |u_i|^{-2d} du"},
  };
}

bool ResultBundle::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

unsigned default_workers() {
  if (const char* env = std::getenv("HERMSCAL_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ResultBundle run_experiment(const ExperimentSpec& spec, const RunOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  Writer w(opts.out_dir ? *opts.out_dir : std::filesystem::path(spec.output));
  const unsigned workers = std::max(1u, opts.workers);
  ResultBundle b;
  switch (spec.kind) {
    case ExperimentKind::SpectrumScaling: b.summary = run_spectrum(spec, w, b.checks, workers); break;
    case ExperimentKind::Rate: b.summary = run_rate(spec, w, b.checks, workers); break;
    case ExperimentKind::CrossScale: b.summary = run_cross(spec, w, b.checks, workers); break;
    case ExperimentKind::LimitDistribution: b.summary = run_limit(spec, w, b.checks, workers); break;
    case ExperimentKind::Constants: b.summary = run_constants(spec, w, b.checks, workers); break;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const auto normalized = spec.to_json();
  json checks = json::array();
  for (const auto& c : b.checks)
    checks.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold},
                      {"relation", c.relation}, {"pass", c.pass}});
  b.manifest = {{"name", spec.name},
                {"kind", to_string(spec.kind)},
                {"version", HERMSCAL_VERSION},
                {"config_hash", hex64(fnv1a64(normalized.dump()))},
                {"spec", normalized},
                {"spec_path", opts.spec_path},
                {"workers", workers},
                {"wall_clock_seconds", secs},
                {"tolerances", spec.tolerances},
                {"checks", checks},
                {"passed", b.all_passed()},
                {"files", w.files()}};
  {
    std::ofstream out(w.dir() / "manifest.json");
    out << std::setw(2) << b.manifest << '\n';
  }
  b.directory = w.dir();
  b.files = w.files();
  return b;
}

}  // namespace hermscal
