#include "hermscal/estimator.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>

#include "hermscal/error.hpp"
#include "hermscal/stats.hpp"
#include "parallel.hpp"

namespace hermscal {
namespace {
const double kSlope = 1.0 / (2.0 * std::numbers::ln2);
}

std::string to_string(WeightMode m) {
  switch (m) {
    case WeightMode::MinimalTwoPoint: return "minimal_two_point";
    case WeightMode::LeastSquares: return "least_squares";
    case WeightMode::Nulling: return "nulling";
  }
  return "?";
}

WeightMode weight_mode_from_string(const std::string& s) {
  if (s == "minimal_two_point") return WeightMode::MinimalTwoPoint;
  if (s == "least_squares") return WeightMode::LeastSquares;
  if (s == "nulling") return WeightMode::Nulling;
  throw DomainError("unknown weight mode '" + s + "'");
}

EstimatorWeights regression_weights(int p, WeightMode mode, double nulling_d) {
  if (p < 2) throw DomainError("regression_weights: p must be ≥ 2");
  EstimatorWeights out;
  out.p = p;
  out.mode = mode;
  out.w.assign(static_cast<std::size_t>(p), 0.0);
  switch (mode) {
    case WeightMode::MinimalTwoPoint:
      out.w.front() = -kSlope / (p - 1);
      out.w.back() = kSlope / (p - 1);
      break;
    case WeightMode::LeastSquares: {
      const double mid = (p - 1) / 2.0;
      double ss = 0;
      for (int i = 0; i < p; ++i) ss += (i - mid) * (i - mid);
      for (int i = 0; i < p; ++i) out.w[static_cast<std::size_t>(i)] = kSlope * (i - mid) / ss;
      break;
    }
    case WeightMode::Nulling: {
      if (p < 3) throw DomainError("regression_weights: nulling mode needs p ≥ 3");
      if (!(nulling_d > 0.0 && nulling_d < 0.5))
        throw DomainError("regression_weights: nulling mode needs d in (0, 1/2)");
      out.nulling_d = nulling_d;
      Eigen::MatrixXd A(3, p);
      for (int i = 0; i < p; ++i) {
        A(0, i) = 1.0;
        A(1, i) = i;
        A(2, i) = std::exp2((1.0 - 2.0 * nulling_d) * i);
      }
      const Eigen::Vector3d b(0.0, kSlope, 0.0);
      const Eigen::VectorXd w = A.transpose() * (A * A.transpose()).ldlt().solve(b);
      for (int i = 0; i < p; ++i) out.w[static_cast<std::size_t>(i)] = w(i);
      break;
    }
  }
  return out;
}

double limit_multiplier(const EstimatorWeights& w, double d) {
  double s = 0;
  for (int i = 0; i < w.p; ++i) s += w.w[static_cast<std::size_t>(i)] * std::exp2((1.0 - 2.0 * d) * i);
  return s;
}

EstimateReport estimate_d0(const ScalogramTable& table, int j0, const EstimatorWeights& w,
                           long n_min) {
  EstimateReport r;
  r.j0 = j0;
  r.weights = w;
  for (int i = 0; i < w.p; ++i) {
    const int j = j0 + i;
    const auto& row = table.at(j);
    if (row.n_j < n_min)
      throw ScaleUnavailable("estimate_d0: scale " + std::to_string(j) + " has n_j=" +
                             std::to_string(row.n_j) + " < " + std::to_string(n_min));
    if (!(row.sigma2_hat > 0.0))
      throw DomainError("estimate_d0: non-positive scalogram at scale " + std::to_string(j));
    r.scales.push_back(j);
    r.n_j.push_back(row.n_j);
    r.log_sigma2.push_back(std::log(row.sigma2_hat));
  }
  for (int i = 0; i < w.p; ++i) r.d0_hat += w.w[static_cast<std::size_t>(i)] * r.log_sigma2[static_cast<std::size_t>(i)];
  const double slope = 2.0 * std::numbers::ln2 * r.d0_hat;
  double icpt = 0;
  for (int i = 0; i < w.p; ++i) icpt += r.log_sigma2[static_cast<std::size_t>(i)] - slope * r.scales[static_cast<std::size_t>(i)];
  icpt /= w.p;
  for (int i = 0; i < w.p; ++i)
    r.residuals.push_back(r.log_sigma2[static_cast<std::size_t>(i)] - icpt - slope * r.scales[static_cast<std::size_t>(i)]);
  return r;
}

int default_j0(std::size_t N, std::size_t T, int p, long n_min) {
  int j = 0;
  while (n_coeffs(N, T, j + 1).n >= n_min) ++j;
  const int j0 = j - (p - 1);
  if (j0 < 1)
    throw ScaleUnavailable("default_j0: N=" + std::to_string(N) + " too small for p=" +
                           std::to_string(p));
  return j0;
}

nlohmann::json to_json(const EstimateReport& r) {
  return {{"d0_hat", r.d0_hat},       {"j0", r.j0},
          {"p", r.weights.p},         {"weights", r.weights.w},
          {"mode", to_string(r.weights.mode)},
          {"scales", r.scales},       {"n_j", r.n_j},
          {"log_sigma2", r.log_sigma2}, {"residuals", r.residuals}};
}

RateReport rate_experiment(const RateConfig& cfg) {
  if (cfg.Ns.size() < 4) throw DomainError("rate_experiment: need at least 4 sample sizes");
  if (cfg.replicates < 2) throw DomainError("rate_experiment: need ≥ 2 replicates");
  const auto rule = cfg.j_rule ? cfg.j_rule : [](std::size_t N) {
    return static_cast<int>(std::floor(std::log2(static_cast<double>(N)) / 2.0));
  };
  const int p = cfg.weights.p;
  RateReport rep;
  const int q0 = cfg.process.q0;
  rep.expected_exponent = q0 >= 2 ? 2.0 * cfg.process.model.d() - 1.0 : -0.5;

  std::vector<double> lx, ly, ly_d0;
  for (std::size_t N : cfg.Ns) {
    ProcessConfig pc = cfg.process;
    pc.N = N;
    const int j0 = rule(N);
    const auto bank = make_filter_bank(cfg.family, j0 + p - 1);
    Synthesizer synth(pc);
    RateRow row;
    row.N = N;
    row.j = j0;
    row.n_j = n_coeffs(N, bank.T(), j0).n;
    row.d0_hat.resize(cfg.replicates);
    std::vector<double> energy(cfg.replicates);
    detail::parallel_for(cfg.replicates, cfg.workers, [&](std::size_t r) {
      const auto path = synth.path(r);
      const auto table = scalogram(dwt_details(path.samples, bank, j0 + p - 1));
      row.d0_hat[r] = estimate_d0(table, j0, cfg.weights, 1).d0_hat;
      energy[r] = table.at(j0).sigma2_hat;
    });
    row.mean_d0_hat = stats::mean(row.d0_hat);
    row.sd_d0_hat = std::sqrt(stats::variance(row.d0_hat));
    row.skewness = stats::skewness(row.d0_hat);
    row.sd_fluctuation = std::sqrt(stats::variance(energy)) / stats::mean(energy);
    lx.push_back(std::log(static_cast<double>(row.n_j)));
    ly.push_back(std::log(row.sd_fluctuation));
    ly_d0.push_back(std::log(row.sd_d0_hat));
    rep.rows.push_back(std::move(row));
  }
  const auto fit = stats::ols(lx, ly);
  rep.fitted_exponent = fit.slope;
  rep.exponent_se = fit.slope_se;
  const auto fit_d0 = stats::ols(lx, ly_d0);
  rep.d0_exponent = fit_d0.slope;
  rep.d0_exponent_se = fit_d0.slope_se;
  return rep;
}

void write_rate_csv(const std::string& path, const RateReport& r) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "N,n_j,j,mean_d0_hat,sd_d0_hat,sd_fluctuation\n" << std::setprecision(17);
  for (const auto& row : r.rows)
    out << row.N << ',' << row.n_j << ',' << row.j << ',' << row.mean_d0_hat << ','
        << row.sd_d0_hat << ',' << row.sd_fluctuation << '\n';
}

}  // namespace hermscal
