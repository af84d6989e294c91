// Copyright 2026 The bincue Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "bincue/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "bincue/error.hpp"

namespace bincue {
namespace {

void require_finite(std::span<const double> x, const char* what) {
  for (double v : x)
    if (!std::isfinite(v))
      throw InputError(std::string(what) + " holds a non-finite value");
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::vector<double> midranks(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = rank;
    i = j + 1;
  }
  return r;
}

}  // namespace

AndersonDarlingResult anderson_darling(std::span<const double> sample) {
  require_finite(sample, "sample");
  const std::size_t n = sample.size();
  if (n < 8) throw InputError("Anderson-Darling needs at least 8 values");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double nn = static_cast<double>(n);
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / nn;
  double ss = 0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (nn - 1));
  if (!(sd > 0)) throw NumericError("Anderson-Darling: zero variance");

  double s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double zi = (x[i] - mean) / sd;
    const double zj = (x[n - 1 - i] - mean) / sd;
    // log Phi(z) and log(1 - Phi(z)) via erfc to keep the tails finite.
    const double lo = std::log(0.5 * std::erfc(-zi / std::sqrt(2.0)));
    const double hi = std::log(0.5 * std::erfc(zj / std::sqrt(2.0)));
    s += (2.0 * static_cast<double>(i) + 1.0) * (lo + hi);
  }
  AndersonDarlingResult r;
  r.a2 = -nn - s / nn;
  const double a = r.a2 * (1.0 + 0.75 / nn + 2.25 / (nn * nn));
  r.a2_star = a;
  double p;
  if (a < 0.2)
    p = 1.0 - std::exp(-13.436 + 101.14 * a - 223.73 * a * a);
  else if (a < 0.34)
    p = 1.0 - std::exp(-8.318 + 42.796 * a - 59.938 * a * a);
  else if (a < 0.6)
    p = std::exp(0.9177 - 4.279 * a - 1.38 * a * a);
  else
    p = std::exp(1.2937 - 5.709 * a + 0.0186 * a * a);
  r.p_value = std::clamp(p, 0.0, 1.0);
  return r;
}

std::vector<double> box_cox_transform(std::span<const double> y,
                                      double lambda) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0)) throw InputError("Box-Cox needs positive values");
    out[i] = lambda == 0.0 ? std::log(y[i])
                           : (std::pow(y[i], lambda) - 1.0) / lambda;
  }
  return out;
}

double box_cox_log_likelihood(std::span<const double> y, double lambda) {
  const auto t = box_cox_transform(y, lambda);
  const double n = static_cast<double>(y.size());
  const double mean = std::accumulate(t.begin(), t.end(), 0.0) / n;
  double ss = 0;
  for (double v : t) ss += (v - mean) * (v - mean);
  double sum_log = 0;
  for (double v : y) sum_log += std::log(v);
  return -0.5 * n * std::log(ss / n) + (lambda - 1.0) * sum_log;
}

BoxCoxResult box_cox(std::span<const double> sample) {
  require_finite(sample, "sample");
  if (sample.size() < 2) throw InputError("Box-Cox needs at least 2 values");
  for (double v : sample)
    if (!(v > 0))
      throw InputError("Box-Cox needs positive values (use the shifted form)");
  BoxCoxResult best;
  bool have = false;
  for (int k = -200; k <= 200; ++k) {
    const double lambda = k / 100.0;
    const double ll = box_cox_log_likelihood(sample, lambda);
    if (!std::isfinite(ll))
      throw NumericError("Box-Cox: degenerate sample (zero variance)");
    if (!have || ll > best.log_likelihood) {
      best.lambda = lambda;
      best.log_likelihood = ll;
      have = true;
    }
  }
  best.transformed = box_cox_transform(sample, best.lambda);
  return best;
}

BoxCoxResult box_cox_shifted(std::span<const double> sample) {
  require_finite(sample, "sample");
  double min_pos = 0;
  bool zero = false;
  for (double v : sample) {
    if (v < 0) throw InputError("Box-Cox shift handles zeros, not negatives");
    if (v == 0) zero = true;
    if (v > 0 && (min_pos == 0 || v < min_pos)) min_pos = v;
  }
  if (!zero) return box_cox(sample);
  if (min_pos == 0) throw InputError("Box-Cox: all values are zero");
  const double shift = 0.5 * min_pos;
  std::vector<double> y(sample.begin(), sample.end());
  for (double& v : y) v += shift;
  BoxCoxResult r = box_cox(y);
  r.shift = shift;
  return r;
}

RankSumResult rank_sum(std::span<const double> a, std::span<const double> b,
                       RankSumMethod method) {
  require_finite(a, "first sample");
  require_finite(b, "second sample");
  if (a.empty() || b.empty()) throw InputError("rank_sum needs two samples");
  const std::size_t na = a.size(), nb = b.size(), n = na + nb;
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto r = midranks(pooled);
  RankSumResult out;
  for (std::size_t i = 0; i < na; ++i) out.statistic += r[i];
  out.u = out.statistic - 0.5 * static_cast<double>(na * (na + 1));

  if (method == RankSumMethod::kAuto)
    method = n <= kRankSumExactLimit ? RankSumMethod::kExact
                                     : RankSumMethod::kNormal;
  out.method = method;
  if (method == RankSumMethod::kExact) {
    if (n > 30) throw InputError("exact rank-sum limited to 30 values");
    // Enumerate every assignment of na of the pooled midranks to sample a.
    std::size_t le = 0, ge = 0, total = 0;
    const double w = out.statistic;
    const double tol = 1e-9 * static_cast<double>(n * n);
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(na), true);
    do {
      double s = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (pick[i]) s += r[i];
      if (s <= w + tol) ++le;
      if (s >= w - tol) ++ge;
      ++total;
    } while (std::prev_permutation(pick.begin(), pick.end()));
    const double t = static_cast<double>(total);
    out.p_value = std::min(1.0, 2.0 * std::min(le / t, ge / t));
    return out;
  }
  // Normal approximation with tie and continuity corrections.
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double ties = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && sorted[j + 1] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i + 1);
    ties += t * t * t - t;
    i = j + 1;
  }
  const double dn = static_cast<double>(n);
  const double mu = 0.5 * static_cast<double>(na) * (dn + 1.0);
  const double var = static_cast<double>(na * nb) / 12.0 *
                     ((dn + 1.0) - ties / (dn * (dn - 1.0)));
  if (!(var > 0)) {
    out.z = 0.0;
    out.p_value = 1.0;
    return out;
  }
  const double z =
      std::max(0.0, std::abs(out.statistic - mu) - 0.5) / std::sqrt(var);
  out.z = out.statistic >= mu ? z : -z;
  out.p_value = std::min(1.0, 2.0 * (1.0 - normal_cdf(z)));
  return out;
}

RegressionResult ols_interaction(std::span<const double> y,
                                 std::span<const double> rom,
                                 std::span<const double> condition) {
  const std::size_t n = y.size();
  if (rom.size() != n || condition.size() != n)
    throw InputError("regression inputs differ in length");
  if (n <= 4) throw InputError("regression needs more than 4 observations");
  require_finite(y, "response");
  require_finite(rom, "rom");
  require_finite(condition, "condition");
  Eigen::MatrixXd x(n, 4);
  Eigen::VectorXd yy(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    x(r, 0) = 1.0;
    x(r, 1) = rom[i];
    x(r, 2) = condition[i];
    x(r, 3) = rom[i] * condition[i];
    yy(r) = y[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < 4) throw InputError("design matrix is rank deficient");
  const Eigen::VectorXd beta = qr.solve(yy);
  const Eigen::VectorXd res = yy - x * beta;

  RegressionResult out;
  out.df_residual = static_cast<int>(n) - 4;
  const double rss = res.squaredNorm();
  const double sigma2 = rss / out.df_residual;
  const Eigen::MatrixXd cov =
      sigma2 * (x.transpose() * x).inverse();
  const boost::math::students_t dist(out.df_residual);
  for (int k = 0; k < 4; ++k) {
    out.coefficients[k] = beta(k);
    out.std_errors[k] = std::sqrt(std::max(0.0, cov(k, k)));
    if (out.std_errors[k] > 0) {
      out.t_stats[k] = beta(k) / out.std_errors[k];
      out.p_values[k] = 2.0 * boost::math::cdf(boost::math::complement(
                                  dist, std::abs(out.t_stats[k])));
    } else {
      out.t_stats[k] = beta(k) == 0 ? 0.0 : std::copysign(HUGE_VAL, beta(k));
      out.p_values[k] = beta(k) == 0 ? 1.0 : 0.0;
    }
    out.p_values[k] = std::clamp(out.p_values[k], 0.0, 1.0);
  }
  const double mean = yy.mean();
  const double tss = (yy.array() - mean).square().sum();
  out.r_squared = tss > 0 ? 1.0 - rss / tss : 1.0;
  out.residuals.assign(res.data(), res.data() + n);
  return out;
}

}  // namespace bincue
