#include "apixplore/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace apix {

namespace {

struct Ranked {
  double rank_sum_first = 0.0;  // midrank sum of the first sample
  double tie_term = 0.0;        // sum of t^3 - t over tie groups
  bool has_ties = false;
};

Ranked midranks(const std::vector<double>& xs, const std::vector<double>& ys) {
  struct Item {
    double value;
    bool first;
  };
  std::vector<Item> pool;
  pool.reserve(xs.size() + ys.size());
  for (double v : xs) pool.push_back({v, true});
  for (double v : ys) pool.push_back({v, false});
  std::sort(pool.begin(), pool.end(),
            [](const Item& a, const Item& b) { return a.value < b.value; });

  Ranked out;
  std::size_t i = 0;
  while (i < pool.size()) {
    std::size_t j = i;
    while (j < pool.size() && pool[j].value == pool[i].value) ++j;
    const double t = static_cast<double>(j - i);
    // ranks are 1-based; the group spanning positions [i, j) shares their mean
    const double rank = static_cast<double>(i + j + 1) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (pool[k].first) out.rank_sum_first += rank;
    }
    if (t > 1.0) {
      out.has_ties = true;
      out.tie_term += t * t * t - t;
    }
    i = j;
  }
  return out;
}

// Null distribution of U for sample sizes (m, n): counts[u] is the number of
// rank arrangements with statistic u, built from the standard recurrence
// c(m, n, u) = c(m-1, n, u-n) + c(m, n-1, u).  Counts stay below 2^53 for
// m*n <= 400, so doubles hold them exactly.
std::vector<double> exact_counts(std::size_t m, std::size_t n) {
  std::vector<std::vector<double>> row(n + 1);
  for (std::size_t j = 0; j <= n; ++j) row[j] = {1.0};  // m = 0
  for (std::size_t i = 1; i <= m; ++i) {
    std::vector<std::vector<double>> next(n + 1);
    next[0] = {1.0};
    for (std::size_t j = 1; j <= n; ++j) {
      std::vector<double> counts(i * j + 1, 0.0);
      for (std::size_t u = 0; u < counts.size(); ++u) {
        if (u >= j) counts[u] += row[j][u - j];
        if (u < next[j - 1].size()) counts[u] += next[j - 1][u];
      }
      next[j] = std::move(counts);
    }
    row = std::move(next);
  }
  return row[n];
}

void require_nonempty(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.empty() || ys.empty()) {
    throw std::invalid_argument("rank statistics require non-empty samples");
  }
}

}  // namespace

MannWhitneyResult mann_whitney_u(const std::vector<double>& xs,
                                 const std::vector<double>& ys) {
  require_nonempty(xs, ys);
  const double m = static_cast<double>(xs.size());
  const double n = static_cast<double>(ys.size());
  const Ranked ranked = midranks(xs, ys);
  const double u1 = ranked.rank_sum_first - m * (m + 1.0) / 2.0;
  const double mn = m * n;

  MannWhitneyResult result;
  result.u = u1;

  const double tail_u = std::min(u1, mn - u1);
  if (!ranked.has_ties && mn <= 400.0) {
    const std::vector<double> counts = exact_counts(xs.size(), ys.size());
    double total = 0.0;
    for (double c : counts) total += c;
    double cumulative = 0.0;
    for (std::size_t u = 0; u < counts.size() && static_cast<double>(u) <= tail_u; ++u) {
      cumulative += counts[u];
    }
    result.p = std::min(1.0, 2.0 * cumulative / total);
    result.exact = true;
    return result;
  }

  const double big_n = m + n;
  const double tie_correction = ranked.tie_term / (big_n * (big_n - 1.0));
  const double variance = mn / 12.0 * (big_n + 1.0 - tie_correction);
  if (variance <= 0.0) {
    result.p = 1.0;  // every pooled value identical: no separation at all
    return result;
  }
  const double z = std::max(0.0, std::fabs(u1 - mn / 2.0) - 0.5) / std::sqrt(variance);
  result.p = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return result;
}

double vargha_delaney_a(const std::vector<double>& xs,
                        const std::vector<double>& ys) {
  require_nonempty(xs, ys);
  const double m = static_cast<double>(xs.size());
  const double n = static_cast<double>(ys.size());
  const Ranked ranked = midranks(xs, ys);
  return (ranked.rank_sum_first / m - (m + 1.0) / 2.0) / n;
}

}  // namespace apix
