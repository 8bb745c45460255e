#pragma once

#include <vector>

namespace apix {

/// Result of a two-sample rank test.  `u` is the U statistic of the first
/// sample (pairs (x, y) with x ranked above y, ties counted half); `exact`
/// reports whether the p-value came from the enumerated null distribution
/// rather than the normal approximation.
struct MannWhitneyResult {
  double u = 0.0;
  double p = 1.0;
  bool exact = false;
};

/// Wilcoxon-Mann-Whitney test with midrank tie handling.  Uses the exact null
/// distribution when |xs|*|ys| <= 400 and the pooled values are tie-free,
/// otherwise a normal approximation with tie and continuity corrections.  The
/// p-value is two-sided and capped at 1.  Throws std::invalid_argument when a
/// sample is empty.
MannWhitneyResult mann_whitney_u(const std::vector<double>& xs,
                                 const std::vector<double>& ys);

/// Vargha-Delaney effect size: P(X > Y) + P(X = Y)/2 computed via midranks.
/// 0.5 means no effect; values toward 0 mean xs tends below ys.  Throws
/// std::invalid_argument when a sample is empty.
double vargha_delaney_a(const std::vector<double>& xs,
                        const std::vector<double>& ys);

}  // namespace apix
