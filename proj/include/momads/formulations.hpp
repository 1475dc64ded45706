#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <vector>

#include "momads/barrier.hpp"
#include "momads/core.hpp"

namespace momads {

using ReferenceVector = std::vector<double>;

// Finite set of pairwise incomparable objective vectors that parameterizes
// the scalar formulations.
struct ReferenceSet {
  std::vector<ReferenceVector> members;

  bool valid() const {
    if (members.empty()) return false;
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const Dominance d = detail::pareto_compare(members[a], members[b]);
        if (d == Dominance::first || d == Dominance::second) return false;
      }
    }
    return true;
  }
};

// Signed squared distance from an objective vector to the boundary of the
// zone dominated by r: negative inside the zone, positive outside, zero on
// the boundary. Minimizing it pushes points deep below r.
inline double psi_distance(const std::vector<double>& fx,
                           const ReferenceVector& r) {
  assert(fx.size() == r.size());
  bool inside = true;
  for (std::size_t i = 0; i < fx.size(); ++i) {
    if (fx[i] > r[i]) {
      inside = false;
      break;
    }
  }
  if (inside) {
    double slack = kInf;
    for (std::size_t i = 0; i < fx.size(); ++i)
      slack = std::min(slack, r[i] - fx[i]);
    return -slack * slack;
  }
  double d2 = 0.0;
  for (std::size_t i = 0; i < fx.size(); ++i) {
    const double e = fx[i] - r[i];
    if (e > 0.0) d2 += e * e;
  }
  return d2;
}

// Signed dominance move relative to a reference set: the smallest
// coordinatewise excess over a member when fx is dominated by some member,
// otherwise minus the smallest coordinatewise slack under a member. Zero
// exactly on the members.
inline double psi_dominance_move(const std::vector<double>& fx,
                                 const ReferenceSet& set) {
  bool dominated = false;
  for (const auto& r : set.members) {
    if (detail::pareto_compare(r, fx) == Dominance::first) {
      dominated = true;
      break;
    }
  }
  double best = kInf;
  if (!dominated) {
    for (const auto& r : set.members) {
      double gain = 0.0;
      for (std::size_t i = 0; i < fx.size(); ++i)
        gain += std::max(0.0, r[i] - fx[i]);
      best = std::min(best, gain);
    }
    return -best;
  }
  for (const auto& r : set.members) {
    double excess = 0.0;
    for (std::size_t i = 0; i < fx.size(); ++i)
      excess += std::max(0.0, fx[i] - r[i]);
    best = std::min(best, excess);
  }
  return best;
}

// Reference vector for the distance formulation: per objective, the value of
// the next worse list member in that objective's ordering (clamped at the
// end of the list). Satisfies f(xk) <= r componentwise.
inline ReferenceVector compute_reference_point(const EvaluatedPoint& xk,
                                               const IterateList& list) {
  const std::size_t m = xk.objectives().size();
  const std::size_t k = list.entries.size();
  assert(k >= 1);
  ReferenceVector r(m, 0.0);
  std::vector<std::size_t> order(k);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double fa = list.entries[a].point.objectives()[i];
      const double fb = list.entries[b].point.objectives()[i];
      if (fa != fb) return fa < fb;
      return list.entries[a].point.birth_index <
             list.entries[b].point.birth_index;
    });
    std::size_t jk = k;
    for (std::size_t j = 0; j < k; ++j) {
      if (list.entries[order[j]].point.birth_index == xk.birth_index) {
        jk = j;
        break;
      }
    }
    assert(jk < k);
    const std::size_t jsel = std::min(jk + 1, k - 1);
    r[i] = list.entries[order[jsel]].point.objectives()[i];
  }
  return r;
}

namespace detail {

// Static range-min/range-max over a fixed array, O(1) per query.
class RangeTable {
 public:
  RangeTable() = default;
  explicit RangeTable(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n == 0) return;
    log_.assign(n + 1, 0);
    for (std::size_t i = 2; i <= n; ++i) log_[i] = log_[i / 2] + 1;
    const std::size_t levels = log_[n] + 1;
    mins_.assign(levels, values);
    maxs_.assign(levels, values);
    for (std::size_t k = 1; k < levels; ++k) {
      const std::size_t half = std::size_t{1} << (k - 1);
      for (std::size_t i = 0; i + (std::size_t{1} << k) <= n; ++i) {
        mins_[k][i] = std::min(mins_[k - 1][i], mins_[k - 1][i + half]);
        maxs_[k][i] = std::max(maxs_[k - 1][i], maxs_[k - 1][i + half]);
      }
    }
  }

  // Inclusive range; empty or out-of-range queries yield +inf / -inf.
  double min(std::size_t lo, std::size_t hi) const {
    if (mins_.empty() || lo > hi || hi + 1 >= log_.size()) return kInf;
    const std::size_t k = log_[hi - lo + 1];
    return std::min(mins_[k][lo], mins_[k][hi + 1 - (std::size_t{1} << k)]);
  }
  double max(std::size_t lo, std::size_t hi) const {
    if (maxs_.empty() || lo > hi || hi + 1 >= log_.size()) return -kInf;
    const std::size_t k = log_[hi - lo + 1];
    return std::max(maxs_[k][lo], maxs_[k][hi + 1 - (std::size_t{1} << k)]);
  }

 private:
  std::vector<std::size_t> log_;
  std::vector<std::vector<double>> mins_, maxs_;
};

}  // namespace detail

// Dominance move evaluator with a logarithmic fast path for two objectives:
// the reference set, being pairwise incomparable, is a staircase when sorted
// by the first objective, and both branch minima reduce to prefix lookups
// plus one range query over r1 + r2.
class DominanceMoveFn {
 public:
  explicit DominanceMoveFn(ReferenceSet set) : set_(std::move(set)) {
    if (set_.members.empty() || set_.members[0].size() != 2) return;
    const std::size_t k = set_.members.size();
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return set_.members[a][0] < set_.members[b][0];
    });
    r1_.resize(k);
    r2_.resize(k);
    std::vector<double> sum(k);
    for (std::size_t i = 0; i < k; ++i) {
      r1_[i] = set_.members[order[i]][0];
      r2_[i] = set_.members[order[i]][1];
      sum[i] = r1_[i] + r2_[i];
    }
    table_ = detail::RangeTable(sum);
    fast_ = true;
  }

  double operator()(const std::vector<double>& fx) const {
    if (!fast_) return psi_dominance_move(fx, set_);
    const double a = fx[0], b = fx[1];
    const std::size_t k = r1_.size();
    // Last index with r1 <= a, first index with r2 <= b; r2 is strictly
    // decreasing along the sort.
    const std::size_t j1 =
        static_cast<std::size_t>(std::upper_bound(r1_.begin(), r1_.end(), a) -
                                 r1_.begin());  // count of r1 <= a
    const std::size_t j0 = static_cast<std::size_t>(
        std::lower_bound(r2_.begin(), r2_.end(), b,
                         [](double v, double q) { return v > q; }) -
        r2_.begin());  // first index with r2 <= b

    const bool dominated =
        j1 > 0 && (r2_[j1 - 1] < b || (r2_[j1 - 1] == b && r1_[j1 - 1] < a));
    if (dominated) {
      // min over {r <= fx} of (a - r1) + (b - r2); the window is the
      // intersection of the r1-prefix and the r2-suffix.
      const double best_sum = table_.max(j0, j1 - 1);
      return (a + b) - best_sum;
    }
    double best = kInf;
    if (j1 > 0) best = std::max(0.0, r2_[j1 - 1] - b);  // r1 <= a side
    if (j1 < k) {
      // r1 > a, r2 >= b: both coordinates pay.
      if (j0 > j1) {
        const double s = table_.min(j1, j0 - 1);
        best = std::min(best, s - a - b);
      }
      // r1 > a, r2 < b: only the first coordinate pays; r1 ascending.
      const std::size_t start = std::max(j0, j1);
      if (start < k) best = std::min(best, r1_[start] - a);
    }
    return -best;
  }

 private:
  ReferenceSet set_;
  bool fast_ = false;
  std::vector<double> r1_, r2_;
  detail::RangeTable table_;
};

// Reference set for the dominance move formulation: every list objective
// vector except the incumbent's own, or just the incumbent's when alone.
inline ReferenceSet build_reference_set(const EvaluatedPoint& xk,
                                        const IterateList& list) {
  ReferenceSet out;
  if (list.entries.size() == 1) {
    out.members.push_back(xk.objectives());
    return out;
  }
  for (const auto& e : list.entries) {
    if (e.point.birth_index == xk.birth_index) continue;
    out.members.push_back(e.point.objectives());
  }
  return out;
}

// Objectives in which xk attains the list minimum; ties count.
inline std::vector<std::size_t> extreme_objective_indices(
    const EvaluatedPoint& xk, const IterateList& list) {
  const std::size_t m = xk.objectives().size();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m; ++i) {
    double lo = kInf;
    for (const auto& e : list.entries)
      lo = std::min(lo, e.point.objectives()[i]);
    if (xk.objectives()[i] <= lo) out.push_back(i);
  }
  return out;
}

}  // namespace momads
