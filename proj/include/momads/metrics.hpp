#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "momads/core.hpp"

namespace momads {

using ObjectiveVector = std::vector<double>;
using Front = std::vector<ObjectiveVector>;

namespace detail {

inline bool strictly_below(const ObjectiveVector& y, const ObjectiveVector& u) {
  for (std::size_t i = 0; i < y.size(); ++i)
    if (!(y[i] < u[i])) return false;
  return true;
}

// Exact 2-D hypervolume by a sweep over the f1-sorted staircase: disjoint
// vertical strips between consecutive nondominated points.
inline double hv2_sweep(Front pts, const ObjectiveVector& u) {
  std::sort(pts.begin(), pts.end());
  double volume = 0.0;
  double last_f1 = 0.0, last_f2 = u[1];
  bool open = false;
  for (const auto& p : pts) {
    if (p[1] >= last_f2) continue;  // dominated in the sweep
    if (open) volume += (p[0] - last_f1) * (u[1] - last_f2);
    last_f1 = p[0];
    last_f2 = p[1];
    open = true;
  }
  if (open) volume += (u[0] - last_f1) * (u[1] - last_f2);
  return volume;
}

// 2-D staircase with incremental area bookkeeping, used by the 3-D sweep.
class Staircase {
 public:
  Staircase(double u1, double u2) : u1_(u1), u2_(u2) {}

  double area() const { return area_; }

  // Inserts (a, b); returns the area gained (zero when dominated).
  double insert(double a, double b) {
    auto it = steps_.upper_bound(a);
    if (it != steps_.begin()) {
      auto prev = std::prev(it);
      if (prev->second <= b) return 0.0;
    }
    double gain = 0.0;
    double x = a;
    double cover = (it == steps_.begin()) ? u2_ : std::prev(it)->second;
    auto walk = it;
    for (;;) {
      const double x_next = (walk == steps_.end()) ? u1_ : walk->first;
      if (cover <= b) break;
      gain += (x_next - x) * (cover - b);
      x = x_next;
      if (walk == steps_.end()) break;
      cover = walk->second;
      ++walk;
    }
    auto er = steps_.lower_bound(a);
    while (er != steps_.end() && er->second >= b) er = steps_.erase(er);
    steps_.emplace(a, b);
    area_ += gain;
    return gain;
  }

 private:
  std::map<double, double> steps_;  // x -> y, y strictly decreasing in x
  double u1_, u2_;
  double area_ = 0.0;
};

// Exact 3-D hypervolume: slice along f3, sweeping a 2-D staircase upward.
inline double hv3_sweep(Front pts, const ObjectiveVector& u) {
  std::sort(pts.begin(), pts.end(),
            [](const ObjectiveVector& a, const ObjectiveVector& b) {
              return a[2] < b[2];
            });
  Staircase stair(u[0], u[1]);
  double volume = 0.0;
  std::size_t i = 0;
  double z_prev = pts.empty() ? u[2] : pts[0][2];
  while (i < pts.size()) {
    const double z = pts[i][2];
    volume += stair.area() * (z - z_prev);
    while (i < pts.size() && pts[i][2] == z) {
      stair.insert(pts[i][0], pts[i][1]);
      ++i;
    }
    z_prev = z;
  }
  volume += stair.area() * (u[2] - z_prev);
  return volume;
}

// Dimension-generic hypervolume by recursive slicing on the last objective.
inline double hv_recursive(const Front& pts, const ObjectiveVector& u) {
  if (pts.empty()) return 0.0;
  const std::size_t m = u.size();
  if (m == 1) {
    double lo = u[0];
    for (const auto& p : pts) lo = std::min(lo, p[0]);
    return u[0] - lo;
  }
  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pts[a][m - 1] < pts[b][m - 1];
  });
  const ObjectiveVector u_sub(u.begin(), u.end() - 1);
  Front active;
  double volume = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double z = pts[order[i]][m - 1];
    while (i < order.size() && pts[order[i]][m - 1] == z) {
      active.emplace_back(pts[order[i]].begin(), pts[order[i]].end() - 1);
      ++i;
    }
    const double z_next = (i < order.size()) ? pts[order[i]][m - 1] : u[m - 1];
    volume += hv_recursive(active, u_sub) * (z_next - z);
  }
  return volume;
}

}  // namespace detail

// Lebesgue measure of the region dominated by the front and bounded by u.
// Points that do not lie strictly below u contribute nothing.
inline double hypervolume(const Front& front, const ObjectiveVector& u) {
  Front pts;
  for (const auto& y : front)
    if (detail::strictly_below(y, u)) pts.push_back(y);
  if (pts.empty()) return 0.0;
  switch (u.size()) {
    case 2:
      return detail::hv2_sweep(std::move(pts), u);
    case 3:
      return detail::hv3_sweep(std::move(pts), u);
    default:
      return detail::hv_recursive(pts, u);
  }
}

struct NormalizationFrame {
  ObjectiveVector ideal;
  ObjectiveVector nadir;
};

inline NormalizationFrame normalization_frame(const Front& reference_front) {
  assert(!reference_front.empty());
  const std::size_t m = reference_front[0].size();
  NormalizationFrame f;
  f.ideal.assign(m, kInf);
  f.nadir.assign(m, -kInf);
  for (const auto& y : reference_front) {
    for (std::size_t i = 0; i < m; ++i) {
      f.ideal[i] = std::min(f.ideal[i], y[i]);
      f.nadir[i] = std::max(f.nadir[i], y[i]);
    }
  }
  return f;
}

// Shift-and-scale onto the reference range; degenerate components are only
// shifted.
inline ObjectiveVector transform(const ObjectiveVector& y,
                                 const NormalizationFrame& frame) {
  ObjectiveVector out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double span = frame.nadir[i] - frame.ideal[i];
    out[i] = y[i] - frame.ideal[i];
    if (span > 0.0) out[i] /= span;
  }
  return out;
}

inline Front transform_front(const Front& front,
                             const NormalizationFrame& frame) {
  Front out;
  out.reserve(front.size());
  for (const auto& y : front) out.push_back(transform(y, frame));
  return out;
}

// Hypervolume ratio of an obtained front against the reference front, both
// normalized by the reference frame and bounded by the transformed nadir.
inline double hypervolume_ratio(const Front& obtained, const Front& reference,
                                const NormalizationFrame& frame) {
  const ObjectiveVector tn = transform(frame.nadir, frame);
  const double denom = hypervolume(transform_front(reference, frame), tn);
  if (denom <= 0.0) {
    // Degenerate reference front: solved exactly when some obtained point
    // matches it componentwise at or below the nadir.
    for (const auto& y : obtained) {
      bool ok = true;
      for (std::size_t i = 0; i < y.size(); ++i) ok &= y[i] <= frame.nadir[i];
      if (ok) return 1.0;
    }
    return 0.0;
  }
  return hypervolume(transform_front(obtained, frame), tn) / denom;
}

inline bool convergence_test(const Front& obtained, const Front& reference,
                             double eps) {
  assert(!reference.empty());
  const NormalizationFrame frame = normalization_frame(reference);
  return hypervolume_ratio(obtained, reference, frame) >= 1.0 - eps;
}

// Nondominated filter on bare objective vectors; duplicates collapse onto
// the earliest occurrence.
inline Front filter_nondominated_front(const Front& points) {
  Front out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool keep = true;
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (k == i) continue;
      const Dominance d = detail::pareto_compare(points[k], points[i]);
      if (d == Dominance::first || (d == Dominance::equal && k < i)) {
        keep = false;
        break;
      }
    }
    if (keep) out.push_back(points[i]);
  }
  return out;
}

// Union of all solvers' feasible points for one problem, filtered to the
// nondominated set. Absent when no run produced a feasible point, in which
// case the problem is discarded from profiling.
inline std::optional<Front> build_reference_front(
    const std::vector<Front>& runs) {
  Front merged;
  for (const auto& r : runs) merged.insert(merged.end(), r.begin(), r.end());
  if (merged.empty()) return std::nullopt;
  return filter_nondominated_front(merged);
}

// Normalized hypervolume after each evaluation of a run. `feasible_stream`
// holds one entry per blackbox evaluation: the objective vector for feasible
// evaluations, nullopt otherwise. The series is nondecreasing and <= 1.
// The reference hypervolume is computed once; only front changes trigger a
// recomputation of the obtained side.
inline std::vector<double> convergence_profile(
    const std::vector<std::optional<ObjectiveVector>>& feasible_stream,
    const Front& reference, const NormalizationFrame& frame) {
  const ObjectiveVector tn = transform(frame.nadir, frame);
  const double denom = hypervolume(transform_front(reference, frame), tn);

  std::vector<double> series;
  series.reserve(feasible_stream.size());
  Front front;
  double ratio = 0.0;
  for (const auto& entry : feasible_stream) {
    if (entry) {
      bool accept = true;
      for (const auto& y : front) {
        const Dominance d = detail::pareto_compare(y, *entry);
        if (d == Dominance::first || d == Dominance::equal) {
          accept = false;
          break;
        }
      }
      if (accept) {
        std::erase_if(front, [&](const ObjectiveVector& y) {
          return detail::pareto_compare(*entry, y) == Dominance::first;
        });
        front.push_back(*entry);
        if (denom > 0.0) {
          ratio = hypervolume(transform_front(front, frame), tn) / denom;
        } else {
          ratio = hypervolume_ratio(front, reference, frame);
        }
      }
    }
    series.push_back(ratio);
  }
  return series;
}

// First evaluation count at which the run passes the convergence test, if any.
inline std::optional<std::size_t> first_solve_eval(
    const std::vector<double>& profile_series, double eps) {
  for (std::size_t i = 0; i < profile_series.size(); ++i)
    if (profile_series[i] >= 1.0 - eps) return i + 1;
  return std::nullopt;
}

struct RunProfileInput {
  std::string solver;
  std::string problem;
  std::size_t dimension = 0;
  std::size_t budget = 0;
  std::optional<std::size_t> solve_eval;  // absent: never solved
};

struct ProfileTable {
  double eps = 0.0;
  std::vector<std::string> solvers;
  std::size_t max_groups = 0;
  // fraction[s][k] = share of problems solver s solved within (k+1) groups
  // of (n_p + 1) evaluations.
  std::vector<std::vector<double>> fraction;
};

inline ProfileTable data_profile(const std::vector<RunProfileInput>& runs,
                                 double eps) {
  ProfileTable table;
  table.eps = eps;
  std::vector<std::string> problems;
  for (const auto& r : runs) {
    if (std::find(table.solvers.begin(), table.solvers.end(), r.solver) ==
        table.solvers.end())
      table.solvers.push_back(r.solver);
    if (std::find(problems.begin(), problems.end(), r.problem) ==
        problems.end())
      problems.push_back(r.problem);
    const std::size_t groups =
        (r.budget + r.dimension) / (r.dimension + 1);
    table.max_groups = std::max(table.max_groups, groups);
  }
  table.fraction.assign(table.solvers.size(),
                        std::vector<double>(table.max_groups, 0.0));
  for (const auto& r : runs) {
    if (!r.solve_eval) continue;
    const std::size_t s =
        static_cast<std::size_t>(std::find(table.solvers.begin(),
                                           table.solvers.end(), r.solver) -
                                 table.solvers.begin());
    // Solved within k groups when solve_eval <= k * (n_p + 1).
    const std::size_t k_min =
        (*r.solve_eval + r.dimension) / (r.dimension + 1);
    for (std::size_t k = k_min; k <= table.max_groups; ++k)
      table.fraction[s][k - 1] += 1.0;
  }
  const double denom = problems.empty() ? 1.0 : static_cast<double>(problems.size());
  for (auto& row : table.fraction)
    for (auto& v : row) v /= denom;
  return table;
}

}  // namespace momads
