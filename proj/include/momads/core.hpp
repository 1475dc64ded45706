#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <deque>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

namespace momads {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// A point in decision space, in problem units.
using DecisionPoint = std::vector<double>;

enum class EvalStatus {
  ok,
  hidden_failure,  // evaluation crashed or returned non-numeric output
  outside_x,       // point violates the domain (bounds, hidden domain)
};

// Aggregate constraint violation: sum of squared positive constraint values,
// infinite whenever the evaluation itself is invalid.
inline double constraint_violation(const std::vector<double>& constraints,
                                   EvalStatus status) {
  if (status != EvalStatus::ok) return kInf;
  double h = 0.0;
  for (double c : constraints) {
    if (c > 0.0) h += c * c;
  }
  return h;
}

struct EvaluationResult {
  std::vector<double> objectives;   // length m, +inf on failure
  std::vector<double> constraints;  // length |J|
  double violation = kInf;
  EvalStatus status = EvalStatus::hidden_failure;

  bool feasible() const { return status == EvalStatus::ok && violation == 0.0; }
  bool usable() const { return status == EvalStatus::ok; }
};

// Builds a result from raw blackbox outputs. Non-finite outputs are treated
// as a hidden failure so that h(x) = +inf and the point is never an incumbent.
inline EvaluationResult make_result(std::vector<double> objectives,
                                    std::vector<double> constraints,
                                    EvalStatus status = EvalStatus::ok) {
  EvaluationResult r;
  if (status == EvalStatus::ok) {
    for (double v : objectives)
      if (!std::isfinite(v)) status = EvalStatus::hidden_failure;
    for (double v : constraints)
      if (!std::isfinite(v)) status = EvalStatus::hidden_failure;
  }
  r.status = status;
  r.violation = constraint_violation(constraints, status);
  if (status != EvalStatus::ok) {
    objectives.assign(objectives.size(), kInf);
  }
  r.objectives = std::move(objectives);
  r.constraints = std::move(constraints);
  return r;
}

struct EvaluatedPoint {
  DecisionPoint point;
  EvaluationResult result;
  std::uint64_t birth_index = 0;  // evaluation order, unique within a run

  const std::vector<double>& objectives() const { return result.objectives; }
  double h() const { return result.violation; }
  bool feasible() const { return result.feasible(); }
};

enum class Dominance {
  first,         // a dominates b
  second,        // b dominates a
  incomparable,  // neither dominates
  mixed,         // one feasible, one infeasible: never compared
  equal,         // identical objective vectors (and h when infeasible)
};

namespace detail {

struct ParetoAcc {
  bool a_le = true, b_le = true, a_lt = false, b_lt = false;

  void feed(double a, double b) {
    if (a < b) {
      b_le = false;
      a_lt = true;
    } else if (b < a) {
      a_le = false;
      b_lt = true;
    }
  }

  Dominance verdict() const {
    if (a_le && !b_le) return a_lt ? Dominance::first : Dominance::equal;
    if (b_le && !a_le) return Dominance::second;
    if (a_le && b_le) return Dominance::equal;
    return Dominance::incomparable;
  }
};

// Componentwise comparison of two vectors under the Pareto order.
// `first` means a <= b with at least one strict inequality.
inline Dominance pareto_compare(const std::vector<double>& a,
                                const std::vector<double>& b) {
  ParetoAcc acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc.feed(a[i], b[i]);
  return acc.verdict();
}

// Joint (f, h) comparison used between infeasible points.
inline Dominance pareto_compare_fh(const EvaluatedPoint& a,
                                   const EvaluatedPoint& b) {
  ParetoAcc acc;
  const auto& oa = a.objectives();
  const auto& ob = b.objectives();
  for (std::size_t i = 0; i < oa.size(); ++i) acc.feed(oa[i], ob[i]);
  acc.feed(a.h(), b.h());
  return acc.verdict();
}

}  // namespace detail

// Constrained dominance: feasible pairs compare objectives only, infeasible
// pairs compare objectives and violation jointly, mixed pairs never compare.
inline Dominance dominates(const EvaluatedPoint& a, const EvaluatedPoint& b) {
  const bool fa = a.feasible(), fb = b.feasible();
  if (fa != fb) return Dominance::mixed;
  if (fa) return detail::pareto_compare(a.objectives(), b.objectives());
  return detail::pareto_compare_fh(a, b);
}

enum class FilterMode { feasible, infeasible };

// Dominance under an explicit relation, regardless of the points' own
// feasibility flags.
inline Dominance dominates_under(const EvaluatedPoint& a,
                                 const EvaluatedPoint& b, FilterMode mode) {
  if (mode == FilterMode::feasible)
    return detail::pareto_compare(a.objectives(), b.objectives());
  return detail::pareto_compare_fh(a, b);
}

// Maximal nondominated subset under the selected relation. Points with
// identical comparison vectors collapse onto the oldest one.
inline std::vector<EvaluatedPoint> filter_nondominated(
    const std::vector<EvaluatedPoint>& points, FilterMode mode) {
  std::vector<EvaluatedPoint> out;
  for (const auto& p : points) {
    bool keep = true;
    for (const auto& q : points) {
      if (&p == &q) continue;
      const Dominance d = dominates_under(q, p, mode);
      if (d == Dominance::first) {
        keep = false;
        break;
      }
      if (d == Dominance::equal && q.birth_index < p.birth_index) {
        keep = false;
        break;
      }
    }
    if (keep) out.push_back(p);
  }
  return out;
}

namespace detail {

struct PointKeyHash {
  std::size_t operator()(const DecisionPoint& p) const {
    // FNV-1a over the raw bit patterns; identity is exact bit equality.
    std::uint64_t h = 1469598103934665603ULL;
    for (double v : p) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      for (int k = 0; k < 8; ++k) {
        h ^= (bits >> (8 * k)) & 0xffU;
        h *= 1099511628211ULL;
      }
    }
    return static_cast<std::size_t>(h);
  }
};

struct PointKeyEq {
  bool operator()(const DecisionPoint& a, const DecisionPoint& b) const {
    if (a.size() != b.size()) return false;
    return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
  }
};

}  // namespace detail

// Evaluation cache keyed by exact coordinates. Candidates are constructed on
// the mesh around a shared center, so bit equality is the right identity and
// repeated candidates are recognized without tolerances.
class Cache {
 public:
  // Returns false (and leaves the cache unchanged) when the coordinates are
  // already present.
  bool insert(EvaluatedPoint p) {
    auto [it, fresh] = index_.try_emplace(p.point, entries_.size());
    if (!fresh) return false;
    entries_.push_back(std::move(p));
    return true;
  }

  const EvaluatedPoint* lookup(const DecisionPoint& p) const {
    auto it = index_.find(p);
    return it == index_.end() ? nullptr : &entries_[it->second];
  }

  bool contains(const DecisionPoint& p) const {
    return index_.find(p) != index_.end();
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Entries in birth order; deque keeps references stable across inserts.
  const std::deque<EvaluatedPoint>& entries() const { return entries_; }

 private:
  std::deque<EvaluatedPoint> entries_;
  std::unordered_map<DecisionPoint, std::size_t, detail::PointKeyHash,
                     detail::PointKeyEq>
      index_;
};

}  // namespace momads
