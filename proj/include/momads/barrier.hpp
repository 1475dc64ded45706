#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "momads/core.hpp"

namespace momads {

struct IterateEntry {
  EvaluatedPoint point;
  double frame_size = 1.0;
  // Integer mesh direction of the dominating move that created this entry;
  // consumed by the speculative search, cleared after an unsuccessful poll.
  std::optional<std::vector<double>> last_success_dir;
};

// The incumbent list the solver iterates on: mutually nondominated points,
// each with its own frame size. Holds feasible points as soon as any exist,
// otherwise infeasible ones.
struct IterateList {
  std::vector<IterateEntry> entries;
  bool feasible_based = true;
  // Bumped on every membership change; frame-size updates leave it alone.
  // Lets callers cache anything derived from the objective vectors.
  std::uint64_t revision = 0;

  double delta_max() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, e.frame_size);
    return m;
  }

  FilterMode mode() const {
    return feasible_based ? FilterMode::feasible : FilterMode::infeasible;
  }

  bool contains_objectives(const EvaluatedPoint& p) const {
    for (const auto& e : entries)
      if (dominates_under(e.point, p, mode()) == Dominance::equal) return true;
    return false;
  }

  // True when p would enter the list: not dominated by any entry and not an
  // exact duplicate of one.
  bool would_accept(const EvaluatedPoint& p) const {
    for (const auto& e : entries) {
      const Dominance d = dominates_under(e.point, p, mode());
      if (d == Dominance::first || d == Dominance::equal) return false;
    }
    return true;
  }

  // Inserts p with the given frame size, removing entries it dominates.
  // Returns false when p was rejected.
  bool insert(EvaluatedPoint p, double frame,
              std::optional<std::vector<double>> dir = std::nullopt) {
    if (!would_accept(p)) return false;
    std::erase_if(entries, [&](const IterateEntry& e) {
      return dominates_under(p, e.point, mode()) == Dominance::first;
    });
    entries.push_back(IterateEntry{std::move(p), frame, std::move(dir)});
    ++revision;
    return true;
  }

  void remove_if(const std::function<bool(const IterateEntry&)>& pred) {
    const std::size_t before = entries.size();
    std::erase_if(entries, pred);
    if (entries.size() != before) ++revision;
  }

  void reset(bool feasible) {
    entries.clear();
    feasible_based = feasible;
    ++revision;
  }
};

struct BarrierState {
  std::vector<EvaluatedPoint> feasible;     // nondominated feasible points
  std::vector<EvaluatedPoint> infeasible;   // nondominated infeasible, 0 < h <= h_max
  double h_max = kInf;
};

// Recomputes both incumbent sets from the cache. Points whose evaluation
// failed are not part of the domain and never become incumbents.
inline BarrierState rebuild_incumbents(const Cache& cache, double h_max) {
  std::vector<EvaluatedPoint> feas, infeas;
  for (const auto& p : cache.entries()) {
    if (!p.result.usable()) continue;
    if (p.feasible()) {
      feas.push_back(p);
    } else if (std::isfinite(p.h())) {
      infeas.push_back(p);
    }
  }
  BarrierState out;
  out.h_max = h_max;
  out.feasible = filter_nondominated(feas, FilterMode::feasible);
  auto u = filter_nondominated(infeas, FilterMode::infeasible);
  for (auto& p : u) {
    if (p.h() <= h_max) out.infeasible.push_back(std::move(p));
  }
  return out;
}

namespace detail {

// Gap score used to pick the frame center: for two objectives, the larger of
// the two adjacent gaps along the f1-sorted front; for more, the distance to
// the nearest other front member. Objectives are normalized to the front's
// own range first.
inline std::vector<double> gap_scores(const IterateList& list) {
  const std::size_t k = list.entries.size();
  std::vector<double> score(k, 0.0);
  if (k <= 1) return score;
  const std::size_t m = list.entries[0].point.objectives().size();

  std::vector<double> lo(m, kInf), hi(m, -kInf);
  for (const auto& e : list.entries) {
    for (std::size_t i = 0; i < m; ++i) {
      lo[i] = std::min(lo[i], e.point.objectives()[i]);
      hi[i] = std::max(hi[i], e.point.objectives()[i]);
    }
  }
  std::vector<double> span(m);
  for (std::size_t i = 0; i < m; ++i)
    span[i] = hi[i] > lo[i] ? hi[i] - lo[i] : 1.0;

  auto dist = [&](std::size_t a, std::size_t b) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = (list.entries[a].point.objectives()[i] -
                        list.entries[b].point.objectives()[i]) /
                       span[i];
      d2 += d * d;
    }
    return std::sqrt(d2);
  };

  if (m == 2) {
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const auto& fa = list.entries[a].point.objectives();
      const auto& fb = list.entries[b].point.objectives();
      if (fa[0] != fb[0]) return fa[0] < fb[0];
      if (fa[1] != fb[1]) return fa[1] < fb[1];
      return list.entries[a].point.birth_index <
             list.entries[b].point.birth_index;
    });
    for (std::size_t r = 0; r < k; ++r) {
      double g = 0.0;
      if (r > 0) g = std::max(g, dist(order[r - 1], order[r]));
      if (r + 1 < k) g = std::max(g, dist(order[r], order[r + 1]));
      score[order[r]] = g;
    }
  } else {
    for (std::size_t a = 0; a < k; ++a) {
      double nearest = kInf;
      for (std::size_t b = 0; b < k; ++b)
        if (b != a) nearest = std::min(nearest, dist(a, b));
      score[a] = nearest;
    }
  }
  return score;
}

}  // namespace detail

// Picks the incumbent iterate: among entries whose frame size clears the
// tau^w+ threshold, the one sitting next to the largest hole in the current
// front. Ties go to the oldest point. Callers may pass scores precomputed
// for the list's current revision.
inline const IterateEntry& select_frame_center(
    const IterateList& list, double tau, int w_plus,
    const std::vector<double>* cached_scores = nullptr) {
  assert(!list.entries.empty());
  const double threshold = std::pow(tau, w_plus) * list.delta_max();
  const std::vector<double> score_storage =
      cached_scores ? std::vector<double>() : detail::gap_scores(list);
  const std::vector<double>& score =
      cached_scores ? *cached_scores : score_storage;
  assert(score.size() == list.entries.size());

  const IterateEntry* best = nullptr;
  double best_score = -1.0;
  for (std::size_t i = 0; i < list.entries.size(); ++i) {
    const IterateEntry& e = list.entries[i];
    if (e.frame_size < threshold) continue;
    const bool better =
        best == nullptr || score[i] > best_score ||
        (score[i] == best_score &&
         e.point.birth_index < best->point.birth_index);
    if (better) {
      best = &e;
      best_score = score[i];
    }
  }
  assert(best != nullptr);  // delta_max entry always passes the threshold
  return *best;
}

// Second frame center from the class opposite to the primary: the least
// violated infeasible incumbent, or the feasible incumbent closest to the
// primary in objective space.
inline std::optional<EvaluatedPoint> select_secondary_center(
    const BarrierState& state, const IterateEntry& primary) {
  if (state.feasible.empty() || state.infeasible.empty()) return std::nullopt;
  if (primary.point.feasible()) {
    const EvaluatedPoint* best = nullptr;
    for (const auto& p : state.infeasible) {
      if (!best || p.h() < best->h() ||
          (p.h() == best->h() && p.birth_index < best->birth_index)) {
        best = &p;
      }
    }
    return *best;
  }
  const EvaluatedPoint* best = nullptr;
  double best_d = kInf;
  for (const auto& p : state.feasible) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < p.objectives().size(); ++i) {
      const double d = p.objectives()[i] - primary.point.objectives()[i];
      d2 += d * d;
    }
    if (!best || d2 < best_d ||
        (d2 == best_d && p.birth_index < best->birth_index)) {
      best = &p;
      best_d = d2;
    }
  }
  return *best;
}

enum class SuccessClass { dominating, improving, unsuccessful };

// End-of-iteration list update. New nondominated points enter with an
// enlarged frame on dominating iterations and the current frame otherwise;
// an unsuccessful iteration shrinks the current incumbent's frame.
inline SuccessClass update_iteration(
    IterateList& list, const std::vector<EvaluatedPoint>& new_points,
    const IterateEntry& current, double tau,
    const std::optional<EvaluatedPoint>& secondary = std::nullopt,
    double h_max = kInf) {
  const double frame = current.frame_size;

  bool dominating = false;
  for (const auto& p : new_points) {
    if (!p.result.usable()) continue;
    if (dominates(p, current.point) == Dominance::first) {
      dominating = true;
      break;
    }
    if (secondary && dominates(p, *secondary) == Dominance::first) {
      dominating = true;
      break;
    }
  }

  // A first feasible point retires an infeasible-based list.
  bool has_new_feasible = false;
  for (const auto& p : new_points) has_new_feasible |= p.feasible();
  if (!list.feasible_based && has_new_feasible) list.reset(true);

  auto eligible = [&](const EvaluatedPoint& p) {
    if (!p.result.usable()) return false;
    if (list.feasible_based) return p.feasible();
    return !p.feasible() && std::isfinite(p.h()) && p.h() <= h_max;
  };

  bool entered = false;
  const double new_frame = dominating ? frame / tau : frame;
  for (const auto& p : new_points) {
    if (!eligible(p)) continue;
    std::optional<std::vector<double>> dir;
    if (list.insert(p, new_frame, dir)) entered = true;
  }

  if (dominating) return SuccessClass::dominating;
  if (entered) return SuccessClass::improving;

  for (auto& e : list.entries) {
    if (detail::PointKeyEq{}(e.point.point, current.point.point)) {
      e.frame_size = tau * frame;
      e.last_success_dir.reset();
    }
  }
  return SuccessClass::unsuccessful;
}

// Nonincreasing barrier threshold. An unsuccessful iteration with infeasible
// trial activity tightens the barrier to the largest violation strictly
// below it; otherwise the threshold tracks the worst surviving incumbent.
inline double update_h_max(const BarrierState& state, SuccessClass success,
                           const std::vector<EvaluatedPoint>& new_points) {
  const double current = state.h_max;
  if (state.infeasible.empty()) return current;

  if (success == SuccessClass::unsuccessful) {
    bool trial_below = false;
    for (const auto& p : new_points) {
      if (p.result.usable() && !p.feasible() && std::isfinite(p.h()) &&
          p.h() < current) {
        trial_below = true;
        break;
      }
    }
    if (trial_below) {
      double best = -1.0;
      for (const auto& p : state.infeasible) {
        if (p.h() < current) best = std::max(best, p.h());
      }
      if (best > 0.0) return best;
    }
  }

  double worst = 0.0;
  for (const auto& p : state.infeasible) worst = std::max(worst, p.h());
  return worst > 0.0 ? std::min(worst, current) : current;
}

}  // namespace momads
