#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "momads/barrier.hpp"
#include "momads/core.hpp"
#include "momads/formulations.hpp"
#include "momads/mesh.hpp"
#include "momads/problems.hpp"
#include "momads/search.hpp"
#include "momads/subsolvers.hpp"

namespace momads {

struct SolverConfig {
  double delta0 = 0.0;  // 0: a tenth of the smallest bound range, else 1
  double tau = 0.5;
  int w_plus = 3;
  std::size_t budget = 1000;
  VariantConfig variant;
  std::uint64_t seed = 1;
  double rho = 2.0;
  NMCoefficients nm;
  std::size_t inner_mads_budget_per_dim = 100;
  double frame_min = 1e-13;  // entries below this frame size are frozen
};

struct EvalRecord {
  std::size_t index = 0;  // 1-based, contiguous
  DecisionPoint point;
  std::vector<double> objectives;
  std::vector<double> constraints;
  double h = kInf;
  EvalStatus status = EvalStatus::ok;
};

struct IterationRecord {
  std::size_t iteration = 0;
  DecisionPoint center;
  std::optional<DecisionPoint> secondary;
  double frame_size = 0.0;
  double mesh_size = 0.0;
  SuccessClass success = SuccessClass::unsuccessful;
  double h_max = kInf;
  std::size_t evals_begin = 0;  // history indices [begin, end)
  std::size_t evals_end = 0;
  bool poll_skipped = false;
  std::size_t nm_invocations = 0;
  std::size_t nm_max_evals = 0;
};

struct RunHistory {
  std::vector<EvalRecord> evaluations;
  std::vector<IterationRecord> iterations;
};

class Solver {
 public:
  Solver(const ProblemSpec& problem, const std::vector<DecisionPoint>& starts,
         SolverConfig config)
      : problem_(&problem), config_(std::move(config)), rng_(config_.seed) {
    if (starts.empty()) throw std::invalid_argument("no start points");
    if (config_.budget < 1) throw std::invalid_argument("budget must be >= 1");
    if (config_.delta0 <= 0.0) config_.delta0 = default_frame(problem);

    for (const auto& x : starts) {
      if (x.size() != problem.n)
        throw std::invalid_argument("start point dimension mismatch");
      if (budget_left() == 0) break;
      if (!cache_.contains(x)) evaluate_and_record(x);
    }
    bool any_usable = false;
    for (const auto& e : cache_.entries()) any_usable |= e.result.usable();
    if (!any_usable)
      throw std::runtime_error("initialization failed: no start evaluated cleanly");

    // Seed the iterate list from the feasible points when any exist,
    // exclusively from the infeasible ones otherwise.
    std::vector<EvaluatedPoint> feas, infeas;
    for (const auto& e : cache_.entries()) {
      if (!e.result.usable()) continue;
      (e.feasible() ? feas : infeas).push_back(e);
      if (!e.feasible() && std::isfinite(e.h())) push_infeasible_front(e);
    }
    if (!feas.empty()) {
      list_.feasible_based = true;
      for (auto& p : filter_nondominated(feas, FilterMode::feasible))
        list_.entries.push_back({std::move(p), config_.delta0, std::nullopt});
    } else {
      list_.feasible_based = false;
      for (auto& p : filter_nondominated(infeas, FilterMode::infeasible))
        list_.entries.push_back({std::move(p), config_.delta0, std::nullopt});
    }
    if (list_.entries.empty())
      throw std::runtime_error("initialization failed: empty iterate list");
  }

  // Per-iteration inspection hook used by tests and diagnostics.
  std::function<void(const Solver&, const IterationRecord&)> on_iteration_end;

  const ProblemSpec& problem() const { return *problem_; }
  const SolverConfig& config() const { return config_; }
  const Cache& cache() const { return cache_; }
  const RunHistory& history() const { return history_; }
  const IterateList& iterate_list() const { return list_; }
  double h_max() const { return h_max_; }
  const std::vector<EvaluatedPoint>& infeasible_front() const {
    return infeasible_front_;
  }

  std::size_t budget_left() const {
    return config_.budget - history_.evaluations.size();
  }

  bool done() const {
    if (budget_left() == 0) return true;
    return list_.delta_max() <= config_.frame_min;  // everything frozen
  }

  // One full iteration: frame center selection, searches, poll, updates.
  void iterate() {
    assert(!done());
    const std::size_t k = history_.iterations.size();
    if (score_revision_ != list_.revision) {
      selection_scores_ = detail::gap_scores(list_);
      score_revision_ = list_.revision;
    }
    const IterateEntry primary = select_frame_center(
        list_, config_.tau, config_.w_plus, &selection_scores_);
    const std::optional<EvaluatedPoint> secondary = pick_secondary_center();

    IterationRecord rec;
    rec.iteration = k;
    rec.center = primary.point.point;
    rec.frame_size = primary.frame_size;
    rec.mesh_size = mesh_size_from_frame(primary.frame_size);
    if (secondary) rec.secondary = secondary->point;
    rec.evals_begin = history_.evaluations.size();

    SearchContext ctx;
    ctx.problem = problem_;
    ctx.cache = &cache_;
    ctx.evaluate = [this](const DecisionPoint& x) {
      return evaluate_and_record(x);
    };
    ctx.list = &list_;
    ctx.primary = &primary;
    ctx.secondary = secondary ? &*secondary : nullptr;
    ctx.frame_size = primary.frame_size;
    ctx.mesh_size = rec.mesh_size;
    ctx.rho = config_.rho;
    ctx.tau = config_.tau;
    ctx.opportunistic = config_.variant.opportunistic;
    ctx.nm = config_.nm;
    ctx.rng = &rng_;
    ctx.inner_mads_budget_per_dim = config_.inner_mads_budget_per_dim;

    std::vector<EvaluatedPoint> new_points;
    bool skip_poll = false;
    auto absorb = [&](const SearchOutcome& so, bool may_skip_poll) {
      for (const auto& p : so.evaluated) new_points.push_back(p);
      rec.nm_invocations += so.nm_invocations;
      rec.nm_max_evals = std::max(rec.nm_max_evals, so.nm_max_evals);
      if (so.success && may_skip_poll && config_.variant.opportunistic)
        skip_poll = true;
    };

    switch (config_.variant.variant) {
      case Variant::basic:
        break;
      case Variant::nm_dom:
        absorb(dominance_move_search(ctx, /*quadratic=*/false), true);
        break;
      case Variant::nm_multi:
        absorb(multimads_search(ctx, /*quadratic=*/false), true);
        break;
      case Variant::quad_dom:
        absorb(dominance_move_search(ctx, /*quadratic=*/true), true);
        break;
      case Variant::quad_multi:
        absorb(multimads_search(ctx, /*quadratic=*/true), true);
        break;
      case Variant::quad_dms:
        // A quadratic DMS success never shortcuts the iteration.
        absorb(quad_dms_search(ctx), false);
        break;
    }
    if (!skip_poll && budget_left() > 0)
      absorb(speculative_search(ctx), true);

    if (!skip_poll && budget_left() > 0) {
      poll_around(primary.point.point, rec.mesh_size, primary.frame_size,
                  /*full=*/true, primary, secondary, new_points);
      if (secondary && budget_left() > 0 &&
          !any_dominating(new_points, primary, secondary)) {
        poll_around(secondary->point, rec.mesh_size, primary.frame_size,
                    /*full=*/false, primary, secondary, new_points);
      }
    } else {
      rec.poll_skipped = true;
    }

    const SuccessClass success = update_iteration(
        list_, new_points, primary, config_.tau, secondary, h_max_);
    record_success_directions(new_points, primary, secondary, rec.mesh_size);

    BarrierState after;
    after.h_max = h_max_;
    for (const EvaluatedPoint* p : infeasible_incumbents())
      after.infeasible.push_back(*p);
    h_max_ = update_h_max(after, success, new_points);
    if (!list_.feasible_based) {
      list_.remove_if(
          [&](const IterateEntry& e) { return e.point.h() > h_max_; });
      assert(!list_.entries.empty());
    }

    rec.success = success;
    rec.h_max = h_max_;
    rec.evals_end = history_.evaluations.size();
    history_.iterations.push_back(rec);
    if (on_iteration_end) on_iteration_end(*this, history_.iterations.back());
  }

  void run() {
    while (!done()) iterate();
  }

  // Feasible nondominated set found so far.
  std::vector<EvaluatedPoint> pareto_front() const {
    if (list_.feasible_based) return extract_points(list_);
    return {};
  }

 private:
  static double default_frame(const ProblemSpec& p) {
    if (!p.bounded()) return 1.0;
    double smallest = kInf;
    for (std::size_t i = 0; i < p.n; ++i)
      smallest = std::min(smallest, p.upper[i] - p.lower[i]);
    return 0.1 * smallest;
  }

  static std::vector<EvaluatedPoint> extract_points(const IterateList& list) {
    std::vector<EvaluatedPoint> out;
    out.reserve(list.entries.size());
    for (const auto& e : list.entries) out.push_back(e.point);
    return out;
  }

  // Infeasible incumbents under the current barrier. The feasible side of
  // the state is never materialized here: with the list feasible-based the
  // feasible incumbents are exactly the list, and with it infeasible-based
  // no feasible point exists at all.
  std::vector<const EvaluatedPoint*> infeasible_incumbents() const {
    std::vector<const EvaluatedPoint*> out;
    for (const auto& p : infeasible_front_)
      if (p.h() <= h_max_) out.push_back(&p);
    return out;
  }

  // Second frame center: the least violated infeasible incumbent, present
  // only when both classes are populated (so the primary is feasible).
  std::optional<EvaluatedPoint> pick_secondary_center() const {
    if (!list_.feasible_based) return std::nullopt;
    const EvaluatedPoint* best = nullptr;
    for (const EvaluatedPoint* p : infeasible_incumbents()) {
      if (!best || p->h() < best->h() ||
          (p->h() == best->h() && p->birth_index < best->birth_index)) {
        best = p;
      }
    }
    if (!best) return std::nullopt;
    return *best;
  }

  void push_infeasible_front(const EvaluatedPoint& p) {
    for (const auto& q : infeasible_front_) {
      const Dominance d = dominates_under(q, p, FilterMode::infeasible);
      if (d == Dominance::first || d == Dominance::equal) return;
    }
    std::erase_if(infeasible_front_, [&](const EvaluatedPoint& q) {
      return dominates_under(p, q, FilterMode::infeasible) == Dominance::first;
    });
    infeasible_front_.push_back(p);
  }

  const EvaluatedPoint* evaluate_and_record(const DecisionPoint& x) {
    assert(!cache_.contains(x));
    if (budget_left() == 0) return nullptr;
    EvaluatedPoint p;
    p.point = x;
    p.result = problem_->evaluate(x);
    p.birth_index = history_.evaluations.size() + 1;

    EvalRecord rec;
    rec.index = p.birth_index;
    rec.point = x;
    rec.objectives = p.result.objectives;
    rec.constraints = p.result.constraints;
    rec.h = p.result.violation;
    rec.status = p.result.status;
    history_.evaluations.push_back(std::move(rec));

    if (p.result.usable() && !p.feasible() && std::isfinite(p.h()))
      push_infeasible_front(p);
    cache_.insert(std::move(p));
    return cache_.lookup(x);
  }

  bool any_dominating(const std::vector<EvaluatedPoint>& pts,
                      const IterateEntry& primary,
                      const std::optional<EvaluatedPoint>& secondary) const {
    for (const auto& p : pts) {
      if (dominates(p, primary.point) == Dominance::first) return true;
      if (secondary && dominates(p, *secondary) == Dominance::first)
        return true;
    }
    return false;
  }

  void poll_around(const DecisionPoint& center, double mesh, double frame,
                   bool full, const IterateEntry& primary,
                   const std::optional<EvaluatedPoint>& secondary,
                   std::vector<EvaluatedPoint>& new_points) {
    const PollDirections dirs =
        generate_poll_directions(problem_->n, frame, mesh, rng_);
    std::vector<DecisionPoint> candidates;
    if (full) {
      candidates = build_poll_set(center, dirs, mesh);
    } else {
      // Reduced two-direction poll for the secondary center.
      for (const auto& d : {dirs.directions[0], negate(dirs.directions[0])}) {
        DecisionPoint x(center.size());
        for (std::size_t i = 0; i < center.size(); ++i)
          x[i] = center[i] + mesh * d[i];
        candidates.push_back(std::move(x));
      }
    }
    for (const auto& raw : candidates) {
      if (budget_left() == 0) return;
      const auto snapped = snap_to_bounds_on_mesh(raw, center, mesh,
                                                  problem_->lower,
                                                  problem_->upper);
      if (!snapped || cache_.contains(*snapped)) continue;
      const EvaluatedPoint* pt = evaluate_and_record(*snapped);
      if (!pt) return;
      new_points.push_back(*pt);
      if (config_.variant.opportunistic) {
        bool dominating = dominates(*pt, primary.point) == Dominance::first;
        if (secondary && !dominating)
          dominating = dominates(*pt, *secondary) == Dominance::first;
        if (dominating) return;  // opportunistic poll termination
      }
    }
  }

  static std::vector<double> negate(std::vector<double> v) {
    for (auto& x : v) x = -x;
    return v;
  }

  // Remembers the integer mesh direction of each dominating move on the
  // entry it created, feeding the speculative search.
  void record_success_directions(
      const std::vector<EvaluatedPoint>& new_points,
      const IterateEntry& primary,
      const std::optional<EvaluatedPoint>& secondary, double mesh) {
    for (const auto& p : new_points) {
      const DecisionPoint* from = nullptr;
      if (dominates(p, primary.point) == Dominance::first)
        from = &primary.point.point;
      else if (secondary && dominates(p, *secondary) == Dominance::first)
        from = &secondary->point;
      if (!from) continue;
      std::vector<double> dir(p.point.size());
      for (std::size_t i = 0; i < dir.size(); ++i)
        dir[i] = std::round((p.point[i] - (*from)[i]) / mesh);
      for (auto& e : list_.entries) {
        if (e.point.birth_index == p.birth_index) {
          e.last_success_dir = dir;
          break;
        }
      }
    }
  }

  const ProblemSpec* problem_;
  SolverConfig config_;
  Cache cache_;
  RunHistory history_;
  IterateList list_;
  std::vector<EvaluatedPoint> infeasible_front_;  // nondominated, finite h
  double h_max_ = kInf;
  std::mt19937_64 rng_;
  // Frame-center scores memoized on the list revision; membership changes
  // are what invalidate them, frame-size updates do not.
  std::vector<double> selection_scores_;
  std::uint64_t score_revision_ = ~std::uint64_t{0};
};

struct SolveResult {
  std::vector<EvaluatedPoint> front;  // feasible nondominated points
  RunHistory history;
};

inline SolveResult solve(const ProblemSpec& problem,
                         const std::vector<DecisionPoint>& starts,
                         const SolverConfig& config) {
  Solver solver(problem, starts, config);
  solver.run();
  return SolveResult{solver.pareto_front(), solver.history()};
}

}  // namespace momads
