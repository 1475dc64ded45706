#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "momads/barrier.hpp"
#include "momads/core.hpp"
#include "momads/formulations.hpp"
#include "momads/mesh.hpp"
#include "momads/models.hpp"
#include "momads/problems.hpp"
#include "momads/subsolvers.hpp"

namespace momads {

enum class Variant { basic, nm_dom, nm_multi, quad_dms, quad_dom, quad_multi };

struct VariantConfig {
  Variant variant = Variant::basic;
  bool opportunistic = true;
};

inline const char* variant_name(Variant v) {
  switch (v) {
    case Variant::basic: return "basic";
    case Variant::nm_dom: return "NM-DoM";
    case Variant::nm_multi: return "NM-Multi";
    case Variant::quad_dms: return "Quad-DMS";
    case Variant::quad_dom: return "Quad-DoM";
    case Variant::quad_multi: return "Quad-Multi";
  }
  return "?";
}

inline std::optional<Variant> parse_variant(const std::string& name) {
  for (Variant v : {Variant::basic, Variant::nm_dom, Variant::nm_multi,
                    Variant::quad_dms, Variant::quad_dom, Variant::quad_multi})
    if (name == variant_name(v)) return v;
  return std::nullopt;
}

struct SearchOutcome {
  std::vector<EvaluatedPoint> evaluated;
  bool success = false;          // some new point dominates a frame center
  std::size_t nm_invocations = 0;
  std::size_t nm_max_evals = 0;  // largest true-evaluation count of one NM call
  std::size_t quad_subproblems = 0;  // model subproblems attempted
};

struct SearchContext {
  const ProblemSpec* problem = nullptr;
  Cache* cache = nullptr;
  EvaluateFn evaluate;
  const IterateList* list = nullptr;
  const IterateEntry* primary = nullptr;
  const EvaluatedPoint* secondary = nullptr;  // optional second frame center
  double frame_size = 1.0;
  double mesh_size = 1.0;
  double rho = 2.0;
  double tau = 0.5;
  bool opportunistic = true;
  NMCoefficients nm;
  std::mt19937_64* rng = nullptr;
  std::size_t inner_mads_budget_per_dim = 100;

  bool dominates_a_center(const EvaluatedPoint& p) const {
    if (dominates(p, primary->point) == Dominance::first) return true;
    return secondary && dominates(p, *secondary) == Dominance::first;
  }
};

namespace detail {

// Runs the quadratic backend for one scalarization: fit, minimize the model
// inside the trust box, then truly evaluate the proposed points.
inline void quad_backend(const SearchContext& ctx, const ScalarFn& psi,
                         SearchOutcome& out) {
  const DecisionPoint& center = ctx.primary->point.point;
  const auto suite = fit_model_suite(*ctx.cache, center, ctx.frame_size,
                                     ctx.rho, psi, ctx.problem->j);
  if (!suite) return;
  out.quad_subproblems += 1;

  ModelSubproblem sub;
  sub.objective = &suite->objective;
  sub.constraints = &suite->constraints;
  sub.box_center = center;
  sub.box_radius = ctx.rho * ctx.frame_size;
  sub.lower = ctx.problem->lower;
  sub.upper = ctx.problem->upper;
  sub.start = center;

  const std::size_t budget =
      ctx.inner_mads_budget_per_dim * ctx.problem->n;
  const auto proposals =
      mads_minimize(sub, budget, *ctx.rng, center, ctx.mesh_size);
  for (const auto& raw : proposals) {
    const auto snapped = snap_to_bounds_on_mesh(
        raw, center, ctx.mesh_size, ctx.problem->lower, ctx.problem->upper);
    if (!snapped || ctx.cache->contains(*snapped)) continue;
    const EvaluatedPoint* pt = ctx.evaluate(*snapped);
    if (!pt) return;
    out.evaluated.push_back(*pt);
    if (ctx.dominates_a_center(*pt)) {
      out.success = true;
      if (ctx.opportunistic) return;
    }
  }
}

inline void nm_backend(const SearchContext& ctx, const ScalarFn& psi,
                       SearchOutcome& out) {
  const auto news = nm_subproblem(
      psi, ctx.primary->point, ctx.frame_size, *ctx.cache, ctx.evaluate,
      ctx.nm, ctx.primary->point.point, ctx.mesh_size, ctx.problem->lower,
      ctx.problem->upper);
  out.nm_invocations += 1;
  out.nm_max_evals = std::max(out.nm_max_evals, news.size());
  for (const EvaluatedPoint* pt : news) {
    out.evaluated.push_back(*pt);
    if (ctx.dominates_a_center(*pt)) out.success = true;
  }
}

inline void run_backend(const SearchContext& ctx, bool quadratic,
                        const ScalarFn& psi, SearchOutcome& out) {
  if (quadratic) {
    quad_backend(ctx, psi, out);
  } else {
    nm_backend(ctx, psi, out);
  }
}

}  // namespace detail

// Extreme incumbents push their own extreme objectives further; interior
// incumbents chase the signed distance to the zone below their reference
// point, filling gaps around them.
inline SearchOutcome multimads_search(const SearchContext& ctx,
                                      bool quadratic_backend) {
  SearchOutcome out;
  const EvaluatedPoint& xk = ctx.primary->point;
  const auto extremes = extreme_objective_indices(xk, *ctx.list);
  if (!extremes.empty()) {
    for (std::size_t i : extremes) {
      ScalarFn psi = [i](const EvaluatedPoint& p) { return p.objectives()[i]; };
      detail::run_backend(ctx, quadratic_backend, psi, out);
      if (out.success && ctx.opportunistic) break;
    }
    return out;
  }
  const ReferenceVector r = compute_reference_point(xk, *ctx.list);
  ScalarFn psi = [r](const EvaluatedPoint& p) {
    return psi_distance(p.objectives(), r);
  };
  detail::run_backend(ctx, quadratic_backend, psi, out);
  return out;
}

// Minimizes the dominance move against the other incumbents' objectives.
inline SearchOutcome dominance_move_search(const SearchContext& ctx,
                                           bool quadratic_backend) {
  SearchOutcome out;
  const auto move = std::make_shared<DominanceMoveFn>(
      build_reference_set(ctx.primary->point, *ctx.list));
  ScalarFn psi = [move](const EvaluatedPoint& p) {
    return (*move)(p.objectives());
  };
  detail::run_backend(ctx, quadratic_backend, psi, out);
  return out;
}

namespace detail {

// All index subsets of {0..m-1} of the given size, lexicographic.
inline std::vector<std::vector<std::size_t>> index_combinations(
    std::size_t m, std::size_t size) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> combo(size);
  for (std::size_t i = 0; i < size; ++i) combo[i] = i;
  for (;;) {
    out.push_back(combo);
    std::size_t i = size;
    while (i > 0 && combo[i - 1] == m - size + i - 1) --i;
    if (i == 0) break;
    ++combo[i - 1];
    for (std::size_t k = i; k < size; ++k) combo[k] = combo[k - 1] + 1;
  }
  return out;
}

}  // namespace detail

// Level-wise minimization of the max over objective subsets, stopping as
// soon as a level changes the trial iterate list. Worst case solves
// 2^m - 1 model subproblems.
inline SearchOutcome quad_dms_search(const SearchContext& ctx) {
  SearchOutcome out;
  const std::size_t m = ctx.problem->m;

  for (std::size_t level = 1; level <= m; ++level) {
    const std::size_t level_begin = out.evaluated.size();
    for (const auto& combo : detail::index_combinations(m, level)) {
      ScalarFn psi = [combo](const EvaluatedPoint& p) {
        double v = -kInf;
        for (std::size_t i : combo) v = std::max(v, p.objectives()[i]);
        return v;
      };
      SearchOutcome sub;
      detail::quad_backend(ctx, psi, sub);
      for (auto& p : sub.evaluated) out.evaluated.push_back(std::move(p));
      out.success |= sub.success;
      out.quad_subproblems += sub.quad_subproblems;
    }

    // Stop once this level's points would change the iterate list.
    bool changed = false;
    for (std::size_t i = level_begin; i < out.evaluated.size(); ++i) {
      const EvaluatedPoint& p = out.evaluated[i];
      if (!p.result.usable()) continue;
      if (!ctx.list->feasible_based && p.feasible()) {
        changed = true;
        break;
      }
      const bool compatible =
          ctx.list->feasible_based ? p.feasible() : !p.feasible();
      if (compatible && ctx.list->would_accept(p)) {
        changed = true;
        break;
      }
    }
    if (changed) break;
  }
  return out;
}

// One long step along the direction of the last dominating move.
inline SearchOutcome speculative_search(const SearchContext& ctx) {
  SearchOutcome out;
  if (!ctx.primary->last_success_dir) return out;
  const auto& dir = *ctx.primary->last_success_dir;
  const DecisionPoint& xk = ctx.primary->point.point;
  DecisionPoint cand(xk.size());
  for (std::size_t i = 0; i < xk.size(); ++i)
    cand[i] = xk[i] + 4.0 * ctx.mesh_size * dir[i];
  if (!ctx.problem->within_bounds(cand)) return out;
  if (ctx.cache->contains(cand)) return out;
  const EvaluatedPoint* pt = ctx.evaluate(cand);
  if (!pt) return out;
  out.evaluated.push_back(*pt);
  out.success = ctx.dominates_a_center(*pt);
  return out;
}

}  // namespace momads
