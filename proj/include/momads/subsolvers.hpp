#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "momads/core.hpp"
#include "momads/mesh.hpp"
#include "momads/models.hpp"

namespace momads {

// Scalarization value of an evaluated point.
using ScalarFn = std::function<double(const EvaluatedPoint&)>;

// True blackbox evaluation hook: registers the point with the run and
// returns it, or nullptr when the evaluation budget is exhausted. Callers
// must check the cache first; cached points are never re-evaluated.
using EvaluateFn = std::function<const EvaluatedPoint*(const DecisionPoint&)>;

struct NMCoefficients {
  double expansion = 2.0;             // > 1
  double outside_contraction = 0.5;   // in (0, 1)
  double inside_contraction = -0.5;   // in (-1, 0)
  double zone_radius = 2.0;           // >= 1, in frame units
  std::size_t eval_budget = 0;        // 0: use 80 + 10 n

  std::size_t budget_for(std::size_t n) const {
    return eval_budget > 0 ? eval_budget : 80 + 10 * n;
  }
};

// Three-way comparison driving the simplex order: scalar dominance or
// smaller violation wins, exact ties fall back to the older point.
inline bool best_psi(const EvaluatedPoint& a, double psi_a,
                     const EvaluatedPoint& b, double psi_b) {
  const double ha = a.h(), hb = b.h();
  auto psi_dominates = [](double pa, double haa, double pb, double hbb) {
    const bool feas_a = haa == 0.0, feas_b = hbb == 0.0;
    if (feas_a && feas_b) return pa < pb;
    if (!feas_a && !feas_b)
      return pa <= pb && haa <= hbb && (pa < pb || haa < hbb);
    return false;
  };
  if (psi_dominates(psi_a, ha, psi_b, hb) || ha < hb) return true;
  if (psi_dominates(psi_b, hb, psi_a, ha) || hb < ha) return false;
  return a.birth_index <= b.birth_index;
}

struct SimplexVertex {
  const EvaluatedPoint* point = nullptr;
  double psi = kInf;
};

// Vertices ordered so that each one is best_psi against its successor.
struct Simplex {
  std::vector<SimplexVertex> vertices;

  bool ordered() const {
    for (std::size_t i = 1; i < vertices.size(); ++i) {
      if (!best_psi(*vertices[i - 1].point, vertices[i - 1].psi,
                    *vertices[i].point, vertices[i].psi))
        return false;
    }
    return true;
  }

  void sort() {
    std::sort(vertices.begin(), vertices.end(),
              [](const SimplexVertex& a, const SimplexVertex& b) {
                if (a.point == b.point) return false;
                return best_psi(*a.point, a.psi, *b.point, b.psi);
              });
  }
};

namespace detail {

// Affine independence via modified Gram-Schmidt on the edge vectors.
// Returns false when some edge lies (numerically) in the span of the others.
inline bool affinely_independent(
    const std::vector<const EvaluatedPoint*>& pts, double tol = 1e-10) {
  if (pts.size() < 2) return true;
  const std::size_t n = pts[0]->point.size();
  if (pts.size() > n + 1) return false;
  std::vector<std::vector<double>> basis;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    std::vector<double> d(n);
    double norm0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = pts[k]->point[i] - pts[0]->point[i];
      norm0 += d[i] * d[i];
    }
    norm0 = std::sqrt(norm0);
    if (norm0 == 0.0) return false;
    for (const auto& b : basis) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += d[i] * b[i];
      for (std::size_t i = 0; i < n; ++i) d[i] -= dot * b[i];
    }
    double res = 0.0;
    for (double v : d) res += v * v;
    res = std::sqrt(res);
    if (res < tol * norm0) return false;
    for (auto& v : d) v /= res;
    basis.push_back(std::move(d));
  }
  return true;
}

}  // namespace detail

struct NMCandidates {
  DecisionPoint centroid;
  DecisionPoint reflection;
  DecisionPoint expansion;
  DecisionPoint outside;
  DecisionPoint inside;
};

// Reflection family through the centroid of the n best vertices, each
// projected onto the current mesh.
inline NMCandidates nm_candidates(const Simplex& simplex,
                                  const NMCoefficients& coeffs,
                                  double mesh_size,
                                  const DecisionPoint& mesh_center) {
  const std::size_t n = simplex.vertices.size() - 1;
  const std::size_t dim = simplex.vertices[0].point->point.size();
  NMCandidates out;
  out.centroid.assign(dim, 0.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < dim; ++i)
      out.centroid[i] += simplex.vertices[k].point->point[i];
  for (double& v : out.centroid) v /= static_cast<double>(n);

  const DecisionPoint& worst = simplex.vertices[n].point->point;
  auto along = [&](double step) {
    DecisionPoint x(dim);
    for (std::size_t i = 0; i < dim; ++i)
      x[i] = out.centroid[i] + step * (out.centroid[i] - worst[i]);
    return project_to_mesh(x, mesh_center, mesh_size);
  };
  out.reflection = along(1.0);
  out.expansion = along(coeffs.expansion);
  out.outside = along(coeffs.outside_contraction);
  out.inside = along(coeffs.inside_contraction);
  return out;
}

// One Nelder-Mead descent on the true blackbox, seeded from cached points
// near the incumbent. Returns the newly evaluated points. Terminates when a
// wanted candidate was already generated, when the simplex degenerates after
// mesh projection, when a shrink would be required, or at the local budget.
inline std::vector<const EvaluatedPoint*> nm_subproblem(
    const ScalarFn& psi, const EvaluatedPoint& incumbent, double frame_size,
    const Cache& cache, const EvaluateFn& evaluate_new,
    const NMCoefficients& coeffs, const DecisionPoint& mesh_center,
    double mesh_size, const std::vector<double>& lower,
    const std::vector<double>& upper) {
  const std::size_t n = incumbent.point.size();
  const std::size_t budget = coeffs.budget_for(n);
  std::vector<const EvaluatedPoint*> evaluated;

  // Candidate pool: clean cached points inside the zone, best first.
  std::vector<const EvaluatedPoint*> pool;
  const double radius = coeffs.zone_radius * frame_size;
  for (const auto& e : cache.entries()) {
    if (!e.result.usable()) continue;
    bool in = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(e.point[i] - incumbent.point[i]) > radius) {
        in = false;
        break;
      }
    }
    if (in) pool.push_back(&e);
  }
  if (pool.size() < n + 1) return evaluated;

  std::vector<double> pool_psi(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) pool_psi[i] = psi(*pool[i]);
  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (a == b) return false;
    return best_psi(*pool[a], pool_psi[a], *pool[b], pool_psi[b]);
  });

  // Greedy selection preserving affine independence.
  Simplex simplex;
  std::vector<const EvaluatedPoint*> chosen;
  for (std::size_t oi : order) {
    chosen.push_back(pool[oi]);
    if (!detail::affinely_independent(chosen)) {
      chosen.pop_back();
      continue;
    }
    simplex.vertices.push_back({pool[oi], pool_psi[oi]});
    if (simplex.vertices.size() == n + 1) break;
  }
  if (simplex.vertices.size() != n + 1) return evaluated;

  auto snap = [&](const DecisionPoint& x) {
    return snap_to_bounds_on_mesh(x, mesh_center, mesh_size, lower, upper);
  };
  // Evaluates a wanted candidate; nullopt in `stop` terms when the point was
  // already generated, falls off the domain, or the budget is gone.
  auto try_candidate = [&](const DecisionPoint& raw)
      -> std::optional<SimplexVertex> {
    const auto snapped = snap(raw);
    if (!snapped) return std::nullopt;
    if (cache.contains(*snapped)) return std::nullopt;
    if (evaluated.size() >= budget) return std::nullopt;
    const EvaluatedPoint* pt = evaluate_new(*snapped);
    if (!pt) return std::nullopt;
    evaluated.push_back(pt);
    return SimplexVertex{pt, psi(*pt)};
  };

  for (;;) {
    assert(simplex.ordered());
    if (evaluated.size() >= budget) break;
    const NMCandidates cand =
        nm_candidates(simplex, coeffs, mesh_size, mesh_center);

    const auto xr = try_candidate(cand.reflection);
    if (!xr) break;

    const SimplexVertex& best = simplex.vertices.front();
    const SimplexVertex& second_worst = simplex.vertices[n - 1];
    const SimplexVertex& worst = simplex.vertices[n];

    std::optional<SimplexVertex> accepted;
    if (best_psi(*xr->point, xr->psi, *best.point, best.psi)) {
      const auto xe = try_candidate(cand.expansion);
      if (!xe) break;
      accepted = best_psi(*xe->point, xe->psi, *xr->point, xr->psi) ? xe : xr;
    } else if (best_psi(*xr->point, xr->psi, *second_worst.point,
                        second_worst.psi)) {
      accepted = xr;
    } else if (best_psi(*xr->point, xr->psi, *worst.point, worst.psi)) {
      const auto xoc = try_candidate(cand.outside);
      if (!xoc) break;
      if (!best_psi(*xoc->point, xoc->psi, *xr->point, xr->psi)) break;
      accepted = xoc;
    } else {
      const auto xic = try_candidate(cand.inside);
      if (!xic) break;
      if (!best_psi(*xic->point, xic->psi, *worst.point, worst.psi)) break;
      accepted = xic;
    }

    simplex.vertices[n] = *accepted;
    simplex.sort();
    std::vector<const EvaluatedPoint*> pts;
    for (const auto& v : simplex.vertices) pts.push_back(v.point);
    if (!detail::affinely_independent(pts)) break;
  }
  return evaluated;
}

struct ModelSubproblem {
  const QuadraticModel* objective = nullptr;
  const std::vector<QuadraticModel>* constraints = nullptr;
  DecisionPoint box_center;  // trust region center, sup norm
  double box_radius = 1.0;
  std::vector<double> lower, upper;  // domain bounds, may be empty
  DecisionPoint start;
};

// Minimizes the model subproblem with a small single-objective direct
// search under a progressive barrier on the constraint models. Model
// evaluations are free; no blackbox call ever happens here. Returns the
// best feasible and best infeasible model points, projected onto the
// caller's mesh.
inline std::vector<DecisionPoint> mads_minimize(
    const ModelSubproblem& sub, std::size_t budget, std::mt19937_64& rng,
    const DecisionPoint& outer_mesh_center, double outer_mesh_size) {
  const std::size_t n = sub.start.size();

  auto model_h = [&](const DecisionPoint& x) {
    double h = 0.0;
    if (sub.constraints) {
      for (const auto& c : *sub.constraints) {
        const double v = c.evaluate(x);
        if (v > 0.0) h += v * v;
      }
    }
    return h;
  };
  auto inside = [&](const DecisionPoint& x) {
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(x[i] - sub.box_center[i]) > sub.box_radius) return false;
      if (!sub.lower.empty() && x[i] < sub.lower[i]) return false;
      if (!sub.upper.empty() && x[i] > sub.upper[i]) return false;
    }
    return true;
  };

  struct Best {
    DecisionPoint x;
    double q = kInf;
    double h = kInf;
    bool set = false;
  };
  Best feas, infeas;
  std::size_t evals = 0;
  auto consider = [&](const DecisionPoint& x) -> bool {
    const double q = sub.objective->evaluate(x);
    const double h = model_h(x);
    ++evals;
    bool improved = false;
    if (h == 0.0) {
      if (!feas.set || q < feas.q) {
        feas = {x, q, 0.0, true};
        improved = true;
      }
    } else if (!infeas.set || h < infeas.h ||
               (h == infeas.h && q < infeas.q)) {
      infeas = {x, q, h, true};
      improved = true;
    }
    return improved;
  };

  consider(sub.start);
  double frame = 0.5 * sub.box_radius;
  const double frame_min = 1e-12 * sub.box_radius;
  while (evals < budget && frame > frame_min) {
    const double mesh = mesh_size_from_frame(frame);
    const DecisionPoint& center = feas.set ? feas.x : infeas.x;
    const PollDirections dirs =
        generate_poll_directions(n, frame, mesh, rng);
    bool success = false;
    for (const auto& x : build_poll_set(center, dirs, mesh)) {
      if (evals >= budget) break;
      if (!inside(x)) continue;
      success |= consider(x);
    }
    frame = success ? std::min(coarsen(frame), 0.5 * sub.box_radius)
                    : refine(frame);
  }

  std::vector<DecisionPoint> out;
  auto push = [&](const Best& b) {
    if (!b.set) return;
    DecisionPoint p =
        project_to_mesh(b.x, outer_mesh_center, outer_mesh_size);
    for (const auto& q : out)
      if (detail::PointKeyEq{}(p, q)) return;
    out.push_back(std::move(p));
  };
  push(feas);
  push(infeas);
  if (out.empty())
    out.push_back(project_to_mesh(sub.start, outer_mesh_center, outer_mesh_size));
  return out;
}

}  // namespace momads
