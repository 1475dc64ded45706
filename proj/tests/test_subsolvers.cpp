#include <random>

#include "momads/subsolvers.hpp"
#include "test_util.hpp"

using namespace momads;
using test_util::infeasible_point;
using test_util::make_point;
using test_util::obj_point;
using test_util::uniform;

namespace {

// Minimal true-evaluation harness for the NM procedure: a scalar function
// of one decision variable, cached like a solver run would.
struct MiniRun {
  std::function<double(double)> f;
  Cache cache;
  std::uint64_t births = 0;
  std::size_t eval_limit = 1000;
  std::size_t evals = 0;

  const EvaluatedPoint* seed(double x) {
    EvaluatedPoint p = make_point({x}, {f(x)}, {}, ++births);
    cache.insert(p);
    return cache.lookup({x});
  }

  EvaluateFn evaluator() {
    return [this](const DecisionPoint& x) -> const EvaluatedPoint* {
      if (evals >= eval_limit) return nullptr;
      ++evals;
      EvaluatedPoint p = make_point(x, {f(x[0])}, {}, ++births);
      cache.insert(p);
      return cache.lookup(x);
    };
  }
};

ScalarFn first_objective() {
  return [](const EvaluatedPoint& p) { return p.objectives()[0]; };
}

}  // namespace

TEST_CASE("best point comparison") {
  SECTION("feasible pairs compare the scalar") {
    const auto a = obj_point({1}, 1), b = obj_point({2}, 2);
    CHECK(best_psi(a, 1.0, b, 2.0));
    CHECK_FALSE(best_psi(b, 2.0, a, 1.0));
  }
  SECTION("infeasible pairs need both scalar and violation") {
    const auto a = infeasible_point({1}, 0.25, 1);
    const auto b = infeasible_point({1}, 0.5, 2);
    CHECK(best_psi(a, 3.0, b, 3.0));   // equal psi, smaller h
    CHECK(best_psi(a, 2.0, b, 3.0));   // dominating pair
    CHECK_FALSE(best_psi(b, 2.0, a, 3.0));  // psi better but h worse: a wins by h
  }
  SECTION("smaller violation wins across classes") {
    const auto feas = obj_point({5}, 9);
    const auto infeas = infeasible_point({0}, 0.1, 1);
    CHECK(best_psi(feas, 100.0, infeas, -100.0));
  }
  SECTION("exact ties go to the older point") {
    const auto a = obj_point({1}, 3), b = obj_point({1}, 7);
    CHECK(best_psi(a, 1.0, b, 1.0));
    CHECK_FALSE(best_psi(b, 1.0, a, 1.0));
  }
  SECTION("transitive over random trial points") {
    std::mt19937_64 gen(3);
    int exercised = 0;
    for (int t = 0; t < 10000; ++t) {
      auto draw = [&](std::uint64_t birth) {
        const bool infeas = gen() & 1;
        const double psi = std::round(uniform(gen, 0, 3) * 2) / 2;
        const double h =
            infeas ? std::round(uniform(gen, 1, 3)) * 0.25 : 0.0;
        auto p = infeas ? infeasible_point({psi}, h, birth)
                        : obj_point({psi}, birth);
        return std::make_pair(p, psi);
      };
      const auto [a, pa] = draw(1);
      const auto [b, pb] = draw(2);
      const auto [c, pc] = draw(3);
      if (best_psi(a, pa, b, pb) && best_psi(b, pb, c, pc)) {
        ++exercised;
        CHECK(best_psi(a, pa, c, pc));
      }
    }
    CHECK(exercised > 1000);
  }
}

TEST_CASE("nelder-mead candidates") {
  // Two vertices in one dimension, best at 0, worst at 1.
  std::vector<EvaluatedPoint> pts = {obj_point({0}, 1), obj_point({1}, 2)};
  Simplex s;
  s.vertices = {{&pts[0], 0.0}, {&pts[1], 1.0}};
  REQUIRE(s.ordered());

  NMCoefficients coeffs;
  const auto cand = nm_candidates(s, coeffs, 0.25, {0.0});
  CHECK(cand.centroid == DecisionPoint{0.0});
  CHECK(cand.reflection == DecisionPoint{-1.0});
  CHECK(cand.expansion == DecisionPoint{-2.0});
  CHECK(cand.outside == DecisionPoint{-0.5});
  CHECK(cand.inside == DecisionPoint{0.5});

  SECTION("candidates are projected onto the mesh") {
    std::vector<EvaluatedPoint> q = {obj_point({0.1}, 1), obj_point({0.93}, 2)};
    Simplex t;
    t.vertices = {{&q[0], 0.0}, {&q[1], 1.0}};
    const auto c = nm_candidates(t, coeffs, 0.25, {0.1});
    for (const auto& x : {c.reflection, c.expansion, c.outside, c.inside})
      CHECK(on_mesh(x, {0.1}, 0.25));
  }
  SECTION("degenerate centroid of identical best vertices") {
    std::vector<EvaluatedPoint> q = {obj_point({2.0, 1.0}, 1),
                                     obj_point({2.0, 1.0}, 2),
                                     obj_point({3.0, 5.0}, 3)};
    Simplex t;
    t.vertices = {{&q[0], 0.0}, {&q[1], 0.0}, {&q[2], 9.0}};
    const auto c = nm_candidates(t, coeffs, 0.5, {0.0, 0.0});
    CHECK(c.centroid == DecisionPoint{2.0, 1.0});
  }
}

TEST_CASE("nelder-mead subproblem") {
  NMCoefficients coeffs;
  const std::vector<double> lo = {-50.0}, hi = {50.0};

  SECTION("too few cached points stops immediately") {
    MiniRun run;
    run.f = [](double x) { return x * x; };
    run.seed(1.0);
    const auto out =
        nm_subproblem(first_objective(), *run.cache.lookup({1.0}), 2.0,
                      run.cache, run.evaluator(), coeffs, {1.0}, 1.0, lo, hi);
    CHECK(out.empty());
    CHECK(run.evals == 0);
  }

  SECTION("descends a convex function monotonically") {
    MiniRun run;
    run.f = [](double x) { return (x - 3.0) * (x - 3.0); };
    run.seed(0.0);
    const auto* incumbent = run.seed(1.0);
    const auto out =
        nm_subproblem(first_objective(), *incumbent, 2.0, run.cache,
                      run.evaluator(), coeffs, {1.0}, 1.0, lo, hi);
    REQUIRE(!out.empty());
    double best = incumbent->objectives()[0];
    for (const auto* p : out) {
      const double v = p->objectives()[0];
      if (v < best) best = v;
    }
    CHECK(best == 0.0);  // lands exactly on x = 3 on the unit mesh
  }

  SECTION("a cached reflection stops the search with no evaluations") {
    MiniRun run;
    run.f = [](double x) { return (x - 3.0) * (x - 3.0); };
    // Zone around the incumbent x=0 with frame 0.5 is [-1, 1]; the simplex
    // picks {1, 0} and reflects to x=2, which sits outside the zone but was
    // already generated.
    const auto* incumbent = run.seed(0.0);
    run.seed(1.0);
    run.seed(-1.0);
    run.seed(2.0);  // the upcoming reflection target
    const auto out =
        nm_subproblem(first_objective(), *incumbent, 0.5, run.cache,
                      run.evaluator(), coeffs, {0.0}, 1.0, lo, hi);
    CHECK(out.empty());
    CHECK(run.evals == 0);
  }

  SECTION("the local evaluation budget is honored") {
    MiniRun run;
    run.f = [](double x) { return std::cos(x / 10.0) + x * x * 1e-4; };
    run.seed(0.0);
    const auto* incumbent = run.seed(1.0);
    NMCoefficients capped = coeffs;
    capped.eval_budget = 3;
    const auto out =
        nm_subproblem(first_objective(), *incumbent, 2.0, run.cache,
                      run.evaluator(), capped, {1.0}, 1.0, lo, hi);
    CHECK(out.size() <= 3);
    CHECK(run.evals <= 3);
  }

  SECTION("default budget scales with dimension") {
    CHECK(NMCoefficients{}.budget_for(4) == 120);
    NMCoefficients explicit_budget;
    explicit_budget.eval_budget = 7;
    CHECK(explicit_budget.budget_for(4) == 7);
  }
}

TEST_CASE("model minimization") {
  std::mt19937_64 gen(17);

  QuadraticModel parabola;  // (x - 1)^2
  parabola.alpha0 = 1.0;
  parabola.gradient0 = {-2.0};
  parabola.hessian = {{2.0}};
  const std::vector<QuadraticModel> no_constraints;

  SECTION("finds the minimizer of a convex model") {
    ModelSubproblem sub;
    sub.objective = &parabola;
    sub.constraints = &no_constraints;
    sub.box_center = {0.0};
    sub.box_radius = 2.0;
    sub.start = {0.0};
    const auto pts = mads_minimize(sub, 500, gen, {0.0}, 1.0 / 1024.0);
    REQUIRE(!pts.empty());
    CHECK_THAT(pts[0][0], Catch::Matchers::WithinAbs(1.0, 1e-2));
  }

  SECTION("an optimal mesh-aligned start is returned unchanged") {
    QuadraticModel sq;  // x^2, minimum at the start
    sq.gradient0 = {0.0};
    sq.hessian = {{2.0}};
    ModelSubproblem sub;
    sub.objective = &sq;
    sub.constraints = &no_constraints;
    sub.box_center = {0.0};
    sub.box_radius = 2.0;
    sub.start = {0.0};
    const auto pts = mads_minimize(sub, 200, gen, {0.0}, 0.5);
    REQUIRE(!pts.empty());
    CHECK(pts[0][0] == 0.0);
  }

  SECTION("an infeasible model problem returns the least violated point") {
    QuadraticModel impossible;  // constraint model fixed at +1
    impossible.alpha0 = 1.0;
    impossible.gradient0 = {0.0};
    impossible.hessian = {{0.0}};
    std::vector<QuadraticModel> constraints = {impossible};
    ModelSubproblem sub;
    sub.objective = &parabola;
    sub.constraints = &constraints;
    sub.box_center = {0.0};
    sub.box_radius = 2.0;
    sub.start = {0.0};
    const auto pts = mads_minimize(sub, 200, gen, {0.0}, 1.0 / 1024.0);
    REQUIRE(pts.size() == 1);
    CHECK(std::abs(pts[0][0]) <= 2.0 + 1e-9);
    // Violation is constant, so the tie breaks on the model objective.
    CHECK_THAT(pts[0][0], Catch::Matchers::WithinAbs(1.0, 1e-2));
  }

  SECTION("returned points are mesh fixed points") {
    ModelSubproblem sub;
    sub.objective = &parabola;
    sub.constraints = &no_constraints;
    sub.box_center = {0.25};
    sub.box_radius = 2.0;
    sub.start = {0.25};
    const DecisionPoint mesh_center = {0.25};
    for (const double mesh : {0.5, 0.125, 1.0 / 4096.0}) {
      const auto pts = mads_minimize(sub, 300, gen, mesh_center, mesh);
      for (const auto& p : pts) CHECK(on_mesh(p, mesh_center, mesh));
    }
  }
}
