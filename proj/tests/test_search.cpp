#include <random>

#include "momads/search.hpp"
#include "test_util.hpp"

using namespace momads;
using test_util::make_point;
using test_util::obj_point;

namespace {

// A small harness owning everything a SearchContext points at.
struct Fixture {
  ProblemSpec problem;
  Cache cache;
  IterateList list;
  IterateEntry primary;
  std::mt19937_64 rng{5};
  std::uint64_t births = 0;
  std::size_t evals = 0;
  std::size_t eval_limit = 10000;

  explicit Fixture(ProblemSpec p) : problem(std::move(p)) {}

  const EvaluatedPoint* seed(const DecisionPoint& x) {
    EvaluatedPoint pt;
    pt.point = x;
    pt.result = problem.evaluate(x);
    pt.birth_index = ++births;
    cache.insert(pt);
    return cache.lookup(x);
  }

  void build_list_from_cache() {
    std::vector<EvaluatedPoint> feas;
    for (const auto& e : cache.entries())
      if (e.feasible()) feas.push_back(e);
    list.entries.clear();
    list.feasible_based = true;
    for (auto& p : filter_nondominated(feas, FilterMode::feasible))
      list.entries.push_back({std::move(p), 0.5, std::nullopt});
  }

  SearchContext ctx(std::size_t primary_index, double frame = 0.5) {
    primary = list.entries[primary_index];
    SearchContext c;
    c.problem = &problem;
    c.cache = &cache;
    c.evaluate = [this](const DecisionPoint& x) -> const EvaluatedPoint* {
      if (evals >= eval_limit) return nullptr;
      ++evals;
      EvaluatedPoint pt;
      pt.point = x;
      pt.result = problem.evaluate(x);
      pt.birth_index = ++births;
      cache.insert(pt);
      return cache.lookup(x);
    };
    c.list = &list;
    c.primary = &primary;
    c.frame_size = frame;
    c.mesh_size = mesh_size_from_frame(frame);
    c.rng = &rng;
    return c;
  }
};

ProblemSpec biobjective_toy() {
  ProblemSpec p;
  p.name = "toy";
  p.n = 1;
  p.m = 2;
  p.lower = {-2.0};
  p.upper = {2.0};
  p.evaluator = [](const DecisionPoint& x) {
    return RawEvaluation{
        {x[0] * x[0], (x[0] - 1.0) * (x[0] - 1.0)}, {}, false};
  };
  return p;
}

ProblemSpec triobjective_flat() {
  // Three identical objectives: every model minimizer collapses onto the
  // cached minimum, so no level of the DMS search ever succeeds.
  ProblemSpec p;
  p.name = "flat3";
  p.n = 1;
  p.m = 3;
  p.lower = {-2.0};
  p.upper = {2.0};
  p.evaluator = [](const DecisionPoint& x) {
    const double v = x[0] * x[0];
    return RawEvaluation{{v, v, v}, {}, false};
  };
  return p;
}

}  // namespace

TEST_CASE("multimads search routing") {
  Fixture fx(biobjective_toy());
  for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) fx.seed({x});
  fx.build_list_from_cache();
  REQUIRE(fx.list.entries.size() == 5);

  SECTION("an extreme incumbent explores its extreme objectives") {
    // x = 0 minimizes f1 over the list.
    std::size_t extreme_idx = 0;
    for (std::size_t i = 0; i < fx.list.entries.size(); ++i)
      if (fx.list.entries[i].point.point[0] == 0.0) extreme_idx = i;
    auto ctx = fx.ctx(extreme_idx);
    const auto idx = extreme_objective_indices(ctx.primary->point, fx.list);
    REQUIRE(idx == std::vector<std::size_t>{0});
    const auto out = multimads_search(ctx, /*quadratic=*/false);
    CHECK(out.nm_invocations == 1);
  }
  SECTION("a lone incumbent is extreme in every objective") {
    Fixture solo(biobjective_toy());
    solo.seed({0.5});
    solo.build_list_from_cache();
    auto ctx = solo.ctx(0);
    const auto out = multimads_search(ctx, /*quadratic=*/false);
    CHECK(out.nm_invocations == 2);
  }
  SECTION("an interior incumbent runs one distance-formulation pass") {
    std::size_t interior_idx = 0;
    for (std::size_t i = 0; i < fx.list.entries.size(); ++i)
      if (fx.list.entries[i].point.point[0] == 0.5) interior_idx = i;
    auto ctx = fx.ctx(interior_idx);
    CHECK(extreme_objective_indices(ctx.primary->point, fx.list).empty());
    const auto out = multimads_search(ctx, /*quadratic=*/false);
    CHECK(out.nm_invocations == 1);
  }
}

TEST_CASE("dominance move search") {
  Fixture fx(biobjective_toy());
  for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) fx.seed({x});
  fx.build_list_from_cache();

  SECTION("every incumbent sits at zero move against the full list") {
    const auto set = build_reference_set(fx.list.entries[2].point, fx.list);
    CHECK(set.members.size() == 4);
    for (const auto& e : fx.list.entries) {
      if (e.point.birth_index == fx.list.entries[2].point.birth_index)
        continue;
      CHECK(psi_dominance_move(e.point.objectives(), set) == 0.0);
    }
    // The excluded incumbent scores nonpositive: it can only gain.
    CHECK(psi_dominance_move(fx.list.entries[2].point.objectives(), set) <=
          0.0);
    // Against the full list every incumbent scores exactly zero.
    ReferenceSet full;
    for (const auto& e : fx.list.entries)
      full.members.push_back(e.point.objectives());
    for (const auto& e : fx.list.entries)
      CHECK(psi_dominance_move(e.point.objectives(), full) == 0.0);
  }
  SECTION("runs the backend and collects evaluations") {
    auto ctx = fx.ctx(2);
    const auto out = dominance_move_search(ctx, /*quadratic=*/true);
    for (const auto& p : out.evaluated) {
      CHECK(fx.problem.within_bounds(p.point));
      CHECK(on_mesh(p.point, ctx.primary->point.point, ctx.mesh_size));
    }
  }
}

TEST_CASE("quadratic dms search") {
  SECTION("level one success stops after m subproblems") {
    Fixture fx(biobjective_toy());
    // Plenty of cached points, but the front holds only part of the curve,
    // so the level-1 minimizers produce fresh nondominated points.
    for (double x : {0.3, 0.4, 0.5, 0.6, 0.7}) fx.seed({x});
    fx.build_list_from_cache();
    auto ctx = fx.ctx(fx.list.entries.size() / 2);
    const auto out = quad_dms_search(ctx);
    CHECK(out.quad_subproblems <= 2);
    CHECK(!out.evaluated.empty());
  }
  SECTION("the worst case tries every combination once") {
    Fixture fx(triobjective_flat());
    for (double x : {-0.5, -0.25, 0.0, 0.25, 0.5}) fx.seed({x});
    fx.build_list_from_cache();
    REQUIRE(fx.list.entries.size() == 1);  // identical objectives collapse
    auto ctx = fx.ctx(0);
    const auto out = quad_dms_search(ctx);
    CHECK(out.quad_subproblems == 7);  // 2^3 - 1
    CHECK(out.evaluated.empty());      // minimizer already cached everywhere
  }
  SECTION("no samples, no outcome") {
    Fixture fx(biobjective_toy());
    fx.seed({0.5});
    fx.build_list_from_cache();
    auto ctx = fx.ctx(0);
    const auto out = quad_dms_search(ctx);
    CHECK(out.evaluated.empty());
    CHECK(out.quad_subproblems == 0);
  }
}

TEST_CASE("speculative search") {
  Fixture fx(biobjective_toy());
  fx.seed({0.5});
  fx.build_list_from_cache();

  SECTION("nothing without a recorded success direction") {
    auto ctx = fx.ctx(0);
    CHECK(speculative_search(ctx).evaluated.empty());
  }
  SECTION("one long step along the recorded direction") {
    fx.list.entries[0].last_success_dir = std::vector<double>{1.0};
    auto ctx = fx.ctx(0);
    const auto out = speculative_search(ctx);
    REQUIRE(out.evaluated.size() == 1);
    // x = 0.5 + 4 * mesh * 1
    CHECK(out.evaluated[0].point[0] == 0.5 + 4.0 * ctx.mesh_size);
  }
  SECTION("a step off the bounds is skipped") {
    fx.list.entries[0].last_success_dir = std::vector<double>{1.0};
    auto ctx = fx.ctx(0, /*frame=*/2.0);  // 0.5 + 8 > upper bound
    const auto out = speculative_search(ctx);
    CHECK(out.evaluated.empty());
  }
}
