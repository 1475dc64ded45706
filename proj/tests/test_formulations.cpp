#include <random>

#include "momads/formulations.hpp"
#include "test_util.hpp"

using namespace momads;
using test_util::obj_point;
using test_util::uniform;

namespace {

IterateList make_list(std::vector<EvaluatedPoint> pts) {
  IterateList list;
  for (auto& p : pts) list.entries.push_back({std::move(p), 1.0, std::nullopt});
  return list;
}

ReferenceSet random_reference_set(std::mt19937_64& gen, std::size_t m) {
  // Points on a simplex-like shell are pairwise incomparable.
  ReferenceSet set;
  const std::size_t count = 1 + gen() % 4;
  for (std::size_t k = 0; k < count; ++k) {
    ReferenceVector r(m);
    double sum = 0.0;
    for (auto& v : r) {
      v = uniform(gen, 0.05, 1.0);
      sum += v;
    }
    for (auto& v : r) v = v / sum + uniform(gen, 0.0, 1e-12);
    set.members.push_back(r);
  }
  if (!set.valid()) return random_reference_set(gen, m);
  return set;
}

}  // namespace

TEST_CASE("distance formulation") {
  CHECK(psi_distance({1, 1}, {1, 1}) == 0.0);
  CHECK(psi_distance({0, 0}, {1, 1}) == -1.0);
  CHECK(psi_distance({2, 0}, {1, 1}) == 1.0);
  CHECK(psi_distance({2, 3}, {1, 1}) == 5.0);
  CHECK(psi_distance({0.5, 0.25}, {1, 1}) == -0.25);
}

TEST_CASE("dominance move formulation") {
  ReferenceSet y1;
  y1.members = {{1, 1}};
  CHECK(psi_dominance_move({1, 1}, y1) == 0.0);
  CHECK(psi_dominance_move({0, 0}, y1) == -2.0);
  CHECK(psi_dominance_move({2, 2}, y1) == 2.0);

  ReferenceSet y2;
  y2.members = {{0, 2}, {2, 0}};
  CHECK(y2.valid());
  // (1, 1) is dominated by neither member; best slack is 1 either way.
  CHECK(psi_dominance_move({1, 1}, y2) == -1.0);
  // (3, 1) is dominated by (2, 0); excess 1 + 1 against it, 3 against (0,2).
  CHECK(psi_dominance_move({3, 1}, y2) == 2.0);

  SECTION("partially captures dominance") {
    std::mt19937_64 gen(23);
    for (int t = 0; t < 1000; ++t) {
      const auto set = random_reference_set(gen, 2);
      std::vector<double> f2 = {uniform(gen, 0, 2), uniform(gen, 0, 2)};
      std::vector<double> f1 = {f2[0] - uniform(gen, 1e-6, 0.5),
                                f2[1] - uniform(gen, 1e-6, 0.5)};
      CHECK(psi_dominance_move(f1, set) < psi_dominance_move(f2, set));
      std::vector<double> f1_weak = {f2[0] - uniform(gen, 0, 0.5), f2[1]};
      CHECK(psi_dominance_move(f1_weak, set) <= psi_dominance_move(f2, set));
    }
  }

  SECTION("staircase evaluator agrees with the plain scan") {
    std::mt19937_64 gen(41);
    for (int t = 0; t < 400; ++t) {
      const auto set = random_reference_set(gen, 2);
      const DominanceMoveFn fast(set);
      for (int q = 0; q < 50; ++q) {
        std::vector<double> fx = {uniform(gen, -0.5, 1.5),
                                  uniform(gen, -0.5, 1.5)};
        // Snap some queries onto member coordinates so equality paths fire.
        if (q % 5 == 0) fx[0] = set.members[q % set.members.size()][0];
        if (q % 7 == 0) fx[1] = set.members[q % set.members.size()][1];
        const double expect = psi_dominance_move(fx, set);
        CHECK_THAT(fast(fx), Catch::Matchers::WithinAbs(expect, 1e-12));
      }
      for (const auto& r : set.members)
        CHECK(fast(r) == psi_dominance_move(r, set));
    }
    SECTION("three objectives fall back to the plain scan") {
      const auto set3 = random_reference_set(gen, 3);
      const DominanceMoveFn fast3(set3);
      for (int q = 0; q < 100; ++q) {
        std::vector<double> fx = {uniform(gen, 0, 1), uniform(gen, 0, 1),
                                  uniform(gen, 0, 1)};
        CHECK(fast3(fx) == psi_dominance_move(fx, set3));
      }
    }
  }

  SECTION("zero on members, negative strictly below some member") {
    std::mt19937_64 gen(29);
    for (int t = 0; t < 200; ++t) {
      const auto set = random_reference_set(gen, 3);
      for (const auto& r : set.members)
        CHECK(psi_dominance_move(r, set) == 0.0);
      std::vector<double> below = set.members[0];
      for (auto& v : below) v -= 0.25;
      CHECK(psi_dominance_move(below, set) < 0.0);
    }
  }
}

TEST_CASE("reference point construction") {
  SECTION("interior incumbent") {
    auto list = make_list({obj_point({1, 4}, 1), obj_point({2, 3}, 2),
                           obj_point({3, 1}, 3)});
    const auto r = compute_reference_point(list.entries[1].point, list);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == 3.0);
    CHECK(r[1] == 4.0);
  }
  SECTION("singleton list clamps to the incumbent") {
    auto list = make_list({obj_point({2, 5}, 1)});
    const auto r = compute_reference_point(list.entries[0].point, list);
    CHECK(r == ReferenceVector{2, 5});
  }
  SECTION("a last-place objective clamps that coordinate") {
    auto list = make_list({obj_point({1, 4}, 1), obj_point({2, 3}, 2),
                           obj_point({3, 1}, 3)});
    // birth 3 is last in the f1 ordering, so r1 clamps onto its own f1.
    const auto r = compute_reference_point(list.entries[2].point, list);
    CHECK(r[0] == 3.0);
    CHECK(r[1] == 3.0);
  }
  SECTION("incumbent's objectives never exceed the reference") {
    std::mt19937_64 gen(31);
    for (int t = 0; t < 300; ++t) {
      std::vector<EvaluatedPoint> pts;
      const std::size_t k = 1 + gen() % 6;
      for (std::size_t i = 0; i < k; ++i)
        pts.push_back(obj_point({uniform(gen, 0, 1), uniform(gen, 0, 1),
                                 uniform(gen, 0, 1)},
                                i + 1));
      auto list = make_list(filter_nondominated(pts, FilterMode::feasible));
      const auto& xk = list.entries[gen() % list.entries.size()].point;
      const auto r = compute_reference_point(xk, list);
      for (std::size_t i = 0; i < 3; ++i) CHECK(xk.objectives()[i] <= r[i]);
    }
  }
}

TEST_CASE("reference set construction") {
  SECTION("singleton list uses the incumbent itself") {
    auto list = make_list({obj_point({2, 5}, 1)});
    const auto set = build_reference_set(list.entries[0].point, list);
    REQUIRE(set.members.size() == 1);
    CHECK(set.members[0] == ReferenceVector{2, 5});
  }
  SECTION("larger lists exclude the incumbent") {
    auto list = make_list({obj_point({1, 4}, 1), obj_point({2, 3}, 2),
                           obj_point({3, 1}, 3)});
    const auto set = build_reference_set(list.entries[1].point, list);
    REQUIRE(set.members.size() == 2);
    for (const auto& r : set.members) CHECK(r != ReferenceVector{2, 3});
    CHECK(set.valid());
  }
}

TEST_CASE("extreme objective indices") {
  auto list = make_list({obj_point({1, 4}, 1), obj_point({2, 3}, 2),
                         obj_point({3, 1}, 3)});
  CHECK(extreme_objective_indices(list.entries[0].point, list) ==
        std::vector<std::size_t>{0});
  CHECK(extreme_objective_indices(list.entries[1].point, list).empty());
  CHECK(extreme_objective_indices(list.entries[2].point, list) ==
        std::vector<std::size_t>{1});

  SECTION("a lone entry is extreme everywhere") {
    auto solo = make_list({obj_point({2, 5}, 1)});
    CHECK(extreme_objective_indices(solo.entries[0].point, solo) ==
          std::vector<std::size_t>({0, 1}));
  }
  SECTION("ties count as extreme") {
    auto tied = make_list({obj_point({1, 4}, 1), obj_point({1, 3}, 2)});
    const auto idx = extreme_objective_indices(tied.entries[0].point, tied);
    CHECK(idx == std::vector<std::size_t>{0});
  }
}
