#pragma once

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <cstring>
#include <functional>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "momads/core.hpp"

namespace momads {

// Raw blackbox outputs before domain bookkeeping.
struct RawEvaluation {
  std::vector<double> objectives;
  std::vector<double> constraints;
  bool crashed = false;
};

struct ProblemSpec {
  std::string name;
  std::size_t n = 0;  // decision variables
  std::size_t m = 0;  // objectives
  std::size_t j = 0;  // inequality constraints
  std::vector<double> lower;  // empty when unbounded
  std::vector<double> upper;
  std::function<RawEvaluation(const DecisionPoint&)> evaluator;
  // Optional generator of (approximately) `count` points on the known
  // analytic front, for oracle tests. Null when the front is not analytic.
  std::function<std::vector<std::vector<double>>(std::size_t count)>
      front_generator;

  bool bounded() const { return !lower.empty() && !upper.empty(); }

  bool within_bounds(const DecisionPoint& x) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!lower.empty() && x[i] < lower[i]) return false;
      if (!upper.empty() && x[i] > upper[i]) return false;
    }
    return true;
  }

  // Total evaluation: bound violations are rejected without calling the
  // blackbox, crashes and non-finite outputs become hidden failures.
  EvaluationResult evaluate(const DecisionPoint& x) const {
    if (x.size() != n || !within_bounds(x)) {
      return make_result(std::vector<double>(m, kInf),
                         std::vector<double>(j, kInf), EvalStatus::outside_x);
    }
    RawEvaluation raw = evaluator(x);
    if (raw.crashed || raw.objectives.size() != m ||
        raw.constraints.size() != j) {
      return make_result(std::vector<double>(m, kInf),
                         std::vector<double>(j, kInf),
                         EvalStatus::hidden_failure);
    }
    return make_result(std::move(raw.objectives), std::move(raw.constraints));
  }
};

// Equally spaced interior points on the diagonal of the bound box.
inline std::vector<DecisionPoint> line_sample_initial_points(
    const std::vector<double>& lower, const std::vector<double>& upper,
    std::size_t n_points) {
  if (lower.empty() || upper.empty())
    throw std::invalid_argument(
        "line sampling requires finite bounds; supply start points instead");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) ||
        lower[i] >= upper[i])
      throw std::invalid_argument("invalid bounds for line sampling");
  }
  std::vector<DecisionPoint> out;
  for (std::size_t k = 1; k <= n_points; ++k) {
    DecisionPoint x(lower.size());
    const double t = static_cast<double>(k) / static_cast<double>(n_points + 1);
    for (std::size_t i = 0; i < lower.size(); ++i)
      x[i] = lower[i] + t * (upper[i] - lower[i]);
    out.push_back(std::move(x));
  }
  return out;
}

namespace detail {

inline RawEvaluation raw(std::vector<double> f, std::vector<double> c = {}) {
  return RawEvaluation{std::move(f), std::move(c), false};
}

inline ProblemSpec basic(std::string name, std::size_t n, std::size_t m,
                         std::vector<double> lower, std::vector<double> upper,
                         std::function<RawEvaluation(const DecisionPoint&)> f,
                         std::size_t j = 0) {
  ProblemSpec p;
  p.name = std::move(name);
  p.n = n;
  p.m = m;
  p.j = j;
  p.lower = std::move(lower);
  p.upper = std::move(upper);
  p.evaluator = std::move(f);
  return p;
}

inline std::vector<double> fill(std::size_t n, double v) {
  return std::vector<double>(n, v);
}

// ZDT-style g with linear tail.
inline double zdt_g(const DecisionPoint& x) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += x[i];
  return 1.0 + 9.0 * s / static_cast<double>(x.size() - 1);
}

inline std::vector<std::vector<double>> sampled_front_1d(
    std::size_t count, const std::function<std::vector<double>(double)>& f) {
  std::vector<std::vector<double>> pts;
  for (std::size_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(count - 1);
    pts.push_back(f(t));
  }
  return pts;
}

inline ProblemSpec make_zdt1(std::string name, std::size_t n) {
  auto p = basic(std::move(name), n, 2, fill(n, 0.0), fill(n, 1.0),
                 [](const DecisionPoint& x) {
                   const double g = zdt_g(x);
                   const double f1 = x[0];
                   return raw({f1, g * (1.0 - std::sqrt(f1 / g))});
                 });
  p.front_generator = [](std::size_t count) {
    return sampled_front_1d(count, [](double t) {
      return std::vector<double>{t, 1.0 - std::sqrt(t)};
    });
  };
  return p;
}

inline double dtlz_rastrigin_g(const DecisionPoint& x, std::size_t first) {
  double g = 0.0;
  for (std::size_t i = first; i < x.size(); ++i) {
    const double z = x[i] - 0.5;
    g += z * z - std::cos(20.0 * std::numbers::pi * z);
  }
  return 100.0 * (static_cast<double>(x.size() - first) + g);
}

inline double dtlz_sphere_g(const DecisionPoint& x, std::size_t first) {
  double g = 0.0;
  for (std::size_t i = first; i < x.size(); ++i) {
    const double z = x[i] - 0.5;
    g += z * z;
  }
  return g;
}

inline std::vector<std::vector<double>> sphere_octant_front(
    std::size_t count) {
  // Roughly `count` points on the unit sphere octant.
  const std::size_t side = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::sqrt(static_cast<double>(count))));
  std::vector<std::vector<double>> pts;
  const double half_pi = 0.5 * std::numbers::pi;
  for (std::size_t a = 0; a < side; ++a) {
    for (std::size_t b = 0; b < side; ++b) {
      const double t1 = half_pi * static_cast<double>(a) /
                        static_cast<double>(side - 1);
      const double t2 = half_pi * static_cast<double>(b) /
                        static_cast<double>(side - 1);
      pts.push_back({std::cos(t1) * std::cos(t2), std::cos(t1) * std::sin(t2),
                     std::sin(t1)});
    }
  }
  return pts;
}

}  // namespace detail

// The local benchmark suite: classical bound-constrained biobjective and
// triobjective families plus constrained variants with linear and quadratic
// inequality constraints.
inline std::vector<ProblemSpec> registry() {
  using detail::basic;
  using detail::fill;
  using detail::raw;
  const double pi = std::numbers::pi;

  std::vector<ProblemSpec> out;

  // Smooth convex 1-D toy with a fully analytic front.
  {
    auto p = basic("toy1d", 1, 2, {-1.0}, {2.0}, [](const DecisionPoint& x) {
      return raw({x[0] * x[0], (x[0] - 1.0) * (x[0] - 1.0)});
    });
    p.front_generator = [](std::size_t count) {
      return detail::sampled_front_1d(count, [](double t) {
        return std::vector<double>{t * t, (1.0 - t) * (1.0 - t)};
      });
    };
    out.push_back(std::move(p));
  }

  out.push_back(detail::make_zdt1("zdt1", 30));
  out.push_back(detail::make_zdt1("zdt1_n10", 10));

  {
    auto p = basic("zdt2", 10, 2, fill(10, 0.0), fill(10, 1.0),
                   [](const DecisionPoint& x) {
                     const double g = detail::zdt_g(x);
                     const double r = x[0] / g;
                     return raw({x[0], g * (1.0 - r * r)});
                   });
    p.front_generator = [](std::size_t count) {
      return detail::sampled_front_1d(count, [](double t) {
        return std::vector<double>{t, 1.0 - t * t};
      });
    };
    out.push_back(std::move(p));
  }

  {
    auto p = basic("zdt3", 10, 2, fill(10, 0.0), fill(10, 1.0),
                   [pi](const DecisionPoint& x) {
                     const double g = detail::zdt_g(x);
                     const double r = x[0] / g;
                     return raw({x[0], g * (1.0 - std::sqrt(r) -
                                            r * std::sin(10.0 * pi * x[0]))});
                   });
    p.front_generator = [pi](std::size_t count) {
      return detail::sampled_front_1d(count, [pi](double t) {
        return std::vector<double>{
            t, 1.0 - std::sqrt(t) - t * std::sin(10.0 * pi * t)};
      });
    };
    out.push_back(std::move(p));
  }

  {
    std::vector<double> lo(10, -5.0), hi(10, 5.0);
    lo[0] = 0.0;
    hi[0] = 1.0;
    auto p = basic("zdt4", 10, 2, lo, hi, [pi](const DecisionPoint& x) {
      double g = 1.0 + 10.0 * static_cast<double>(x.size() - 1);
      for (std::size_t i = 1; i < x.size(); ++i)
        g += x[i] * x[i] - 10.0 * std::cos(4.0 * pi * x[i]);
      return raw({x[0], g * (1.0 - std::sqrt(x[0] / g))});
    });
    p.front_generator = [](std::size_t count) {
      return detail::sampled_front_1d(count, [](double t) {
        return std::vector<double>{t, 1.0 - std::sqrt(t)};
      });
    };
    out.push_back(std::move(p));
  }

  {
    auto p = basic("zdt6", 10, 2, fill(10, 0.0), fill(10, 1.0),
                   [pi](const DecisionPoint& x) {
                     const double s = std::sin(6.0 * pi * x[0]);
                     const double f1 =
                         1.0 - std::exp(-4.0 * x[0]) * std::pow(s, 6.0);
                     double tail = 0.0;
                     for (std::size_t i = 1; i < x.size(); ++i) tail += x[i];
                     const double g =
                         1.0 + 9.0 * std::pow(tail / static_cast<double>(
                                                         x.size() - 1),
                                              0.25);
                     const double r = f1 / g;
                     return raw({f1, g * (1.0 - r * r)});
                   });
    p.front_generator = [](std::size_t count) {
      // f1 spans [f1_min, 1] on the front; f2 = 1 - f1^2.
      const double f1_min = 0.2807753191;
      std::vector<std::vector<double>> pts;
      for (std::size_t k = 0; k < count; ++k) {
        const double t = f1_min + (1.0 - f1_min) * static_cast<double>(k) /
                                      static_cast<double>(count - 1);
        pts.push_back({t, 1.0 - t * t});
      }
      return pts;
    };
    out.push_back(std::move(p));
  }

  auto fonseca_eval = [](const DecisionPoint& x) {
    const double a = 1.0 / std::sqrt(static_cast<double>(x.size()));
    double s1 = 0.0, s2 = 0.0;
    for (double xi : x) {
      s1 += (xi - a) * (xi - a);
      s2 += (xi + a) * (xi + a);
    }
    return raw({1.0 - std::exp(-s1), 1.0 - std::exp(-s2)});
  };
  out.push_back(basic("fonseca", 3, 2, fill(3, -4.0), fill(3, 4.0), fonseca_eval));
  out.push_back(basic("mop2", 4, 2, fill(4, -4.0), fill(4, 4.0), fonseca_eval));

  out.push_back(basic("kursawe", 3, 2, fill(3, -5.0), fill(3, 5.0),
                      [](const DecisionPoint& x) {
                        double f1 = 0.0, f2 = 0.0;
                        for (std::size_t i = 0; i + 1 < x.size(); ++i)
                          f1 += -10.0 * std::exp(-0.2 * std::sqrt(x[i] * x[i] +
                                                                  x[i + 1] *
                                                                      x[i + 1]));
                        for (double xi : x)
                          f2 += std::pow(std::abs(xi), 0.8) +
                                5.0 * std::sin(xi * xi * xi);
                        return raw({f1, f2});
                      }));

  out.push_back(basic(
      "poloni", 2, 2, fill(2, -pi), fill(2, pi), [](const DecisionPoint& x) {
        const double a1 = 0.5 * std::sin(1.0) - 2.0 * std::cos(1.0) +
                          std::sin(2.0) - 1.5 * std::cos(2.0);
        const double a2 = 1.5 * std::sin(1.0) - std::cos(1.0) +
                          2.0 * std::sin(2.0) - 0.5 * std::cos(2.0);
        const double b1 = 0.5 * std::sin(x[0]) - 2.0 * std::cos(x[0]) +
                          std::sin(x[1]) - 1.5 * std::cos(x[1]);
        const double b2 = 1.5 * std::sin(x[0]) - std::cos(x[0]) +
                          2.0 * std::sin(x[1]) - 0.5 * std::cos(x[1]);
        return raw({1.0 + (a1 - b1) * (a1 - b1) + (a2 - b2) * (a2 - b2),
                    (x[0] + 3.0) * (x[0] + 3.0) + (x[1] + 1.0) * (x[1] + 1.0)});
      }));

  out.push_back(basic("mop6", 2, 2, fill(2, 0.0), fill(2, 1.0),
                      [pi](const DecisionPoint& x) {
                        const double d = 1.0 + 10.0 * x[1];
                        const double r = x[0] / d;
                        return raw({x[0],
                                    d * (1.0 - r * r -
                                         r * std::sin(8.0 * pi * x[0]))});
                      }));

  out.push_back(basic("bk1", 2, 2, fill(2, -5.0), fill(2, 10.0),
                      [](const DecisionPoint& x) {
                        return raw({x[0] * x[0] + x[1] * x[1],
                                    (x[0] - 5.0) * (x[0] - 5.0) +
                                        (x[1] - 5.0) * (x[1] - 5.0)});
                      }));

  {
    auto p = basic("dtlz2_m2", 6, 2, fill(6, 0.0), fill(6, 1.0),
                   [pi](const DecisionPoint& x) {
                     const double g = detail::dtlz_sphere_g(x, 1);
                     const double t = 0.5 * pi * x[0];
                     return raw({(1.0 + g) * std::cos(t),
                                 (1.0 + g) * std::sin(t)});
                   });
    p.front_generator = [pi](std::size_t count) {
      return detail::sampled_front_1d(count, [pi](double t) {
        return std::vector<double>{std::cos(0.5 * pi * t),
                                   std::sin(0.5 * pi * t)};
      });
    };
    out.push_back(std::move(p));
  }

  {
    auto p = basic("dtlz1", 7, 3, fill(7, 0.0), fill(7, 1.0),
                   [](const DecisionPoint& x) {
                     const double g = detail::dtlz_rastrigin_g(x, 2);
                     const double s = 0.5 * (1.0 + g);
                     return raw({s * x[0] * x[1], s * x[0] * (1.0 - x[1]),
                                 s * (1.0 - x[0])});
                   });
    p.front_generator = [](std::size_t count) {
      const std::size_t side = std::max<std::size_t>(
          2, static_cast<std::size_t>(std::sqrt(static_cast<double>(count))));
      std::vector<std::vector<double>> pts;
      for (std::size_t a = 0; a < side; ++a) {
        for (std::size_t b = 0; a + b < side; ++b) {
          const double u = 0.5 * static_cast<double>(a) /
                           static_cast<double>(side - 1);
          const double v = 0.5 * static_cast<double>(b) /
                           static_cast<double>(side - 1);
          pts.push_back({u, v, 0.5 - u - v});
        }
      }
      return pts;
    };
    out.push_back(std::move(p));
  }

  auto dtlz2_eval = [pi](const DecisionPoint& x) {
    const double g = detail::dtlz_sphere_g(x, 2);
    const double t1 = 0.5 * pi * x[0];
    const double t2 = 0.5 * pi * x[1];
    return raw({(1.0 + g) * std::cos(t1) * std::cos(t2),
                (1.0 + g) * std::cos(t1) * std::sin(t2),
                (1.0 + g) * std::sin(t1)});
  };
  {
    auto p = basic("dtlz2", 12, 3, fill(12, 0.0), fill(12, 1.0), dtlz2_eval);
    p.front_generator = detail::sphere_octant_front;
    out.push_back(std::move(p));
  }

  out.push_back(basic("dtlz3", 8, 3, fill(8, 0.0), fill(8, 1.0),
                      [pi](const DecisionPoint& x) {
                        const double g = detail::dtlz_rastrigin_g(x, 2);
                        const double t1 = 0.5 * pi * x[0];
                        const double t2 = 0.5 * pi * x[1];
                        return raw({(1.0 + g) * std::cos(t1) * std::cos(t2),
                                    (1.0 + g) * std::cos(t1) * std::sin(t2),
                                    (1.0 + g) * std::sin(t1)});
                      }));

  out.push_back(basic("dtlz4", 12, 3, fill(12, 0.0), fill(12, 1.0),
                      [pi](const DecisionPoint& x) {
                        const double g = detail::dtlz_sphere_g(x, 2);
                        const double y1 = std::pow(x[0], 100.0);
                        const double y2 = std::pow(x[1], 100.0);
                        const double t1 = 0.5 * pi * y1;
                        const double t2 = 0.5 * pi * y2;
                        return raw({(1.0 + g) * std::cos(t1) * std::cos(t2),
                                    (1.0 + g) * std::cos(t1) * std::sin(t2),
                                    (1.0 + g) * std::sin(t1)});
                      }));

  auto dtlz5_shape = [pi](const DecisionPoint& x, double g) {
    const double t1 = 0.5 * pi * x[0];
    const double t2 =
        pi / (4.0 * (1.0 + g)) * (1.0 + 2.0 * g * x[1]);
    return raw({(1.0 + g) * std::cos(t1) * std::cos(t2),
                (1.0 + g) * std::cos(t1) * std::sin(t2),
                (1.0 + g) * std::sin(t1)});
  };
  out.push_back(basic("dtlz5", 12, 3, fill(12, 0.0), fill(12, 1.0),
                      [dtlz5_shape](const DecisionPoint& x) {
                        return dtlz5_shape(x, detail::dtlz_sphere_g(x, 2));
                      }));
  out.push_back(basic("dtlz6", 12, 3, fill(12, 0.0), fill(12, 1.0),
                      [dtlz5_shape](const DecisionPoint& x) {
                        double g = 0.0;
                        for (std::size_t i = 2; i < x.size(); ++i)
                          g += std::pow(x[i], 0.1);
                        return dtlz5_shape(x, g);
                      }));

  out.push_back(basic("dtlz7", 22, 3, fill(22, 0.0), fill(22, 1.0),
                      [pi](const DecisionPoint& x) {
                        double tail = 0.0;
                        for (std::size_t i = 2; i < x.size(); ++i)
                          tail += x[i];
                        const double g =
                            1.0 + 9.0 * tail / static_cast<double>(x.size() - 2);
                        double hsum = 0.0;
                        for (std::size_t i = 0; i < 2; ++i)
                          hsum += x[i] / (1.0 + g) *
                                  (1.0 + std::sin(3.0 * pi * x[i]));
                        return raw({x[0], x[1],
                                    (1.0 + g) * (3.0 - hsum)});
                      }));

  out.push_back(basic(
      "viennet", 2, 3, fill(2, -3.0), fill(2, 3.0), [](const DecisionPoint& x) {
        const double r2 = x[0] * x[0] + x[1] * x[1];
        return raw(
            {0.5 * r2 + std::sin(r2),
             std::pow(3.0 * x[0] - 2.0 * x[1] + 4.0, 2.0) / 8.0 +
                 std::pow(x[0] - x[1] + 1.0, 2.0) / 27.0 + 15.0,
             1.0 / (r2 + 1.0) - 1.1 * std::exp(-r2)});
      }));

  out.push_back(basic(
      "mop7", 2, 3, fill(2, -400.0), fill(2, 400.0),
      [](const DecisionPoint& x) {
        const double a = x[0], b = x[1];
        return raw({(a - 2.0) * (a - 2.0) / 2.0 + (b + 1.0) * (b + 1.0) / 13.0 +
                        3.0,
                    (a + b - 3.0) * (a + b - 3.0) / 36.0 +
                        (-a + b + 2.0) * (-a + b + 2.0) / 8.0 - 17.0,
                    (a + 2.0 * b - 1.0) * (a + 2.0 * b - 1.0) / 175.0 +
                        (2.0 * b - a) * (2.0 * b - a) / 17.0 - 13.0});
      }));

  // Constrained problems (c_j(x) <= 0 convention).

  out.push_back(basic("bnh", 2, 2, {0.0, 0.0}, {5.0, 3.0},
                      [](const DecisionPoint& x) {
                        const double a = x[0], b = x[1];
                        return raw(
                            {4.0 * a * a + 4.0 * b * b,
                             (a - 5.0) * (a - 5.0) + (b - 5.0) * (b - 5.0)},
                            {(a - 5.0) * (a - 5.0) + b * b - 25.0,
                             7.7 - (a - 8.0) * (a - 8.0) -
                                 (b + 3.0) * (b + 3.0)});
                      },
                      2));

  out.push_back(basic("srn", 2, 2, fill(2, -20.0), fill(2, 20.0),
                      [](const DecisionPoint& x) {
                        const double a = x[0], b = x[1];
                        return raw({2.0 + (a - 2.0) * (a - 2.0) +
                                        (b - 1.0) * (b - 1.0),
                                    9.0 * a - (b - 1.0) * (b - 1.0)},
                                   {a * a + b * b - 225.0,
                                    a - 3.0 * b + 10.0});
                      },
                      2));

  out.push_back(basic("tnk", 2, 2, fill(2, 0.0), fill(2, pi),
                      [](const DecisionPoint& x) {
                        const double a = x[0], b = x[1];
                        const double c1 = 1.0 +
                                          0.1 * std::cos(16.0 * std::atan2(a, b)) -
                                          a * a - b * b;
                        const double c2 = (a - 0.5) * (a - 0.5) +
                                          (b - 0.5) * (b - 0.5) - 0.5;
                        return raw({a, b}, {c1, c2});
                      },
                      2));

  out.push_back(basic("osy", 6, 2, {0.0, 0.0, 1.0, 0.0, 1.0, 0.0},
                      {10.0, 10.0, 5.0, 6.0, 5.0, 10.0},
                      [](const DecisionPoint& x) {
                        double f2 = 0.0;
                        for (double xi : x) f2 += xi * xi;
                        const double f1 =
                            -(25.0 * (x[0] - 2.0) * (x[0] - 2.0) +
                              (x[1] - 2.0) * (x[1] - 2.0) +
                              (x[2] - 1.0) * (x[2] - 1.0) +
                              (x[3] - 4.0) * (x[3] - 4.0) +
                              (x[4] - 1.0) * (x[4] - 1.0));
                        return raw({f1, f2},
                                   {2.0 - x[0] - x[1],
                                    x[0] + x[1] - 6.0,
                                    x[1] - x[0] - 2.0,
                                    x[0] - 3.0 * x[1] - 2.0,
                                    (x[2] - 3.0) * (x[2] - 3.0) + x[3] - 4.0,
                                    4.0 - (x[4] - 3.0) * (x[4] - 3.0) - x[5]});
                      },
                      6));

  out.push_back(basic("constr", 2, 2, {0.1, 0.0}, {1.0, 5.0},
                      [](const DecisionPoint& x) {
                        return raw({x[0], (1.0 + x[1]) / x[0]},
                                   {6.0 - x[1] - 9.0 * x[0],
                                    1.0 + x[1] - 9.0 * x[0]});
                      },
                      2));

  out.push_back(basic("ctp1", 4, 2, fill(4, 0.0), fill(4, 1.0),
                      [](const DecisionPoint& x) {
                        double g = 1.0;
                        for (std::size_t i = 1; i < x.size(); ++i) g += x[i];
                        const double f1 = x[0];
                        const double f2 = g * std::exp(-f1 / g);
                        return raw({f1, f2},
                                   {0.858 * std::exp(-0.541 * f1) - f2,
                                    0.728 * std::exp(-0.295 * f1) - f2});
                      },
                      2));

  {
    auto base = detail::make_zdt1("zdt1_con", 10);
    auto inner = base.evaluator;
    base.j = 2;
    base.evaluator = [inner](const DecisionPoint& x) {
      auto r = inner(x);
      r.constraints = {0.2 - x[0], x[0] - 0.8};
      return r;
    };
    base.front_generator = nullptr;
    out.push_back(std::move(base));
  }

  out.push_back(basic("zdt2_con", 10, 2, fill(10, 0.0), fill(10, 1.0),
                      [](const DecisionPoint& x) {
                        const double g = detail::zdt_g(x);
                        const double r = x[0] / g;
                        return raw({x[0], g * (1.0 - r * r)},
                                   {0.1 - x[0], x[0] - 0.9});
                      },
                      2));

  out.push_back(basic("fonseca_con", 3, 2, fill(3, -4.0), fill(3, 4.0),
                      [fonseca_eval](const DecisionPoint& x) {
                        auto r = fonseca_eval(x);
                        r.constraints = {-1.0 - (x[0] + x[1] + x[2])};
                        return r;
                      },
                      1));

  out.push_back(basic("dtlz2_con", 8, 3, fill(8, 0.0), fill(8, 1.0),
                      [pi](const DecisionPoint& x) {
                        const double g = detail::dtlz_sphere_g(x, 2);
                        const double t1 = 0.5 * pi * x[0];
                        const double t2 = 0.5 * pi * x[1];
                        return raw({(1.0 + g) * std::cos(t1) * std::cos(t2),
                                    (1.0 + g) * std::cos(t1) * std::sin(t2),
                                    (1.0 + g) * std::sin(t1)},
                                   {0.3 - g});
                      },
                      1));

  return out;
}

inline const ProblemSpec* find_problem(const std::vector<ProblemSpec>& reg,
                                       const std::string& name) {
  for (const auto& p : reg)
    if (p.name == name) return &p;
  return nullptr;
}

// Adapter for an external executable: one line of coordinates on stdin,
// m objective values then |J| constraint values on stdout. A nonzero exit
// status or unparsable output is reported as a crash.
inline RawEvaluation run_external_blackbox(const std::string& command,
                                           const DecisionPoint& x,
                                           std::size_t m, std::size_t j) {
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });

  RawEvaluation failed;
  failed.crashed = true;

  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0) return failed;
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    return failed;
  }
  const pid_t pid = fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    return failed;
  }
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);

  {
    std::ostringstream line;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i) line << ' ';
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", x[i]);
      line << buf;
    }
    line << '\n';
    const std::string s = line.str();
    std::size_t off = 0;
    while (off < s.size()) {
      const ssize_t w = write(in_pipe[1], s.data() + off, s.size() - off);
      if (w <= 0) break;
      off += static_cast<std::size_t>(w);
    }
  }
  close(in_pipe[1]);

  std::string output;
  char buf[4096];
  for (;;) {
    const ssize_t r = read(out_pipe[0], buf, sizeof buf);
    if (r <= 0) break;
    output.append(buf, static_cast<std::size_t>(r));
  }
  close(out_pipe[0]);

  int status = 0;
  waitpid(pid, &status, 0);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return failed;

  std::istringstream parse(output);
  std::vector<double> values;
  double v;
  while (parse >> v) values.push_back(v);
  if (values.size() != m + j) return failed;

  RawEvaluation out;
  out.objectives.assign(values.begin(), values.begin() + static_cast<long>(m));
  out.constraints.assign(values.begin() + static_cast<long>(m), values.end());
  return out;
}

inline ProblemSpec external_problem(const std::string& command, std::size_t n,
                                    std::size_t m, std::size_t j,
                                    std::vector<double> lower,
                                    std::vector<double> upper) {
  ProblemSpec p;
  p.name = "external";
  p.n = n;
  p.m = m;
  p.j = j;
  p.lower = std::move(lower);
  p.upper = std::move(upper);
  p.evaluator = [command, m, j](const DecisionPoint& x) {
    return run_external_blackbox(command, x, m, j);
  };
  return p;
}

}  // namespace momads
