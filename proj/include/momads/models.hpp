#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "momads/core.hpp"

namespace momads {

// Quadratic surrogate q(x) = alpha0 + g.x + x.H.x / 2 in problem units.
struct QuadraticModel {
  double alpha0 = 0.0;
  std::vector<double> gradient0;        // g
  std::vector<std::vector<double>> hessian;  // H, symmetric

  double evaluate(const DecisionPoint& x) const {
    const std::size_t n = x.size();
    double v = alpha0;
    for (std::size_t i = 0; i < n; ++i) {
      v += gradient0[i] * x[i];
      double hx = 0.0;
      for (std::size_t j = 0; j < n; ++j) hx += hessian[i][j] * x[j];
      v += 0.5 * x[i] * hx;
    }
    return v;
  }

  std::vector<double> gradient(const DecisionPoint& x) const {
    const std::size_t n = x.size();
    std::vector<double> grad(n);
    for (std::size_t i = 0; i < n; ++i) {
      double hx = 0.0;
      for (std::size_t j = 0; j < n; ++j) hx += hessian[i][j] * x[j];
      grad[i] = gradient0[i] + hx;
    }
    return grad;
  }
};

inline double evaluate_model(const QuadraticModel& model,
                             const DecisionPoint& x) {
  return model.evaluate(x);
}

// Number of coefficients of a full quadratic in n variables.
inline std::size_t quadratic_coefficient_count(std::size_t n) {
  return (n + 1) * (n + 2) / 2;
}

struct SampleSet {
  std::vector<EvaluatedPoint> points;
  DecisionPoint center;
  double radius = 0.0;  // sup-norm radius of the collection ball
};

// Gathers cached points with clean evaluations inside the sup-norm ball of
// radius rho * frame around the center. Needs at least one coefficient's
// worth of points; keeps at most twice that many, nearest first, so the
// regression stays bounded in cost.
inline std::optional<SampleSet> collect_sample_set(const Cache& cache,
                                                   const DecisionPoint& center,
                                                   double frame_size,
                                                   double rho) {
  assert(rho > 1.0);
  const std::size_t n = center.size();
  const std::size_t p = quadratic_coefficient_count(n);
  const double radius = rho * frame_size;

  struct Item {
    const EvaluatedPoint* pt;
    double dist;
  };
  std::vector<Item> items;
  for (const auto& e : cache.entries()) {
    if (!e.result.usable()) continue;
    double d = 0.0;
    bool in = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = std::abs(e.point[i] - center[i]);
      if (a > radius) {
        in = false;
        break;
      }
      d = std::max(d, a);
    }
    if (in) items.push_back({&e, d});
  }
  if (items.size() < p) return std::nullopt;

  std::stable_sort(items.begin(), items.end(),
                   [](const Item& a, const Item& b) { return a.dist < b.dist; });
  if (items.size() > 2 * p) items.resize(2 * p);

  SampleSet out;
  out.center = center;
  out.radius = radius;
  out.points.reserve(items.size());
  for (const auto& it : items) out.points.push_back(*it.pt);
  return out;
}

// Least-squares quadratic regression. The samples are mapped onto [-1, 1]
// per coordinate before solving and the coefficients mapped back, so the
// returned model lives in problem units. Returns nullopt when the design
// matrix is rank deficient (relative threshold 1e-12).
inline std::optional<QuadraticModel> fit_quadratic_regression(
    const SampleSet& samples, const std::vector<double>& values) {
  const std::size_t q = samples.points.size();
  if (q == 0) return std::nullopt;
  const std::size_t n = samples.points[0].point.size();
  const std::size_t p = quadratic_coefficient_count(n);
  assert(values.size() == q);
  if (q < p) return std::nullopt;

  const DecisionPoint& c = samples.center;
  std::vector<double> scale(n, 0.0);
  for (const auto& e : samples.points)
    for (std::size_t i = 0; i < n; ++i)
      scale[i] = std::max(scale[i], std::abs(e.point[i] - c[i]));
  for (auto& s : scale)
    if (s == 0.0) s = 1.0;

  Eigen::MatrixXd design(q, p);
  for (std::size_t r = 0; r < q; ++r) {
    const DecisionPoint& x = samples.points[r].point;
    std::size_t col = 0;
    design(r, col++) = 1.0;
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = (x[i] - c[i]) / scale[i];
      design(r, col++) = z[i];
    }
    for (std::size_t i = 0; i < n; ++i)
      design(r, col++) = 0.5 * z[i] * z[i];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) design(r, col++) = z[i] * z[j];
    assert(col == p);
  }
  Eigen::VectorXd rhs(q);
  for (std::size_t r = 0; r < q; ++r) rhs(static_cast<Eigen::Index>(r)) = values[r];

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-12);
  if (qr.rank() < static_cast<Eigen::Index>(p)) return std::nullopt;
  const Eigen::VectorXd coef = qr.solve(rhs);

  // Scaled-space coefficients.
  QuadraticModel scaled;
  scaled.alpha0 = coef(0);
  scaled.gradient0.resize(n);
  scaled.hessian.assign(n, std::vector<double>(n, 0.0));
  std::size_t col = 1;
  for (std::size_t i = 0; i < n; ++i) scaled.gradient0[i] = coef(col++);
  for (std::size_t i = 0; i < n; ++i) scaled.hessian[i][i] = coef(col++);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      scaled.hessian[i][j] = scaled.hessian[j][i] = coef(col++);
    }

  // Map back to problem units: with z = (x - c) / s,
  //   H = S Hs S, g = S gs - H c, a0 = as - gs.(c / s) + c.H.c / 2.
  QuadraticModel out;
  out.gradient0.resize(n);
  out.hessian.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out.hessian[i][j] = scaled.hessian[i][j] / (scale[i] * scale[j]);
  double a0 = scaled.alpha0;
  for (std::size_t i = 0; i < n; ++i) {
    double hc = 0.0;
    for (std::size_t j = 0; j < n; ++j) hc += out.hessian[i][j] * c[j];
    out.gradient0[i] = scaled.gradient0[i] / scale[i] - hc;
    a0 -= scaled.gradient0[i] * c[i] / scale[i];
    a0 += 0.5 * c[i] * hc;
  }
  out.alpha0 = a0;
  return out;
}

struct ModelSuite {
  QuadraticModel objective;                 // model of the scalarization
  std::vector<QuadraticModel> constraints;  // one model per constraint
};

// Fits the scalarization model directly on the scalarized sample values
// (never by combining per-objective models) plus one model per constraint.
// Any failed fit, or an unusable sample set, aborts the whole suite.
inline std::optional<ModelSuite> fit_model_suite(
    const Cache& cache, const DecisionPoint& center, double frame_size,
    double rho, const std::function<double(const EvaluatedPoint&)>& psi,
    std::size_t constraint_count) {
  const auto samples = collect_sample_set(cache, center, frame_size, rho);
  if (!samples) return std::nullopt;

  std::vector<double> psi_values;
  psi_values.reserve(samples->points.size());
  for (const auto& e : samples->points) psi_values.push_back(psi(e));
  for (double v : psi_values)
    if (!std::isfinite(v)) return std::nullopt;

  ModelSuite suite;
  auto objective = fit_quadratic_regression(*samples, psi_values);
  if (!objective) return std::nullopt;
  suite.objective = std::move(*objective);

  for (std::size_t j = 0; j < constraint_count; ++j) {
    std::vector<double> cj;
    cj.reserve(samples->points.size());
    for (const auto& e : samples->points) cj.push_back(e.result.constraints[j]);
    auto model = fit_quadratic_regression(*samples, cj);
    if (!model) return std::nullopt;
    suite.constraints.push_back(std::move(*model));
  }
  return suite;
}

}  // namespace momads
