#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "momads/core.hpp"

namespace momads {

// Mesh size coupled to the frame size so that the mesh refines faster than
// the frame once the frame drops below 1.
inline double mesh_size_from_frame(double frame_size) {
  assert(frame_size > 0.0);
  return std::min(frame_size, frame_size * frame_size);
}

struct MeshParameters {
  double frame_size = 1.0;  // frame size
  double mesh_size = 1.0;   // mesh size, min(frame, frame^2)
  double tau = 0.5;         // size adjustment ratio, rational in (0,1)
  int w_plus = 3;           // selection-threshold exponent

  static MeshParameters from_frame(double frame, double tau = 0.5,
                                   int w_plus = 3) {
    MeshParameters m;
    m.frame_size = frame;
    m.mesh_size = mesh_size_from_frame(frame);
    m.tau = tau;
    m.w_plus = w_plus;
    return m;
  }
};

inline double refine(double frame_size, double tau = 0.5) {
  return tau * frame_size;
}

inline double coarsen(double frame_size, double tau = 0.5) {
  return frame_size / tau;
}

// Nearest mesh point around `center` with spacing `delta`, componentwise.
// Rounding is half away from zero; idempotent on mesh points.
inline DecisionPoint project_to_mesh(const DecisionPoint& y,
                                     const DecisionPoint& center,
                                     double delta) {
  DecisionPoint out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = center[i] + delta * std::round((y[i] - center[i]) / delta);
  }
  return out;
}

inline bool on_mesh(const DecisionPoint& x, const DecisionPoint& center,
                    double delta) {
  const DecisionPoint p = project_to_mesh(x, center, delta);
  return detail::PointKeyEq{}(p, x);
}

// Moves out-of-bound coordinates to the nearest interior mesh point.
// Returns nullopt when a bound interval is too narrow to hold a mesh point.
inline std::optional<DecisionPoint> snap_to_bounds_on_mesh(
    DecisionPoint x, const DecisionPoint& center, double delta,
    const std::vector<double>& lower, const std::vector<double>& upper) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!lower.empty() && x[i] < lower[i]) {
      x[i] = center[i] + delta * std::ceil((lower[i] - center[i]) / delta);
    }
    if (!upper.empty() && x[i] > upper[i]) {
      x[i] = center[i] + delta * std::floor((upper[i] - center[i]) / delta);
    }
    if (!lower.empty() && x[i] < lower[i]) return std::nullopt;
    if (!upper.empty() && x[i] > upper[i]) return std::nullopt;
  }
  return x;
}

namespace rng {

// All randomness flows through these helpers so that runs are reproducible
// from the seed alone, independent of library distribution internals.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Gaussian components via Box-Muller, normalized; uniform on the sphere in
// any dimension.
inline std::vector<double> unit_vector(std::mt19937_64& gen, std::size_t n) {
  std::vector<double> v(n);
  for (;;) {
    for (std::size_t i = 0; i < n; i += 2) {
      const double u1 = std::max(uniform01(gen), 1e-300);
      const double u2 = uniform01(gen);
      const double r = std::sqrt(-2.0 * std::log(u1));
      v[i] = r * std::cos(6.283185307179586476925286766559 * u2);
      if (i + 1 < n) v[i + 1] = r * std::sin(6.283185307179586476925286766559 * u2);
    }
    double norm2 = 0.0;
    for (double vi : v) norm2 += vi * vi;
    if (norm2 > 1e-24) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (auto& vi : v) vi *= inv;
      return v;
    }
  }
}

}  // namespace rng

struct PollDirections {
  // n + 1 integer-valued direction vectors; the last is the exact negative
  // sum of the first n, which positively spans the space.
  std::vector<std::vector<double>> directions;
  double box_bound = 1.0;  // poll points satisfy |x - center|_inf <= frame * box_bound
};

// Orthogonal integer directions from a Householder reflector of a seeded
// random integer vector q: columns of (q.q) I - 2 q q^T are integer and
// mutually orthogonal, and their sup norm is at most q.q.
inline PollDirections generate_poll_directions(std::size_t n,
                                               double frame_size,
                                               double mesh_size,
                                               std::mt19937_64& gen) {
  assert(n >= 1 && mesh_size > 0.0 && mesh_size <= frame_size);
  // Direction magnitude budget: |d|_inf <= L keeps mesh steps within the frame.
  const double ratio = frame_size / mesh_size;
  const double L = std::max(1.0, std::floor(ratio + 1e-9));

  const std::vector<double> v = rng::unit_vector(gen, n);

  // Largest integer rounding of s*v whose squared norm stays within L.
  std::vector<double> q(n, 0.0);
  double lo = 0.0, hi = std::sqrt(L) + 1.0;
  for (int it = 0; it < 60; ++it) {
    const double s = 0.5 * (lo + hi);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double qi = std::round(s * v[i]);
      norm2 += qi * qi;
    }
    if (norm2 <= L) {
      lo = s;
    } else {
      hi = s;
    }
  }
  double qnorm2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    q[i] = std::round(lo * v[i]);
    qnorm2 += q[i] * q[i];
  }
  if (qnorm2 == 0.0) {
    std::size_t imax = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
    q[imax] = v[imax] >= 0.0 ? 1.0 : -1.0;
    qnorm2 = 1.0;
  }

  PollDirections out;
  out.directions.assign(n + 1, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      out.directions[j][i] = (i == j ? qnorm2 : 0.0) - 2.0 * q[i] * q[j];
    }
  }
  double max_inf = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      out.directions[n][i] -= out.directions[j][i];
      max_inf = std::max(max_inf, std::abs(out.directions[j][i]));
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    max_inf = std::max(max_inf, std::abs(out.directions[n][i]));

  out.box_bound = std::max(1.0, max_inf * mesh_size / frame_size);
  return out;
}

// Poll candidates around a frame center; all lie on the mesh by construction.
inline std::vector<DecisionPoint> build_poll_set(const DecisionPoint& center,
                                                 const PollDirections& dirs,
                                                 double mesh_size) {
  std::vector<DecisionPoint> out;
  out.reserve(dirs.directions.size());
  for (const auto& d : dirs.directions) {
    DecisionPoint x(center.size());
    for (std::size_t i = 0; i < center.size(); ++i)
      x[i] = center[i] + mesh_size * d[i];
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace momads
