// Copyright 2026 The logts Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Random finite instances for the information-ratio scan and the lemma
// sweeps: posteriors from several families, discrete scalar laws and
// finite joint laws of vector pairs.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <random>
#include <string_view>
#include <vector>

#include "logts/errors.hpp"
#include "logts/finite_support.hpp"
#include "logts/geometry.hpp"
#include "logts/info_metrics.hpp"
#include "logts/rng.hpp"

namespace logts {

enum class PosteriorFamily { kDirichlet, kAntipodal, kNearPointMass, kSimplex, kCluster };

inline constexpr std::array kPosteriorFamilies = {
    PosteriorFamily::kDirichlet, PosteriorFamily::kAntipodal, PosteriorFamily::kNearPointMass,
    PosteriorFamily::kSimplex, PosteriorFamily::kCluster};

inline std::string_view family_name(PosteriorFamily f) {
  switch (f) {
    case PosteriorFamily::kDirichlet: return "dirichlet";
    case PosteriorFamily::kAntipodal: return "antipodal";
    case PosteriorFamily::kNearPointMass: return "near_point_mass";
    case PosteriorFamily::kSimplex: return "simplex";
    case PosteriorFamily::kCluster: return "cluster";
  }
  return "unknown";
}

// Uniform integer in [lo, hi].
inline std::size_t uniform_count(RngStream& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.uniform() * static_cast<double>(hi - lo + 1));
}

inline double log_uniform(RngStream& rng, double lo, double hi) {
  return std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
}

// Dirichlet(alpha, ..., alpha); falls back to a uniform vector if every
// gamma draw underflows.
inline std::vector<double> dirichlet_weights(std::size_t n, double alpha, RngStream& rng) {
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (double& x : w) {
    x = gamma(rng);
    total += x;
  }
  if (!(total > 0.0) || !std::isfinite(total)) return std::vector<double>(n, 1.0 / n);
  for (double& x : w) x /= total;
  return w;
}

// Random weights with a random concentration, from near-uniform to spiky.
inline std::vector<double> random_weights(std::size_t n, RngStream& rng) {
  return dirichlet_weights(n, log_uniform(rng, 0.05, 20.0), rng);
}

// Haar-ish random orthogonal matrix (Gram-Schmidt on Gaussian columns),
// row-major.
inline std::vector<double> random_rotation(std::size_t d, RngStream& rng) {
  std::vector<double> q(d * d);
  for (std::size_t c = 0; c < d; ++c) {
    for (;;) {
      std::vector<double> v(d);
      for (double& x : v) x = rng.normal();
      for (std::size_t p = 0; p < c; ++p) {
        double proj = 0.0;
        for (std::size_t r = 0; r < d; ++r) proj += v[r] * q[r * d + p];
        for (std::size_t r = 0; r < d; ++r) v[r] -= proj * q[r * d + p];
      }
      const double n = norm(v);
      if (n < 1e-6) continue;
      for (std::size_t r = 0; r < d; ++r) q[r * d + c] = v[r] / n;
      break;
    }
  }
  return q;
}

inline UnitVector rotate(std::span<const double> rot, std::span<const double> x) {
  const std::size_t d = x.size();
  std::vector<double> y(d, 0.0);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) y[r] += rot[r * d + c] * x[c];
  }
  return UnitVector::normalized(y);
}

// d + 1 vertices of a regular simplex inscribed in the sphere (pairwise
// inner product -1/d). For d = 1 this is {+1, -1}.
inline AtomSet simplex_vertices(std::size_t d) {
  const std::size_t m = d + 1;
  const double centre = 1.0 / static_cast<double>(m);
  // Orthonormal basis of the hyperplane orthogonal to (1, ..., 1) in R^m.
  std::vector<std::vector<double>> basis;
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<double> v(m, -centre);
    v[k] += 1.0;
    for (const auto& b : basis) {
      const double proj = dot(v, b);
      for (std::size_t r = 0; r < m; ++r) v[r] -= proj * b[r];
    }
    const double n = norm(v);
    for (double& x : v) x /= n;
    basis.push_back(std::move(v));
  }
  AtomSet atoms(d);
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<double> e(m, -centre);
    e[k] += 1.0;
    std::vector<double> coords(d);
    for (std::size_t b = 0; b < d; ++b) coords[b] = dot(e, basis[b]);
    atoms.push_back(UnitVector::normalized(coords));
  }
  return atoms;
}

inline Posterior random_posterior(PosteriorFamily family, std::size_t d, std::size_t n,
                                  RngStream& rng) {
  if (d == 0 || n == 0) throw ConfigError("random_posterior: empty instance");
  AtomSet atoms(d);
  switch (family) {
    case PosteriorFamily::kDirichlet:
      for (std::size_t i = 0; i < n; ++i) atoms.push_back(sample_uniform_sphere(d, rng));
      return Posterior(std::move(atoms), random_weights(n, rng));

    case PosteriorFamily::kAntipodal: {
      // floor(n/2) antipodal pairs (at least one), plus a stray atom when n is odd.
      const std::size_t pairs = std::max<std::size_t>(1, n / 2);
      for (std::size_t k = 0; k < pairs; ++k) {
        const auto u = sample_uniform_sphere(d, rng);
        std::vector<double> neg(u.coords().begin(), u.coords().end());
        for (double& x : neg) x = -x;
        atoms.push_back(u);
        atoms.push_back(neg);
      }
      if (n > 2 * pairs) atoms.push_back(sample_uniform_sphere(d, rng));
      auto w = random_weights(atoms.size(), rng);
      return Posterior(std::move(atoms), std::move(w));
    }

    case PosteriorFamily::kNearPointMass: {
      for (std::size_t i = 0; i < std::max<std::size_t>(n, 2); ++i) {
        atoms.push_back(sample_uniform_sphere(d, rng));
      }
      const double rest = log_uniform(rng, 1e-9, 0.2);
      const auto w = random_weights(atoms.size() - 1, rng);
      std::vector<double> weights{1.0 - rest};
      for (double x : w) weights.push_back(rest * x);
      return Posterior(std::move(atoms), std::move(weights));
    }

    case PosteriorFamily::kSimplex: {
      const auto rot = random_rotation(d, rng);
      const auto vertices = simplex_vertices(d);
      for (std::size_t k = 0; k < vertices.size(); ++k) atoms.push_back(rotate(rot, vertices[k]));
      // Half the time exactly uniform, the most symmetric case.
      auto w = rng.uniform() < 0.5 ? std::vector<double>(d + 1, 1.0 / (d + 1))
                                   : random_weights(d + 1, rng);
      return Posterior(std::move(atoms), std::move(w));
    }

    case PosteriorFamily::kCluster: {
      // A few tight clusters; the spread is log-uniform so some clusters are
      // nearly point masses.
      const std::size_t centres = uniform_count(rng, 1, std::min<std::size_t>(n, 4));
      std::vector<UnitVector> c;
      for (std::size_t k = 0; k < centres; ++k) c.push_back(sample_uniform_sphere(d, rng));
      const double spread = log_uniform(rng, 1e-6, 0.3);
      for (std::size_t i = 0; i < n; ++i) {
        const auto& base = c[i % centres];
        std::vector<double> x(base.coords().begin(), base.coords().end());
        for (double& v : x) v += spread * rng.normal();
        if (norm(x) < 1e-12) x.assign(base.coords().begin(), base.coords().end());
        atoms.push_back(UnitVector::normalized(x));
      }
      return Posterior(std::move(atoms), random_weights(n, rng));
    }
  }
  throw ConfigError("random_posterior: unknown family");
}

// Discrete law on [lo, hi] with up to max_atoms atoms; some atoms sit
// exactly on the endpoints or coincide.
struct DiscreteLaw {
  std::vector<double> atoms;
  std::vector<double> weights;
};

inline DiscreteLaw random_discrete_law(RngStream& rng, double lo, double hi,
                                       std::size_t max_atoms = 20) {
  const std::size_t n = uniform_count(rng, 1, max_atoms);
  DiscreteLaw law;
  law.atoms.resize(n);
  const double centre = lo + (hi - lo) * rng.uniform();
  const double width = log_uniform(rng, 1e-6, 1.0) * (hi - lo);
  for (double& x : law.atoms) {
    const double r = rng.uniform();
    if (r < 0.1) {
      x = lo;
    } else if (r < 0.2) {
      x = hi;
    } else if (r < 0.5) {
      x = std::clamp(centre + width * (rng.uniform() - 0.5), lo, hi);
    } else {
      x = lo + (hi - lo) * rng.uniform();
    }
  }
  law.weights = random_weights(n, rng);
  return law;
}

// Finite joint law of (U, V) in R^d. Mixes independent Gaussian pairs,
// exactly correlated pairs (V = cU) and orthonormal frames (U = V = e_k).
inline VectorPairDistribution random_pair_distribution(std::size_t d, RngStream& rng,
                                                       std::size_t max_support = 12) {
  VectorPairDistribution dist;
  dist.dim = d;
  const double mode = rng.uniform();
  if (mode < 0.15) {
    // U = V uniform over a rotated orthonormal frame: the equality case.
    const auto rot = random_rotation(d, rng);
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t r = 0; r < d; ++r) {
        dist.u.push_back(rot[r * d + k]);
        dist.v.push_back(rot[r * d + k]);
      }
    }
    dist.probs = rng.uniform() < 0.5 ? std::vector<double>(d, 1.0 / d) : random_weights(d, rng);
    return dist;
  }
  const std::size_t m = uniform_count(rng, 1, max_support);
  const double scale = log_uniform(rng, 1e-3, 1e3);
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<double> u(d), v(d);
    for (double& x : u) x = scale * rng.normal();
    if (mode < 0.5) {
      const double c = rng.normal();
      for (std::size_t r = 0; r < d; ++r) v[r] = c * u[r];
    } else {
      for (double& x : v) x = scale * rng.normal();
    }
    dist.u.insert(dist.u.end(), u.begin(), u.end());
    dist.v.insert(dist.v.end(), v.begin(), v.end());
  }
  dist.probs = random_weights(m, rng);
  return dist;
}

// Random joint for the variance-ratio sweeps: a random family, d in
// [1, max_dim], support size in [1, max_atoms].
inline DiscreteJoint random_joint(RngStream& rng, std::size_t max_dim, std::size_t max_atoms) {
  const auto family = kPosteriorFamilies[uniform_count(rng, 0, kPosteriorFamilies.size() - 1)];
  const std::size_t d = uniform_count(rng, 1, max_dim);
  const std::size_t n = uniform_count(rng, 1, max_atoms);
  return random_posterior(family, d, n, rng);
}

}  // namespace logts
