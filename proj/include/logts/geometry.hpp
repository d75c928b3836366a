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

// Points on the unit sphere S_{d-1}, eps-nets over it, and the nearest-atom
// quantisation map. Distances are Euclidean throughout.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "logts/errors.hpp"
#include "logts/rng.hpp"

namespace logts {

inline constexpr double kUnitNormTolerance = 1e-12;

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) noexcept { return std::sqrt(dot(a, a)); }

inline double distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

class UnitVector {
 public:
  // Accepts coordinates already on the sphere (to kUnitNormTolerance).
  static UnitVector from_coords(std::vector<double> coords) {
    if (coords.empty()) throw DimensionError("unit vector needs dimension >= 1");
    const double n = norm(coords);
    if (std::abs(n - 1.0) > kUnitNormTolerance) {
      throw DimensionError("vector norm " + std::to_string(n) + " is not 1");
    }
    return UnitVector(std::move(coords));
  }

  static UnitVector normalized(std::vector<double> coords) {
    if (coords.empty()) throw DimensionError("unit vector needs dimension >= 1");
    const double n = norm(coords);
    if (!(n > 0.0) || !std::isfinite(n)) throw DimensionError("cannot normalise a zero vector");
    for (double& c : coords) c /= n;
    return UnitVector(std::move(coords));
  }

  // e_axis in R^dim, with the given sign.
  static UnitVector basis(std::size_t dim, std::size_t axis, double sign = 1.0) {
    std::vector<double> c(dim, 0.0);
    c.at(axis) = sign < 0.0 ? -1.0 : 1.0;
    return UnitVector(std::move(c));
  }

  std::size_t dim() const noexcept { return coords_.size(); }
  std::span<const double> coords() const noexcept { return coords_; }
  double operator[](std::size_t i) const noexcept { return coords_[i]; }
  operator std::span<const double>() const noexcept { return coords_; }

  friend bool operator==(const UnitVector&, const UnitVector&) = default;

 private:
  explicit UnitVector(std::vector<double> coords) : coords_(std::move(coords)) {}
  std::vector<double> coords_;
};

// Row-major list of unit vectors sharing one dimension.
class AtomSet {
 public:
  explicit AtomSet(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw DimensionError("atom dimension must be >= 1");
  }

  void push_back(std::span<const double> coords) {
    if (coords.size() != dim_) throw DimensionError("atom dimension mismatch");
    if (std::abs(norm(coords) - 1.0) > kUnitNormTolerance) {
      throw DimensionError("atom is not unit-norm");
    }
    data_.insert(data_.end(), coords.begin(), coords.end());
  }
  void push_back(const UnitVector& v) { push_back(v.coords()); }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return data_.size() / dim_; }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const double> operator[](std::size_t i) const noexcept {
    return {data_.data() + i * dim_, dim_};
  }
  UnitVector at(std::size_t i) const {
    if (i >= size()) throw std::out_of_range("atom index out of range");
    const auto r = (*this)[i];
    return UnitVector::from_coords({r.begin(), r.end()});
  }

  // G[i*n + j] = <atom_i, atom_j>.
  std::vector<double> gram() const {
    const std::size_t n = size();
    std::vector<double> g(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      g[i * n + i] = dot((*this)[i], (*this)[i]);
      for (std::size_t j = i + 1; j < n; ++j) {
        g[i * n + j] = g[j * n + i] = dot((*this)[i], (*this)[j]);
      }
    }
    return g;
  }

  friend bool operator==(const AtomSet&, const AtomSet&) = default;

 private:
  std::size_t dim_;
  std::vector<double> data_;
};

// Rotation-invariant draw on S_{d-1}: normalised standard Gaussian vector.
inline UnitVector sample_uniform_sphere(std::size_t d, RngStream& rng) {
  if (d == 0) throw DimensionError("sample_uniform_sphere: d must be >= 1");
  std::vector<double> c(d);
  for (;;) {
    double n2 = 0.0;
    for (double& x : c) {
      x = rng.normal();
      n2 += x * x;
    }
    if (n2 > 1e-300) return UnitVector::normalized(std::move(c));
  }
}

// How a net's covering radius was established. Coverage is certified on a
// finite random sample, not proven.
struct NetCertificate {
  std::size_t validation_samples = 0;
  double empirical_radius = 0.0;  // max sampled distance to the nearest atom
  std::size_t rounds = 0;
  bool exact = false;  // true only for the closed-form d = 1 and eps >= 2 nets
};

struct EpsNet {
  AtomSet atoms;
  double epsilon;
  NetCertificate certificate;

  std::size_t dim() const noexcept { return atoms.dim(); }
  std::size_t size() const noexcept { return atoms.size(); }
};

struct Projection {
  std::size_t index;
  double distance;
};

// Nearest atom by Euclidean distance; ties go to the lowest index.
inline Projection nearest_atom(std::span<const double> point, const AtomSet& atoms) {
  if (point.size() != atoms.dim()) throw DimensionError("quantize: dimension mismatch");
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  const std::size_t d = atoms.dim();
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const auto a = atoms[k];
    double d2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) d2 += (point[i] - a[i]) * (point[i] - a[i]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = k;
    }
  }
  return {best, std::sqrt(best_d2)};
}

struct Quantized {
  std::size_t index;
  UnitVector atom;
  double distance;
};

inline Quantized quantize(const UnitVector& theta, const EpsNet& net) {
  const auto p = nearest_atom(theta.coords(), net.atoms);
  return {p.index, net.atoms.at(p.index), p.distance};
}

// Maximum nearest-atom distance over `samples` uniform sphere draws.
inline double empirical_covering_radius(const AtomSet& atoms, std::size_t samples, RngStream& rng) {
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto x = sample_uniform_sphere(atoms.dim(), rng);
    worst = std::max(worst, nearest_atom(x.coords(), atoms).distance);
  }
  return worst;
}

struct CoveringBounds {
  double lower;
  double upper;
};

// Covering numbers of the unit ball: 1 for eps >= 1, otherwise
// (1/eps)^d <= N <= (1 + 2/eps)^d.
inline CoveringBounds covering_number_bounds(std::size_t d, double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigError("covering_number_bounds: epsilon must be positive");
  if (epsilon >= 1.0) return {1.0, 1.0};
  const double dd = static_cast<double>(d);
  return {std::pow(1.0 / epsilon, dd), std::pow(1.0 + 2.0 / epsilon, dd)};
}

// log of the cardinality bound above, safe for huge d/eps.
inline double log_covering_upper(std::size_t d, double epsilon) {
  if (epsilon >= 1.0) return 0.0;
  return static_cast<double>(d) * std::log1p(2.0 / epsilon);
}

// Upper bound on the entropy of the quantised parameter.
inline double net_entropy_bound(const EpsNet& net) {
  return std::log(static_cast<double>(net.size()));
}

struct NetBuildOptions {
  std::size_t candidate_samples = 100000;
  std::size_t validation_samples = 100000;
  // Greedy insertion stops once every candidate is within this fraction of
  // epsilon; the remaining slack absorbs gaps between candidates.
  double candidate_radius_factor = 0.6;
  std::size_t max_rounds = 32;
  std::size_t max_atoms = 1u << 20;
};

// Greedy farthest-point eps-net on S_{d-1}.
//
// Candidates are uniform sphere samples. Atoms are inserted farthest-first
// until every candidate is covered; then a fresh validation batch is drawn.
// Validation points farther than epsilon from every atom join the candidate
// pool and insertion resumes. The build stops at the first validation batch
// with no failures, or throws CoverageError when the round or size budget
// runs out.
inline EpsNet build_eps_net(std::size_t d, double epsilon, RngStream& rng,
                            const NetBuildOptions& opts = {}) {
  if (d == 0) throw DimensionError("build_eps_net: d must be >= 1");
  if (!(epsilon > 0.0) || epsilon > 2.0) {
    throw ConfigError("build_eps_net: epsilon must lie in (0, 2]");
  }
  EpsNet net{AtomSet(d), epsilon, {}};
  if (epsilon >= 2.0) {
    net.atoms.push_back(sample_uniform_sphere(d, rng));
    net.certificate = {0, 2.0, 0, true};
    return net;
  }
  if (d == 1) {
    net.atoms.push_back(UnitVector::basis(1, 0, +1.0));
    net.atoms.push_back(UnitVector::basis(1, 0, -1.0));
    net.certificate = {0, 0.0, 0, true};
    return net;
  }

  const double cap = std::ceil(std::pow(1.0 + 2.0 / epsilon, static_cast<double>(d)));
  const double target = opts.candidate_radius_factor * epsilon;
  const double target2 = target * target;

  std::vector<double> cand;  // row-major candidate coordinates
  cand.reserve(opts.candidate_samples * d);
  for (std::size_t s = 0; s < opts.candidate_samples; ++s) {
    const auto x = sample_uniform_sphere(d, rng);
    cand.insert(cand.end(), x.coords().begin(), x.coords().end());
  }
  std::vector<double> min_d2(cand.size() / d, std::numeric_limits<double>::infinity());

  const auto insert = [&](std::size_t c) {
    const std::span<const double> a(cand.data() + c * d, d);
    net.atoms.push_back(a);
    const std::size_t m = min_d2.size();
    for (std::size_t k = 0; k < m; ++k) {
      const double* p = cand.data() + k * d;
      double d2 = 0.0;
      for (std::size_t i = 0; i < d; ++i) d2 += (p[i] - a[i]) * (p[i] - a[i]);
      if (d2 < min_d2[k]) min_d2[k] = d2;
    }
  };
  const auto grow = [&] {
    for (;;) {
      const auto it = std::max_element(min_d2.begin(), min_d2.end());
      if (*it <= target2) return;
      if (net.atoms.size() >= opts.max_atoms || static_cast<double>(net.atoms.size()) >= cap) {
        throw CoverageError("build_eps_net: atom budget exhausted at " +
                            std::to_string(net.atoms.size()) + " atoms (d=" + std::to_string(d) +
                            ", eps=" + std::to_string(epsilon) + ")");
      }
      insert(static_cast<std::size_t>(it - min_d2.begin()));
    }
  };

  insert(0);
  for (std::size_t round = 1; round <= opts.max_rounds; ++round) {
    grow();
    double worst = 0.0;
    std::vector<std::size_t> failures;
    std::vector<double> batch;
    batch.reserve(opts.validation_samples * d);
    for (std::size_t s = 0; s < opts.validation_samples; ++s) {
      const auto x = sample_uniform_sphere(d, rng);
      const double dist = nearest_atom(x.coords(), net.atoms).distance;
      worst = std::max(worst, dist);
      if (dist > epsilon) {
        batch.insert(batch.end(), x.coords().begin(), x.coords().end());
        min_d2.push_back(dist * dist);
      }
    }
    if (batch.empty()) {
      net.certificate = {opts.validation_samples, worst, round, false};
      return net;
    }
    cand.insert(cand.end(), batch.begin(), batch.end());
  }
  throw CoverageError("build_eps_net: coverage not certified after " +
                      std::to_string(opts.max_rounds) + " validation rounds");
}

namespace detail {

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_row(std::ostream& os, std::span<const double> row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) os << ' ';
    os << format_real(row[i]);
  }
}

}  // namespace detail

// Plain-text net format:  "d epsilon n"  then n lines of d coordinates.
inline void write_net(std::ostream& os, const EpsNet& net) {
  os << net.dim() << ' ' << detail::format_real(net.epsilon) << ' ' << net.size() << '\n';
  for (std::size_t k = 0; k < net.size(); ++k) {
    detail::write_row(os, net.atoms[k]);
    os << '\n';
  }
}

inline EpsNet read_net(std::istream& is) {
  std::size_t d = 0, n = 0;
  double eps = 0.0;
  if (!(is >> d >> eps >> n) || d == 0 || n == 0) throw FormatError("net file: bad header");
  EpsNet net{AtomSet(d), eps, {}};
  std::vector<double> row(d);
  for (std::size_t k = 0; k < n; ++k) {
    for (double& x : row) {
      if (!(is >> x)) throw FormatError("net file: truncated at atom " + std::to_string(k));
    }
    try {
      net.atoms.push_back(row);
    } catch (const DimensionError&) {
      throw FormatError("net file: atom " + std::to_string(k) + " is not unit-norm");
    }
  }
  return net;
}

}  // namespace logts
