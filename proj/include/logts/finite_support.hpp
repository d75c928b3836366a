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

#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "logts/errors.hpp"
#include "logts/geometry.hpp"

namespace logts {

inline constexpr double kWeightSumTolerance = 1e-9;

// Probability distribution with finite support on the unit sphere. Serves
// as a finite prior, an agent posterior, and the law of (Theta, Theta_hat)
// in the information-ratio computations (the two are i.i.d. from it).
class FiniteSupport {
 public:
  FiniteSupport(AtomSet atoms, std::vector<double> weights)
      : atoms_(std::move(atoms)), weights_(std::move(weights)) {
    if (atoms_.empty()) throw ConfigError("finite support needs at least one atom");
    validate_weights();
  }

  // Replaces the weight vector, keeping the atoms.
  void reweight(std::vector<double> weights) {
    weights_ = std::move(weights);
    validate_weights();
  }

  static FiniteSupport point_mass(const UnitVector& atom) {
    AtomSet a(atom.dim());
    a.push_back(atom);
    return FiniteSupport(std::move(a), {1.0});
  }

  static FiniteSupport uniform(AtomSet atoms) {
    const std::size_t n = atoms.size();
    return FiniteSupport(std::move(atoms), std::vector<double>(n, n ? 1.0 / n : 0.0));
  }

  const AtomSet& atoms() const noexcept { return atoms_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  std::size_t dim() const noexcept { return atoms_.dim(); }

  // -sum w log w
  double entropy() const noexcept {
    double h = 0.0;
    for (double w : weights_) {
      if (w > 0.0) h -= w * std::log(w);
    }
    return h;
  }

  friend bool operator==(const FiniteSupport&, const FiniteSupport&) = default;

 private:
  void validate_weights() const {
    if (weights_.size() != atoms_.size()) {
      throw ConfigError("finite support: " + std::to_string(atoms_.size()) + " atoms but " +
                        std::to_string(weights_.size()) + " weights");
    }
    double total = 0.0;
    for (double w : weights_) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("finite support: negative weight");
      total += w;
    }
    if (std::abs(total - 1.0) > kWeightSumTolerance) {
      throw ConfigError("finite support: weights sum to " + std::to_string(total));
    }
  }

  AtomSet atoms_;
  std::vector<double> weights_;
};

using FinitePrior = FiniteSupport;
using Posterior = FiniteSupport;
using DiscreteJoint = FiniteSupport;

// Finite-prior / posterior-snapshot text format. Same layout as the net
// file with a trailing weight column; the header's epsilon slot is written
// as 0 and ignored on read:
//
//   d 0 n
//   x_1 ... x_d w
inline void write_finite_support(std::ostream& os, const FiniteSupport& s) {
  os << s.dim() << " 0 " << s.size() << '\n';
  for (std::size_t k = 0; k < s.size(); ++k) {
    detail::write_row(os, s.atoms()[k]);
    os << ' ' << detail::format_real(s.weights()[k]) << '\n';
  }
}

inline FiniteSupport read_finite_support(std::istream& is) {
  std::size_t d = 0, n = 0;
  double ignored = 0.0;
  if (!(is >> d >> ignored >> n) || d == 0 || n == 0) throw FormatError("prior file: bad header");
  AtomSet atoms(d);
  std::vector<double> weights(n);
  std::vector<double> row(d);
  for (std::size_t k = 0; k < n; ++k) {
    for (double& x : row) {
      if (!(is >> x)) throw FormatError("prior file: truncated at atom " + std::to_string(k));
    }
    if (!(is >> weights[k])) throw FormatError("prior file: missing weight " + std::to_string(k));
    try {
      atoms.push_back(row);
    } catch (const DimensionError&) {
      throw FormatError("prior file: atom " + std::to_string(k) + " is not unit-norm");
    }
  }
  return FiniteSupport(std::move(atoms), std::move(weights));
}

}  // namespace logts
