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

#include "logts/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "logts/rng.hpp"

namespace {

using logts::AtomSet;
using logts::RngStream;
using logts::UnitVector;

TEST(UnitVector, Construction) {
  EXPECT_NO_THROW(UnitVector::from_coords({0.6, 0.8}));
  EXPECT_THROW(UnitVector::from_coords({0.6, 0.9}), logts::DimensionError);
  EXPECT_THROW(UnitVector::from_coords({}), logts::DimensionError);
  EXPECT_THROW(UnitVector::normalized({0.0, 0.0}), logts::DimensionError);
  const auto v = UnitVector::normalized({3.0, 4.0});
  EXPECT_DOUBLE_EQ(v[0], 0.6);
  EXPECT_DOUBLE_EQ(v[1], 0.8);
  const auto e = UnitVector::basis(3, 2, -1.0);
  EXPECT_EQ(e.coords()[2], -1.0);
  EXPECT_EQ(e.dim(), 3u);
}

TEST(AtomSet, ValidatesAndStores) {
  AtomSet atoms(2);
  atoms.push_back(UnitVector::basis(2, 0));
  EXPECT_THROW(atoms.push_back(std::vector<double>{1.0, 1.0}), logts::DimensionError);
  EXPECT_THROW(atoms.push_back(std::vector<double>{1.0, 0.0, 0.0}), logts::DimensionError);
  atoms.push_back(std::vector<double>{0.0, -1.0});
  EXPECT_EQ(atoms.size(), 2u);
  EXPECT_EQ(atoms.at(1), UnitVector::basis(2, 1, -1.0));
  EXPECT_THROW(atoms.at(2), std::out_of_range);
  EXPECT_THROW(AtomSet(0), logts::DimensionError);
}

TEST(AtomSet, GramIsSymmetricWithUnitDiagonal) {
  RngStream rng(1);
  AtomSet atoms(4);
  for (int k = 0; k < 10; ++k) atoms.push_back(logts::sample_uniform_sphere(4, rng));
  const auto g = atoms.gram();
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_NEAR(g[i * 10 + i], 1.0, 1e-15);
    for (std::size_t j = 0; j < 10; ++j) {
      EXPECT_EQ(g[i * 10 + j], g[j * 10 + i]);
      EXPECT_NEAR(g[i * 10 + j], logts::dot(atoms[i], atoms[j]), 1e-15);
    }
  }
}

TEST(SphereSampling, UnitNormAndIsotropic) {
  RngStream rng(2);
  const std::size_t d = 3;
  const int n = 100000;
  std::vector<double> mean(d, 0.0), second(d, 0.0);
  for (int k = 0; k < n; ++k) {
    const auto x = logts::sample_uniform_sphere(d, rng);
    ASSERT_NEAR(logts::norm(x), 1.0, 1e-12);
    for (std::size_t i = 0; i < d; ++i) {
      mean[i] += x[i] / n;
      second[i] += x[i] * x[i] / n;
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    EXPECT_NEAR(mean[i], 0.0, 0.01);
    EXPECT_NEAR(second[i], 1.0 / d, 0.01);
  }
  EXPECT_THROW(logts::sample_uniform_sphere(0, rng), logts::DimensionError);
}

TEST(SphereSampling, OneDimensionIsPlusMinusOne) {
  RngStream rng(3);
  int plus = 0;
  for (int k = 0; k < 10000; ++k) {
    const double x = logts::sample_uniform_sphere(1, rng)[0];
    ASSERT_TRUE(x == 1.0 || x == -1.0);
    plus += x > 0;
  }
  EXPECT_NEAR(plus / 10000.0, 0.5, 0.03);
}

TEST(NearestAtom, MatchesBruteForceAndBreaksTiesLow) {
  RngStream rng(4);
  AtomSet atoms(3);
  for (int k = 0; k < 40; ++k) atoms.push_back(logts::sample_uniform_sphere(3, rng));
  for (int t = 0; t < 200; ++t) {
    const auto x = logts::sample_uniform_sphere(3, rng);
    std::size_t best = 0;
    for (std::size_t k = 1; k < atoms.size(); ++k) {
      if (logts::distance(x, atoms[k]) < logts::distance(x, atoms[best])) best = k;
    }
    const auto p = logts::nearest_atom(x.coords(), atoms);
    EXPECT_EQ(p.index, best);
    EXPECT_NEAR(p.distance, logts::distance(x, atoms[best]), 1e-15);
  }
  AtomSet pair(2);
  pair.push_back(UnitVector::basis(2, 0));
  pair.push_back(UnitVector::basis(2, 0, -1.0));
  const std::vector<double> midway{0.0, 1.0};
  EXPECT_EQ(logts::nearest_atom(midway, pair).index, 0u);
  EXPECT_THROW(logts::nearest_atom(std::vector<double>{1.0}, pair), logts::DimensionError);
}

TEST(CoveringBounds, Values) {
  auto b = logts::covering_number_bounds(2, 0.5);
  EXPECT_DOUBLE_EQ(b.lower, 4.0);
  EXPECT_DOUBLE_EQ(b.upper, 25.0);
  b = logts::covering_number_bounds(3, 1.0);
  EXPECT_EQ(b.lower, 1.0);
  EXPECT_EQ(b.upper, 1.0);
  EXPECT_NEAR(logts::log_covering_upper(2, 0.5), std::log(25.0), 1e-15);
  EXPECT_EQ(logts::log_covering_upper(2, 1.5), 0.0);
  EXPECT_THROW(logts::covering_number_bounds(2, 0.0), logts::ConfigError);
  // no overflow for huge exponents
  EXPECT_TRUE(std::isfinite(logts::log_covering_upper(1000, 1e-6)));
}

// Coverage check on fresh samples, independent of the builder's own
// validation batch.
double fresh_radius(const logts::EpsNet& net, std::uint64_t seed, int samples) {
  RngStream rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto x = logts::sample_uniform_sphere(net.dim(), rng);
    double best = 10.0;
    for (std::size_t k = 0; k < net.size(); ++k) best = std::min(best, logts::distance(x, net.atoms[k]));
    worst = std::max(worst, best);
  }
  return worst;
}

TEST(EpsNet, CoversTheCircle) {
  RngStream rng(5);
  const auto net = logts::build_eps_net(2, 0.1, rng);
  EXPECT_LE(net.certificate.empirical_radius, 0.1);
  EXPECT_FALSE(net.certificate.exact);
  EXPECT_LE(fresh_radius(net, 99, 20000), 0.1);
  // covering-number sandwich for the ball
  const auto b = logts::covering_number_bounds(2, 0.1);
  EXPECT_LE(static_cast<double>(net.size()), b.upper);
  // an eps-net of the circle needs at least 2 pi / (2 arcsin-ish spacing) atoms
  EXPECT_GE(static_cast<double>(net.size()), 2.0 * M_PI / 0.1 / 1.01);
}

TEST(EpsNet, CoversTheTwoSphere) {
  RngStream rng(6);
  const auto net = logts::build_eps_net(3, 0.5, rng);
  EXPECT_LE(fresh_radius(net, 100, 20000), 0.5);
  EXPECT_LE(std::log(static_cast<double>(net.size())), logts::log_covering_upper(3, 0.5));
  for (std::size_t k = 0; k < net.size(); ++k) EXPECT_NEAR(logts::norm(net.atoms[k]), 1.0, 1e-12);
}

TEST(EpsNet, ClosedFormCases) {
  RngStream rng(7);
  const auto line = logts::build_eps_net(1, 0.3, rng);
  EXPECT_EQ(line.size(), 2u);
  EXPECT_TRUE(line.certificate.exact);
  const auto whole = logts::build_eps_net(4, 2.0, rng);
  EXPECT_EQ(whole.size(), 1u);
  EXPECT_TRUE(whole.certificate.exact);
}

TEST(EpsNet, Errors) {
  RngStream rng(8);
  EXPECT_THROW(logts::build_eps_net(2, 0.0, rng), logts::ConfigError);
  EXPECT_THROW(logts::build_eps_net(2, 2.5, rng), logts::ConfigError);
  EXPECT_THROW(logts::build_eps_net(0, 0.5, rng), logts::DimensionError);
  logts::NetBuildOptions tiny;
  tiny.max_atoms = 3;
  EXPECT_THROW(logts::build_eps_net(3, 0.2, rng, tiny), logts::CoverageError);
}

TEST(EpsNet, DeterministicForSeed) {
  RngStream a(9), b(9);
  const auto n1 = logts::build_eps_net(2, 0.3, a);
  const auto n2 = logts::build_eps_net(2, 0.3, b);
  EXPECT_EQ(n1.atoms, n2.atoms);
}

TEST(Quantize, ReturnsNearestAtomWithinEpsilon) {
  RngStream rng(10);
  const auto net = logts::build_eps_net(2, 0.2, rng);
  for (int t = 0; t < 1000; ++t) {
    const auto theta = logts::sample_uniform_sphere(2, rng);
    const auto q = logts::quantize(theta, net);
    EXPECT_LE(q.distance, 0.2);
    EXPECT_EQ(q.atom, net.atoms.at(q.index));
  }
}

TEST(NetIo, RoundTripIsExact) {
  RngStream rng(11);
  const auto net = logts::build_eps_net(3, 0.8, rng);
  std::stringstream ss;
  logts::write_net(ss, net);
  const auto back = logts::read_net(ss);
  EXPECT_EQ(back.atoms, net.atoms);
  EXPECT_EQ(back.epsilon, net.epsilon);
  EXPECT_NEAR(logts::net_entropy_bound(back), std::log(static_cast<double>(net.size())), 1e-15);
}

TEST(NetIo, RejectsMalformedInput) {
  std::stringstream bad_header("x y z");
  EXPECT_THROW(logts::read_net(bad_header), logts::FormatError);
  std::stringstream truncated("2 0.5 2\n1 0\n");
  EXPECT_THROW(logts::read_net(truncated), logts::FormatError);
  std::stringstream off_sphere("2 0.5 1\n1 1\n");
  EXPECT_THROW(logts::read_net(off_sphere), logts::FormatError);
}

TEST(Format, SeventeenSignificantDigits) {
  EXPECT_EQ(logts::detail::format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(logts::detail::format_real(1.0), "1");
  EXPECT_EQ(std::stod(logts::detail::format_real(M_PI)), M_PI);
}

}  // namespace
