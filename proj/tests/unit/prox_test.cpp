// Copyright 2026 The degas Authors
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

#include "degas/prox.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "degas/errors.hpp"
#include "test_support.hpp"

namespace degas {
namespace {

// argmin_y 0.5 (y - x)^2 + t |y| by scanning a fine grid.
double brute_force_l1_prox(double x, double t) {
  double best = 0.0;
  double best_val = INFINITY;
  for (int j = -400000; j <= 400000; ++j) {
    const double y = j * 1e-5;
    const double v = 0.5 * (y - x) * (y - x) + t * std::abs(y);
    if (v < best_val) {
      best_val = v;
      best = y;
    }
  }
  return best;
}

TEST(SoftThreshold, MatchesBruteForce) {
  const Eigen::Vector3d x(0.0, 2.0, -0.3);
  const Eigen::VectorXd y = soft_threshold(x, 0.5);
  EXPECT_EQ(y[0], 0.0);
  EXPECT_NEAR(y[1], 1.5, 1e-15);
  EXPECT_EQ(y[2], 0.0);
  for (double xv : {2.0, -0.3, 0.7, -1.9, 0.5}) {
    EXPECT_NEAR(soft_threshold(Eigen::VectorXd::Constant(1, xv), 0.5)[0], brute_force_l1_prox(xv, 0.5), 1e-5) << xv;
  }
  EXPECT_THROW(soft_threshold(x, -0.1), InvalidArgument);
}

TEST(Prox, L1ProxScalesWithStep) {
  const auto prox = l1_prox(0.2);
  EXPECT_NEAR(prox(Eigen::VectorXd::Constant(1, 1.0), 2.0)[0], 0.6, 1e-15);
  EXPECT_THROW(l1_prox(-1.0), InvalidArgument);
}

TEST(Prox, SquaredDistanceClosedForm) {
  const auto prox = squared_distance_prox(Eigen::Vector2d(1.0, -1.0));
  EXPECT_TRUE(prox(Eigen::Vector2d(3.0, 3.0), 1.0).isApprox(Eigen::Vector2d(2.0, 1.0)));
  EXPECT_THROW(prox(Eigen::Vector3d::Zero(), 1.0), InvalidArgument);
}

// Proximal maps are firmly nonexpansive: 1/2-averaged.
TEST(Prox, FirmlyNonexpansiveBySampling) {
  auto p = make_uniform_partition(6);
  for (const ProxFn& prox : {l1_prox(0.3), zero_prox(), squared_distance_prox(Eigen::VectorXd::Ones(1))}) {
    Operator op(p, [prox](const BlockVector& x, std::size_t i) -> Eigen::VectorXd { return prox(x.block(i), 0.7); });
    EXPECT_EQ(testing::sample_averagedness(op, 0.5, 500, 12).violations, 0);
  }
}

TEST(ConsensusProjection, Examples) {
  auto p = make_uniform_partition(2);
  const auto z = project_consensus(BlockVector(p, Eigen::Vector2d(0.0, 2.0)));
  EXPECT_EQ(z.values(), Eigen::Vector2d(1.0, 1.0));
  auto q = make_uniform_partition(3, 2);
  const BlockVector same(q, Eigen::VectorXd::LinSpaced(2, 1.0, 2.0).replicate(3, 1));
  EXPECT_EQ(project_consensus(same).values(), same.values());
  EXPECT_THROW(project_consensus(BlockVector(make_partition({1, 2}))), InvalidArgument);
}

TEST(Projector, IdempotentAndFeasible) {
  RandomStream rng(8, 1);
  auto p = make_uniform_partition(4, 3);
  const Eigen::MatrixXd a = testing::gaussian(rng, 3 * 12).reshaped(3, 12);
  const Eigen::VectorXd b = testing::gaussian(rng, 3);
  for (const auto& proj : {Projector::identity(), Projector::consensus(*p), Projector::affine(a, b)}) {
    for (int t = 0; t < 50; ++t) {
      const Eigen::VectorXd x = testing::gaussian(rng, 12, 3.0);
      const Eigen::VectorXd px = proj(x);
      EXPECT_LE((proj(px) - px).norm(), 1e-12 * (1.0 + px.norm()));
      if (proj.kind() == Projector::Kind::kAffine) {
        EXPECT_LE((a * px - b).norm(), 1e-10);
      }
      // x - P(x) is orthogonal to P(x) - P(y) for any second point.
      const Eigen::VectorXd py = proj(testing::gaussian(rng, 12));
      EXPECT_NEAR((x - px).dot(px - py), 0.0, 1e-9 * (1.0 + x.squaredNorm()));
    }
  }
  const Eigen::VectorXd x = testing::gaussian(rng, 12);
  EXPECT_TRUE(Projector::consensus(*p)(x).isApprox(project_consensus(BlockVector(p, x)).values(), 1e-15));
}

TEST(Projector, Validation) {
  EXPECT_THROW(Projector::consensus(BlockPartition({1, 2})), InvalidArgument);
  EXPECT_THROW(Projector::affine(Eigen::MatrixXd::Zero(2, 3), Eigen::VectorXd::Zero(2)), InvalidArgument);
  EXPECT_THROW(Projector::affine(Eigen::MatrixXd::Identity(2, 3), Eigen::VectorXd::Zero(3)), InvalidArgument);
  EXPECT_THROW(Projector::consensus(BlockPartition({2, 2}))(Eigen::VectorXd::Zero(3)), InvalidArgument);
}

}  // namespace
}  // namespace degas
