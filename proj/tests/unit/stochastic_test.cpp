#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "foliage/diffgeo.hpp"
#include "foliage/errors.hpp"
#include "foliage/stochastic.hpp"
#include "test_support.hpp"

namespace foliage {
namespace {

using testing::field;
using testing::origin;

DiffusionParams params(int paths, double t, double dt = 1e-3) {
  DiffusionParams p;
  p.paths = paths;
  p.t = t;
  p.dt = dt;
  p.seed = 7;
  return p;
}

double sampleVariance(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size() - 1);
}

TEST(Params, Validation) {
  EXPECT_NO_THROW(params(10, 0.1).validate());
  EXPECT_THROW(params(0, 0.1).validate(), std::invalid_argument);
  EXPECT_THROW(params(10, 0.1, 0.0).validate(), std::invalid_argument);
  EXPECT_THROW(params(10, 0.1, 0.03).validate(), std::invalid_argument);
  EXPECT_EQ(params(10, 0.1, 1e-3).steps(), 100);
}

TEST(Product, CoordinateVarianceIsTwoT) {
  // Euclidean Brownian motion with generator Laplacian: Var = 2t per horizontal direction.
  const auto model = productModel(2, 1);
  const double t = 0.1;
  const auto bundle = simulatePaths(model, origin(model), params(4000, t));
  for (int i = 0; i < 2; ++i) {
    std::vector<double> xs;
    for (const auto& p : bundle.terminal) xs.push_back(p[static_cast<std::size_t>(i)]);
    const double var = sampleVariance(xs);
    const double se = 2 * t * std::sqrt(2.0 / static_cast<double>(xs.size()));
    EXPECT_NEAR(var, 2 * t, 3 * se);
  }
  for (const auto& p : bundle.terminal) EXPECT_DOUBLE_EQ(p[2], 0.0);
}

TEST(Product, MartingaleCoordinate) {
  const auto model = productModel(2, 1);
  const auto e = heatSemigroup(model, field("x1", model), origin(model), params(4000, 0.1));
  EXPECT_NEAR(e.value, 0.0, 3 * e.standardError);
  EXPECT_TRUE(e.reliable);
}

TEST(Heisenberg, MomentsFromTheOrigin) {
  const auto model = heisenbergModel(1);
  const auto p = params(4000, 0.1);
  const auto z = heatSemigroup(model, field("z", model), origin(model), p);
  EXPECT_NEAR(z.value, 0.0, 3 * z.standardError);
  // L(x^2 + y^2) = 4.
  const auto r = heatSemigroup(model, field("x1^2 + y1^2", model), origin(model), p);
  EXPECT_NEAR(r.value, 0.4, 3 * r.standardError);
  EXPECT_EQ(r.exitFraction, 0.0);
}

TEST(Heisenberg, HalvingTheStepStaysWithinTheErrorBudget) {
  const auto model = heisenbergModel(1);
  const std::vector<double> x0{0.5, -0.3, 0.2};
  for (const char* text : {"x1^2 + y1^2", "z + x1*y1", "sin(x1) * cos(y1)"}) {
    const auto f = field(text, model);
    const auto coarse = heatSemigroup(model, f, x0, params(4000, 0.1, 1e-2));
    const auto fine = heatSemigroup(model, f, x0, params(4000, 0.1, 5e-3));
    const double sigma = std::hypot(coarse.standardError, fine.standardError);
    EXPECT_LT(std::abs(coarse.value - fine.value), 3 * sigma + 1e-2) << text;
  }
}

TEST(Heisenberg, ConstantIsConservedExactly) {
  const auto model = heisenbergModel(1);
  const auto e = heatSemigroup(model, constantField(1.0), origin(model), params(500, 0.1));
  EXPECT_EQ(e.value, 1.0);
  EXPECT_EQ(e.standardError, 0.0);
}

TEST(Determinism, SeedAndThreadCountDoNotChangeResults) {
  const auto model = su2Model(1.0);
  const auto f = field("v1 * v2 + v3", model);
  auto p = params(300, 0.05);
  const auto a = heatSemigroup(model, f, origin(model), p);
  const auto b = heatSemigroup(model, f, origin(model), p);
  p.threads = 3;
  const auto c = heatSemigroup(model, f, origin(model), p);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.value, c.value);
  EXPECT_EQ(a.standardError, c.standardError);
  p.seed = 8;
  EXPECT_NE(heatSemigroup(model, f, origin(model), p).value, a.value);
}

TEST(StandardError, ScalesAsInverseRootN) {
  const auto model = heisenbergModel(1);
  const auto f = field("x1", model);
  const auto small = heatSemigroup(model, f, origin(model), params(1000, 0.1, 1e-2));
  const auto large = heatSemigroup(model, f, origin(model), params(10000, 0.1, 1e-2));
  EXPECT_NEAR(small.standardError / large.standardError, std::sqrt(10.0), 0.15 * std::sqrt(10.0));
}

TEST(Transport, IdentityOnProduct) {
  const auto model = productModel(2, 1);
  const auto bundle = simulatePaths(model, origin(model), params(50, 0.1), 1.0);
  ASSERT_EQ(bundle.transport.size(), 50u);
  for (const auto& tau : bundle.transport) EXPECT_LT((tau - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-14);
}

TEST(Transport, RecordedPathReproducesInlineTransport) {
  auto p = params(20, 0.05);
  p.recordPaths = true;
  for (const auto& model : {heisenbergModel(1), su2Model(1.0)}) {
    const std::vector<double> x0{0.1, -0.2, 0.05};
    const auto bundle = simulatePaths(model, x0, p, 0.5);
    ASSERT_EQ(bundle.paths.size(), 20u);
    for (std::size_t k = 0; k < bundle.paths.size(); ++k) {
      const auto t = dampedTransport(model, bundle.paths[k], 0.5);
      EXPECT_LT((t.tau - bundle.transport[k]).norm(), 1e-12);
      EXPECT_LT((t.theta - bundle.isometry[k]).norm(), 1e-12);
      EXPECT_LT((t.multiplicative * t.theta - t.tau).norm(), 1e-12);
    }
  }
}

TEST(Transport, ThetaIsAnIsometryAndTauIsBounded) {
  const auto model = heisenbergModel(1);
  const auto c = CDConstants::fromRho(0.0, 0.5, 1.0, 2);
  for (double eps : {0.5, 2.0}) {
    const auto r = checkTransport(model, origin(model), eps, c, params(200, 0.1, 1e-4));
    EXPECT_TRUE(r.passed()) << r.note;
    EXPECT_LE(r.parameters.at("isometryDrift"), 1e-6);
    EXPECT_LE(r.parameters.at("maxNormOverBound"), 1.0 + 1e-6);
  }
}

TEST(Transport, DriftGrowsAtMostLinearlyInSteps) {
  const auto model = su2Model(1.0);
  const auto c = CDConstants::fromRho(1.0, 0.5, 1.0, 2);
  const double shortDrift = checkTransport(model, origin(model), 1.0, c, params(50, 0.05)).parameters.at("isometryDrift");
  const double longDrift = checkTransport(model, origin(model), 1.0, c, params(50, 0.2)).parameters.at("isometryDrift");
  // Four times the steps; allow twice the linear growth.
  EXPECT_LE(longDrift, 8.0 * shortDrift + 1e-13);
}

TEST(FeynmanKac, ProductAndConstant) {
  const auto model = productModel(2, 1);
  const std::vector<double> x0{0.2, -0.1, 0.3};
  auto r = checkFeynmanKac(model, field("x1^2 + x1*x2", model), x0, 1.0, params(2000, 0.1));
  EXPECT_TRUE(r.passed()) << r.note;
  r = checkFeynmanKac(model, constantField(2.0), x0, 1.0, params(200, 0.1));
  EXPECT_TRUE(r.passed()) << r.note;
  for (int c = 0; c < 3; ++c) EXPECT_EQ(r.parameters.at("transport_" + std::to_string(c)), 0.0);
}

TEST(FeynmanKac, HeisenbergSmallRun) {
  const auto model = heisenbergModel(1);
  const std::vector<double> x0{0.3, -0.2, 0.1};
  const auto r = checkFeynmanKac(model, field("x1^2 + y1^2", model), x0, 1.0, params(3000, 0.1));
  // Small runs may lack the resolution for a verdict but must never fail.
  EXPECT_NE(r.verdict, Verdict::Fail) << r.note;
}

TEST(GradientBound, ConstantAndHeisenberg) {
  const auto model = heisenbergModel(1);
  const auto c = CDConstants::fromRho(0.0, 0.5, 1.0, 2);
  const std::vector<double> x0{0.3, -0.2, 0.1};
  EXPECT_TRUE(checkGradientBound(model, constantField(1.0), x0, {0.5, 1, 2}, c, params(100, 0.1)).passed());
  const auto r = checkGradientBound(model, field("x1^2 + y1^2", model), x0, {0.5, 1, 2}, c, params(2000, 0.1));
  EXPECT_TRUE(r.passed()) << r.note;
}

TEST(GradientBound, RhsFactorDecreasesInEps) {
  const double k = 0.0, kappa = 1.0, t = 0.1;
  double prev = INFINITY;
  for (double eps : {0.25, 0.5, 1.0, 2.0, 8.0, 1e6}) {
    const double factor = std::exp((k + kappa / eps) * t);
    EXPECT_LT(factor, prev);
    prev = factor;
  }
  EXPECT_NEAR(prev, std::exp(k * t), 1e-6);
}

TEST(LiYau, ConstantFunctionGivesClosedFormSlack) {
  const auto model = heisenbergModel(1);
  const auto c = CDConstants::fromRho(0.0, 0.5, 1.0, 2);
  const double t = 0.25;
  const auto r = checkLiYau(model, constantField(2.0), origin(model), c, params(50, t));
  const double a = 1 + 3 * c.kappa / (2 * c.rho2);
  EXPECT_NEAR(r.parameters.at("slack"), c.n * a * a / (2 * t), 1e-9);
  EXPECT_TRUE(r.passed());
}

TEST(LiYau, Preconditions) {
  const auto model = heisenbergModel(1);
  const auto c = CDConstants::fromRho(0.0, 0.5, 1.0, 2);
  EXPECT_THROW(checkLiYau(model, field("x1", model), origin(model), c, params(10, 0.25)), DomainError);
  EXPECT_THROW(checkLiYau(model, constantField(1.0), origin(model), CDConstants::fromRho(0, 0, 1, 2), params(10, 0.25)),
               std::invalid_argument);
}

TEST(Equilibrium, Preconditions) {
  const auto model = su2Model(1.0);
  const auto f = field("v1", model);
  EXPECT_THROW(checkEquilibrium(heisenbergModel(1), f, {0.1, 0.2}, 5, params(10, 0.1)), std::invalid_argument);
  EXPECT_THROW(checkEquilibrium(model, f, {0.1}, 5, params(10, 0.1)), std::invalid_argument);
  EXPECT_THROW(checkEquilibrium(model, f, {0.1, 0.2}, 1, params(10, 0.1)), std::invalid_argument);
}

TEST(Equilibrium, ShortTimesPass) {
  const auto model = su2Model(1.0);
  const auto r = checkEquilibrium(model, field("v1", model), {0.1, 0.25}, 5, params(1000, 0.1));
  EXPECT_EQ(r.verdict, Verdict::Pass) << r.note;
  EXPECT_EQ(r.parameters.at("Pt1_t0.1"), 1.0);
}

TEST(Equilibrium, LongTimeLeavesTheChart) {
  // Paths started near the chart edge exit before t = 1; the run must not claim a verdict.
  const auto model = su2Model(1.0);
  const auto r = checkEquilibrium(model, field("v1", model), {0.1, 1.0}, 5, params(300, 0.1, 2e-3));
  EXPECT_EQ(r.verdict, Verdict::Inconclusive);
  EXPECT_GT(r.parameters.at("exitFraction"), 0.01);
}

TEST(Exits, ReportedAndCapped) {
  auto p = params(400, 0.5, 1e-2);
  const auto model = su2Model(1.0);
  const std::vector<double> nearEdge{2.6, 0.0, 0.0};
  const auto e = heatSemigroup(model, field("v1", model), nearEdge, p);
  EXPECT_GT(e.exitFraction, 0.01);
  EXPECT_FALSE(e.reliable);
  EXPECT_LT(e.nEff, 400);
}

}  // namespace
}  // namespace foliage
