#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "foliage/diffgeo.hpp"
#include "foliage/models.hpp"
#include "foliage/verify.hpp"
#include "test_support.hpp"

namespace foliage {
namespace {

using testing::origin;

// Hand values from the Heisenberg structure constants c_01^2 = 1.
TEST(Heisenberg, LeviCivitaCoefficients) {
  const auto model = heisenbergModel(1);
  for (const auto& p : model.samplePoints(5, 2)) {
    const auto lc = leviCivita(model, p);
    EXPECT_NEAR(lc(0, 1, 2), 0.5, 1e-14);
    EXPECT_NEAR(lc(1, 0, 2), -0.5, 1e-14);
    EXPECT_NEAR(lc(0, 2, 1), -0.5, 1e-14);
    EXPECT_NEAR(lc(2, 0, 1), -0.5, 1e-14);
    EXPECT_NEAR(lc(1, 2, 0), 0.5, 1e-14);
    EXPECT_NEAR(lc(2, 1, 0), 0.5, 1e-14);
    EXPECT_NEAR(lc(0, 0, 0), 0.0, 1e-14);
  }
}

TEST(Heisenberg, BottConnectionAndTorsion) {
  const auto model = heisenbergModel(1);
  const std::vector<double> p{0.3, -0.7, 1.1};
  const auto bott = bottConnection(model, p);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) EXPECT_NEAR(bott(a, b, c), 0.0, 1e-14) << a << b << c;
    }
  }
  const auto t = torsion(model, p);
  EXPECT_NEAR(t[0 * 3 + 1](2), -1.0, 1e-14);
  EXPECT_NEAR(t[1 * 3 + 0](2), 1.0, 1e-14);
  EXPECT_LT(t[0 * 3 + 2].norm(), 1e-14);
  EXPECT_LT(t[2 * 3 + 1].norm(), 1e-14);
}

TEST(Heisenberg, JIsARotation) {
  const auto model = heisenbergModel(1);
  const std::vector<double> p{0.1, 0.2, 0.3};
  const EndoMatrix j = jMap(model, p, (FrameVector(3) << 0, 0, 1).finished());
  EXPECT_NEAR(std::abs(j(0, 1)), 1.0, 1e-14);
  EXPECT_NEAR(j(0, 1), -j(1, 0), 1e-14);
  EXPECT_NEAR(j(0, 0), 0.0, 1e-14);
  EXPECT_LT((jSquared(model, p) + Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-14);
  EXPECT_LT(horizontalRicci(model, p).norm(), 1e-14);
  const auto [dt, dts] = deltaHT(model, p);
  EXPECT_LT(dt.norm(), 1e-14);
  EXPECT_LT(dts.norm(), 1e-14);
}

TEST(Su2, RicciAndJSquared) {
  // Symbolic oracle (tests/oracles): Ric_H = Id and J^2 = -lambda^2 Id.
  for (double lambda : {1.0, 2.0}) {
    const auto model = su2Model(lambda);
    for (const auto& p : model.samplePoints(5, 7)) {
      EXPECT_LT((horizontalRicci(model, p) - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-12);
      EXPECT_LT((jSquared(model, p) + lambda * lambda * Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-12);
    }
  }
}

TEST(Twisted, DeltaTIsNonzeroAndTransposed) {
  const auto model = loadModelFile(testing::modelPath("twisted.json"));
  const std::vector<double> p{0.4, 0.1, -0.2};
  const auto [dt, dts] = deltaHT(model, p);
  EXPECT_GT(dt.norm(), 0.5);
  EXPECT_LT((dts - dt.transpose()).norm(), 1e-15);
}

TEST(TEpsilon, ZeroOnVerticalAndSkewInFormMetric) {
  const auto model = su2Model(1.0);
  const std::vector<double> p{0.2, -0.1, 0.3};
  for (double eps : {0.25, 1.0, 4.0}) {
    const EndoMatrix vert = tEpsilonMap(model, p, (FrameVector(3) << 0, 0, 1).finished(), eps);
    EXPECT_LT(vert.norm(), 1e-14);
    const EndoMatrix t = tEpsilonMap(model, p, (FrameVector(3) << 0.3, -1.2, 0).finished(), eps);
    const Eigen::MatrixXd g = formMetric(2, 1, eps);
    EXPECT_LT((g * t + (g * t).transpose()).norm(), 1e-13);
    EXPECT_GT(t.norm(), 0.1);
  }
}

TEST(FormMetric, Diagonal) {
  const Eigen::MatrixXd g = formMetric(2, 2, 0.5);
  EXPECT_DOUBLE_EQ(g(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(g(3, 3), 0.5);
  EXPECT_DOUBLE_EQ(g(0, 3), 0.0);
}

TEST(GeometryCache, ReusesEntries) {
  const auto model = heisenbergModel(1);
  GeometryCache cache(model);
  const std::vector<double> p{0.1, 0.2, 0.3};
  const auto a = cache.at(p);
  const auto b = cache.at(p);
  EXPECT_EQ(a.get(), b.get());
  EXPECT_EQ(cache.size(), 1u);
  cache.at(std::vector<double>{0.1, 0.2, 0.4});
  EXPECT_EQ(cache.size(), 2u);
}

TEST(Structure, TensorInvariantsHoldOnEveryModel) {
  for (const auto& model : {heisenbergModel(1), heisenbergModel(2), su2Model(1.0), su2Model(2.0),
                            productModel(2, 1), loadModelFile(testing::modelPath("twisted.json")),
                            loadModelFile(testing::modelPath("free-step2.json"))}) {
    for (const auto& report : checkStructure(model, 8, 3, 1e-10)) {
      EXPECT_TRUE(report.passed()) << model.name << " " << report.check << " " << report.worst;
    }
  }
}

TEST(Structure, BottMetricityFailsWithoutTotallyGeodesicLeaves) {
  // Vertical vector scaled by a function of a horizontal coordinate.
  const auto model = loadModel(R"({"n": 2, "m": 1, "coordinates": ["x", "y", "z"],
    "domain": [[-1, 1], [-1, 1], [-1, 1]],
    "horizontal_frame": [["1", "0", "0"], ["0", "1", "x"]],
    "vertical_frame": [["0", "0", "1 + x^2"]]})");
  for (const auto& report : checkStructure(model, 8, 3, 1e-10)) {
    if (report.check == "structure:bott-metric") EXPECT_EQ(report.verdict, Verdict::Fail);
  }
}

}  // namespace
}  // namespace foliage
