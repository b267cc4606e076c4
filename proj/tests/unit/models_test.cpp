#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "foliage/diffgeo.hpp"
#include "foliage/errors.hpp"
#include "foliage/models.hpp"
#include "test_support.hpp"

namespace foliage {
namespace {

using testing::origin;

Eigen::VectorXd coordinateBracket(const FoliationModel& model, int a, int b, const std::vector<double>& p) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(model.chartDim());
  Eigen::VectorXd v = u;
  u(a) = 1.0;
  v(b) = 1.0;
  const FrameVector frame = bracket(model, u, v, p);
  return model.frameMatrix(p).transpose() * frame;
}

TEST(Heisenberg, Dimensions) {
  const auto h1 = heisenbergModel(1);
  EXPECT_EQ(h1.n, 2);
  EXPECT_EQ(h1.m, 1);
  EXPECT_EQ(h1.chartDim(), 3);
  const auto h2 = heisenbergModel(2);
  EXPECT_EQ(h2.n, 4);
  EXPECT_EQ(h2.chartDim(), 5);
  EXPECT_THROW(heisenbergModel(0), ModelError);
}

TEST(Heisenberg, BracketOfXAndYIsDz) {
  const auto model = heisenbergModel(1);
  for (const auto& p : model.samplePoints(10, 3)) {
    const Eigen::VectorXd c = coordinateBracket(model, 0, 1, p);
    EXPECT_NEAR(c(0), 0.0, 1e-14);
    EXPECT_NEAR(c(1), 0.0, 1e-14);
    EXPECT_NEAR(c(2), 1.0, 1e-14);
  }
}

TEST(Heisenberg, CrossPairsCommute) {
  const auto model = heisenbergModel(2);
  // Frame order x1, x2, y1, y2, z.
  for (const auto& p : model.samplePoints(10, 4)) {
    EXPECT_LT(coordinateBracket(model, 0, 3, p).norm(), 1e-14);
    EXPECT_LT(coordinateBracket(model, 1, 2, p).norm(), 1e-14);
    EXPECT_NEAR(coordinateBracket(model, 1, 3, p)(4), 1.0, 1e-14);
  }
}

TEST(Su2, BracketRelationsAtOrigin) {
  for (double lambda : {1.0, 2.0}) {
    const auto model = su2Model(lambda);
    const LocalGeometry geo(model, origin(model));
    EXPECT_NEAR(geo.structure(0, 1, 2), lambda, 1e-14);
    EXPECT_NEAR(geo.structure(0, 2, 1), -1.0 / lambda, 1e-14);
    EXPECT_NEAR(geo.structure(1, 2, 0), 1.0 / lambda, 1e-14);
  }
  const auto model = su2Model(1.0);
  const Eigen::MatrixXd a = model.frameMatrix(origin(model));
  EXPECT_LT((a * a.transpose() - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-14);
  EXPECT_THROW(su2Model(0.0), ModelError);
  EXPECT_THROW(su2Model(-1.0), ModelError);
}

TEST(Su2, StructureIsConstantAcrossTheChart) {
  const auto model = su2Model(1.0);
  for (const auto& p : model.samplePoints(10, 5)) {
    const LocalGeometry geo(model, p);
    EXPECT_NEAR(geo.structure(0, 1, 2), 1.0, 1e-12);
    EXPECT_NEAR(geo.structure(2, 0, 1), 1.0, 1e-12);
    EXPECT_NEAR(geo.structure(1, 2, 0), 1.0, 1e-12);
    EXPECT_NEAR(geo.structure(0, 1, 0), 0.0, 1e-12);
  }
}

TEST(Product, FlatFrame) {
  EXPECT_THROW(productModel(0, 1), ModelError);
  const auto model = productModel(3, 2);
  for (const auto& p : model.samplePoints(5, 1)) {
    EXPECT_LT(jSquared(model, p).norm(), 1e-15);
    EXPECT_LT(horizontalRicci(model, p).norm(), 1e-15);
    for (const auto& t : torsion(model, p)) EXPECT_LT(t.norm(), 1e-15);
  }
}

TEST(Sampling, DeterministicAndInterior) {
  const auto model = su2Model(1.0);
  const auto a = model.samplePoints(25, 9);
  const auto b = model.samplePoints(25, 9);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, model.samplePoints(25, 10));
  for (const auto& p : a) EXPECT_TRUE(model.domain.containsInterior(p));
  EXPECT_THROW(model.requireInterior(std::vector<double>{100.0, 0.0, 0.0}), DomainError);
  EXPECT_THROW(model.requireInterior(std::vector<double>{model.domain.hi[0], 0.0, 0.0}), DomainError);
}

TEST(LoadModel, ConfigMatchesCatalogHeisenberg) {
  const auto config = loadModelFile(testing::modelPath("heisenberg.json"));
  const auto catalog = heisenbergModel(1);
  EXPECT_EQ(config.n, 2);
  EXPECT_EQ(config.m, 1);
  for (const auto& p : config.samplePoints(5, 2)) {
    EXPECT_LT((config.frameMatrix(p) - catalog.frameMatrix(p)).norm(), 1e-15);
  }
  ASSERT_TRUE(config.knownConstants.has_value());
  EXPECT_DOUBLE_EQ(config.knownConstants->kappa, 1.0);
}

TEST(LoadModel, Errors) {
  const std::string good = R"({"n": 1, "m": 1, "domain": [[-1, 1], [-1, 1]],
    "horizontal_frame": [["1", "0"]], "vertical_frame": [["0", "1"]]})";
  EXPECT_NO_THROW(loadModel(good));
  EXPECT_THROW(loadModel("{ not json"), ParseError);
  EXPECT_THROW(loadModel(R"({"n": 1, "m": 1, "domain": [[-1, 1], [-1, 1]],
    "horizontal_frame": [["1 +", "0"]], "vertical_frame": [["0", "1"]]})"),
               ParseError);
  EXPECT_THROW(loadModel(R"({"n": 2, "m": 1, "domain": [[-1, 1], [-1, 1]],
    "horizontal_frame": [["1", "0"]], "vertical_frame": [["0", "1"]]})"),
               ModelError);
  EXPECT_THROW(loadModel(R"({"n": 1, "m": 1, "domain": [[1, -1], [-1, 1]],
    "horizontal_frame": [["1", "0"]], "vertical_frame": [["0", "1"]]})"),
               ModelError);
  EXPECT_THROW(loadModel(R"({"n": 1, "m": 1, "domain": [-1, 1],
    "horizontal_frame": [["1", "0"]], "vertical_frame": [["0", "1"]]})"),
               ModelError);
  EXPECT_THROW(loadModel(R"({"n": 1, "m": 1, "domain": [[-1, 1], [-1, 1]],
    "horizontal_frame": [["1", "0", "0"]], "vertical_frame": [["0", "1"]]})"),
               ModelError);
  try {
    loadModel(R"({"n": 1, "m": 1, "domain": [[-1, 1], [-1, 1]],
      "horizontal_frame": [["1", "x1 * * 2"]], "vertical_frame": [["0", "1"]]})");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("horizontal_frame[0][1]"), std::string::npos);
    EXPECT_EQ(e.position(), 5u);
  }
}

TEST(Validate, CatalogModelsPass) {
  for (const auto& model : {heisenbergModel(1), heisenbergModel(2), su2Model(1.0)}) {
    const auto report = validateModel(model, 20, 1e-10);
    EXPECT_TRUE(report.passed()) << model.name;
    EXPECT_EQ(report.check("constant-structure").verdict, Verdict::Pass);
  }
}

TEST(Validate, ProductIsNotBracketGenerating) {
  const auto report = validateModel(productModel(2, 1), 10, 1e-10);
  EXPECT_EQ(report.check("bracket-generating").verdict, Verdict::Flagged);
  EXPECT_EQ(report.check("yang-mills").verdict, Verdict::Pass);
}

TEST(Validate, TwistedConfigIsNotYangMills) {
  const auto report = validateModel(loadModelFile(testing::modelPath("twisted.json")), 20, 1e-10);
  EXPECT_EQ(report.check("yang-mills").verdict, Verdict::Fail);
  EXPECT_EQ(report.check("totally-geodesic").verdict, Verdict::Pass);
  EXPECT_EQ(report.check("bundle-like").verdict, Verdict::Pass);
}

TEST(Validate, DependentFrameFails) {
  const auto model = loadModel(R"({"n": 1, "m": 1, "domain": [[-1, 1], [-1, 1]],
    "horizontal_frame": [["1", "0"]], "vertical_frame": [["1", "0"]]})");
  EXPECT_EQ(validateModel(model, 5, 1e-10).check("frame-invertibility").verdict, Verdict::Fail);
}

TEST(CDConstants, FromRho) {
  const auto c = CDConstants::fromRho(-2.0, 0.5, 1.0, 3);
  EXPECT_DOUBLE_EQ(c.bigK, 2.0);
  EXPECT_DOUBLE_EQ(CDConstants::fromRho(1.0, 0.5, 1.0, 3).bigK, 0.0);
  EXPECT_FALSE(std::signbit(CDConstants::fromRho(-0.0, -0.0, -0.0, 2).rho2));
}

}  // namespace
}  // namespace foliage
