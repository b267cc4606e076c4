#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "foliage/models.hpp"
#include "foliage/verify.hpp"
#include "test_support.hpp"

namespace foliage {
namespace {

VerifyOptions quick() {
  VerifyOptions o;
  o.fieldCount = 4;
  o.pointCount = 4;
  return o;
}

TEST(CheckReport, IdentityAndInequalityVerdicts) {
  CheckReport r;
  r.kind = CheckReport::Kind::Identity;
  r.tolerance = 1e-8;
  r.samples = {1e-9, -5e-9};
  r.finalize();
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_DOUBLE_EQ(r.worst, 5e-9);
  r.samples.push_back(2e-8);
  r.finalize();
  EXPECT_EQ(r.verdict, Verdict::Fail);

  r.kind = CheckReport::Kind::Inequality;
  r.samples = {3.0, -5e-9};
  r.finalize();
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_DOUBLE_EQ(r.worst, -5e-9);
  r.samples.push_back(std::nan(""));
  r.finalize();
  EXPECT_EQ(r.verdict, Verdict::Fail);
}

TEST(Suites, PassOnCatalogModels) {
  for (const auto& model : {heisenbergModel(1), su2Model(2.0), productModel(2, 1)}) {
    EXPECT_TRUE(checkIntertwining(model, quick()).passed()) << model.name;
    EXPECT_TRUE(checkBoxRelation(model, quick()).passed()) << model.name;
    EXPECT_TRUE(checkBochnerEquality(model, quick()).passed()) << model.name;
    EXPECT_TRUE(checkBochnerInequality(model, quick()).passed()) << model.name;
  }
}

TEST(Suites, HoldOnNonYangMillsConfig) {
  const auto model = loadModelFile(testing::modelPath("twisted.json"));
  EXPECT_TRUE(checkIntertwining(model, quick()).passed());
  EXPECT_TRUE(checkBoxRelation(model, quick()).passed());
  EXPECT_TRUE(checkBochnerEquality(model, quick()).passed());
}

TEST(NegativeControl, FlippedRicciBreaksIntertwining) {
  auto options = quick();
  options.geometry.ricciScale = -1.0;
  const auto report = checkIntertwining(su2Model(1.0), options);
  EXPECT_EQ(report.verdict, Verdict::Fail);
  EXPECT_GT(report.worst, 0.1);
  EXPECT_EQ(report.parameters.at("ricciScale"), -1.0);
}

TEST(Constants, HeisenbergMatchesStructureConstantOracle) {
  // tests/oracles/structure_constant_oracle.py: (rho1, kappa, rho2) = (0, 1, 1/2).
  const auto r = extractConstants(heisenbergModel(1), 10, 1);
  EXPECT_NEAR(r.constants.rho1, 0.0, 1e-9);
  EXPECT_NEAR(r.constants.kappa, 1.0, 1e-9);
  EXPECT_NEAR(r.constants.rho2, 0.5, 1e-9);
  EXPECT_DOUBLE_EQ(r.constants.bigK, 0.0);
  EXPECT_FALSE(r.rho2Degenerate);
}

TEST(Constants, Su2MatchesSymbolicOracle) {
  // Oracle: (rho1, kappa, rho2) = (1, lambda^2, lambda^2 / 2).
  for (double lambda : {1.0, 2.0}) {
    const auto r = extractConstants(su2Model(lambda), 20, 2);
    EXPECT_NEAR(r.constants.rho1, 1.0, 1e-9);
    EXPECT_NEAR(r.constants.kappa, lambda * lambda, 1e-9);
    EXPECT_NEAR(r.constants.rho2, lambda * lambda / 2.0, 1e-9);
    EXPECT_LE(r.rho1Spread, 1e-8);
    EXPECT_LE(r.kappaSpread, 1e-8);
    EXPECT_LE(r.rho2Spread, 1e-8);
  }
}

TEST(Constants, FreeStepTwoConfig) {
  // Oracle: (0, 2, 1/2).
  const auto r = extractConstants(loadModelFile(testing::modelPath("free-step2.json")), 10, 3);
  EXPECT_NEAR(r.constants.rho1, 0.0, 1e-9);
  EXPECT_NEAR(r.constants.kappa, 2.0, 1e-9);
  EXPECT_NEAR(r.constants.rho2, 0.5, 1e-9);
}

TEST(Constants, ProductIsFlagged) {
  const auto r = extractConstants(productModel(2, 1), 5, 1);
  EXPECT_TRUE(r.rho2Degenerate);
  EXPECT_EQ(r.constants.rho2, 0.0);
}

TEST(Constants, InvariantUnderVerticalRotation) {
  const auto base = loadModelFile(testing::modelPath("free-step2.json"));
  const auto rotated = testing::rotateVertical(base, [](std::span<const Jet> x) { return 0.7 * x[0] + 0.3 * x[4]; });
  const auto a = extractConstants(base, 10, 4).constants;
  const auto b = extractConstants(rotated, 10, 4).constants;
  EXPECT_NEAR(a.rho1, b.rho1, 1e-9);
  EXPECT_NEAR(a.kappa, b.kappa, 1e-9);
  EXPECT_NEAR(a.rho2, b.rho2, 1e-9);
}

TEST(CD, PassesWithExtractedConstants) {
  for (const auto& model : {heisenbergModel(1), su2Model(1.0)}) {
    const auto c = extractConstants(model, 5, 1).constants;
    const auto report = checkCD(model, c, quick());
    EXPECT_TRUE(report.passed()) << model.name << " " << report.worst;
    EXPECT_LE(report.parameters.at("gammaIntertwiningMaxResidual"), 1e-9);
  }
}

TEST(CD, DoubledRho2Fails) {
  for (const auto& model : {heisenbergModel(1), heisenbergModel(2), su2Model(1.0)}) {
    auto c = extractConstants(model, 5, 1).constants;
    c.rho2 *= 2.0;
    EXPECT_EQ(checkCD(model, c, quick()).verdict, Verdict::Fail) << model.name;
  }
}

TEST(CD, RejectsNonPositiveRho2) {
  EXPECT_THROW(checkCD(heisenbergModel(1), CDConstants::fromRho(0, 0, 1, 2), quick()), std::invalid_argument);
}

TEST(Bounds, DiameterExamples) {
  const double pi = std::numbers::pi;
  EXPECT_NEAR(*diameterBound(CDConstants::fromRho(1, 1, 0, 2)), 2 * std::sqrt(3.0) * pi * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(*diameterBound(CDConstants::fromRho(1, 1, 0, 2)), 15.3906, 1e-4);
  EXPECT_NEAR(*diameterBound(CDConstants::fromRho(1, 2, 3, 2)), 2 * std::sqrt(3.0) * pi * std::sqrt(16.25), 1e-12);
  EXPECT_FALSE(diameterBound(CDConstants::fromRho(0, 1, 1, 2)).has_value());
  EXPECT_FALSE(diameterBound(CDConstants::fromRho(-1, 1, 1, 2)).has_value());
}

TEST(Bounds, Lambda1Examples) {
  EXPECT_NEAR(*lambda1Bound(CDConstants::fromRho(1, 1, 0, 2)), 2.0, 1e-12);
  EXPECT_NEAR(*lambda1Bound(CDConstants::fromRho(2, 0.5, 1, 2)), 1.0, 1e-12);
  EXPECT_NEAR(*lambda1Bound(CDConstants::fromRho(3, 1, 0, 1000000)), 3.0, 1e-5);
  EXPECT_FALSE(lambda1Bound(CDConstants::fromRho(0, 1, 0, 2)).has_value());
}

TEST(Bounds, MonotoneInRho1) {
  for (double rho2 : {0.25, 1.0, 3.0}) {
    for (double kappa : {0.0, 0.5, 2.0}) {
      for (int n : {2, 4}) {
        double prevDiameter = INFINITY;
        double prevLambda = 0.0;
        for (double rho1 = 0.1; rho1 < 5.0; rho1 += 0.3) {
          const auto c = CDConstants::fromRho(rho1, rho2, kappa, n);
          const double d = *diameterBound(c);
          const double l = *lambda1Bound(c);
          EXPECT_LT(d, prevDiameter);
          EXPECT_GT(l, prevLambda);
          prevDiameter = d;
          prevLambda = l;
        }
      }
    }
  }
}

TEST(LocalFormulas, HeisenbergAllBulletsAgree) {
  const auto reports = localFormulaOracle(heisenbergModel(1), {.pointCount = 5});
  ASSERT_EQ(reports.size(), 7u);
  for (const auto& r : reports) EXPECT_EQ(r.verdict, Verdict::Pass) << r.check << " " << r.worst;
}

TEST(LocalFormulas, GenericModelIsNotApplicable) {
  // [X1, X2] = X2: the horizontal frame is not parallel.
  const auto model = loadModel(R"json({"n": 2, "m": 1, "coordinates": ["x", "y", "z"],
    "domain": [[-1, 1], [-1, 1], [-1, 1]],
    "horizontal_frame": [["1", "0", "0"], ["0", "exp(x)", "0"]],
    "vertical_frame": [["0", "0", "1"]]})json");
  const auto reports = localFormulaOracle(model, {.pointCount = 5});
  for (const auto& r : reports) {
    EXPECT_EQ(r.verdict, Verdict::NotApplicable) << r.check;
    EXPECT_FALSE(r.note.empty());
  }
}

TEST(LocalFormulas, ParallelNonConstantFrameIsCovered) {
  // omega and beta vanish although the bracket [X1, X2] = x Z is not constant.
  const auto reports = localFormulaOracle(loadModelFile(testing::modelPath("twisted.json")), {.pointCount = 5});
  for (const auto& r : reports) EXPECT_EQ(r.verdict, Verdict::Pass) << r.check << " " << r.worst;
}

TEST(LocalFormulas, Su2HorizontalRicciNeedsBasicFrame) {
  // The left-invariant SU(2) frame is not basic, so both Ricci formulas are
  // gated out; forced, the horizontal one misses Ric_H = Id entirely.
  const auto gated = localFormulaOracle(su2Model(1.0), {.pointCount = 5});
  const auto forced = localFormulaOracle(su2Model(1.0), {.pointCount = 5, .force = true});
  for (std::size_t k = 0; k < gated.size(); ++k) {
    if (gated[k].check == "local-formula:ricci-horizontal") {
      EXPECT_EQ(gated[k].verdict, Verdict::NotApplicable);
      EXPECT_EQ(forced[k].verdict, Verdict::Fail);
      EXPECT_NEAR(forced[k].worst, 1.0, 1e-9);
    } else if (gated[k].check == "local-formula:ricci-mixed") {
      EXPECT_EQ(gated[k].verdict, Verdict::NotApplicable);
      EXPECT_EQ(forced[k].verdict, Verdict::Pass);
    } else {
      EXPECT_EQ(gated[k].verdict, Verdict::Pass) << gated[k].check;
    }
  }
}

}  // namespace
}  // namespace foliage
