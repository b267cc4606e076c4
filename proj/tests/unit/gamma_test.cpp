#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "foliage/diffgeo.hpp"
#include "foliage/gamma.hpp"
#include "foliage/models.hpp"
#include "test_support.hpp"

namespace foliage {
namespace {

using testing::field;

TEST(Heisenberg, GammaOfZ) {
  const auto model = heisenbergModel(1);
  const auto z = field("z", model);
  for (const auto& p : model.samplePoints(10, 11)) {
    const double x = p[0];
    const double y = p[1];
    EXPECT_NEAR(gammaH(model, z, z, p), (x * x + y * y) / 4.0, 1e-13);
    EXPECT_NEAR(gammaV(model, z, z, p), 1.0, 1e-13);
    const FrameOneForm dz = exteriorD(model, z, p);
    EXPECT_NEAR(dz(0), -y / 2.0, 1e-14);
    EXPECT_NEAR(dz(1), x / 2.0, 1e-14);
    EXPECT_NEAR(dz(2), 1.0, 1e-14);
  }
}

TEST(Heisenberg, SubLaplacianOfRadius) {
  const auto model = heisenbergModel(1);
  const auto r2 = field("x1^2 + y1^2", model);
  const auto xz = field("x1*z", model);
  for (const auto& p : model.samplePoints(5, 12)) {
    EXPECT_NEAR(applyL(model, r2, p), 4.0, 1e-13);
    // X(xz) = z - xy/2, XX(xz) = -y, Y(xz) = x^2/2, YY(xz) = 0.
    EXPECT_NEAR(applyL(model, xz, p), -p[1], 1e-13);
  }
}

TEST(Gamma, DefiningIdentity) {
  for (const auto& model : {su2Model(1.0), heisenbergModel(2), loadModelFile(testing::modelPath("twisted.json"))}) {
    const auto f = randomPolynomial(model.chartDim(), 3, 5);
    const auto g = randomPolynomial(model.chartDim(), 3, 6);
    ScalarField fg{[&](std::span<const Jet> x) { return f(x) * g(x); }, "fg"};
    for (const auto& p : model.samplePoints(5, 13)) {
      const double lhs = gammaH(model, f, g, p);
      const double rhs = 0.5 * (applyL(model, fg, p) - f.value(p) * applyL(model, g, p) - g.value(p) * applyL(model, f, p));
      EXPECT_NEAR(lhs, rhs, 1e-9 * (1 + std::abs(lhs))) << model.name;
    }
  }
}

TEST(Product, GammaTwoIsHessianNorm) {
  const auto model = productModel(2, 1);
  const auto f = field("x1^2*x2 + x2^3 + x1*z1^2", model);
  for (const auto& p : model.samplePoints(5, 14)) {
    const double a = p[0];
    const double b = p[1];
    const double c = p[2];
    // Horizontal Hessian [[2b, 2a], [2a, 6b]].
    EXPECT_NEAR(gamma2H(model, f, p), 4 * b * b + 8 * a * a + 36 * b * b, 1e-11);
    // Gamma_2^V = |grad_H (Z f)|^2 with Z f = 2 x1 z1.
    EXPECT_NEAR(gamma2V(model, f, p), 4 * c * c, 1e-11);
  }
}

TEST(ExteriorD, SquareIsZero) {
  const auto model = su2Model(1.0);
  const auto f = randomPolynomial(3, 3, 21);
  for (const auto& p : model.samplePoints(5, 15)) {
    const LocalGeometry geo(model, p);
    const FormJet df = exteriorD(geo, evaluate(geo, f));
    EXPECT_LT(exteriorDForm(geo, df).norm(), 1e-12);
  }
}

TEST(ExteriorD, NonClosedFormHasNonzeroDifferential) {
  const auto model = heisenbergModel(1);
  // eta = x dy in coordinates has d eta = dx ^ dy.
  OneFormField eta{[](std::span<const Jet> x) {
                     // Frame components of x dy: <x dy, X> = 0, <x dy, Y> = x, <x dy, Z> = 0.
                     return std::vector<Jet>{Jet(0.0), x[0], Jet(0.0)};
                   },
                   "x dy"};
  const std::vector<double> p{0.2, 0.1, 0.0};
  const LocalGeometry geo(model, p);
  const Eigen::MatrixXd d = exteriorDForm(geo, evaluate(geo, eta));
  EXPECT_NEAR(d(0, 1), 1.0, 1e-14);
  EXPECT_NEAR(d(0, 1), -d(1, 0), 1e-14);
}

TEST(Box, EpsilonLaplacianIntertwinesOnAPoint) {
  const auto model = su2Model(1.0);
  const auto f = randomPolynomial(3, 3, 8);
  const std::vector<double> p{0.3, 0.2, -0.4};
  const LocalGeometry geo(model, p);
  const Jet fj = evaluate(geo, f);
  const FrameOneForm dLf = values(exteriorD(geo, applyL(geo, fj)));
  for (double eps : {0.5, 2.0}) {
    EXPECT_LT((boxEpsilon(geo, exteriorD(geo, fj), eps) - dLf).norm(), 1e-10);
  }
  EXPECT_LT((boxInfinity(geo, exteriorD(geo, fj)) - dLf).norm(), 1e-10);
}

TEST(ConstantFunction, AllOperatorsVanish) {
  const auto model = su2Model(1.0);
  const auto one = constantField(3.0);
  const std::vector<double> p{0.1, 0.1, 0.1};
  EXPECT_DOUBLE_EQ(applyL(model, one, p), 0.0);
  EXPECT_DOUBLE_EQ(gammaH(model, one, one, p), 0.0);
  EXPECT_DOUBLE_EQ(gamma2H(model, one, p), 0.0);
  EXPECT_DOUBLE_EQ(gamma2V(model, one, p), 0.0);
}

TEST(Norms, EpsInnerWeightsVertical) {
  FrameOneForm a(3);
  a << 1, 2, 3;
  EXPECT_DOUBLE_EQ(epsInner(a, a, 2, 0.5), 1 + 4 + 4.5);
  EXPECT_DOUBLE_EQ(epsNorm(a, 2, 2.0), std::sqrt(1 + 4 + 18.0));
}

}  // namespace
}  // namespace foliage
