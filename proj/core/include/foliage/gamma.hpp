#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "foliage/diffgeo.hpp"
#include "foliage/jet.hpp"
#include "foliage/models.hpp"

namespace foliage {

/// Smooth function of the chart coordinates, evaluable in jet arithmetic.
struct ScalarField {
  std::function<Jet(std::span<const Jet>)> eval;
  std::string description;
  /// Polynomial degree, or -1 when not a polynomial.
  int degree = -1;

  Jet operator()(std::span<const Jet> x) const { return eval(x); }
  double value(std::span<const double> x) const;
};

/// One-form given by its frame components (f_1..f_n, g_1..g_m) as functions of the coordinates.
struct OneFormField {
  std::function<std::vector<Jet>(std::span<const Jet>)> eval;
  std::string description;
};

/// Frame components of a one-form as jets at a point.
using FormJet = std::vector<Jet>;

/// Random polynomial of total degree <= maxDegree with coefficients uniform in [-1, 1].
ScalarField randomPolynomial(int dims, int maxDegree, std::uint64_t seed);
ScalarField expressionField(const std::string& text, const std::vector<std::string>& coordinates);
ScalarField constantField(double c);
/// One-form whose frame components are independent random polynomials.
OneFormField randomOneForm(int dims, int maxDegree, std::uint64_t seed);

FrameOneForm values(const FormJet& eta);
FormJet evaluate(const LocalGeometry& geo, const OneFormField& eta);
Jet evaluate(const LocalGeometry& geo, const ScalarField& f);

// Operators on jets at the geometry's point.

Jet applyL(const LocalGeometry& geo, const Jet& f);
Jet gammaH(const LocalGeometry& geo, const Jet& f, const Jet& g);
Jet gammaV(const LocalGeometry& geo, const Jet& f, const Jet& g);
double gamma2H(const LocalGeometry& geo, const Jet& f);
double gamma2V(const LocalGeometry& geo, const Jet& f);
FormJet exteriorD(const LocalGeometry& geo, const Jet& f);
/// Frame components of d eta: result(a, b) = d eta(E_a, E_b).
Eigen::MatrixXd exteriorDForm(const LocalGeometry& geo, const FormJet& eta);
/// nabla_{E_a} eta (Bott connection).
FormJet covariantDerivative(const LocalGeometry& geo, const FormJet& eta, int a);

struct CovariantGradient {
  /// grad(i, b) = (nabla_{X_i} eta)_b for i horizontal.
  Eigen::MatrixXd grad;
  /// Symmetrization of the horizontal block.
  Eigen::MatrixXd sym;
  double trace = 0.0;
};
CovariantGradient covariantGradForm(const LocalGeometry& geo, const FormJet& eta);

/// Sum over i of nabla_{X_i} nabla_{X_i} eta - nabla_{nabla_{X_i} X_i} eta.
FrameOneForm formLaplacian(const LocalGeometry& geo, const FormJet& eta);
FrameOneForm frakturJ(const LocalGeometry& geo, const FormJet& eta);
FrameOneForm boxEpsilon(const LocalGeometry& geo, const FormJet& eta, double eps);
FrameOneForm boxInfinity(const LocalGeometry& geo, const FormJet& eta);
/// Squared g_eps norm of the (nabla_H - T^eps_H) eta tensor.
double connectionEnergy(const LocalGeometry& geo, const FormJet& eta, double eps);

double epsInner(const FrameOneForm& a, const FrameOneForm& b, int n, double eps);
double epsNorm(const FrameOneForm& eta, int n, double eps);

// Point-level conveniences.

double applyL(const FoliationModel& model, const ScalarField& f, std::span<const double> p);
double gammaH(const FoliationModel& model, const ScalarField& f, const ScalarField& g, std::span<const double> p);
double gammaV(const FoliationModel& model, const ScalarField& f, const ScalarField& g, std::span<const double> p);
double gamma2H(const FoliationModel& model, const ScalarField& f, std::span<const double> p);
double gamma2V(const FoliationModel& model, const ScalarField& f, std::span<const double> p);
FrameOneForm exteriorD(const FoliationModel& model, const ScalarField& f, std::span<const double> p);
FrameOneForm boxEpsilon(const FoliationModel& model, const OneFormField& eta, double eps, std::span<const double> p);
FrameOneForm boxInfinity(const FoliationModel& model, const OneFormField& eta, std::span<const double> p);
FrameOneForm frakturJ(const FoliationModel& model, const OneFormField& eta, std::span<const double> p);

}  // namespace foliage
