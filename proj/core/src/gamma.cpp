#include "foliage/gamma.hpp"

#include <random>
#include <stdexcept>

#include "foliage/expression.hpp"

namespace foliage {

double ScalarField::value(std::span<const double> x) const {
  std::vector<Jet> c;
  c.reserve(x.size());
  for (double v : x) c.emplace_back(v);
  return eval(c).value();
}

namespace {

struct Monomial {
  double coeff;
  std::vector<int> exponents;
};

void enumerateMonomials(int dims, int remaining, int var, std::vector<int>& current, std::vector<std::vector<int>>& out) {
  if (var == dims) {
    out.push_back(current);
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    current[static_cast<std::size_t>(var)] = k;
    enumerateMonomials(dims, remaining - k, var + 1, current, out);
  }
  current[static_cast<std::size_t>(var)] = 0;
}

std::vector<Monomial> randomMonomials(int dims, int maxDegree, std::mt19937_64& rng) {
  std::vector<std::vector<int>> exps;
  std::vector<int> current(static_cast<std::size_t>(dims), 0);
  enumerateMonomials(dims, maxDegree, 0, current, exps);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::vector<Monomial> out;
  out.reserve(exps.size());
  for (auto& e : exps) out.push_back({coeff(rng), std::move(e)});
  return out;
}

Jet evalPolynomial(const std::vector<Monomial>& terms, std::span<const Jet> x) {
  Jet acc(0.0);
  for (const auto& t : terms) {
    Jet term(t.coeff);
    for (std::size_t v = 0; v < t.exponents.size(); ++v) {
      for (int k = 0; k < t.exponents[v]; ++k) term = term * x[v];
    }
    acc += term;
  }
  return acc;
}

std::mt19937_64 seededEngine(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

FormJet formTimes(const std::vector<Jet>& mat, const FormJet& eta, int dim) {
  FormJet out(static_cast<std::size_t>(dim), Jet(0.0));
  for (int b = 0; b < dim; ++b) {
    for (int c = 0; c < dim; ++c) {
      const Jet& m = mat[static_cast<std::size_t>(b * dim + c)];
      if (m.isConstant() && m.value() == 0.0) continue;
      out[static_cast<std::size_t>(b)] += m * eta[static_cast<std::size_t>(c)];
    }
  }
  return out;
}

// D_a eta = nabla_a eta - T^eps_a eta.
FormJet modifiedDerivative(const LocalGeometry& geo, const FormJet& eta, int a, double eps) {
  FormJet out = covariantDerivative(geo, eta, a);
  const FormJet t = formTimes(geo.tEpsilonJet(a, eps), eta, geo.dim());
  for (std::size_t b = 0; b < out.size(); ++b) out[b] -= t[b];
  return out;
}

}  // namespace

ScalarField randomPolynomial(int dims, int maxDegree, std::uint64_t seed) {
  if (maxDegree < 0 || maxDegree > kMaxJetOrder) throw std::invalid_argument("polynomial degree must be in [0, 4]");
  auto rng = seededEngine(seed, 0x9e11u);
  auto terms = std::make_shared<std::vector<Monomial>>(randomMonomials(dims, maxDegree, rng));
  return ScalarField{[terms](std::span<const Jet> x) { return evalPolynomial(*terms, x); },
                     "random polynomial (degree " + std::to_string(maxDegree) + ", seed " + std::to_string(seed) + ")",
                     maxDegree};
}

ScalarField expressionField(const std::string& text, const std::vector<std::string>& coordinates) {
  auto expr = std::make_shared<Expression>(Expression::parse(text, coordinates));
  return ScalarField{[expr](std::span<const Jet> x) { return expr->evaluate(x); }, text, -1};
}

ScalarField constantField(double c) {
  return ScalarField{[c](std::span<const Jet>) { return Jet(c); }, "constant " + std::to_string(c), 0};
}

OneFormField randomOneForm(int dims, int maxDegree, std::uint64_t seed) {
  auto rng = seededEngine(seed, 0x0f0eu);
  auto components = std::make_shared<std::vector<std::vector<Monomial>>>();
  for (int a = 0; a < dims; ++a) components->push_back(randomMonomials(dims, maxDegree, rng));
  return OneFormField{[components](std::span<const Jet> x) {
                        FormJet out;
                        out.reserve(components->size());
                        for (const auto& c : *components) out.push_back(evalPolynomial(c, x));
                        return out;
                      },
                      "random one-form (degree " + std::to_string(maxDegree) + ", seed " + std::to_string(seed) + ")"};
}

FrameOneForm values(const FormJet& eta) {
  FrameOneForm out(static_cast<Eigen::Index>(eta.size()));
  for (std::size_t i = 0; i < eta.size(); ++i) out(static_cast<Eigen::Index>(i)) = eta[i].value();
  return out;
}

FormJet evaluate(const LocalGeometry& geo, const OneFormField& eta) {
  FormJet out = eta.eval(geo.coordinates());
  if (static_cast<int>(out.size()) != geo.dim()) throw std::invalid_argument("one-form has wrong number of components");
  return out;
}

Jet evaluate(const LocalGeometry& geo, const ScalarField& f) { return f(geo.coordinates()); }

Jet applyL(const LocalGeometry& geo, const Jet& f) {
  Jet acc(0.0);
  std::vector<Jet> first(static_cast<std::size_t>(geo.dim()));
  for (int a = 0; a < geo.dim(); ++a) first[static_cast<std::size_t>(a)] = geo.apply(a, f);
  for (int i = 0; i < geo.n(); ++i) {
    acc += geo.apply(i, first[static_cast<std::size_t>(i)]);
    for (int k = 0; k < geo.dim(); ++k) acc -= geo.bottJet(i, i, k) * first[static_cast<std::size_t>(k)];
  }
  return acc;
}

Jet gammaH(const LocalGeometry& geo, const Jet& f, const Jet& g) {
  Jet acc(0.0);
  for (int i = 0; i < geo.n(); ++i) acc += geo.apply(i, f) * geo.apply(i, g);
  return acc;
}

Jet gammaV(const LocalGeometry& geo, const Jet& f, const Jet& g) {
  Jet acc(0.0);
  for (int l = geo.n(); l < geo.dim(); ++l) acc += geo.apply(l, f) * geo.apply(l, g);
  return acc;
}

double gamma2H(const LocalGeometry& geo, const Jet& f) {
  const Jet lf = applyL(geo, f);
  return 0.5 * applyL(geo, gammaH(geo, f, f)).value() - gammaH(geo, f, lf).value();
}

double gamma2V(const LocalGeometry& geo, const Jet& f) {
  const Jet lf = applyL(geo, f);
  return 0.5 * applyL(geo, gammaV(geo, f, f)).value() - gammaV(geo, f, lf).value();
}

FormJet exteriorD(const LocalGeometry& geo, const Jet& f) {
  FormJet out;
  out.reserve(static_cast<std::size_t>(geo.dim()));
  for (int a = 0; a < geo.dim(); ++a) out.push_back(geo.apply(a, f));
  return out;
}

Eigen::MatrixXd exteriorDForm(const LocalGeometry& geo, const FormJet& eta) {
  const int d = geo.dim();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      double v = geo.apply(a, eta[static_cast<std::size_t>(b)]).value() -
                 geo.apply(b, eta[static_cast<std::size_t>(a)]).value();
      for (int c = 0; c < d; ++c) v -= geo.structure(a, b, c) * eta[static_cast<std::size_t>(c)].value();
      out(a, b) = v;
      out(b, a) = -v;
    }
  }
  return out;
}

FormJet covariantDerivative(const LocalGeometry& geo, const FormJet& eta, int a) {
  const int d = geo.dim();
  FormJet out(static_cast<std::size_t>(d));
  for (int b = 0; b < d; ++b) {
    Jet acc = geo.apply(a, eta[static_cast<std::size_t>(b)]);
    for (int c = 0; c < d; ++c) {
      const Jet& g = geo.bottJet(a, b, c);
      if (g.isConstant() && g.value() == 0.0) continue;
      acc -= g * eta[static_cast<std::size_t>(c)];
    }
    out[static_cast<std::size_t>(b)] = acc;
  }
  return out;
}

CovariantGradient covariantGradForm(const LocalGeometry& geo, const FormJet& eta) {
  const int n = geo.n();
  CovariantGradient out;
  out.grad = Eigen::MatrixXd::Zero(n, geo.dim());
  for (int i = 0; i < n; ++i) out.grad.row(i) = values(covariantDerivative(geo, eta, i)).transpose();
  const Eigen::MatrixXd h = out.grad.leftCols(n);
  out.sym = 0.5 * (h + h.transpose());
  out.trace = h.trace();
  return out;
}

FrameOneForm formLaplacian(const LocalGeometry& geo, const FormJet& eta) {
  const int d = geo.dim();
  std::vector<FormJet> first;
  first.reserve(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) first.push_back(covariantDerivative(geo, eta, a));
  FrameOneForm out = FrameOneForm::Zero(d);
  for (int i = 0; i < geo.n(); ++i) {
    out += values(covariantDerivative(geo, first[static_cast<std::size_t>(i)], i));
    for (int k = 0; k < d; ++k) out -= geo.bottJet(i, i, k).value() * values(first[static_cast<std::size_t>(k)]);
  }
  return out;
}

FrameOneForm frakturJ(const LocalGeometry& geo, const FormJet& eta) {
  const int n = geo.n();
  const int d = geo.dim();
  FrameOneForm out = FrameOneForm::Zero(d);
  for (int l = n; l < d; ++l) {
    // iota_{Z_l} d(eta_V) evaluated on E_b.
    FrameOneForm contraction = FrameOneForm::Zero(d);
    for (int b = 0; b < d; ++b) {
      double v = -geo.apply(b, eta[static_cast<std::size_t>(l)]).value();
      if (b >= n) v += geo.apply(l, eta[static_cast<std::size_t>(b)]).value();
      for (int k = n; k < d; ++k) v -= geo.structure(l, b, k) * eta[static_cast<std::size_t>(k)].value();
      contraction(b) = v;
    }
    Eigen::VectorXd z = Eigen::VectorXd::Zero(geo.m());
    z(l - n) = 1.0;
    out -= geo.j(z) * contraction;
  }
  return out;
}

FrameOneForm boxEpsilon(const LocalGeometry& geo, const FormJet& eta, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
  const int d = geo.dim();
  std::vector<FormJet> first;
  first.reserve(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) first.push_back(modifiedDerivative(geo, eta, a, eps));
  FrameOneForm out = FrameOneForm::Zero(d);
  for (int i = 0; i < geo.n(); ++i) {
    out += values(modifiedDerivative(geo, first[static_cast<std::size_t>(i)], i, eps));
    for (int k = 0; k < d; ++k) out -= geo.bottJet(i, i, k).value() * values(first[static_cast<std::size_t>(k)]);
  }
  const FrameOneForm v = values(eta);
  out += (-geo.jSquared() / eps + geo.deltaT() / eps - geo.horizontalRicci()) * v;
  return out;
}

FrameOneForm boxInfinity(const LocalGeometry& geo, const FormJet& eta) {
  const FrameOneForm v = values(eta);
  return formLaplacian(geo, eta) + 2.0 * frakturJ(geo, eta) - geo.horizontalRicci() * v + geo.deltaTStar() * v;
}

double connectionEnergy(const LocalGeometry& geo, const FormJet& eta, double eps) {
  double acc = 0.0;
  for (int i = 0; i < geo.n(); ++i) {
    const FrameOneForm di = values(modifiedDerivative(geo, eta, i, eps));
    acc += epsInner(di, di, geo.n(), eps);
  }
  return acc;
}

double epsInner(const FrameOneForm& a, const FrameOneForm& b, int n, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
  const auto m = a.size() - n;
  return a.head(n).dot(b.head(n)) + eps * a.tail(m).dot(b.tail(m));
}

double epsNorm(const FrameOneForm& eta, int n, double eps) { return std::sqrt(epsInner(eta, eta, n, eps)); }

double applyL(const FoliationModel& model, const ScalarField& f, std::span<const double> p) {
  const LocalGeometry geo(model, p);
  return applyL(geo, evaluate(geo, f)).value();
}

double gammaH(const FoliationModel& model, const ScalarField& f, const ScalarField& g, std::span<const double> p) {
  const LocalGeometry geo(model, p);
  return gammaH(geo, evaluate(geo, f), evaluate(geo, g)).value();
}

double gammaV(const FoliationModel& model, const ScalarField& f, const ScalarField& g, std::span<const double> p) {
  const LocalGeometry geo(model, p);
  return gammaV(geo, evaluate(geo, f), evaluate(geo, g)).value();
}

double gamma2H(const FoliationModel& model, const ScalarField& f, std::span<const double> p) {
  const LocalGeometry geo(model, p);
  return gamma2H(geo, evaluate(geo, f));
}

double gamma2V(const FoliationModel& model, const ScalarField& f, std::span<const double> p) {
  const LocalGeometry geo(model, p);
  return gamma2V(geo, evaluate(geo, f));
}

FrameOneForm exteriorD(const FoliationModel& model, const ScalarField& f, std::span<const double> p) {
  const LocalGeometry geo(model, p);
  return values(exteriorD(geo, evaluate(geo, f)));
}

FrameOneForm boxEpsilon(const FoliationModel& model, const OneFormField& eta, double eps, std::span<const double> p) {
  const LocalGeometry geo(model, p);
  return boxEpsilon(geo, evaluate(geo, eta), eps);
}

FrameOneForm boxInfinity(const FoliationModel& model, const OneFormField& eta, std::span<const double> p) {
  const LocalGeometry geo(model, p);
  return boxInfinity(geo, evaluate(geo, eta));
}

FrameOneForm frakturJ(const FoliationModel& model, const OneFormField& eta, std::span<const double> p) {
  const LocalGeometry geo(model, p);
  return frakturJ(geo, evaluate(geo, eta));
}

}  // namespace foliage
