#include <cmath>
#include <sstream>

#include "foliage/errors.hpp"
#include "foliage/models.hpp"

namespace foliage {

namespace {

template <class T>
void fillHeisenberg(int d, std::span<const T> x, std::span<T> out) {
  const int dim = 2 * d + 1;
  for (auto& v : out) v = T(0.0);
  const int z = 2 * d;
  for (int i = 0; i < d; ++i) {
    out[static_cast<std::size_t>(i * dim + i)] = T(1.0);
    out[static_cast<std::size_t>(i * dim + z)] = x[static_cast<std::size_t>(d + i)] * -0.5;
    out[static_cast<std::size_t>((d + i) * dim + d + i)] = T(1.0);
    out[static_cast<std::size_t>((d + i) * dim + z)] = x[static_cast<std::size_t>(i)] * 0.5;
  }
  out[static_cast<std::size_t>(z * dim + z)] = T(1.0);
}

// |B_2k| / (2k)! for k = 1..12.
constexpr double kSeriesCoeff[12] = {
    1.0 / 12.0,
    1.0 / 720.0,
    1.0 / 30240.0,
    1.0 / 1209600.0,
    1.0 / 47900160.0,
    691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    174611.0 / 802857662698291200000.0,
    77683.0 / 14101100039391805440000.0,
    236364091.0 / 1693824136731743669452800000.0,
};
constexpr int kSeriesTerms = 12;
constexpr double kSeriesSwitch = 1.0;

double scalarValue(double s) { return s; }
double scalarValue(const Jet& s) { return s.value(); }

// Coefficient of ad_v^2 in the differential of the exponential map,
// (1 - (t/2) cot(t/2)) / t^2 with t^2 = s.
template <class T>
T adSquaredCoefficient(const T& s) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  if (scalarValue(s) < kSeriesSwitch) {
    T acc = T(kSeriesCoeff[kSeriesTerms - 1]);
    for (int k = kSeriesTerms - 2; k >= 0; --k) acc = acc * s + kSeriesCoeff[k];
    return acc;
  }
  const T half = sqrt(s) * 0.5;
  return (1.0 - half * cos(half) / sin(half)) / s;
}

template <class T>
void fillSu2(double lambda, std::span<const T> v, std::span<T> out) {
  const T s = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
  const T c = adSquaredCoefficient(s);
  for (int a = 0; a < 3; ++a) {
    // e_a + (1/2) v x e_a + c v x (v x e_a), and v x (v x e_a) = v v_a - s e_a.
    T cross[3] = {T(0.0), T(0.0), T(0.0)};
    const int b = (a + 1) % 3;
    const int e = (a + 2) % 3;
    cross[b] = v[static_cast<std::size_t>(e)];
    cross[e] = -v[static_cast<std::size_t>(b)];
    const double scale = a == 2 ? 1.0 / lambda : 1.0;
    for (int mu = 0; mu < 3; ++mu) {
      T entry = cross[mu] * 0.5 + c * v[static_cast<std::size_t>(a)] * v[static_cast<std::size_t>(mu)];
      if (mu == a) entry = entry + 1.0 - c * s;
      out[static_cast<std::size_t>(a * 3 + mu)] = entry * scale;
    }
  }
}

template <class T>
void fillIdentity(int dim, std::span<T> out) {
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) out[static_cast<std::size_t>(a * dim + b)] = T(a == b ? 1.0 : 0.0);
  }
}

std::string formatDouble(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

FoliationModel heisenbergModel(int d) {
  if (d < 1) throw ModelError("heisenberg dimension parameter must be >= 1");
  FoliationModel model;
  model.name = "heisenberg:" + std::to_string(d);
  model.n = 2 * d;
  model.m = 1;
  for (int i = 0; i < d; ++i) model.coordinates.push_back("x" + std::to_string(i + 1));
  for (int i = 0; i < d; ++i) model.coordinates.push_back("y" + std::to_string(i + 1));
  model.coordinates.push_back("z");
  const int dim = model.chartDim();
  model.domain.lo.assign(static_cast<std::size_t>(dim), -4.0);
  model.domain.hi.assign(static_cast<std::size_t>(dim), 4.0);
  model.sampleShrink = 0.25;
  model.frame.jets = [d](std::span<const Jet> x, std::span<Jet> out) { fillHeisenberg<Jet>(d, x, out); };
  model.frame.values = [d](std::span<const double> x, std::span<double> out) { fillHeisenberg<double>(d, x, out); };
  model.knownConstants = CDConstants::fromRho(0.0, 0.5 * d, 1.0, model.n);
  model.leftInvariant = true;
  model.metadata["frame"] = "X_i = dx_i - (y_i/2) dz, Y_i = dy_i + (x_i/2) dz, Z = dz";
  model.metadata["brackets"] = "[X_i, Y_i] = Z";
  return model;
}

FoliationModel su2Model(double lambda) {
  if (!(lambda > 0.0)) throw ModelError("su2 scale lambda must be > 0");
  FoliationModel model;
  model.name = "su2:" + formatDouble(lambda);
  model.n = 2;
  model.m = 1;
  model.coordinates = {"v1", "v2", "v3"};
  model.domain.lo.assign(3, -3.0);
  model.domain.hi.assign(3, 3.0);
  model.sampleShrink = 1.0 / 3.0;
  model.frame.jets = [lambda](std::span<const Jet> x, std::span<Jet> out) { fillSu2<Jet>(lambda, x, out); };
  model.frame.values = [lambda](std::span<const double> x, std::span<double> out) { fillSu2<double>(lambda, x, out); };
  model.knownConstants = CDConstants::fromRho(1.0, 0.5 * lambda * lambda, lambda * lambda, model.n);
  model.leftInvariant = true;
  model.compactType = true;
  model.metadata["chart"] = "exponential coordinates of the first kind, |v| < 2 pi";
  model.metadata["brackets"] = "[X1, X2] = lambda Z, [X2, Z] = X1 / lambda, [Z, X1] = X2 / lambda";
  model.metadata["series_terms"] = std::to_string(kSeriesTerms);
  model.metadata["series_region"] = "|v|^2 < 1 (closed form cot expression elsewhere)";
  model.metadata["series_truncation_bound"] = "3.6e-21";
  return model;
}

FoliationModel productModel(int n, int m) {
  if (n < 1 || m < 1) throw ModelError("product ranks must be >= 1");
  FoliationModel model;
  model.name = "product:" + std::to_string(n) + "," + std::to_string(m);
  model.n = n;
  model.m = m;
  for (int i = 0; i < n; ++i) model.coordinates.push_back("x" + std::to_string(i + 1));
  for (int i = 0; i < m; ++i) model.coordinates.push_back("z" + std::to_string(i + 1));
  const int dim = n + m;
  model.domain.lo.assign(static_cast<std::size_t>(dim), -4.0);
  model.domain.hi.assign(static_cast<std::size_t>(dim), 4.0);
  model.sampleShrink = 0.25;
  model.frame.jets = [dim](std::span<const Jet>, std::span<Jet> out) { fillIdentity<Jet>(dim, out); };
  model.frame.values = [dim](std::span<const double>, std::span<double> out) { fillIdentity<double>(dim, out); };
  model.leftInvariant = true;
  model.metadata["frame"] = "coordinate frame";
  return model;
}

}  // namespace foliage
