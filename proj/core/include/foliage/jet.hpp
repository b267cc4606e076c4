#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace foliage {

/// Highest total degree a Jet can carry.
inline constexpr int kMaxJetOrder = 4;

/// Monomial bookkeeping for truncated Taylor series in `dims` variables.
///
/// Monomials are stored graded by total degree (all degree 0, then all degree
/// 1, ...), so the coefficients of a lower-order jet are a prefix of the
/// coefficients of a higher-order one. Layouts are interned per dimension and
/// live for the whole program.
class JetLayout {
 public:
  struct Product {
    std::uint32_t lhs;
    std::uint32_t rhs;
    std::uint32_t out;
  };

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  static const JetLayout& get(int dims);

  int dims() const { return dims_; }
  /// Number of monomials of total degree <= `degree`.
  std::size_t sizeUpTo(int degree) const { return sizeUpTo_[static_cast<std::size_t>(degree)]; }
  int degree(std::size_t index) const { return degree_[index]; }
  std::span<const std::uint8_t> exponent(std::size_t index) const;
  /// Index of the monomial alpha + e_var, or npos past kMaxJetOrder.
  std::size_t raise(std::size_t index, int var) const { return raise_[index * static_cast<std::size_t>(dims_) + static_cast<std::size_t>(var)]; }
  std::size_t indexOf(std::span<const int> exponents) const;
  /// alpha! for the monomial at `index`.
  double factorial(std::size_t index) const { return factorial_[index]; }
  /// All coefficient products whose output degree is <= `degree`.
  std::span<const Product> productsUpTo(int degree) const;

 private:
  explicit JetLayout(int dims);

  int dims_;
  std::vector<std::uint8_t> exponents_;
  std::vector<int> degree_;
  std::vector<std::size_t> sizeUpTo_;
  std::vector<std::size_t> raise_;
  std::vector<double> factorial_;
  std::vector<Product> products_;
  std::vector<std::size_t> productsUpTo_;
};

/// Truncated multivariate Taylor number: a value together with every mixed
/// partial derivative up to a fixed total order, evaluated at one point.
///
/// Coefficients are Taylor coefficients (d^alpha f / alpha!). A default or
/// double-constructed Jet is an exact constant with no layout; it combines
/// with any jet. Arithmetic between two non-constant jets truncates to the
/// smaller order, and every `derivative` lowers the order by one.
class Jet {
 public:
  static constexpr int kConstantOrder = std::numeric_limits<int>::max();

  Jet() : coeffs_{0.0} {}
  Jet(double value) : coeffs_{value} {}  // NOLINT(google-explicit-constructor)

  static Jet variable(int dims, int order, int var, double value);
  static Jet constant(int dims, int order, double value);
  static Jet zero(int dims, int order) { return constant(dims, order, 0.0); }

  bool isConstant() const { return layout_ == nullptr; }
  int dims() const;
  int order() const { return order_; }
  double value() const { return coeffs_[0]; }
  std::span<const double> coefficients() const { return coeffs_; }

  /// Taylor coefficient for the multi-index `alpha` (0 past the order).
  double coefficient(std::span<const int> alpha) const;
  /// d^alpha f at the expansion point.
  double partial(std::span<const int> alpha) const;

  Jet derivative(int var) const;
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);
  Jet& operator+=(double rhs) { coeffs_[0] += rhs; return *this; }
  Jet& operator-=(double rhs) { coeffs_[0] -= rhs; return *this; }
  Jet& operator*=(double rhs);
  Jet& operator/=(double rhs) { return *this *= 1.0 / rhs; }
  Jet operator-() const;

  friend Jet operator+(Jet lhs, const Jet& rhs) { return lhs += rhs; }
  friend Jet operator-(Jet lhs, const Jet& rhs) { return lhs -= rhs; }
  friend Jet operator*(const Jet& lhs, const Jet& rhs);
  friend Jet operator/(const Jet& lhs, const Jet& rhs) { return lhs * reciprocal(rhs); }
  friend Jet operator+(Jet lhs, double rhs) { return lhs += rhs; }
  friend Jet operator+(double lhs, Jet rhs) { return rhs += lhs; }
  friend Jet operator-(Jet lhs, double rhs) { return lhs -= rhs; }
  friend Jet operator-(double lhs, const Jet& rhs) { return -rhs + lhs; }
  friend Jet operator*(Jet lhs, double rhs) { return lhs *= rhs; }
  friend Jet operator*(double lhs, Jet rhs) { return rhs *= lhs; }
  friend Jet operator/(Jet lhs, double rhs) { return lhs /= rhs; }
  friend Jet operator/(double lhs, const Jet& rhs) { return lhs * reciprocal(rhs); }

  friend Jet reciprocal(const Jet& x);
  friend Jet sin(const Jet& x);
  friend Jet cos(const Jet& x);
  friend Jet exp(const Jet& x);
  friend Jet log(const Jet& x);
  friend Jet sqrt(const Jet& x);
  friend Jet pow(const Jet& x, int power);

  /// f(x) for a univariate f given by its Taylor coefficients at x.value():
  /// taylor[k] = f^(k)(x0) / k!. Needs taylor.size() > order().
  static Jet compose(const Jet& x, std::span<const double> taylor);

 private:
  Jet(const JetLayout* layout, int order);
  void adoptShape(const Jet& other);

  const JetLayout* layout_ = nullptr;
  int order_ = kConstantOrder;
  std::vector<double> coeffs_;
};

/// Coordinate jets x_mu = p_mu + t_mu for a chart point.
std::vector<Jet> coordinateJets(std::span<const double> point, int order);

}  // namespace foliage
