#include "foliage/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

namespace foliage {

namespace {

void enumerate(int dims, int remaining, int var, std::vector<std::uint8_t>& current,
               std::vector<std::vector<std::uint8_t>>& out) {
  if (var == dims - 1) {
    current[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(remaining);
    out.push_back(current);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    current[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(k);
    enumerate(dims, remaining - k, var + 1, current, out);
  }
}

}  // namespace

JetLayout::JetLayout(int dims) : dims_(dims) {
  std::vector<std::vector<std::uint8_t>> monomials;
  std::vector<std::uint8_t> current(static_cast<std::size_t>(dims), 0);
  for (int d = 0; d <= kMaxJetOrder; ++d) {
    enumerate(dims, d, 0, current, monomials);
    sizeUpTo_.push_back(monomials.size());
  }

  std::map<std::vector<std::uint8_t>, std::size_t> index;
  for (std::size_t i = 0; i < monomials.size(); ++i) {
    index.emplace(monomials[i], i);
    exponents_.insert(exponents_.end(), monomials[i].begin(), monomials[i].end());
    int deg = 0;
    double fact = 1.0;
    for (auto e : monomials[i]) {
      deg += e;
      for (int k = 2; k <= e; ++k) fact *= k;
    }
    degree_.push_back(deg);
    factorial_.push_back(fact);
  }

  raise_.assign(monomials.size() * static_cast<std::size_t>(dims), npos);
  for (std::size_t i = 0; i < monomials.size(); ++i) {
    if (degree_[i] == kMaxJetOrder) continue;
    for (int v = 0; v < dims; ++v) {
      auto up = monomials[i];
      ++up[static_cast<std::size_t>(v)];
      raise_[i * static_cast<std::size_t>(dims) + static_cast<std::size_t>(v)] = index.at(up);
    }
  }

  std::vector<std::vector<Product>> byDegree(kMaxJetOrder + 1);
  for (std::size_t i = 0; i < monomials.size(); ++i) {
    for (std::size_t j = 0; j < monomials.size(); ++j) {
      const int deg = degree_[i] + degree_[j];
      if (deg > kMaxJetOrder) continue;
      std::vector<std::uint8_t> sum(static_cast<std::size_t>(dims));
      for (std::size_t v = 0; v < sum.size(); ++v) {
        sum[v] = static_cast<std::uint8_t>(monomials[i][v] + monomials[j][v]);
      }
      byDegree[static_cast<std::size_t>(deg)].push_back(
          {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
           static_cast<std::uint32_t>(index.at(sum))});
    }
  }
  for (const auto& bucket : byDegree) {
    products_.insert(products_.end(), bucket.begin(), bucket.end());
    productsUpTo_.push_back(products_.size());
  }
}

const JetLayout& JetLayout::get(int dims) {
  if (dims <= 0 || dims > 32) {
    throw std::invalid_argument("jet dimension must be in [1, 32], got " + std::to_string(dims));
  }
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<JetLayout>> registry;
  std::lock_guard lock(mutex);
  auto& slot = registry[dims];
  if (!slot) slot.reset(new JetLayout(dims));
  return *slot;
}

std::span<const std::uint8_t> JetLayout::exponent(std::size_t index) const {
  return {exponents_.data() + index * static_cast<std::size_t>(dims_), static_cast<std::size_t>(dims_)};
}

std::size_t JetLayout::indexOf(std::span<const int> exponents) const {
  if (exponents.size() != static_cast<std::size_t>(dims_)) {
    throw std::invalid_argument("multi-index has wrong length");
  }
  std::size_t idx = 0;
  for (int v = 0; v < dims_; ++v) {
    for (int k = 0; k < exponents[static_cast<std::size_t>(v)]; ++k) {
      idx = raise(idx, v);
      if (idx == npos) return npos;
    }
  }
  return idx;
}

std::span<const JetLayout::Product> JetLayout::productsUpTo(int degree) const {
  return {products_.data(), productsUpTo_[static_cast<std::size_t>(degree)]};
}

Jet::Jet(const JetLayout* layout, int order)
    : layout_(layout), order_(order), coeffs_(layout->sizeUpTo(order), 0.0) {}

Jet Jet::variable(int dims, int order, int var, double value) {
  Jet jet = constant(dims, order, value);
  if (order >= 1) jet.coeffs_[static_cast<std::size_t>(1 + var)] = 1.0;
  return jet;
}

Jet Jet::constant(int dims, int order, double value) {
  if (order < 0 || order > kMaxJetOrder) {
    throw std::invalid_argument("jet order must be in [0, " + std::to_string(kMaxJetOrder) + "]");
  }
  Jet jet(&JetLayout::get(dims), order);
  jet.coeffs_[0] = value;
  return jet;
}

int Jet::dims() const { return layout_ ? layout_->dims() : 0; }

double Jet::coefficient(std::span<const int> alpha) const {
  if (isConstant()) {
    return std::all_of(alpha.begin(), alpha.end(), [](int a) { return a == 0; }) ? coeffs_[0] : 0.0;
  }
  const auto idx = layout_->indexOf(alpha);
  if (idx == JetLayout::npos || layout_->degree(idx) > order_) return 0.0;
  return coeffs_[idx];
}

double Jet::partial(std::span<const int> alpha) const {
  if (isConstant()) return coefficient(alpha);
  const int deg = std::accumulate(alpha.begin(), alpha.end(), 0);
  if (deg > order_) throw std::domain_error("insufficient jet order for requested partial");
  const auto idx = layout_->indexOf(alpha);
  return coeffs_[idx] * layout_->factorial(idx);
}

Jet Jet::derivative(int var) const {
  if (isConstant()) return Jet(0.0);
  if (order_ == 0) throw std::domain_error("insufficient jet order: cannot differentiate an order-0 jet");
  Jet out(layout_, order_ - 1);
  for (std::size_t i = 0; i < out.coeffs_.size(); ++i) {
    const auto up = layout_->raise(i, var);
    const double mult = static_cast<double>(layout_->exponent(up)[static_cast<std::size_t>(var)]);
    out.coeffs_[i] = mult * coeffs_[up];
  }
  return out;
}

Jet Jet::truncated(int order) const {
  if (isConstant() || order >= order_) return *this;
  Jet out(layout_, order);
  std::copy_n(coeffs_.begin(), out.coeffs_.size(), out.coeffs_.begin());
  return out;
}

void Jet::adoptShape(const Jet& other) {
  const double c = coeffs_[0];
  layout_ = other.layout_;
  order_ = other.order_;
  coeffs_.assign(layout_->sizeUpTo(order_), 0.0);
  coeffs_[0] = c;
}

Jet& Jet::operator+=(const Jet& rhs) {
  if (rhs.isConstant()) {
    coeffs_[0] += rhs.coeffs_[0];
    return *this;
  }
  if (isConstant()) adoptShape(rhs);
  if (layout_ != rhs.layout_) throw std::invalid_argument("jet dimension mismatch");
  if (rhs.order_ < order_) *this = truncated(rhs.order_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  if (rhs.isConstant()) {
    coeffs_[0] -= rhs.coeffs_[0];
    return *this;
  }
  if (isConstant()) adoptShape(rhs);
  if (layout_ != rhs.layout_) throw std::invalid_argument("jet dimension mismatch");
  if (rhs.order_ < order_) *this = truncated(rhs.order_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(double rhs) {
  for (auto& c : coeffs_) c *= rhs;
  return *this;
}

Jet operator*(const Jet& lhs, const Jet& rhs) {
  if (lhs.isConstant()) return rhs * lhs.coeffs_[0];
  if (rhs.isConstant()) return lhs * rhs.coeffs_[0];
  if (lhs.layout_ != rhs.layout_) throw std::invalid_argument("jet dimension mismatch");
  Jet out(lhs.layout_, std::min(lhs.order_, rhs.order_));
  const double* a = lhs.coeffs_.data();
  const double* b = rhs.coeffs_.data();
  double* c = out.coeffs_.data();
  for (const auto& p : lhs.layout_->productsUpTo(out.order_)) c[p.out] += a[p.lhs] * b[p.rhs];
  return out;
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }
Jet& Jet::operator/=(const Jet& rhs) { return *this = *this / rhs; }

Jet Jet::operator-() const {
  Jet out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

Jet Jet::compose(const Jet& x, std::span<const double> taylor) {
  if (x.isConstant()) return Jet(taylor[0]);
  if (taylor.size() <= static_cast<std::size_t>(x.order_)) {
    throw std::invalid_argument("compose needs one Taylor coefficient per jet order");
  }
  Jet h = x;
  h.coeffs_[0] = 0.0;
  Jet result = Jet::constant(x.dims(), x.order_, taylor[static_cast<std::size_t>(x.order_)]);
  for (int k = x.order_ - 1; k >= 0; --k) {
    result = result * h;
    result.coeffs_[0] += taylor[static_cast<std::size_t>(k)];
  }
  return result;
}

namespace {

template <class Fn>
Jet composeWith(const Jet& x, Fn taylorAt) {
  const int order = x.isConstant() ? 0 : x.order();
  std::vector<double> taylor(static_cast<std::size_t>(order) + 1);
  for (int k = 0; k <= order; ++k) taylor[static_cast<std::size_t>(k)] = taylorAt(k);
  return Jet::compose(x, taylor);
}

double inverseFactorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return 1.0 / f;
}

}  // namespace

Jet reciprocal(const Jet& x) {
  const double x0 = x.value();
  if (x0 == 0.0) throw std::domain_error("division by a jet with zero value");
  return composeWith(x, [x0](int k) { return ((k % 2) ? -1.0 : 1.0) / std::pow(x0, k + 1); });
}

Jet sin(const Jet& x) {
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  return composeWith(x, [s, c](int k) {
    const double d[4] = {s, c, -s, -c};
    return d[k % 4] * inverseFactorial(k);
  });
}

Jet cos(const Jet& x) {
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  return composeWith(x, [s, c](int k) {
    const double d[4] = {c, -s, -c, s};
    return d[k % 4] * inverseFactorial(k);
  });
}

Jet exp(const Jet& x) {
  const double e = std::exp(x.value());
  return composeWith(x, [e](int k) { return e * inverseFactorial(k); });
}

Jet log(const Jet& x) {
  const double x0 = x.value();
  if (x0 <= 0.0) throw std::domain_error("log of a non-positive jet");
  return composeWith(x, [x0](int k) {
    if (k == 0) return std::log(x0);
    return ((k % 2) ? 1.0 : -1.0) / (k * std::pow(x0, k));
  });
}

Jet sqrt(const Jet& x) {
  const double x0 = x.value();
  if (x0 <= 0.0) throw std::domain_error("sqrt of a non-positive jet");
  return composeWith(x, [x0](int k) {
    double binom = 1.0;
    for (int i = 0; i < k; ++i) binom *= (0.5 - i) / (i + 1);
    return binom * std::pow(x0, 0.5 - k);
  });
}

Jet pow(const Jet& x, int power) {
  if (power < 0) return reciprocal(pow(x, -power));
  Jet result(1.0);
  Jet base = x;
  while (power > 0) {
    if (power & 1) result = result * base;
    power >>= 1;
    if (power) base = base * base;
  }
  return result;
}

std::vector<Jet> coordinateJets(std::span<const double> point, int order) {
  std::vector<Jet> out;
  out.reserve(point.size());
  const int dims = static_cast<int>(point.size());
  for (int v = 0; v < dims; ++v) out.push_back(Jet::variable(dims, order, v, point[static_cast<std::size_t>(v)]));
  return out;
}

}  // namespace foliage
