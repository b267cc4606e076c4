#include "foliage/diffgeo.hpp"

#include <cmath>
#include <stdexcept>

#include "foliage/errors.hpp"

namespace foliage {

namespace {

// Inverse of a square jet matrix by Gauss-Jordan elimination with partial
// pivoting on the constant terms.
std::vector<Jet> invert(std::vector<Jet> a, int dim) {
  auto at = [dim](std::vector<Jet>& mat, int r, int c) -> Jet& { return mat[static_cast<std::size_t>(r * dim + c)]; };
  std::vector<Jet> inv(static_cast<std::size_t>(dim * dim), Jet(0.0));
  for (int i = 0; i < dim; ++i) at(inv, i, i) = Jet(1.0);
  for (int col = 0; col < dim; ++col) {
    int pivot = col;
    for (int r = col + 1; r < dim; ++r) {
      if (std::abs(at(a, r, col).value()) > std::abs(at(a, pivot, col).value())) pivot = r;
    }
    if (std::abs(at(a, pivot, col).value()) < 1e-13) throw ModelError("frame is linearly dependent at this point");
    if (pivot != col) {
      for (int c = 0; c < dim; ++c) {
        std::swap(at(a, pivot, c), at(a, col, c));
        std::swap(at(inv, pivot, c), at(inv, col, c));
      }
    }
    const Jet scale = reciprocal(at(a, col, col));
    for (int c = 0; c < dim; ++c) {
      at(a, col, c) = at(a, col, c) * scale;
      at(inv, col, c) = at(inv, col, c) * scale;
    }
    for (int r = 0; r < dim; ++r) {
      if (r == col) continue;
      const Jet factor = at(a, r, col);
      if (factor.isConstant() && factor.value() == 0.0) continue;
      for (int c = 0; c < dim; ++c) {
        at(a, r, c) -= factor * at(a, col, c);
        at(inv, r, c) -= factor * at(inv, col, c);
      }
    }
  }
  return inv;
}

bool isZero(const Jet& j) { return j.isConstant() && j.value() == 0.0; }

}  // namespace

LocalGeometry::LocalGeometry(const FoliationModel& model, std::span<const double> point, GeometryOptions options)
    : n_(model.n), m_(model.m), dim_(model.chartDim()), order_(options.order), point_(point.begin(), point.end()) {
  if (order_ < 2 || order_ > kMaxJetOrder) throw std::invalid_argument("geometry jet order must be in [2, 4]");
  if (static_cast<int>(point.size()) != dim_) throw std::invalid_argument("point dimension does not match chart");
  model.requireInterior(point);

  const int d = dim_;
  coords_ = coordinateJets(point, order_);
  frame_.assign(static_cast<std::size_t>(d * d), Jet(0.0));
  model.frame.jets(coords_, frame_);
  coframe_ = invert(frame_, d);

  // Coordinate derivatives of the frame coefficients.
  std::vector<Jet> dframe(static_cast<std::size_t>(d * d * d));
  for (int a = 0; a < d; ++a) {
    for (int mu = 0; mu < d; ++mu) {
      for (int nu = 0; nu < d; ++nu) dframe[idx3(a, mu, nu)] = frameCoeff(a, mu).derivative(nu);
    }
  }

  structure_.assign(static_cast<std::size_t>(d * d * d), Jet(0.0));
  std::vector<Jet> br(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      for (int mu = 0; mu < d; ++mu) {
        Jet acc(0.0);
        for (int nu = 0; nu < d; ++nu) {
          const Jet& ab = dframe[idx3(b, mu, nu)];
          const Jet& aa = dframe[idx3(a, mu, nu)];
          if (!isZero(ab)) acc += frameCoeff(a, nu) * ab;
          if (!isZero(aa)) acc -= frameCoeff(b, nu) * aa;
        }
        br[static_cast<std::size_t>(mu)] = acc;
      }
      for (int c = 0; c < d; ++c) {
        Jet acc(0.0);
        for (int mu = 0; mu < d; ++mu) {
          if (!isZero(br[static_cast<std::size_t>(mu)])) acc += br[static_cast<std::size_t>(mu)] * coframe_[idx2(mu, c)];
        }
        structure_[idx3(a, b, c)] = acc;
        structure_[idx3(b, a, c)] = -acc;
      }
    }
  }

  // Koszul formula in an orthonormal frame.
  leviCivita_.assign(static_cast<std::size_t>(d * d * d), Jet(0.0));
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      for (int c = 0; c < d; ++c) {
        leviCivita_[idx3(a, b, c)] =
            (structureJet(a, b, c) - structureJet(a, c, b) - structureJet(b, c, a)) * 0.5;
      }
    }
  }

  bott_.assign(static_cast<std::size_t>(d * d * d), Jet(0.0));
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      for (int c = 0; c < d; ++c) {
        const bool ha = isHorizontal(a);
        const bool hb = isHorizontal(b);
        const bool hc = isHorizontal(c);
        if (hb != hc) continue;
        if (ha == hb) {
          // pi_H(nabla^R_X Y) or pi_V(nabla^R_Z W).
          bott_[idx3(a, b, c)] = leviCivita_[idx3(a, b, c)];
        } else {
          // pi_H[Z, X] or pi_V[X, Z].
          bott_[idx3(a, b, c)] = structureJet(a, b, c);
        }
      }
    }
  }

  torsion_.assign(static_cast<std::size_t>(d * d * d), Jet(0.0));
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      for (int c = 0; c < d; ++c) {
        torsion_[idx3(a, b, c)] = bott_[idx3(a, b, c)] - bott_[idx3(b, a, c)] - structure_[idx3(a, b, c)];
      }
    }
  }

  jSquared_ = EndoMatrix::Zero(d, d);
  for (int l = 0; l < m_; ++l) {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(m_);
    z(l) = 1.0;
    const EndoMatrix jl = j(z);
    jSquared_ += jl * jl;
  }

  // Curvature R(E_a, E_b) E_c = sum_e R[a][b][c][e] E_e of the Bott connection.
  std::vector<double> dGamma(static_cast<std::size_t>(d * d * d * d));
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      for (int c = 0; c < d; ++c) {
        for (int e = 0; e < d; ++e) {
          dGamma[static_cast<std::size_t>(((a * d + b) * d + c) * d + e)] = apply(a, bott_[idx3(b, c, e)]).value();
        }
      }
    }
  }
  auto gam = [this](int a, int b, int c) { return bott_[idx3(a, b, c)].value(); };
  auto curvature = [&](int a, int b, int c, int e) {
    double r = dGamma[static_cast<std::size_t>(((a * d + b) * d + c) * d + e)] -
               dGamma[static_cast<std::size_t>(((b * d + a) * d + c) * d + e)];
    for (int k = 0; k < d; ++k) {
      r += gam(b, c, k) * gam(a, k, e) - gam(a, c, k) * gam(b, k, e) - structure(a, b, k) * gam(k, c, e);
    }
    return r;
  };
  ricciFull_ = EndoMatrix::Zero(d, d);
  for (int b = 0; b < d; ++b) {
    for (int c = 0; c < d; ++c) {
      double acc = 0.0;
      for (int i = 0; i < n_; ++i) acc += curvature(i, b, c, i);
      ricciFull_(b, c) = acc;
    }
  }
  ricciH_ = EndoMatrix::Zero(d, d);
  ricciH_.topLeftCorner(n_, n_) =
      0.5 * (ricciFull_.topLeftCorner(n_, n_) + ricciFull_.topLeftCorner(n_, n_).transpose()) * options.ricciScale;

  // delta_H T (E_b) = sum_j (nabla_{X_j} T)(X_j, E_b) for T(X, Y) = nabla_X Y - nabla_Y X - [X, Y].
  deltaT_ = EndoMatrix::Zero(d, d);
  auto tor = [this](int a, int b, int c) { return torsion_[idx3(a, b, c)].value(); };
  for (int b = 0; b < d; ++b) {
    for (int e = 0; e < d; ++e) {
      double acc = 0.0;
      for (int jj = 0; jj < n_; ++jj) {
        acc += apply(jj, torsion_[idx3(jj, b, e)]).value();
        for (int k = 0; k < d; ++k) {
          acc += tor(jj, b, k) * gam(jj, k, e) - gam(jj, jj, k) * tor(k, b, e) - gam(jj, b, k) * tor(jj, k, e);
        }
      }
      deltaT_(e, b) = acc;
    }
  }
}

Jet LocalGeometry::apply(int a, const Jet& f) const {
  Jet acc(0.0);
  if (f.isConstant()) return acc;
  for (int mu = 0; mu < dim_; ++mu) {
    const Jet& coeff = frameCoeff(a, mu);
    if (isZero(coeff)) continue;
    acc += coeff * f.derivative(mu);
  }
  return acc;
}

ConnectionCoeffs LocalGeometry::leviCivita() const {
  ConnectionCoeffs out(dim_);
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b)
      for (int c = 0; c < dim_; ++c) out(a, b, c) = leviCivita_[idx3(a, b, c)].value();
  return out;
}

ConnectionCoeffs LocalGeometry::bott() const {
  ConnectionCoeffs out(dim_);
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b)
      for (int c = 0; c < dim_; ++c) out(a, b, c) = bott_[idx3(a, b, c)].value();
  return out;
}

EndoMatrix LocalGeometry::j(const Eigen::VectorXd& z) const {
  if (z.size() != m_) throw std::invalid_argument("vertical vector must have m components");
  EndoMatrix out = EndoMatrix::Zero(dim_, dim_);
  for (int l = 0; l < m_; ++l) {
    if (z(l) == 0.0) continue;
    for (int i = 0; i < n_; ++i) {
      for (int jj = 0; jj < n_; ++jj) out(jj, i) += z(l) * torsion(i, jj, n_ + l);
    }
  }
  return out;
}

EndoMatrix LocalGeometry::tEpsilon(const FrameVector& v, double eps) const {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
  EndoMatrix out = EndoMatrix::Zero(dim_, dim_);
  for (int i = 0; i < n_; ++i) {
    if (v(i) == 0.0) continue;
    for (int b = 0; b < n_; ++b) {
      for (int l = n_; l < dim_; ++l) {
        out(b, l) -= v(i) * torsion(i, b, l);
        out(l, b) += v(i) * torsion(i, b, l) / eps;
      }
    }
  }
  return out;
}

std::vector<Jet> LocalGeometry::tEpsilonJet(int a, double eps) const {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
  std::vector<Jet> out(static_cast<std::size_t>(dim_ * dim_), Jet(0.0));
  if (!isHorizontal(a)) return out;
  for (int b = 0; b < n_; ++b) {
    for (int l = n_; l < dim_; ++l) {
      const Jet& t = torsion_[idx3(a, b, l)];
      out[idx2(b, l)] = -t;
      out[idx2(l, b)] = t * (1.0 / eps);
    }
  }
  return out;
}

std::shared_ptr<const LocalGeometry> GeometryCache::at(std::span<const double> point) {
  std::vector<double> key(point.begin(), point.end());
  {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  auto geo = std::make_shared<const LocalGeometry>(*model_, point, options_);
  std::lock_guard lock(mutex_);
  return entries_.emplace(std::move(key), std::move(geo)).first->second;
}

std::size_t GeometryCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

FrameVector bracket(const FoliationModel& model, const FrameVector& u, const FrameVector& v, std::span<const double> p) {
  // Constant-coefficient fields in the frame: [u^a E_a, v^b E_b] = u^a v^b [E_a, E_b].
  const LocalGeometry geo(model, p, {.order = 2});
  const int d = geo.dim();
  FrameVector out = FrameVector::Zero(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      if (u(a) != 0.0 && v(b) != 0.0)
        for (int c = 0; c < d; ++c) out(c) += u(a) * v(b) * geo.structure(a, b, c);
  return out;
}

ConnectionCoeffs leviCivita(const FoliationModel& model, std::span<const double> p) {
  return LocalGeometry(model, p, {.order = 2}).leviCivita();
}

ConnectionCoeffs bottConnection(const FoliationModel& model, std::span<const double> p) {
  return LocalGeometry(model, p, {.order = 2}).bott();
}

std::vector<FrameVector> torsion(const FoliationModel& model, std::span<const double> p) {
  const LocalGeometry geo(model, p, {.order = 2});
  const int d = geo.dim();
  std::vector<FrameVector> out;
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      FrameVector t(d);
      for (int c = 0; c < d; ++c) t(c) = geo.torsion(a, b, c);
      out.push_back(t);
    }
  }
  return out;
}

EndoMatrix jMap(const FoliationModel& model, std::span<const double> p, const FrameVector& z) {
  if (z.size() != model.chartDim()) throw std::invalid_argument("z must have n + m frame components");
  if (z.head(model.n).cwiseAbs().maxCoeff() > 0.0) throw std::invalid_argument("jMap needs a vertical vector");
  return LocalGeometry(model, p, {.order = 2}).j(z.tail(model.m));
}

EndoMatrix jSquared(const FoliationModel& model, std::span<const double> p) {
  return LocalGeometry(model, p, {.order = 2}).jSquared();
}

EndoMatrix horizontalRicci(const FoliationModel& model, std::span<const double> p) {
  return LocalGeometry(model, p, {.order = 2}).horizontalRicci();
}

std::pair<EndoMatrix, EndoMatrix> deltaHT(const FoliationModel& model, std::span<const double> p) {
  const LocalGeometry geo(model, p, {.order = 2});
  return {geo.deltaT(), geo.deltaTStar()};
}

EndoMatrix tEpsilonMap(const FoliationModel& model, std::span<const double> p, const FrameVector& v, double eps) {
  return LocalGeometry(model, p, {.order = 2}).tEpsilon(v, eps);
}

FrameOneForm calTMap(const LocalGeometry& geo, const Eigen::MatrixXd& omega) {
  const int n = geo.n();
  FrameOneForm out = FrameOneForm::Zero(geo.dim());
  for (int l = n; l < geo.dim(); ++l) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int jj = i + 1; jj < n; ++jj) acc -= omega(i, jj) * geo.structure(i, jj, l);
    out(l) = acc;
  }
  return out;
}

Eigen::MatrixXd formMetric(int n, int m, double eps) {
  Eigen::VectorXd diag(n + m);
  diag.head(n).setOnes();
  diag.tail(m).setConstant(eps);
  return diag.asDiagonal();
}

}  // namespace foliage
