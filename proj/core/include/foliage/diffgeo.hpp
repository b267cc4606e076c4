#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "foliage/jet.hpp"
#include "foliage/models.hpp"

namespace foliage {

/// Square matrix acting on frame components. For one-forms the convention is
/// (A eta)_c = sum_b A(c, b) eta_b, i.e. forms are identified with vectors
/// through g.
using EndoMatrix = Eigen::MatrixXd;
/// Frame components (f_1..f_n, g_1..g_m) of a one-form, or of a vector.
using FrameOneForm = Eigen::VectorXd;
using FrameVector = Eigen::VectorXd;

/// Connection coefficients in the frame: nabla_{E_a} E_b = sum_c (a, b, c) E_c.
class ConnectionCoeffs {
 public:
  explicit ConnectionCoeffs(int dim) : dim_(dim), data_(static_cast<std::size_t>(dim * dim * dim), 0.0) {}

  int dim() const { return dim_; }
  double& operator()(int a, int b, int c) { return data_[index(a, b, c)]; }
  double operator()(int a, int b, int c) const { return data_[index(a, b, c)]; }

 private:
  std::size_t index(int a, int b, int c) const { return static_cast<std::size_t>((a * dim_ + b) * dim_ + c); }
  int dim_;
  std::vector<double> data_;
};

struct GeometryOptions {
  /// Jet order of the coordinate expansion. Order 3 gives two derivatives of
  /// connection data and three of test functions, enough for every operator.
  int order = 3;
  /// Multiplies the horizontal Ricci tensor; anything but 1 corrupts the
  /// geometry on purpose (used by negative controls).
  double ricciScale = 1.0;
};

/// Every frame-expressed tensor of the foliation at one chart point.
///
/// Structure functions, connection coefficients and torsion are kept as jets
/// so that operators can differentiate them; curvature-type tensors are kept
/// as values.
class LocalGeometry {
 public:
  LocalGeometry(const FoliationModel& model, std::span<const double> point, GeometryOptions options = {});

  int n() const { return n_; }
  int m() const { return m_; }
  int dim() const { return dim_; }
  int order() const { return order_; }
  std::span<const double> point() const { return point_; }
  const std::vector<Jet>& coordinates() const { return coords_; }
  bool isHorizontal(int a) const { return a < n_; }

  /// Coordinate components of E_a (jets).
  const Jet& frameCoeff(int a, int mu) const { return frame_[idx2(a, mu)]; }
  /// E_a applied to a jet-valued function; lowers the order by one.
  Jet apply(int a, const Jet& f) const;

  /// [E_a, E_b] = sum_c structure(a, b, c) E_c.
  const Jet& structureJet(int a, int b, int c) const { return structure_[idx3(a, b, c)]; }
  const Jet& bottJet(int a, int b, int c) const { return bott_[idx3(a, b, c)]; }
  const Jet& torsionJet(int a, int b, int c) const { return torsion_[idx3(a, b, c)]; }

  double structure(int a, int b, int c) const { return structureJet(a, b, c).value(); }
  ConnectionCoeffs leviCivita() const;
  ConnectionCoeffs bott() const;
  /// T(E_a, E_b) = sum_c torsion(a, b, c) E_c.
  double torsion(int a, int b, int c) const { return torsionJet(a, b, c).value(); }

  /// J_z for a vertical vector with frame components z (length m).
  EndoMatrix j(const Eigen::VectorXd& z) const;
  EndoMatrix jSquared() const { return jSquared_; }
  EndoMatrix horizontalRicci() const { return ricciH_; }
  /// Full Ricci table Ricci(E_b, E_c) = sum_i R(E_i, E_b, E_c)^i of the Bott connection.
  EndoMatrix ricciFull() const { return ricciFull_; }
  EndoMatrix deltaT() const { return deltaT_; }
  EndoMatrix deltaTStar() const { return deltaT_.transpose(); }
  /// Matrix of the operator T^eps_v on one-form components.
  EndoMatrix tEpsilon(const FrameVector& v, double eps) const;
  /// Same, entries as jets: (tEpsilonJet(a, eps))[b * dim + c] for v = E_a.
  std::vector<Jet> tEpsilonJet(int a, double eps) const;

 private:
  std::size_t idx2(int a, int b) const { return static_cast<std::size_t>(a * dim_ + b); }
  std::size_t idx3(int a, int b, int c) const { return static_cast<std::size_t>((a * dim_ + b) * dim_ + c); }

  int n_;
  int m_;
  int dim_;
  int order_;
  std::vector<double> point_;
  std::vector<Jet> coords_;
  std::vector<Jet> frame_;
  std::vector<Jet> coframe_;
  std::vector<Jet> structure_;
  std::vector<Jet> leviCivita_;
  std::vector<Jet> bott_;
  std::vector<Jet> torsion_;
  EndoMatrix jSquared_;
  EndoMatrix ricciFull_;
  EndoMatrix ricciH_;
  EndoMatrix deltaT_;
};

/// Thread-safe memo of LocalGeometry keyed by the exact point coordinates.
class GeometryCache {
 public:
  explicit GeometryCache(const FoliationModel& model, GeometryOptions options = {})
      : model_(&model), options_(options) {}

  std::shared_ptr<const LocalGeometry> at(std::span<const double> point);
  std::size_t size() const;

 private:
  const FoliationModel* model_;
  GeometryOptions options_;
  mutable std::mutex mutex_;
  std::map<std::vector<double>, std::shared_ptr<const LocalGeometry>> entries_;
};

// Point-level entry points. Fields are passed as frame components at p.

FrameVector bracket(const FoliationModel& model, const FrameVector& u, const FrameVector& v, std::span<const double> p);
ConnectionCoeffs leviCivita(const FoliationModel& model, std::span<const double> p);
ConnectionCoeffs bottConnection(const FoliationModel& model, std::span<const double> p);
/// T(E_a, E_b) as frame vector for every pair: result[a * dim + b].
std::vector<FrameVector> torsion(const FoliationModel& model, std::span<const double> p);
EndoMatrix jMap(const FoliationModel& model, std::span<const double> p, const FrameVector& z);
EndoMatrix jSquared(const FoliationModel& model, std::span<const double> p);
EndoMatrix horizontalRicci(const FoliationModel& model, std::span<const double> p);
std::pair<EndoMatrix, EndoMatrix> deltaHT(const FoliationModel& model, std::span<const double> p);
EndoMatrix tEpsilonMap(const FoliationModel& model, std::span<const double> p, const FrameVector& v, double eps);
/// Applies the torsion-contraction map to a two-form given by its
/// antisymmetric frame component matrix omega(a, b) = omega(E_a, E_b).
FrameOneForm calTMap(const LocalGeometry& geo, const Eigen::MatrixXd& omega);

/// g_eps metric on one-form components: diag(1 x n, eps x m).
Eigen::MatrixXd formMetric(int n, int m, double eps);

}  // namespace foliage
