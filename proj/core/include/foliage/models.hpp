#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "foliage/jet.hpp"
#include "foliage/verdict.hpp"

namespace foliage {

/// Axis-aligned coordinate box. Geometry is only evaluated strictly inside.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool containsInterior(std::span<const double> p) const;
};

/// Curvature-dimension constants (rho1, rho2, kappa) with dimension n and K = max(-rho1, 0).
struct CDConstants {
  double rho1 = 0.0;
  double rho2 = 0.0;
  double kappa = 0.0;
  int n = 0;
  double bigK = 0.0;

  static CDConstants fromRho(double rho1, double rho2, double kappa, int n);
};

/// Coefficients of the adapted frame in chart coordinates.
///
/// Both callbacks fill a row-major D x D matrix: row a holds the coordinate
/// components of frame vector E_a, with E_0..E_{n-1} horizontal and
/// E_n..E_{n+m-1} vertical.
struct FrameField {
  std::function<void(std::span<const Jet>, std::span<Jet>)> jets;
  std::function<void(std::span<const double>, std::span<double>)> values;
};

struct FoliationModel {
  std::string name;
  int n = 0;
  int m = 0;
  std::vector<std::string> coordinates;
  Box domain;
  /// Samples are drawn uniformly from the domain box scaled by this factor about its center.
  double sampleShrink = 1.0;
  FrameField frame;
  std::optional<CDConstants> knownConstants;
  /// Frame bracket coefficients are constant (left-invariant frame on a Lie group).
  bool leftInvariant = false;
  /// Chart of a compact manifold.
  bool compactType = false;
  std::map<std::string, std::string> metadata;

  int chartDim() const { return n + m; }
  std::vector<std::vector<double>> samplePoints(int count, std::uint64_t seed) const;
  /// Throws DomainError unless p lies strictly inside the domain.
  void requireInterior(std::span<const double> p) const;
  /// Frame coefficient matrix at p (row a = E_a).
  Eigen::MatrixXd frameMatrix(std::span<const double> p) const;
};

FoliationModel heisenbergModel(int d);
/// SU(2) with [X1,X2] = lambda Z, [X2,Z] = X1/lambda, [Z,X1] = X2/lambda on
/// exponential coordinates of the first kind.
FoliationModel su2Model(double lambda);
FoliationModel productModel(int n, int m);

/// Parses a JSON model description; see README for the schema.
FoliationModel loadModel(std::string_view config);
FoliationModel loadModelFile(const std::filesystem::path& path);

struct ValidationCheck {
  std::string name;
  double maxResidual = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::Pass;
  std::string note;
};

struct ValidationReport {
  std::string model;
  int sampleCount = 0;
  std::uint64_t seed = 0;
  std::vector<ValidationCheck> checks;

  bool passed() const;
  const ValidationCheck& check(std::string_view name) const;
};

ValidationReport validateModel(const FoliationModel& model, int sampleCount, double tol, std::uint64_t seed = 1);

}  // namespace foliage
