#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "foliage/diffgeo.hpp"
#include "foliage/models.hpp"
#include "foliage/verdict.hpp"

namespace foliage {

/// Outcome of one identity or inequality suite over a sample set.
struct CheckReport {
  enum class Kind { Identity, Inequality };

  std::string check;
  std::string model;
  std::vector<double> eps;
  int sampleCount = 0;
  Kind kind = Kind::Identity;
  /// Residuals (identities) or slacks (inequalities), one per evaluated tuple.
  std::vector<double> samples;
  /// max |residual| for identities, min slack for inequalities.
  double worst = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::Pass;
  std::uint64_t seed = 0;
  /// Run parameters and secondary diagnostics, printed into every record.
  std::map<std::string, double> parameters;
  std::string note;

  /// Sets worst and verdict from the samples and the tolerance.
  void finalize();
  bool passed() const { return verdict == Verdict::Pass; }
};

struct VerifyOptions {
  std::vector<double> eps{0.25, 1.0, 4.0};
  int fieldCount = 20;
  int pointCount = 20;
  std::uint64_t seed = 1;
  int polynomialDegree = 3;
  double identityTol = 1e-8;
  double inequalityTol = 1e-8;
  double structureTol = 1e-10;
  double gammaIntertwiningTol = 1e-9;
  GeometryOptions geometry{};
  int threads = 1;
  /// checkCD also takes the smallest eigenvalue of the slack as a quadratic
  /// form on all Taylor coefficients of order 1..3 at each point.
  bool jetFormProbe = true;
};

/// ||dLf - box_eps df||_eps over random polynomials, points and eps.
CheckReport checkIntertwining(const FoliationModel& model, const VerifyOptions& options = {});
/// box_eps eta - (box_inf eta - (2/eps) calT(d eta)) on exact and non-closed forms.
CheckReport checkBoxRelation(const FoliationModel& model, const VerifyOptions& options = {});
/// Pointwise Bochner equality on arbitrary one-form fields.
CheckReport checkBochnerEquality(const FoliationModel& model, const VerifyOptions& options = {});
/// Bochner inequality slack on exact forms.
CheckReport checkBochnerInequality(const FoliationModel& model, const VerifyOptions& options = {});
/// Generalized curvature-dimension slack; also checks Gamma(f, Gamma^V f) = Gamma^V(f, Gamma f).
CheckReport checkCD(const FoliationModel& model, const CDConstants& constants, const VerifyOptions& options = {});

struct ConstantsReport {
  CDConstants constants;
  double rho1Spread = 0.0;
  double kappaSpread = 0.0;
  double rho2Spread = 0.0;
  int pointCount = 0;
  std::uint64_t seed = 0;
  /// Set when rho2 <= tol: the uniform bracket-generating assumption fails.
  bool rho2Degenerate = false;
};

ConstantsReport extractConstants(const FoliationModel& model, int pointCount = 20, std::uint64_t seed = 1,
                                 double tol = 1e-10);
/// Sub-Riemannian diameter bound; nullopt when rho1 <= 0 (no compactness claim).
std::optional<double> diameterBound(const CDConstants& c);
/// Lower bound for the first nonzero eigenvalue of -L; nullopt when rho1 <= 0.
std::optional<double> lambda1Bound(const CDConstants& c);

struct LocalFormulaOptions {
  int pointCount = 20;
  std::uint64_t seed = 1;
  double tol = 1e-10;
  std::vector<double> eps{0.25, 1.0, 4.0};
  /// Evaluate every formula even where its gate says it does not apply.
  bool force = false;
};

/// Compares the frame formulas for Ricci, J-frak, delta_H T, its adjoint,
/// T^eps and <J^2 eta, eta> with their definitional computation. One report
/// per formula.
std::vector<CheckReport> localFormulaOracle(const FoliationModel& model, const LocalFormulaOptions& options = {});

/// Tensor invariants: mixed torsion vanishing, metric compatibility of both
/// connections, Levi-Civita symmetry, J skewness, frame invariance of J^2,
/// g_eps skewness of T^eps. One report per invariant.
std::vector<CheckReport> checkStructure(const FoliationModel& model, int pointCount = 20, std::uint64_t seed = 1,
                                        double tol = 1e-10);

}  // namespace foliage
