#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "foliage/diffgeo.hpp"
#include "foliage/gamma.hpp"
#include "foliage/models.hpp"
#include "foliage/verify.hpp"

namespace foliage {

enum class Scheme {
  /// Stratonovich Heun predictor-corrector; transport uses Cayley steps for
  /// the connection part and Crank-Nicolson half steps for the damping part.
  Heun,
};

/// Simulation parameters. Time is measured on the clock of the generator L.
struct DiffusionParams {
  double dt = 1e-3;
  double t = 0.1;
  int paths = 1000;
  std::uint64_t seed = 1;
  Scheme scheme = Scheme::Heun;
  /// Estimates whose exit fraction exceeds this are flagged unreliable.
  double exitCap = 0.01;
  /// Central-difference step in chart coordinates.
  double fdStep = 1e-3;
  /// Batches used for the standard error of nonlinear functionals.
  int batches = 20;
  int threads = 1;
  /// Keep every trajectory and its Brownian increments in the bundle.
  bool recordPaths = false;

  int steps() const;
  /// Throws std::invalid_argument when dt, t, paths or t/dt are invalid.
  void validate() const;
};

struct SamplePath {
  double dt = 0.0;
  std::vector<std::vector<double>> points;
  /// Horizontal Brownian increments, one vector of length n per step.
  std::vector<Eigen::VectorXd> increments;
  bool exited = false;
};

struct PathBundle {
  int steps = 0;
  std::vector<std::vector<double>> terminal;
  std::vector<char> exited;
  /// Filled when DiffusionParams::recordPaths is set.
  std::vector<SamplePath> paths;
  /// Filled when a transport eps is requested: tau and Theta at the terminal time.
  std::vector<EndoMatrix> transport;
  std::vector<EndoMatrix> isometry;

  int pathCount() const { return static_cast<int>(exited.size()); }
  int retained() const;
  double exitFraction() const;
};

struct Estimate {
  double value = 0.0;
  double standardError = 0.0;
  int nEff = 0;
  double exitFraction = 0.0;
  bool reliable = true;
};

/// Horizontal diffusion with generator L started at x0.
PathBundle simulatePaths(const FoliationModel& model, std::span<const double> x0, const DiffusionParams& params,
                         std::optional<double> transportEps = std::nullopt);

/// Monte-Carlo estimate of P_t f(x0) over the paths that stay in the domain.
Estimate heatSemigroup(const FoliationModel& model, const ScalarField& f, std::span<const double> x0,
                       const DiffusionParams& params);

struct Transport {
  EndoMatrix tau;
  EndoMatrix theta;
  /// Damping factor M = tau Theta^{-1}.
  EndoMatrix multiplicative;
};

/// Damped transport along a recorded path, in frame components: maps the
/// components of a one-form at the endpoint to components at the start.
Transport dampedTransport(const FoliationModel& model, const SamplePath& path, double eps);

/// E[tau df(X_t)] against the finite-difference gradient of P_t f at x0.
CheckReport checkFeynmanKac(const FoliationModel& model, const ScalarField& f, std::span<const double> x0, double eps,
                            const DiffusionParams& params);

/// ||dP_t f||_eps <= exp((K + kappa/eps) t) P_t ||df||_eps at x0 for each eps.
CheckReport checkGradientBound(const FoliationModel& model, const ScalarField& f, std::span<const double> x0,
                               const std::vector<double>& eps, const CDConstants& constants,
                               const DiffusionParams& params);

/// Li-Yau inequality for ln P_t f at x0, all terms from finite-difference stencils.
CheckReport checkLiYau(const FoliationModel& model, const ScalarField& f, std::span<const double> x0,
                       const CDConstants& constants, const DiffusionParams& params);

/// P_t 1 = 1 and the spread of P_t f over base points shrinking along the
/// increasing times in `times`. params.t is ignored.
CheckReport checkEquilibrium(const FoliationModel& model, const ScalarField& f, std::vector<double> times,
                             int basePointCount, const DiffusionParams& params);

/// Theta isometry drift and the bound ||tau||_eps <= exp((K + kappa/eps) t) over all paths.
CheckReport checkTransport(const FoliationModel& model, std::span<const double> x0, double eps,
                           const CDConstants& constants, const DiffusionParams& params, double tol = 1e-6);

}  // namespace foliage
