#include "foliage/stochastic.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>

#include "foliage/errors.hpp"
#include "parallel.hpp"

namespace foliage {

int DiffusionParams::steps() const { return static_cast<int>(std::llround(t / dt)); }

void DiffusionParams::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!(t >= 0.0)) throw std::invalid_argument("t must be >= 0");
  if (paths < 1) throw std::invalid_argument("path count must be >= 1");
  const double ratio = t / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("t/dt must be an integer");
  }
  if (!(exitCap >= 0.0)) throw std::invalid_argument("exit cap must be >= 0");
  if (!(fdStep > 0.0)) throw std::invalid_argument("finite-difference step must be > 0");
  if (batches < 2) throw std::invalid_argument("batch count must be >= 2");
}

int PathBundle::retained() const {
  return static_cast<int>(std::count(exited.begin(), exited.end(), 0));
}

double PathBundle::exitFraction() const {
  return exited.empty() ? 0.0 : 1.0 - static_cast<double>(retained()) / static_cast<double>(exited.size());
}

namespace {

// Frame-component data that drives the SDE and the transport at a point.
struct PointTensors {
  Eigen::VectorXd drift;
  std::vector<EndoMatrix> generators;  // Bott connection plus T^eps along E_k
  EndoMatrix damping;                  // J^2 / eps + Ric_H
};

struct FrameData {
  Eigen::MatrixXd a;
  std::shared_ptr<const PointTensors> tensors;
};

class Engine {
 public:
  Engine(const FoliationModel& model, std::span<const double> x0, std::optional<double> eps)
      : model_(model), eps_(eps), n_(model.n), d_(model.chartDim()) {
    if (eps && !(*eps > 0.0)) throw std::invalid_argument("eps must be > 0");
    model.requireInterior(x0);
    if (model.leftInvariant) constant_ = compute(x0);
  }

  int n() const { return n_; }
  int dim() const { return d_; }
  bool transport() const { return eps_.has_value(); }
  double eps() const { return *eps_; }

  FrameData at(std::span<const double> p) const {
    return {model_.frameMatrix(p), constant_ ? constant_ : compute(p)};
  }

  bool inside(std::span<const double> p) const { return model_.domain.containsInterior(p); }

 private:
  std::shared_ptr<const PointTensors> compute(std::span<const double> p) const {
    const LocalGeometry geo(model_, p, {.order = 2});
    auto out = std::make_shared<PointTensors>();
    const auto bott = geo.bott();
    out->drift = Eigen::VectorXd::Zero(d_);
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < d_; ++k) out->drift(k) -= bott(i, i, k);
    if (eps_) {
      for (int k = 0; k < d_; ++k) {
        EndoMatrix g(d_, d_);
        for (int b = 0; b < d_; ++b)
          for (int c = 0; c < d_; ++c) g(b, c) = bott(k, b, c);
        g += geo.tEpsilon(FrameVector::Unit(d_, k), *eps_);
        out->generators.push_back(std::move(g));
      }
      out->damping = geo.jSquared() / *eps_ + geo.horizontalRicci();
    }
    return out;
  }

  const FoliationModel& model_;
  std::optional<double> eps_;
  int n_;
  int d_;
  std::shared_ptr<const PointTensors> constant_;
};

EndoMatrix cayley(const EndoMatrix& omega) {
  const EndoMatrix id = EndoMatrix::Identity(omega.rows(), omega.cols());
  return (id + 0.5 * omega).partialPivLu().solve(id - 0.5 * omega);
}

struct TransportState {
  EndoMatrix tau;
  EndoMatrix theta;
};

struct Copy {
  std::vector<double> x;
  FrameData frame;
  bool exited = false;
};

// One Heun step of a copy with horizontal increment dB. Updates the transport
// when `state` is given. Returns false on domain exit.
bool heunStep(const Engine& engine, Copy& c, const Eigen::VectorXd& dB, double dt, TransportState* state) {
  const int n = engine.n();
  const int d = engine.dim();
  Eigen::VectorXd noise = Eigen::VectorXd::Zero(d);
  noise.head(n) = std::sqrt(2.0) * dB;

  const Eigen::VectorXd dy0 = noise + c.frame.tensors->drift * dt;
  const Eigen::VectorXd move0 = c.frame.a.transpose() * dy0;
  std::vector<double> xp(c.x);
  for (int mu = 0; mu < d; ++mu) xp[static_cast<std::size_t>(mu)] += move0(mu);
  if (!engine.inside(xp)) return false;
  const FrameData fp = engine.at(xp);
  const Eigen::VectorXd dy1 = noise + fp.tensors->drift * dt;
  const Eigen::VectorXd move = 0.5 * (move0 + fp.a.transpose() * dy1);
  std::vector<double> x1(c.x);
  for (int mu = 0; mu < d; ++mu) x1[static_cast<std::size_t>(mu)] += move(mu);
  if (!engine.inside(x1)) return false;

  if (state) {
    const Eigen::VectorXd dy = 0.5 * (dy0 + dy1);
    EndoMatrix omega = EndoMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
      if (dy(k) == 0.0) continue;
      omega += 0.5 * dy(k) * (c.frame.tensors->generators[static_cast<std::size_t>(k)] +
                              fp.tensors->generators[static_cast<std::size_t>(k)]);
    }
    const EndoMatrix half = cayley(0.25 * dt * (c.frame.tensors->damping + fp.tensors->damping));
    const EndoMatrix rotation = cayley(-omega);
    state->tau = state->tau * half * rotation * half;
    state->theta = state->theta * rotation;
  }
  c.x = std::move(x1);
  c.frame = engine.at(c.x);
  return true;
}

std::mt19937_64 pathRng(std::uint64_t seed, std::uint64_t pathId) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(pathId), static_cast<std::uint32_t>(pathId >> 32), 0x51u};
  return std::mt19937_64(seq);
}

struct StencilRun {
  // values[p][copy]: terminal points per path and copy.
  std::vector<std::vector<std::vector<double>>> terminal;
  std::vector<char> exited;  // any copy exited
  std::vector<TransportState> transport;
  std::vector<SamplePath> recorded;

  int retained() const { return static_cast<int>(std::count(exited.begin(), exited.end(), 0)); }
  double exitFraction() const {
    return exited.empty() ? 0.0 : 1.0 - static_cast<double>(retained()) / static_cast<double>(exited.size());
  }
};

// Runs all start points with common Brownian increments per path. Transport
// and recording apply to the first start point.
StencilRun runStencil(const FoliationModel& model, const std::vector<std::vector<double>>& starts,
                      const DiffusionParams& params, std::optional<double> eps) {
  params.validate();
  const Engine engine(model, starts.front(), eps);
  for (const auto& s : starts) model.requireInterior(s);
  const int steps = params.steps();
  const int n = model.n;
  const int d = model.chartDim();
  const auto count = static_cast<std::size_t>(params.paths);

  StencilRun run;
  run.terminal.resize(count);
  run.exited.assign(count, 0);
  if (eps) run.transport.resize(count);
  if (params.recordPaths) run.recorded.resize(count);

  detail::parallelFor(params.paths, params.threads, [&](int p) {
    const auto pi = static_cast<std::size_t>(p);
    auto rng = pathRng(params.seed, static_cast<std::uint64_t>(p));
    std::normal_distribution<double> normal(0.0, std::sqrt(params.dt));
    std::vector<Copy> copies;
    for (const auto& s : starts) copies.push_back({s, engine.at(s), false});
    TransportState state{EndoMatrix::Identity(d, d), EndoMatrix::Identity(d, d)};
    SamplePath* record = params.recordPaths ? &run.recorded[pi] : nullptr;
    if (record) {
      record->dt = params.dt;
      record->points.push_back(starts.front());
    }
    Eigen::VectorXd dB(n);
    bool anyExit = false;
    for (int s = 0; s < steps; ++s) {
      for (int i = 0; i < n; ++i) dB(i) = normal(rng);
      for (std::size_t c = 0; c < copies.size(); ++c) {
        if (copies[c].exited) continue;
        if (!heunStep(engine, copies[c], dB, params.dt, c == 0 && eps ? &state : nullptr)) {
          copies[c].exited = true;
          anyExit = true;
        }
      }
      if (record && !copies.front().exited) {
        record->points.push_back(copies.front().x);
        record->increments.push_back(dB);
      }
    }
    run.exited[pi] = anyExit ? 1 : 0;
    if (record) record->exited = copies.front().exited;
    for (auto& c : copies) run.terminal[pi].push_back(std::move(c.x));
    if (eps) run.transport[pi] = std::move(state);
  });
  return run;
}

struct MeanSE {
  double mean = 0.0;
  double se = 0.0;
};

MeanSE meanSE(const std::vector<double>& v) {
  MeanSE out;
  if (v.empty()) return out;
  double sum = 0.0;
  for (double x : v) sum += x;
  out.mean = sum / static_cast<double>(v.size());
  if (v.size() < 2) return out;
  double ss = 0.0;
  for (double x : v) ss += (x - out.mean) * (x - out.mean);
  out.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  return out;
}

Eigen::VectorXd coordinateGradient(const ScalarField& f, std::span<const double> p) {
  const auto jets = coordinateJets(p, 1);
  const Jet v = f(jets);
  Eigen::VectorXd g(static_cast<Eigen::Index>(p.size()));
  std::vector<int> alpha(p.size(), 0);
  for (std::size_t mu = 0; mu < p.size(); ++mu) {
    alpha[mu] = 1;
    g(static_cast<Eigen::Index>(mu)) = v.partial(alpha);
    alpha[mu] = 0;
  }
  return g;
}

// max over coordinates of |d^k f / dx_mu^k| at p, for k = 3 and 4.
std::pair<double, double> axisDerivativeBounds(const ScalarField& f, std::span<const double> p) {
  const auto jets = coordinateJets(p, 4);
  const Jet v = f(jets);
  double m3 = 0.0, m4 = 0.0;
  std::vector<int> alpha(p.size(), 0);
  for (std::size_t mu = 0; mu < p.size(); ++mu) {
    alpha[mu] = 3;
    m3 = std::max(m3, std::abs(v.partial(alpha)));
    alpha[mu] = 4;
    m4 = std::max(m4, std::abs(v.partial(alpha)));
    alpha[mu] = 0;
  }
  return {m3, m4};
}

std::vector<std::vector<double>> gradientStencil(std::span<const double> x0, double h) {
  std::vector<std::vector<double>> starts{{x0.begin(), x0.end()}};
  for (std::size_t mu = 0; mu < x0.size(); ++mu) {
    for (double sign : {1.0, -1.0}) {
      std::vector<double> s(x0.begin(), x0.end());
      s[mu] += sign * h;
      starts.push_back(std::move(s));
    }
  }
  return starts;
}

CheckReport stochasticReport(std::string check, const FoliationModel& model, const DiffusionParams& params) {
  CheckReport r;
  r.check = std::move(check);
  r.model = model.name;
  r.kind = CheckReport::Kind::Inequality;
  r.tolerance = 0.0;
  r.seed = params.seed;
  r.parameters["t"] = params.t;
  r.parameters["dt"] = params.dt;
  r.parameters["paths"] = params.paths;
  r.parameters["exitCap"] = params.exitCap;
  r.parameters["fdStep"] = params.fdStep;
  r.parameters["batches"] = params.batches;
  return r;
}

void applyExitCap(CheckReport& r, double exitFraction, double cap) {
  r.parameters["exitFraction"] = std::max(r.parameters["exitFraction"], exitFraction);
  if (exitFraction > cap && r.verdict != Verdict::Fail) {
    r.verdict = Verdict::Inconclusive;
    r.note = "exit fraction above cap";
  }
}

std::vector<std::pair<std::size_t, std::size_t>> batchRanges(std::size_t count, int batches) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const auto b = static_cast<std::size_t>(batches);
  for (std::size_t k = 0; k < b; ++k) out.emplace_back(k * count / b, (k + 1) * count / b);
  return out;
}

double stdevOverSqrt(const std::vector<double>& v) { return meanSE(v).se; }

std::string joinDoubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v[i]);
    out += buf;
  }
  return out;
}

}  // namespace

PathBundle simulatePaths(const FoliationModel& model, std::span<const double> x0, const DiffusionParams& params,
                         std::optional<double> transportEps) {
  const std::vector<std::vector<double>> starts{{x0.begin(), x0.end()}};
  auto run = runStencil(model, starts, params, transportEps);
  PathBundle bundle;
  bundle.steps = params.steps();
  bundle.exited = std::move(run.exited);
  for (auto& t : run.terminal) bundle.terminal.push_back(std::move(t.front()));
  bundle.paths = std::move(run.recorded);
  for (auto& s : run.transport) {
    bundle.transport.push_back(std::move(s.tau));
    bundle.isometry.push_back(std::move(s.theta));
  }
  return bundle;
}

Estimate heatSemigroup(const FoliationModel& model, const ScalarField& f, std::span<const double> x0,
                       const DiffusionParams& params) {
  const PathBundle bundle = simulatePaths(model, x0, params);
  std::vector<double> values;
  for (std::size_t p = 0; p < bundle.terminal.size(); ++p) {
    if (!bundle.exited[p]) values.push_back(f.value(bundle.terminal[p]));
  }
  const auto stats = meanSE(values);
  Estimate e;
  e.value = stats.mean;
  e.standardError = stats.se;
  e.nEff = static_cast<int>(values.size());
  e.exitFraction = bundle.exitFraction();
  e.reliable = e.nEff > 0 && e.exitFraction <= params.exitCap;
  return e;
}

Transport dampedTransport(const FoliationModel& model, const SamplePath& path, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
  if (path.points.empty() || path.increments.size() + 1 != path.points.size()) {
    throw std::invalid_argument("path has no recorded increments");
  }
  const Engine engine(model, path.points.front(), eps);
  const int d = model.chartDim();
  TransportState state{EndoMatrix::Identity(d, d), EndoMatrix::Identity(d, d)};
  Copy c{path.points.front(), engine.at(path.points.front()), false};
  for (const auto& dB : path.increments) {
    if (!heunStep(engine, c, dB, path.dt, &state)) throw DomainError("recorded path leaves the domain");
  }
  Transport out;
  out.multiplicative = state.tau * state.theta.inverse();
  out.tau = std::move(state.tau);
  out.theta = std::move(state.theta);
  return out;
}

CheckReport checkFeynmanKac(const FoliationModel& model, const ScalarField& f, std::span<const double> x0, double eps,
                            const DiffusionParams& params) {
  auto report = stochasticReport("feynman-kac", model, params);
  report.eps = {eps};
  const double h = params.fdStep;
  const int d = model.chartDim();
  const auto starts = gradientStencil(x0, h);
  const auto run = runStencil(model, starts, params, eps);
  const Eigen::MatrixXd a0 = model.frameMatrix(x0);

  std::vector<std::vector<double>> mc(static_cast<std::size_t>(d)), fd(static_cast<std::size_t>(d));
  for (std::size_t p = 0; p < run.terminal.size(); ++p) {
    if (run.exited[p]) continue;
    const auto& xs = run.terminal[p];
    const Eigen::VectorXd dfT = model.frameMatrix(xs[0]) * coordinateGradient(f, xs[0]);
    const Eigen::VectorXd lhs = run.transport[p].tau * dfT;
    Eigen::VectorXd grad(d);
    for (int mu = 0; mu < d; ++mu) {
      const auto k = static_cast<std::size_t>(1 + 2 * mu);
      grad(mu) = (f.value(xs[k]) - f.value(xs[k + 1])) / (2.0 * h);
    }
    const Eigen::VectorXd rhs = a0 * grad;
    for (int c = 0; c < d; ++c) {
      mc[static_cast<std::size_t>(c)].push_back(lhs(c));
      fd[static_cast<std::size_t>(c)].push_back(rhs(c));
    }
  }
  const double m3 = axisDerivativeBounds(f, x0).first;
  double scale = 0.0, worstSigma = 0.0;
  std::vector<double> diffs, sigmas;
  for (int c = 0; c < d; ++c) {
    const auto s1 = meanSE(mc[static_cast<std::size_t>(c)]);
    const auto s2 = meanSE(fd[static_cast<std::size_t>(c)]);
    const double sigma = std::sqrt(s1.se * s1.se + s2.se * s2.se);
    const double bias = h * h / 6.0 * m3 * a0.row(c).cwiseAbs().sum();
    const double diff = s1.mean - s2.mean;
    report.samples.push_back(3.0 * sigma + bias - std::abs(diff));
    diffs.push_back(diff);
    sigmas.push_back(sigma);
    report.parameters["transport_" + std::to_string(c)] = s1.mean;
    report.parameters["fdGradient_" + std::to_string(c)] = s2.mean;
    report.parameters["biasBudget_" + std::to_string(c)] = bias;
    scale = std::max({scale, std::abs(s1.mean), std::abs(s2.mean)});
    worstSigma = std::max(worstSigma, sigma);
  }
  report.finalize();
  report.note = "diff=[" + joinDoubles(diffs) + "] sigma=[" + joinDoubles(sigmas) + "]";
  if (scale > 1e-12 && 3.0 * worstSigma > 0.5 * scale) {
    const double needed = params.paths * std::pow(3.0 * worstSigma / (0.5 * scale), 2.0);
    report.parameters["requiredPaths"] = std::ceil(needed);
    if (report.verdict == Verdict::Pass) report.verdict = Verdict::Inconclusive;
    report.note += "; standard error too large for a verdict";
  }
  applyExitCap(report, run.exitFraction(), params.exitCap);
  return report;
}

CheckReport checkGradientBound(const FoliationModel& model, const ScalarField& f, std::span<const double> x0,
                               const std::vector<double>& epsList, const CDConstants& constants,
                               const DiffusionParams& params) {
  auto report = stochasticReport("gradient-bound", model, params);
  report.eps = epsList;
  report.parameters["K"] = constants.bigK;
  report.parameters["kappa"] = constants.kappa;
  const double h = params.fdStep;
  const int n = model.n;
  const int d = model.chartDim();
  const auto starts = gradientStencil(x0, h);
  const auto run = runStencil(model, starts, params, std::nullopt);
  const Eigen::MatrixXd a0 = model.frameMatrix(x0);

  std::vector<Eigen::VectorXd> grads;
  std::vector<Eigen::VectorXd> dfT;
  for (std::size_t p = 0; p < run.terminal.size(); ++p) {
    if (run.exited[p]) continue;
    const auto& xs = run.terminal[p];
    Eigen::VectorXd g(d);
    for (int mu = 0; mu < d; ++mu) {
      const auto k = static_cast<std::size_t>(1 + 2 * mu);
      g(mu) = (f.value(xs[k]) - f.value(xs[k + 1])) / (2.0 * h);
    }
    grads.push_back(a0 * g);
    dfT.push_back(model.frameMatrix(xs[0]) * coordinateGradient(f, xs[0]));
  }
  const double m3 = axisDerivativeBounds(f, x0).first;
  Eigen::VectorXd bias(d);
  for (int c = 0; c < d; ++c) bias(c) = h * h / 6.0 * m3 * a0.row(c).cwiseAbs().sum();

  const auto ranges = batchRanges(grads.size(), params.batches);
  for (double eps : epsList) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
    const double factor = std::exp((constants.bigK + constants.kappa / eps) * params.t);
    auto evaluate = [&](std::size_t lo, std::size_t hi) {
      Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
      double norms = 0.0;
      for (std::size_t p = lo; p < hi; ++p) {
        g += grads[p];
        norms += epsNorm(dfT[p], n, eps);
      }
      const auto count = static_cast<double>(hi - lo);
      return std::pair{epsNorm(g / count, n, eps), factor * norms / count};
    };
    const auto [lhs, rhs] = evaluate(0, grads.size());
    std::vector<double> batchSlack;
    for (const auto& [lo, hi] : ranges) {
      if (hi > lo) {
        const auto [l, r] = evaluate(lo, hi);
        batchSlack.push_back(r - l);
      }
    }
    const double sigma = stdevOverSqrt(batchSlack);
    const double budget = epsNorm(bias, n, eps);
    report.samples.push_back(rhs - lhs + 3.0 * sigma + budget);
    const std::string tag = "_eps" + joinDoubles({eps});
    report.parameters["lhs" + tag] = lhs;
    report.parameters["rhs" + tag] = rhs;
    report.parameters["sigma" + tag] = sigma;
    report.parameters["biasBudget" + tag] = budget;
  }
  report.finalize();
  applyExitCap(report, run.exitFraction(), params.exitCap);
  return report;
}

CheckReport checkLiYau(const FoliationModel& model, const ScalarField& f, std::span<const double> x0,
                       const CDConstants& c, const DiffusionParams& params) {
  if (!(c.rho2 > 0.0)) throw std::invalid_argument("Li-Yau check needs rho2 > 0");
  if (!(params.t > 0.0)) throw std::invalid_argument("Li-Yau check needs t > 0");
  {
    std::mt19937_64 rng(params.seed ^ 0x11a7u);
    std::vector<double> p(static_cast<std::size_t>(model.chartDim()));
    for (int s = 0; s < 512; ++s) {
      for (std::size_t mu = 0; mu < p.size(); ++mu) {
        std::uniform_real_distribution<double> u(model.domain.lo[mu], model.domain.hi[mu]);
        p[mu] = u(rng);
      }
      if (!(f.value(p) > 0.0)) throw DomainError("f must be strictly positive on the domain");
    }
  }
  auto report = stochasticReport("liyau", model, params);
  report.parameters["rho1"] = c.rho1;
  report.parameters["rho2"] = c.rho2;
  report.parameters["kappa"] = c.kappa;
  report.parameters["n"] = c.n;
  const double h = params.fdStep;
  const int d = model.chartDim();

  // Stencil: center, +-h e_mu, then (+-h, +-h) corners for mu < nu.
  auto starts = gradientStencil(x0, h);
  std::vector<std::array<std::size_t, 3>> corners;  // mu, nu, first index
  for (int mu = 0; mu < d; ++mu) {
    for (int nu = mu + 1; nu < d; ++nu) {
      corners.push_back({static_cast<std::size_t>(mu), static_cast<std::size_t>(nu), starts.size()});
      for (double sm : {1.0, -1.0}) {
        for (double sn : {1.0, -1.0}) {
          std::vector<double> s(x0.begin(), x0.end());
          s[static_cast<std::size_t>(mu)] += sm * h;
          s[static_cast<std::size_t>(nu)] += sn * h;
          starts.push_back(std::move(s));
        }
      }
    }
  }
  const auto run = runStencil(model, starts, params, std::nullopt);
  std::vector<std::vector<double>> values;
  for (std::size_t p = 0; p < run.terminal.size(); ++p) {
    if (run.exited[p]) continue;
    std::vector<double> row;
    for (const auto& x : run.terminal[p]) row.push_back(f.value(x));
    values.push_back(std::move(row));
  }

  const LocalGeometry geo(model, x0);
  const double beta = 1.0 + 3.0 * c.kappa / (2.0 * c.rho2);
  const double t = params.t;
  const double coefficient = beta - 2.0 * c.rho1 * t / 3.0;
  const double constantTerms =
      c.n * c.rho1 * c.rho1 * t / 6.0 - c.n * c.rho1 / 2.0 * beta + c.n * beta * beta / (2.0 * t);

  struct Terms {
    double gamma, gammaV, ratio, slack;
  };
  auto evaluate = [&](std::size_t lo, std::size_t hi) {
    std::vector<double> mean(starts.size(), 0.0);
    for (std::size_t p = lo; p < hi; ++p)
      for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += values[p][k];
    for (double& v : mean) v /= static_cast<double>(hi - lo);
    const auto x = coordinateJets(x0, 2);
    Jet u(mean[0]);
    for (int mu = 0; mu < d; ++mu) {
      const auto k = static_cast<std::size_t>(1 + 2 * mu);
      const Jet dx = x[static_cast<std::size_t>(mu)] - x0[static_cast<std::size_t>(mu)];
      u += dx * ((mean[k] - mean[k + 1]) / (2.0 * h));
      u += dx * dx * (0.5 * (mean[k] - 2.0 * mean[0] + mean[k + 1]) / (h * h));
    }
    for (const auto& [mu, nu, first] : corners) {
      const double hmn = (mean[first] - mean[first + 1] - mean[first + 2] + mean[first + 3]) / (4.0 * h * h);
      u += (x[mu] - x0[mu]) * (x[nu] - x0[nu]) * hmn;
    }
    const double pv = mean[0];
    Terms out{};
    out.gamma = gammaH(geo, u, u).value() / (pv * pv);
    out.gammaV = gammaV(geo, u, u).value() / (pv * pv);
    out.ratio = applyL(geo, u).value() / pv;
    const double lhs = out.gamma + 2.0 * c.rho2 / 3.0 * t * out.gammaV;
    const double rhs = coefficient * out.ratio + constantTerms;
    out.slack = rhs - lhs;
    return out;
  };
  if (values.empty()) {
    report.verdict = Verdict::Inconclusive;
    report.note = "every path left the domain";
    applyExitCap(report, 1.0, params.exitCap);
    return report;
  }
  const Terms full = evaluate(0, values.size());
  std::vector<double> batchSlack;
  for (const auto& [lo, hi] : batchRanges(values.size(), params.batches)) {
    if (hi > lo) batchSlack.push_back(evaluate(lo, hi).slack);
  }
  const double sigma = stdevOverSqrt(batchSlack);
  const auto [m3, m4] = axisDerivativeBounds(f, x0);
  const Eigen::MatrixXd a0 = model.frameMatrix(x0);
  const double frame = a0.cwiseAbs().rowwise().sum().maxCoeff();
  const double bias = h * h * (m3 / 6.0 + m4 / 3.0) * (1.0 + frame) * (1.0 + frame) * (2.0 + std::abs(coefficient));
  report.samples.push_back(full.slack + 3.0 * sigma + bias);
  report.parameters["gammaLog"] = full.gamma;
  report.parameters["gammaVLog"] = full.gammaV;
  report.parameters["LPf/Pf"] = full.ratio;
  report.parameters["slack"] = full.slack;
  report.parameters["sigma"] = sigma;
  report.parameters["biasBudget"] = bias;
  report.note = "L2 integrability of f is assumed on the chart";
  report.finalize();
  applyExitCap(report, run.exitFraction(), params.exitCap);
  return report;
}

CheckReport checkEquilibrium(const FoliationModel& model, const ScalarField& f, std::vector<double> times,
                             int basePointCount, const DiffusionParams& params) {
  if (!model.compactType) throw std::invalid_argument("equilibrium check needs a compact-type model");
  if (times.size() < 2) throw std::invalid_argument("equilibrium check needs at least two times");
  if (basePointCount < 2) throw std::invalid_argument("equilibrium check needs at least two base points");
  std::sort(times.begin(), times.end());
  auto report = stochasticReport("equilibrium", model, params);
  report.parameters.erase("t");
  const auto bases = model.samplePoints(basePointCount, params.seed);
  const ScalarField one = constantField(1.0);
  std::vector<double> spreads;
  double worstExit = 0.0;
  bool conservative = true;
  for (double t : times) {
    DiffusionParams p = params;
    p.t = t;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, se = 0.0;
    for (const auto& b : bases) {
      const Estimate e = heatSemigroup(model, f, b, p);
      lo = std::min(lo, e.value);
      hi = std::max(hi, e.value);
      se = std::max(se, e.standardError);
      worstExit = std::max(worstExit, e.exitFraction);
    }
    const Estimate unit = heatSemigroup(model, one, bases.front(), p);
    if (unit.value != 1.0 || unit.standardError != 0.0) conservative = false;
    spreads.push_back(hi - lo);
    const std::string tag = "_t" + joinDoubles({t});
    report.parameters["spread" + tag] = hi - lo;
    report.parameters["maxSE" + tag] = se;
    report.parameters["Pt1" + tag] = unit.value;
  }
  for (std::size_t k = 0; k + 1 < spreads.size(); ++k) report.samples.push_back(spreads[k] - spreads[k + 1]);
  report.finalize();
  if (!conservative) {
    report.verdict = Verdict::Fail;
    report.note = "P_t 1 != 1";
  }
  applyExitCap(report, worstExit, params.exitCap);
  return report;
}

CheckReport checkTransport(const FoliationModel& model, std::span<const double> x0, double eps,
                           const CDConstants& constants, const DiffusionParams& params, double tol) {
  auto report = stochasticReport("transport", model, params);
  report.kind = CheckReport::Kind::Identity;
  report.tolerance = tol;
  report.eps = {eps};
  const PathBundle bundle = simulatePaths(model, x0, params, eps);
  const int n = model.n;
  const int m = model.m;
  const EndoMatrix g = formMetric(n, m, eps);
  Eigen::VectorXd root(n + m);
  for (int a = 0; a < n + m; ++a) root(a) = std::sqrt(g(a, a));
  const double bound = std::exp((constants.bigK + constants.kappa / eps) * params.t);
  double isometry = 0.0, worstRatio = 0.0;
  for (std::size_t p = 0; p < bundle.isometry.size(); ++p) {
    if (bundle.exited[p]) continue;
    const EndoMatrix& theta = bundle.isometry[p];
    const double drift = (theta.transpose() * g * theta - g).cwiseAbs().maxCoeff();
    const EndoMatrix scaled = root.asDiagonal() * bundle.transport[p] * root.cwiseInverse().asDiagonal();
    const double norm = Eigen::JacobiSVD<EndoMatrix>(scaled).singularValues()(0);
    isometry = std::max(isometry, drift);
    worstRatio = std::max(worstRatio, norm / bound);
    report.samples.push_back(std::max(drift, norm - bound * (1.0 + tol)));
  }
  report.parameters["isometryDrift"] = isometry;
  report.parameters["maxNormOverBound"] = worstRatio;
  report.parameters["bound"] = bound;
  report.finalize();
  applyExitCap(report, bundle.exitFraction(), params.exitCap);
  return report;
}

}  // namespace foliage
