#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "foliage/errors.hpp"
#include "foliage/report.hpp"
#include "foliage/stochastic.hpp"
#include "foliage/verify.hpp"

namespace foliage::cli {

namespace {

const std::vector<std::string> kVerifyChecks{"structure",        "intertwining",       "box-relation", "bochner-equality",
                                             "bochner-inequality", "cd",               "local-formulas"};
const std::vector<std::string> kSimulateChecks{"feynman-kac", "gradient-bound", "liyau", "equilibrium", "transport"};

struct Row {
  std::string check;
  std::string model;
  std::string worst;
  std::string tolerance;
  Verdict verdict;
  std::string note;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

class Session {
 public:
  Session(std::ostream& out, std::string outPath) : out_(out), outPath_(std::move(outPath)) {}

  void add(const CheckReport& r) {
    emit(toJsonLine(r));
    rows_.push_back({r.check, r.model, fmt(r.worst), fmt(r.tolerance), r.verdict, r.note});
  }
  void add(const ValidationReport& r) {
    emit(toJsonLine(r));
    for (const auto& c : r.checks) {
      rows_.push_back({"validate:" + c.name, r.model, fmt(c.maxResidual), fmt(c.tolerance), c.verdict, c.note});
    }
  }
  void addConstants(const std::string& line) { emit(line); }

  int finish() const {
    char line[256];
    std::snprintf(line, sizeof line, "%-38s %-14s %-11s %-11s %s\n", "check", "model", "worst", "tolerance", "verdict");
    out_ << line;
    for (const auto& r : rows_) {
      std::snprintf(line, sizeof line, "%-38s %-14s %-11s %-11s %s", r.check.c_str(), r.model.c_str(), r.worst.c_str(),
                    r.tolerance.c_str(), std::string(toString(r.verdict)).c_str());
      out_ << line;
      if (!r.note.empty() && r.verdict != Verdict::Pass) out_ << "  (" << r.note << ")";
      out_ << '\n';
    }
    const bool failed = std::any_of(rows_.begin(), rows_.end(), [](const Row& r) { return r.verdict == Verdict::Fail; });
    const bool inconclusive =
        std::any_of(rows_.begin(), rows_.end(), [](const Row& r) { return r.verdict == Verdict::Inconclusive; });
    return failed ? kFail : inconclusive ? kInconclusive : kPass;
  }

 private:
  void emit(const std::string& line) {
    if (!outPath_.empty()) appendRecord(outPath_, line);
  }

  std::ostream& out_;
  std::string outPath_;
  std::vector<Row> rows_;
};

CheckReport notApplicable(std::string check, const FoliationModel& model, std::string note) {
  CheckReport r;
  r.check = std::move(check);
  r.model = model.name;
  r.verdict = Verdict::NotApplicable;
  r.note = std::move(note);
  return r;
}

std::vector<double> parseNumbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<double> defaultStart(const FoliationModel& model) {
  static const double pattern[] = {0.3, -0.2, 0.1};
  std::vector<double> x(static_cast<std::size_t>(model.chartDim()));
  for (std::size_t mu = 0; mu < x.size(); ++mu) {
    const double center = 0.5 * (model.domain.lo[mu] + model.domain.hi[mu]);
    const double half = 0.5 * (model.domain.hi[mu] - model.domain.lo[mu]);
    x[mu] = center + std::clamp(pattern[mu % 3], -0.1 * half, 0.1 * half);
  }
  return x;
}

std::vector<double> domainCenter(const FoliationModel& model) {
  std::vector<double> x(static_cast<std::size_t>(model.chartDim()));
  for (std::size_t mu = 0; mu < x.size(); ++mu) x[mu] = 0.5 * (model.domain.lo[mu] + model.domain.hi[mu]);
  return x;
}

struct Common {
  std::string model;
  std::uint64_t seed = 1;
  std::string out;
  int threads = 1;
};

struct VerifyArgs {
  std::vector<std::string> checks;
  std::vector<double> eps{0.25, 1.0, 4.0};
  int fields = 20;
  int points = 20;
  int degree = 3;
  double identityTol = 1e-8;
  double inequalityTol = 1e-8;
  double structureTol = 1e-10;
  double localTol = 1e-10;
  bool force = false;
  std::vector<double> constants;
};

struct SimulateArgs {
  std::vector<std::string> checks;
  std::optional<double> t;
  std::optional<double> dt;
  std::optional<int> paths;
  std::vector<double> eps;
  std::vector<double> x0;
  std::string f;
  double exitCap = 0.01;
  double fdStep = 1e-3;
  int batches = 20;
  std::vector<double> times{0.1, 0.25};
  int basePoints = 5;
  double transportTol = 1e-6;
};

void runValidate(const FoliationModel& model, const Common& c, int samples, double tol, Session& s) {
  s.add(validateModel(model, samples, tol, c.seed));
}

void runVerify(const FoliationModel& model, const Common& c, const VerifyArgs& a, Session& s) {
  VerifyOptions o;
  o.eps = a.eps;
  o.fieldCount = a.fields;
  o.pointCount = a.points;
  o.seed = c.seed;
  o.polynomialDegree = a.degree;
  o.identityTol = a.identityTol;
  o.inequalityTol = a.inequalityTol;
  o.structureTol = a.structureTol;
  o.threads = c.threads;
  const auto selected = a.checks.empty() ? kVerifyChecks : a.checks;
  auto wants = [&](const std::string& name) { return std::find(selected.begin(), selected.end(), name) != selected.end(); };

  if (wants("structure"))
    for (const auto& r : checkStructure(model, a.points, c.seed, a.structureTol)) s.add(r);
  if (wants("intertwining")) s.add(checkIntertwining(model, o));
  if (wants("box-relation")) s.add(checkBoxRelation(model, o));
  if (wants("bochner-equality")) s.add(checkBochnerEquality(model, o));
  if (wants("bochner-inequality")) s.add(checkBochnerInequality(model, o));
  if (wants("cd")) {
    CDConstants constants;
    if (a.constants.empty()) {
      constants = extractConstants(model, a.points, c.seed).constants;
    } else {
      if (a.constants.size() != 3) throw std::invalid_argument("--constants expects rho1,rho2,kappa");
      constants = CDConstants::fromRho(a.constants[0], a.constants[1], a.constants[2], model.n);
    }
    if (constants.rho2 > 1e-10) {
      s.add(checkCD(model, constants, o));
    } else {
      s.add(notApplicable("cd", model, "rho2 = 0: the uniform bracket-generating bound fails"));
    }
  }
  if (wants("local-formulas")) {
    LocalFormulaOptions lo;
    lo.pointCount = a.points;
    lo.seed = c.seed;
    lo.tol = a.localTol;
    lo.eps = a.eps;
    lo.force = a.force;
    for (const auto& r : localFormulaOracle(model, lo)) s.add(r);
  }
}

void runConstants(const FoliationModel& model, const Common& c, int points, std::ostream& out, Session& s) {
  const ConstantsReport report = extractConstants(model, points, c.seed);
  const auto diameter = diameterBound(report.constants);
  const auto lambda1 = lambda1Bound(report.constants);
  s.addConstants(toJsonLine(model.name, report, diameter, lambda1));
  char line[160];
  std::snprintf(line, sizeof line, "model %s\nrho1 = %.12g\nrho2 = %.12g\nkappa = %.12g\nn = %d\n", model.name.c_str(),
                report.constants.rho1, report.constants.rho2, report.constants.kappa, report.constants.n);
  out << line;
  if (report.rho2Degenerate) out << "flagged: rho2 = 0 (uniform bracket-generating bound fails)\n";
  if (diameter) {
    std::snprintf(line, sizeof line, "diameter bound = %.12g\n", *diameter);
    out << line;
  } else {
    out << "diameter: no bound\n";
  }
  if (lambda1) {
    std::snprintf(line, sizeof line, "lambda1 bound = %.12g\n", *lambda1);
    out << line;
  } else {
    out << "lambda1: no bound\n";
  }
  std::snprintf(line, sizeof line, "spread over %d points: rho1 %.3e, rho2 %.3e, kappa %.3e\n", report.pointCount,
                report.rho1Spread, report.rho2Spread, report.kappaSpread);
  out << line;
}

DiffusionParams paramsFor(const std::string& check, const Common& c, const SimulateArgs& a) {
  DiffusionParams p;
  p.seed = c.seed;
  p.threads = c.threads;
  p.exitCap = a.exitCap;
  p.fdStep = a.fdStep;
  p.batches = a.batches;
  if (check == "feynman-kac" || check == "gradient-bound") {
    p.t = 0.1;
    p.paths = 20000;
  } else if (check == "liyau") {
    p.t = 0.25;
    p.paths = 4000;
  } else if (check == "transport") {
    p.t = 0.1;
    p.dt = 1e-4;
    p.paths = 2000;
  } else {
    p.paths = 2000;
  }
  if (a.t) p.t = *a.t;
  if (a.dt) p.dt = *a.dt;
  if (a.paths) p.paths = *a.paths;
  return p;
}

void runSimulate(const FoliationModel& model, const Common& c, const SimulateArgs& a, Session& s) {
  const auto selected = a.checks.empty() ? kSimulateChecks : a.checks;
  const auto constants = extractConstants(model, 20, c.seed).constants;
  const auto& coords = model.coordinates;
  const std::string squares = coords.size() >= 2 ? coords[0] + "^2 + " + coords[1] + "^2" : coords[0] + "^2";
  for (const auto& check : selected) {
    const DiffusionParams p = paramsFor(check, c, a);
    if (check == "feynman-kac" || check == "gradient-bound") {
      const ScalarField f = expressionField(a.f.empty() ? squares : a.f, coords);
      const auto x0 = a.x0.empty() ? defaultStart(model) : a.x0;
      if (check == "feynman-kac") {
        s.add(checkFeynmanKac(model, f, x0, a.eps.empty() ? 1.0 : a.eps.front(), p));
      } else {
        s.add(checkGradientBound(model, f, x0, a.eps.empty() ? std::vector<double>{0.5, 1.0, 2.0} : a.eps, constants,
                                 p));
      }
    } else if (check == "liyau") {
      if (!(constants.rho2 > 1e-10)) {
        s.add(notApplicable("liyau", model, "rho2 = 0"));
        continue;
      }
      const ScalarField f = expressionField(a.f.empty() ? "2 + sin(" + coords[0] + ")" : a.f, coords);
      s.add(checkLiYau(model, f, a.x0.empty() ? domainCenter(model) : a.x0, constants, p));
    } else if (check == "equilibrium") {
      if (!model.compactType) {
        s.add(notApplicable("equilibrium", model, "model is not compact-type"));
        continue;
      }
      const ScalarField f = expressionField(a.f.empty() ? coords[0] : a.f, coords);
      s.add(checkEquilibrium(model, f, a.times, a.basePoints, p));
    } else if (check == "transport") {
      s.add(checkTransport(model, a.x0.empty() ? defaultStart(model) : a.x0, a.eps.empty() ? 1.0 : a.eps.front(),
                           constants, p, a.transportTol));
    }
  }
}

}  // namespace

FoliationModel resolveModel(const std::string& selector) {
  if (selector.empty()) throw std::invalid_argument("empty model selector");
  if (selector.front() == '@') return loadModelFile(selector.substr(1));
  const auto colon = selector.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("model selector needs name:params or @path");
  const std::string name = selector.substr(0, colon);
  const auto params = parseNumbers(selector.substr(colon + 1));
  auto integer = [](double v) {
    if (v != std::floor(v)) throw std::invalid_argument("expected an integer parameter");
    return static_cast<int>(v);
  };
  if (name == "heisenberg" && params.size() == 1) return heisenbergModel(integer(params[0]));
  if (name == "su2" && params.size() == 1) return su2Model(params[0]);
  if (name == "product" && params.size() == 2) return productModel(integer(params[0]), integer(params[1]));
  throw std::invalid_argument("unknown model selector '" + selector + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Checks Weitzenboeck, curvature-dimension and stochastic identities on foliated model spaces", "foliage"};
  app.require_subcommand(1);
  Common common;
  auto addCommon = [&](CLI::App* sub) {
    sub->add_option("--model", common.model, "heisenberg:d | su2:lambda | product:n,m | @config.json")->required();
    sub->add_option("--seed", common.seed, "random seed")->capture_default_str();
    sub->add_option("--out", common.out, "append JSON-lines records to this file");
    sub->add_option("--threads", common.threads, "worker cap")->capture_default_str()->check(CLI::PositiveNumber);
  };

  auto* validate = app.add_subcommand("validate", "check the frame against the foliation axioms");
  addCommon(validate);
  int samples = 20;
  double validateTol = 1e-10;
  validate->add_option("--samples", samples, "sample points")->capture_default_str()->check(CLI::PositiveNumber);
  validate->add_option("--tol", validateTol, "residual tolerance")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "run the deterministic identity and inequality suites");
  addCommon(verify);
  VerifyArgs va;
  verify->add_option("--check", va.checks, "suites to run (default: all)")
      ->delimiter(',')
      ->check(CLI::IsMember(kVerifyChecks));
  verify->add_option("--eps", va.eps, "eps values")->delimiter(',')->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_option("--fields", va.fields, "random fields per point")->capture_default_str();
  verify->add_option("--points", va.points, "sample points")->capture_default_str();
  verify->add_option("--degree", va.degree, "polynomial degree of random fields")->capture_default_str();
  verify->add_option("--identity-tol", va.identityTol)->capture_default_str();
  verify->add_option("--inequality-tol", va.inequalityTol)->capture_default_str();
  verify->add_option("--structure-tol", va.structureTol)->capture_default_str();
  verify->add_option("--local-tol", va.localTol)->capture_default_str();
  verify->add_flag("--force-local-formulas", va.force, "evaluate frame formulas outside their gate");
  verify->add_option("--constants", va.constants, "rho1,rho2,kappa instead of extracted constants")->delimiter(',');

  auto* constants = app.add_subcommand("constants", "extract rho1, rho2, kappa and evaluate the bounds");
  addCommon(constants);
  int constantPoints = 20;
  constants->add_option("--points", constantPoints, "sample points")->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "run the Monte-Carlo checks");
  addCommon(simulate);
  SimulateArgs sa;
  simulate->add_option("--check", sa.checks, "checks to run (default: all)")
      ->delimiter(',')
      ->check(CLI::IsMember(kSimulateChecks));
  simulate->add_option("--t", sa.t, "horizon");
  simulate->add_option("--dt", sa.dt, "step size");
  simulate->add_option("--paths", sa.paths, "path count");
  simulate->add_option("--eps", sa.eps, "eps values")->delimiter(',')->check(CLI::PositiveNumber);
  simulate->add_option("--x0", sa.x0, "start point")->delimiter(',');
  simulate->add_option("--f", sa.f, "test function in the chart coordinates");
  simulate->add_option("--exit-cap", sa.exitCap)->capture_default_str();
  simulate->add_option("--fd-step", sa.fdStep)->capture_default_str();
  simulate->add_option("--batches", sa.batches)->capture_default_str();
  simulate->add_option("--times", sa.times, "equilibrium times")->delimiter(',')->capture_default_str();
  simulate->add_option("--base-points", sa.basePoints)->capture_default_str();
  simulate->add_option("--transport-tol", sa.transportTol)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }

  FoliationModel model;
  try {
    model = resolveModel(common.model);
  } catch (const std::exception& e) {
    err << "error: cannot resolve model: " << e.what() << '\n';
    return kUsage;
  }

  Session session(out, common.out);
  try {
    if (validate->parsed()) {
      runValidate(model, common, samples, validateTol, session);
    } else if (verify->parsed()) {
      runVerify(model, common, va, session);
    } else if (constants->parsed()) {
      runConstants(model, common, constantPoints, out, session);
      return kPass;
    } else if (simulate->parsed()) {
      runSimulate(model, common, sa, session);
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFail;
  }
  return session.finish();
}

}  // namespace foliage::cli
