#include "foliage/report.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace foliage {

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

nlohmann::json optionalNumber(std::optional<double> v) { return v ? number(*v) : nlohmann::json(nullptr); }

}  // namespace

std::string toJsonLine(const CheckReport& r) {
  nlohmann::json j;
  j["record"] = "check";
  j["check"] = r.check;
  j["model"] = r.model;
  j["kind"] = r.kind == CheckReport::Kind::Identity ? "identity" : "inequality";
  j["eps"] = r.eps;
  j["sampleCount"] = r.sampleCount;
  j["worst"] = number(r.worst);
  j["tolerance"] = number(r.tolerance);
  j["verdict"] = toString(r.verdict);
  j["seed"] = r.seed;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : r.parameters) params[k] = number(v);
  j["parameters"] = params;
  j["note"] = r.note;
  return j.dump();
}

std::string toJsonLine(const ValidationReport& r) {
  nlohmann::json j;
  j["record"] = "validation";
  j["model"] = r.model;
  j["sampleCount"] = r.sampleCount;
  j["seed"] = r.seed;
  j["verdict"] = r.passed() ? "pass" : "fail";
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"maxResidual", number(c.maxResidual)},
                      {"tolerance", number(c.tolerance)},
                      {"verdict", toString(c.verdict)},
                      {"note", c.note}});
  }
  j["checks"] = checks;
  return j.dump();
}

std::string toJsonLine(const std::string& model, const ConstantsReport& c, std::optional<double> diameter,
                       std::optional<double> lambda1) {
  nlohmann::json j;
  j["record"] = "constants";
  j["model"] = model;
  j["rho1"] = number(c.constants.rho1);
  j["rho2"] = number(c.constants.rho2);
  j["kappa"] = number(c.constants.kappa);
  j["n"] = c.constants.n;
  j["K"] = number(c.constants.bigK);
  j["rho1Spread"] = number(c.rho1Spread);
  j["rho2Spread"] = number(c.rho2Spread);
  j["kappaSpread"] = number(c.kappaSpread);
  j["pointCount"] = c.pointCount;
  j["seed"] = c.seed;
  j["rho2Degenerate"] = c.rho2Degenerate;
  j["diameterBound"] = optionalNumber(diameter);
  j["lambda1Bound"] = optionalNumber(lambda1);
  return j.dump();
}

void appendRecord(const std::string& path, const std::string& line) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open report file '" + path + "'");
  out << line << '\n';
}

}  // namespace foliage
