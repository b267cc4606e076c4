#include "foliage/models.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "foliage/errors.hpp"
#include "foliage/expression.hpp"

namespace foliage {

bool Box::containsInterior(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != dim()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > lo[i] && p[i] < hi[i])) return false;
  }
  return true;
}

CDConstants CDConstants::fromRho(double rho1, double rho2, double kappa, int n) {
  // Adding 0.0 maps -0.0 to +0.0.
  return CDConstants{rho1 + 0.0, rho2 + 0.0, kappa + 0.0, n, std::max(-rho1, 0.0) + 0.0};
}

std::vector<std::vector<double>> FoliationModel::samplePoints(int count, std::uint64_t seed) const {
  if (count < 1) throw std::invalid_argument("sample count must be positive");
  const int dim = chartDim();
  if (domain.dim() != dim) throw ModelError("domain dimension does not match chart dimension");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x5a3u};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<std::vector<double>> points(static_cast<std::size_t>(count), std::vector<double>(static_cast<std::size_t>(dim)));
  for (auto& p : points) {
    for (int i = 0; i < dim; ++i) {
      const auto k = static_cast<std::size_t>(i);
      const double center = 0.5 * (domain.lo[k] + domain.hi[k]);
      const double half = 0.5 * (domain.hi[k] - domain.lo[k]) * sampleShrink;
      p[k] = center + half * unit(rng);
    }
  }
  return points;
}

void FoliationModel::requireInterior(std::span<const double> p) const {
  if (!domain.containsInterior(p)) {
    std::ostringstream msg;
    msg << "point (";
    for (std::size_t i = 0; i < p.size(); ++i) msg << (i ? ", " : "") << p[i];
    msg << ") is not strictly inside the chart domain of " << name;
    throw DomainError(msg.str());
  }
}

Eigen::MatrixXd FoliationModel::frameMatrix(std::span<const double> p) const {
  const int dim = chartDim();
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> a(dim, dim);
  frame.values(p, std::span<double>(a.data(), static_cast<std::size_t>(dim * dim)));
  return a;
}

namespace {

using nlohmann::json;

int requirePositiveInt(const json& cfg, const char* key) {
  if (!cfg.contains(key) || !cfg[key].is_number_integer()) {
    throw ModelError(std::string("field '") + key + "' must be an integer");
  }
  const int v = cfg[key].get<int>();
  if (v < 1) throw ModelError(std::string("field '") + key + "' must be positive");
  return v;
}

std::vector<Expression> parseFrame(const json& rows, const char* key, int expectedRows, int dim,
                                   const std::vector<std::string>& coords) {
  if (!rows.is_array()) throw ModelError(std::string("field '") + key + "' must be an array of arrays");
  if (static_cast<int>(rows.size()) != expectedRows) {
    throw ModelError(std::string("dimension mismatch: '") + key + "' has " + std::to_string(rows.size()) +
                     " vectors, expected " + std::to_string(expectedRows));
  }
  std::vector<Expression> out;
  for (std::size_t a = 0; a < rows.size(); ++a) {
    const auto& row = rows[a];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw ModelError(std::string("dimension mismatch: '") + key + "[" + std::to_string(a) + "]' must have " +
                       std::to_string(dim) + " coefficients");
    }
    for (std::size_t mu = 0; mu < row.size(); ++mu) {
      const std::string where = std::string(key) + "[" + std::to_string(a) + "][" + std::to_string(mu) + "]";
      std::string text;
      if (row[mu].is_string()) {
        text = row[mu].get<std::string>();
      } else if (row[mu].is_number()) {
        text = row[mu].dump();
      } else {
        throw ModelError(where + " must be an expression string");
      }
      try {
        out.push_back(Expression::parse(text, coords));
      } catch (const ParseError& e) {
        throw e.withContext(where);
      }
    }
  }
  return out;
}

}  // namespace

FoliationModel loadModel(std::string_view config) {
  json cfg;
  try {
    cfg = json::parse(config);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte > 0 ? e.byte - 1 : 0, "model config");
  }
  if (!cfg.is_object()) throw ModelError("model config must be a JSON object");

  FoliationModel model;
  model.name = cfg.value("name", std::string("custom"));
  model.n = requirePositiveInt(cfg, "n");
  model.m = requirePositiveInt(cfg, "m");
  const int dim = model.chartDim();

  if (cfg.contains("coordinates")) {
    model.coordinates = cfg["coordinates"].get<std::vector<std::string>>();
    if (static_cast<int>(model.coordinates.size()) != dim) {
      throw ModelError("dimension mismatch: " + std::to_string(model.coordinates.size()) +
                       " coordinates declared but n + m = " + std::to_string(dim));
    }
  } else {
    for (int i = 0; i < dim; ++i) model.coordinates.push_back("x" + std::to_string(i + 1));
  }

  if (!cfg.contains("domain") || !cfg["domain"].is_array()) {
    throw ModelError("field 'domain' must be an array of [lo, hi] pairs");
  }
  const auto& domain = cfg["domain"];
  if (static_cast<int>(domain.size()) != dim) {
    throw ModelError("dimension mismatch: domain has " + std::to_string(domain.size()) + " intervals but n + m = " +
                     std::to_string(dim));
  }
  for (const auto& interval : domain) {
    if (!interval.is_array() || interval.size() != 2 || !interval[0].is_number() || !interval[1].is_number()) {
      throw ModelError("domain is not a box: each entry must be [lo, hi]");
    }
    const double lo = interval[0].get<double>();
    const double hi = interval[1].get<double>();
    if (!(lo < hi)) throw ModelError("domain is not a box: empty interval");
    model.domain.lo.push_back(lo);
    model.domain.hi.push_back(hi);
  }

  auto coeffs = std::make_shared<std::vector<Expression>>(
      parseFrame(cfg.value("horizontal_frame", json()), "horizontal_frame", model.n, dim, model.coordinates));
  auto vertical = parseFrame(cfg.value("vertical_frame", json()), "vertical_frame", model.m, dim, model.coordinates);
  coeffs->insert(coeffs->end(), std::make_move_iterator(vertical.begin()), std::make_move_iterator(vertical.end()));

  model.frame.jets = [coeffs](std::span<const Jet> x, std::span<Jet> out) {
    for (std::size_t k = 0; k < coeffs->size(); ++k) out[k] = (*coeffs)[k].evaluate(x);
  };
  model.frame.values = [coeffs](std::span<const double> x, std::span<double> out) {
    for (std::size_t k = 0; k < coeffs->size(); ++k) out[k] = (*coeffs)[k].evaluate(x);
  };

  model.sampleShrink = cfg.value("sample_shrink", 0.5);
  if (!(model.sampleShrink > 0.0 && model.sampleShrink < 1.0)) throw ModelError("sample_shrink must lie in (0, 1)");
  model.leftInvariant = cfg.value("left_invariant", false);
  model.compactType = cfg.value("compact", false);
  if (cfg.contains("constants")) {
    const auto& c = cfg["constants"];
    model.knownConstants = CDConstants::fromRho(c.at("rho1").get<double>(), c.at("rho2").get<double>(),
                                                c.at("kappa").get<double>(), model.n);
  }
  model.metadata["source"] = "config";
  return model;
}

FoliationModel loadModelFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return loadModel(buffer.str());
}

bool ValidationReport::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const auto& c) { return c.verdict == Verdict::Fail; });
}

const ValidationCheck& ValidationReport::check(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no validation check named " + std::string(name));
}

}  // namespace foliage
