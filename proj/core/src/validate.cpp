#include <algorithm>
#include <cmath>
#include <limits>

#include "foliage/diffgeo.hpp"
#include "foliage/errors.hpp"
#include "foliage/models.hpp"

namespace foliage {

namespace {

ValidationCheck verdictFor(std::string name, double residual, double tol) {
  ValidationCheck c{std::move(name), residual, tol, residual <= tol ? Verdict::Pass : Verdict::Fail, {}};
  return c;
}

}  // namespace

ValidationReport validateModel(const FoliationModel& model, int sampleCount, double tol, std::uint64_t seed) {
  if (sampleCount < 1) throw std::invalid_argument("sampleCount must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  for (int i = 0; i < model.domain.dim(); ++i) {
    if (!(model.domain.lo[static_cast<std::size_t>(i)] < model.domain.hi[static_cast<std::size_t>(i)])) {
      throw ModelError("cannot sample: domain is empty");
    }
  }

  const int n = model.n;
  const int d = model.chartDim();
  const auto points = model.samplePoints(sampleCount, seed);

  double gram = 0.0;
  double involutive = 0.0;
  double bundleLike = 0.0;
  double totallyGeodesic = 0.0;
  double yangMills = 0.0;
  double constancy = 0.0;
  int minRank = d;
  std::vector<double> reference;

  for (const auto& p : points) {
    const Eigen::MatrixXd a = model.frameMatrix(p);
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible() || lu.rcond() < 1e-12) {
      gram = std::numeric_limits<double>::infinity();
      continue;
    }
    // The metric is defined by the frame, so the Gram matrix is the identity
    // exactly when the coordinate matrix inverts cleanly.
    gram = std::max(gram, (a * lu.inverse() - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff());

    const LocalGeometry geo(model, p, {.order = 2});
    for (int k = n; k < d; ++k)
      for (int l = n; l < d; ++l)
        for (int i = 0; i < n; ++i) involutive = std::max(involutive, std::abs(geo.structure(k, l, i)));
    for (int l = n; l < d; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          bundleLike = std::max(bundleLike, std::abs(geo.structure(l, i, j) + geo.structure(l, j, i)));
    for (int i = 0; i < n; ++i)
      for (int k = n; k < d; ++k)
        for (int l = n; l < d; ++l)
          totallyGeodesic = std::max(totallyGeodesic, std::abs(geo.structure(i, k, l) + geo.structure(i, l, k)));
    yangMills = std::max(yangMills, geo.deltaT().cwiseAbs().maxCoeff());

    Eigen::MatrixXd span(d, n + n * (n - 1) / 2);
    span.setZero();
    int col = 0;
    for (int i = 0; i < n; ++i) span(i, col++) = 1.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        for (int c = 0; c < d; ++c) span(c, col) = geo.structure(i, j, c);
        ++col;
      }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(span);
    const double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    int rank = 0;
    for (Eigen::Index s = 0; s < svd.singularValues().size(); ++s)
      if (svd.singularValues()(s) > 1e-9 * std::max(1.0, top)) ++rank;
    minRank = std::min(minRank, rank);

    if (model.leftInvariant) {
      std::vector<double> current;
      for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
          for (int z = 0; z < d; ++z) current.push_back(geo.structure(x, y, z));
      if (reference.empty()) {
        reference = current;
      } else {
        for (std::size_t k = 0; k < current.size(); ++k)
          constancy = std::max(constancy, std::abs(current[k] - reference[k]));
      }
    }
  }

  ValidationReport report;
  report.model = model.name;
  report.sampleCount = sampleCount;
  report.seed = seed;
  report.checks.push_back(verdictFor("frame-invertibility", gram, tol));
  report.checks.push_back(verdictFor("vertical-involutivity", involutive, tol));
  report.checks.push_back(verdictFor("bundle-like", bundleLike, tol));
  report.checks.push_back(verdictFor("totally-geodesic", totallyGeodesic, tol));
  report.checks.push_back(verdictFor("yang-mills", yangMills, tol));
  ValidationCheck generating{"bracket-generating", static_cast<double>(d - minRank), 0.0,
                             minRank == d ? Verdict::Pass : Verdict::Flagged,
                             "step-2 span rank " + std::to_string(minRank) + " of " + std::to_string(d)};
  if (minRank < d) generating.note += "; deeper brackets not examined";
  report.checks.push_back(generating);
  if (model.leftInvariant) report.checks.push_back(verdictFor("constant-structure", constancy, tol));
  return report;
}

}  // namespace foliage
