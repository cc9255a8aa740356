#include "gcause/basis.hpp"

#include <algorithm>
#include <cmath>

namespace gcause {

double normal_cdf(double z) { return 0.5 * std::erfc(-z * 0.70710678118654752440); }

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) * 0.39894228040143267794;
}

BasisFamily BasisFamily::dyadic(int count, double max_mean) {
  require(count >= 1, Error::Kind::invalid_argument, "basis count must be >= 1");
  require(max_mean > 0.0, Error::Kind::invalid_argument, "basis max mean must be > 0");
  BasisFamily fam;
  fam.count = count;
  fam.max_mean = max_mean;
  fam.means.resize(static_cast<std::size_t>(count));
  fam.stds.resize(static_cast<std::size_t>(count));
  fam.means[0] = 0.0;
  for (int r = 2; r <= count; ++r)
    fam.means[static_cast<std::size_t>(r - 1)] = max_mean / std::pow(2.0, count - r);
  // For R = 1 the family is a single half-Gaussian at 0; fall back to L/3.
  double floor_std = count >= 2 ? fam.means[1] / 3.0 : max_mean / 3.0;
  for (int r = 0; r < count; ++r)
    fam.stds[static_cast<std::size_t>(r)] =
        std::max(fam.means[static_cast<std::size_t>(r)] / 3.0, floor_std);
  return fam;
}

double BasisFamily::density(int r, double dt) const {
  require(r >= 0 && r < count, Error::Kind::invalid_argument, "basis index out of range");
  require(dt >= 0.0, Error::Kind::invalid_argument, "basis density: dt < 0");
  double s = stds[static_cast<std::size_t>(r)];
  return normal_pdf((dt - means[static_cast<std::size_t>(r)]) / s) / s;
}

double BasisFamily::integral(int r, double dt) const {
  require(r >= 0 && r < count, Error::Kind::invalid_argument, "basis index out of range");
  require(dt >= 0.0, Error::Kind::invalid_argument, "basis integral: dt < 0");
  double mu = means[static_cast<std::size_t>(r)];
  double s = stds[static_cast<std::size_t>(r)];
  return normal_cdf((dt - mu) / s) - normal_cdf(-mu / s);
}

BasisFamily auto_sized_basis(const std::vector<double>& gaps) {
  std::vector<double> sorted(gaps);
  std::sort(sorted.begin(), sorted.end());
  auto percentile = [&](double p) -> double {
    if (sorted.empty()) return 0.0;
    std::size_t idx = static_cast<std::size_t>(
        std::ceil(p * static_cast<double>(sorted.size())));
    if (idx == 0) idx = 1;
    return sorted[std::min(idx - 1, sorted.size() - 1)];
  };
  double p50 = percentile(0.50);
  double p99 = percentile(0.99);
  double max_mean = p99 > 0.0 ? p99 : 1.0;
  if (p50 <= 0.0) p50 = max_mean / 1024.0;
  int count = 2 + static_cast<int>(std::lround(std::log2(max_mean / p50)));
  count = std::clamp(count, 2, 12);
  return BasisFamily::dyadic(count, max_mean);
}

BasisFamily auto_sized_basis(const Dataset& data) {
  std::vector<double> gaps;
  for (const auto& seq : data.sequences) {
    double prev = 0.0;
    for (const auto& e : seq.events) {
      gaps.push_back(e.t - prev);
      prev = e.t;
    }
  }
  return auto_sized_basis(gaps);
}

}  // namespace gcause
