#ifndef GCAUSE_BASIS_HPP
#define GCAUSE_BASIS_HPP

#include <vector>

#include "gcause/seqdata.hpp"

namespace gcause {

double normal_cdf(double z);
double normal_pdf(double z);

// Dyadic Gaussian basis: mu_1 = 0, mu_r = L / 2^(R-r) for r >= 2, and
// sigma_r = max(mu_r/3, mu_2/3). Densities are evaluated on t >= 0 only; the
// integral has the closed form Phi((dt-mu)/sigma) - Phi(-mu/sigma).
struct BasisFamily {
  int count = 0;        // R
  double max_mean = 0;  // L
  std::vector<double> means;
  std::vector<double> stds;

  static BasisFamily dyadic(int count, double max_mean);

  // psi_r(dt); r is 0-based.
  double density(int r, double dt) const;
  // Psi_r(dt) = integral of psi_r over [0, dt].
  double integral(int r, double dt) const;
};

// Sizes the family from the inter-event gap distribution: L matches the 99th
// percentile and R is chosen so mu_2 lands within a factor of two of the
// median gap.
BasisFamily auto_sized_basis(const Dataset& data);
BasisFamily auto_sized_basis(const std::vector<double>& gaps);

}  // namespace gcause

#endif  // GCAUSE_BASIS_HPP
