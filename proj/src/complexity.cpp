#include "wharm/complexity.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "wharm/errors.hpp"

namespace wharm {

HarmonicsDistribution::HarmonicsDistribution(int n_sites, std::vector<double> raw)
    : n_sites_(n_sites), weights_(std::move(raw)) {
  check_site_count(n_sites, kMaxSiteCap);
  if (weights_.size() != (std::size_t{1} << n_sites)) {
    throw SizeError("harmonics distribution needs 2^N weights");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw NumericError("negative or NaN harmonic weight");
    total += w;
  }
  if (!(total > 0.0)) throw NumericError("harmonic weights sum to zero");
  for (double& w : weights_) w /= total;
}

HarmonicsDistribution harmonics_from_amplitudes(int n_sites, const Eigen::VectorXcd& amplitudes,
                                                MaskConvention convention) {
  check_site_count(n_sites, kMaxSiteCap);
  const std::size_t dim = std::size_t{1} << n_sites;
  if (static_cast<std::size_t>(amplitudes.size()) != dim) {
    throw SizeError("amplitude count does not match chain length");
  }
  const double norm = amplitudes.norm();
  if (!(std::abs(norm - 1.0) <= 1e-6)) {
    throw NumericError(fmt::format("state norm {:.17g} deviates from 1", norm));
  }
  // |rho_{n+mu, n}|^2 = p(n+mu) p(n) for a pure state. The two conventions
  // coincide because |rho_ab| = |rho_ba|; both are spelled out so the
  // lowering branch stays an independent reading of the definition.
  std::vector<double> p(dim);
  for (std::size_t s = 0; s < dim; ++s) p[s] = std::norm(amplitudes[static_cast<Eigen::Index>(s)]);
  std::vector<double> raw(dim);
  for (std::size_t mu = 0; mu < dim; ++mu) {
    double acc = 0.0;
    if (convention == MaskConvention::raising) {
      for_each_compatible_ket(mu, n_sites, [&](std::uint64_t s) { acc += p[s | mu] * p[s]; });
    } else {
      for_each_compatible_ket(mu, n_sites, [&](std::uint64_t s) { acc += p[s] * p[s | mu]; });
    }
    raw[mu] = acc;
  }
  return HarmonicsDistribution(n_sites, std::move(raw));
}

HarmonicsDistribution harmonics_from_pure(const PureState& psi, MaskConvention convention) {
  return harmonics_from_amplitudes(psi.n_sites(), psi.amplitudes(), convention);
}

HarmonicsDistribution harmonics_from_density(const DensityMatrix& rho, MaskConvention convention) {
  const int n = rho.n_sites();
  const std::size_t dim = rho.dim();
  std::vector<double> raw(dim);
  for (std::size_t mu = 0; mu < dim; ++mu) {
    double acc = 0.0;
    for_each_compatible_ket(mu, n, [&](std::uint64_t s) {
      // raising: ket s has mu down, bra s|mu. lowering: ket s|mu, bra s.
      acc += convention == MaskConvention::raising ? std::norm(rho(s | mu, s))
                                                   : std::norm(rho(s, s | mu));
    });
    raw[mu] = acc;
  }
  return HarmonicsDistribution(n, std::move(raw));
}

double wigner_entropy(const HarmonicsDistribution& dist) {
  double s = 0.0;
  for (double w : dist.weights()) {
    if (w > 1e-300) s -= w * std::log(w);
  }
  return s;
}

double second_moment(const HarmonicsDistribution& dist) {
  double m2 = 0.0;
  const auto& w = dist.weights();
  for (std::size_t mu = 0; mu < w.size(); ++mu) {
    m2 += w[mu] * 2.0 * std::popcount(mu);
  }
  return m2;
}

double harmonic_count(const HarmonicsDistribution& dist) { return std::exp(wigner_entropy(dist)); }

double normalized_entropy(const HarmonicsDistribution& dist) {
  return wigner_entropy(dist) / (dist.n_sites() * std::numbers::ln2);
}

}  // namespace wharm
