#pragma once

// Wigner-harmonics distribution of a spin-chain state and the complexity
// measures built on it.
//
// For a harmonic mask mu the raw weight is
//
//   sum over kets n with the mu-sites down of |<n + mu| rho |n>|^2,
//
// and the distribution is the raw weights normalized over all 2^N masks.
// The entropy of this distribution is bounded by N ln 2.

#include <vector>

#include <Eigen/Dense>

#include "wharm/basis.hpp"

namespace wharm {

/// Which half of the +-m harmonics the masks stand for. `raising` (m_a >= 0)
/// is the default; `lowering` (m_a <= 0) reads <n - mu|rho|n> with the
/// mu-sites of n up.
enum class MaskConvention { raising, lowering };

class HarmonicsDistribution {
 public:
  /// Normalizes `raw_weights` (length 2^n_sites, all >= 0, positive sum).
  HarmonicsDistribution(int n_sites, std::vector<double> raw_weights);

  int n_sites() const { return n_sites_; }
  const std::vector<double>& weights() const { return weights_; }
  double operator[](std::size_t mask) const { return weights_[mask]; }
  std::size_t size() const { return weights_.size(); }

 private:
  int n_sites_;
  std::vector<double> weights_;
};

/// O(3^N) evaluation from the amplitudes of a pure state. Throws
/// NumericError if the norm deviates from 1 by more than 1e-6.
HarmonicsDistribution harmonics_from_amplitudes(int n_sites, const Eigen::VectorXcd& amplitudes,
                                                MaskConvention convention = MaskConvention::raising);
HarmonicsDistribution harmonics_from_pure(const PureState& psi,
                                          MaskConvention convention = MaskConvention::raising);
HarmonicsDistribution harmonics_from_density(const DensityMatrix& rho,
                                             MaskConvention convention = MaskConvention::raising);

/// -sum w ln w, with weights below 1e-300 counted as zero.
double wigner_entropy(const HarmonicsDistribution& dist);

/// <m^2> over the 2N-component harmonic vector: each transition site
/// contributes m_a^2 + m_b^2 = 2.
double second_moment(const HarmonicsDistribution& dist);

/// exp(S), the effective number of excited harmonics.
double harmonic_count(const HarmonicsDistribution& dist);

/// S / (N ln 2).
double normalized_entropy(const HarmonicsDistribution& dist);

}  // namespace wharm
