#pragma once

// Computational-basis bookkeeping for spin-1/2 chains.
//
// A basis state is an N-bit integer. Bit i set means site i points up along
// the current quantization axis (Schwinger occupations n_a = 1, n_b = 0); a
// cleared bit means down. Site 0 is the first site of the chain.
//
// A harmonic mask selects the sites that carry a down-to-up transition
// (m_a = +1, m_b = -1) in a density-matrix element <n+m|rho|n>. Unselected
// sites have m_a = m_b = 0. Only the m_a >= 0 half of the harmonics is
// represented, which leaves exactly 2^N masks.

#include <bit>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace wharm {

using complex = std::complex<double>;

inline constexpr int kDefaultSiteCap = 14;
// Hard ceiling for the cap itself: 2^20 amplitudes and 3^20 harmonic terms
// are already far outside what the dense paths can handle.
inline constexpr int kMaxSiteCap = 20;

enum class Boundary { open, periodic };
enum class QuantAxis { z, x };

struct ChainSpec {
  int n_sites = 1;
  double coupling = 1.0;
  double field_x = 0.0;
  double field_z = 0.0;
  Boundary boundary = Boundary::open;
  QuantAxis quant_axis = QuantAxis::z;
  int site_cap = kDefaultSiteCap;

  std::size_t dim() const { return std::size_t{1} << n_sites; }

  /// Throws SizeError for n_sites outside [1, site_cap], ConfigError for
  /// non-finite couplings.
  void validate() const;
};

/// Throws SizeError unless 1 <= n_sites <= cap <= kMaxSiteCap.
void check_site_count(int n_sites, int cap = kDefaultSiteCap);

struct BasisState {
  std::uint64_t bits = 0;
  friend bool operator==(BasisState, BasisState) = default;
};

struct HarmonicIndex {
  std::uint64_t mask = 0;
  int popcount() const { return std::popcount(mask); }
  friend bool operator==(HarmonicIndex, HarmonicIndex) = default;
};

/// |s> -> |s + m>: sets the mask bits. Throws IncompatibleError if any masked
/// site is already up in `state`.
BasisState flip(BasisState state, HarmonicIndex mask);

/// Kets n with all mask sites down, in ascending order. There are
/// 2^(N - popcount(mask)) of them.
std::vector<BasisState> compatible_kets(HarmonicIndex mask, int n_sites);

/// Visits the compatible kets of `mask` in ascending order without
/// allocating. `f` receives the ket bits.
template <class F>
inline void for_each_compatible_ket(std::uint64_t mask, int n_sites, F&& f) {
  const std::uint64_t free = ((std::uint64_t{1} << n_sites) - 1) & ~mask;
  std::uint64_t s = 0;
  while (true) {
    f(s);
    if (s == free) break;
    s = (s - free) & free;
  }
}

class PureState {
 public:
  /// Validates length 2^n_sites and unit norm (1e-9).
  PureState(int n_sites, Eigen::VectorXcd amplitudes);

  /// Rescales `amplitudes` to unit norm. Throws NumericError on a zero vector.
  static PureState normalized(int n_sites, Eigen::VectorXcd amplitudes);

  int n_sites() const { return n_sites_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  complex operator[](std::size_t bits) const { return amplitudes_[static_cast<Eigen::Index>(bits)]; }

 private:
  int n_sites_;
  Eigen::VectorXcd amplitudes_;
};

/// All sites down along the quantization axis.
PureState all_down_state(int n_sites, int cap = kDefaultSiteCap);

/// Single basis state |bits>.
PureState basis_state(int n_sites, BasisState state);

enum class Validation {
  full,        // Hermiticity, unit trace, eigenvalues >= -1e-9
  structural,  // Hermiticity and unit trace only
};

class DensityMatrix {
 public:
  DensityMatrix(int n_sites, Eigen::MatrixXcd entries,
                Validation validation = Validation::full);

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int n_sites);

  int n_sites() const { return n_sites_; }
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  complex operator()(std::size_t row, std::size_t col) const {
    return entries_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }

 private:
  int n_sites_;
  Eigen::MatrixXcd entries_;
};

}  // namespace wharm
