#pragma once

// Ising chain in a tilted field,
//
//   H = J sum_<ij> sz_i sz_j + sum_i (h_x sx_i + h_z sz_i),
//
// always represented in the z computational basis (sz_i = +1 on bit i set).
// The quantization axis of a ChainSpec only selects the basis in which
// harmonics are measured; states are moved there with rotate_axis().

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wharm/basis.hpp"

namespace wharm {

/// Unperturbed and perturbation parts, each as its own ChainSpec so that
/// build_dense() and apply() work on them directly.
///
///   quant_axis z: H0 = J sz.sz + h_z sz,   H1 = h_x sx
///   quant_axis x: H0 = h_x sx,             H1 = J sz.sz + h_z sz
struct HamiltonianSplit {
  ChainSpec unperturbed;
  ChainSpec perturbation;
};

HamiltonianSplit split_hamiltonian(const ChainSpec& spec);

/// Number of nearest-neighbour bonds: N-1 open, N periodic (N > 2).
int bond_count(const ChainSpec& spec);

/// Diagonal (sz.sz + sz) part of H in basis-state order.
Eigen::VectorXd diagonal_energies(const ChainSpec& spec);

/// Dense 2^N x 2^N real symmetric H.
Eigen::MatrixXd build_dense(const ChainSpec& spec);

/// Matrix-free H with the diagonal cached; O(N 2^N) per application.
class IsingOperator {
 public:
  explicit IsingOperator(const ChainSpec& spec);

  const ChainSpec& spec() const { return spec_; }
  std::size_t dim() const { return static_cast<std::size_t>(diagonal_.size()); }

  /// out = H in. `out` must not alias `in`.
  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;
  Eigen::VectorXcd operator()(const Eigen::VectorXcd& in) const;

 private:
  ChainSpec spec_;
  Eigen::VectorXd diagonal_;
};

/// H v without materializing H. Throws SizeError on length mismatch.
Eigen::VectorXcd apply(const ChainSpec& spec, const Eigen::VectorXcd& v);

/// Exchanges the sz and sx eigenbases on every site with the symmetric
/// orthogonal map
///
///   |up>   -> (|up> + |down>)/sqrt2
///   |down> -> (|up> - |down>)/sqrt2
///
/// so that in amplitude order (down, up) a single site maps as
/// (a_d, a_u) -> ((a_u - a_d)/sqrt2, (a_u + a_d)/sqrt2). The map is its own
/// inverse and conjugates sx into sz. After rotation, bit i set means site i
/// is up along x (sx_i = +1).
PureState rotate_axis(const PureState& state);
void rotate_axis_inplace(Eigen::VectorXcd& amplitudes, int n_sites);

// Poisson and GOE reference values of the mean consecutive-spacing ratio.
inline constexpr double kPoissonSpacingRatio = 0.38629436111989061;  // 2 ln 2 - 1
inline constexpr double kGoeSpacingRatio = 0.5307;

struct SpacingRatioResult {
  double mean_ratio = 0.0;
  std::size_t n_levels = 0;       // levels in the central window
  std::size_t n_ratios = 0;       // ratios averaged
  std::size_t sector_dim = 0;     // dimension of the diagonalized block
  double degenerate_fraction = 0; // share of zero spacings in the window
  bool symmetry_resolved = false;

  bool degenerate() const { return degenerate_fraction > 0.5; }
};

/// Mean of min(s_k, s_{k+1}) / max(s_k, s_{k+1}) over the central half of an
/// ascending spectrum. Pairs of zero spacings are skipped. Throws
/// NumericError when fewer than 10 levels fall in the window.
SpacingRatioResult mean_spacing_ratio(std::span<const double> sorted_levels);

enum class SymmetryResolution { resolve, none };

/// Orthonormal basis (columns) of the fully symmetric sector of the chain's
/// symmetry group: reflection for open chains, translations and reflection
/// for periodic chains, plus the global spin flip when h_z = 0.
Eigen::MatrixXd symmetric_sector_basis(const ChainSpec& spec);

/// Hamiltonian restricted to the fully symmetric sector.
Eigen::MatrixXd symmetric_sector_hamiltonian(const ChainSpec& spec);

/// Level-spacing ratio of H, within the fully symmetric sector by default.
SpacingRatioResult spacing_ratio(const ChainSpec& spec,
                                 SymmetryResolution resolution = SymmetryResolution::resolve);

}  // namespace wharm
