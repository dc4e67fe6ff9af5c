#include "wharm/entanglement.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "wharm/errors.hpp"

namespace wharm {

namespace {

std::vector<std::uint64_t> deposit_offsets(std::uint64_t sites, int n_sites) {
  std::vector<int> positions;
  for (int i = 0; i < n_sites; ++i) {
    if ((sites >> i) & 1U) positions.push_back(i);
  }
  std::vector<std::uint64_t> out(std::size_t{1} << positions.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::uint64_t bits = 0;
    for (std::size_t j = 0; j < positions.size(); ++j) {
      if ((k >> j) & 1U) bits |= std::uint64_t{1} << positions[j];
    }
    out[k] = bits;
  }
  return out;
}

/// Amplitudes as a 2^|A| x 2^|B| matrix, psi = sum M_ab |a>_A |b>_B.
Eigen::MatrixXcd split_amplitudes(const Eigen::VectorXcd& psi,
                                  const std::vector<std::uint64_t>& offsets_a,
                                  const std::vector<std::uint64_t>& offsets_b) {
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(offsets_a.size()),
                     static_cast<Eigen::Index>(offsets_b.size()));
  for (std::size_t b = 0; b < offsets_b.size(); ++b) {
    for (std::size_t a = 0; a < offsets_a.size(); ++a) {
      m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          psi[static_cast<Eigen::Index>(offsets_a[a] | offsets_b[b])];
    }
  }
  return m;
}

double purity_of_split(const Eigen::MatrixXcd& m) {
  // Tr[rho_A^2] = Tr[rho_B^2]; use the smaller Gram matrix.
  if (m.rows() <= m.cols()) return (m * m.adjoint()).squaredNorm();
  return (m.adjoint() * m).squaredNorm();
}

void check_state(const Eigen::VectorXcd& amplitudes, int n_sites) {
  check_site_count(n_sites, kMaxSiteCap);
  if (amplitudes.size() != (Eigen::Index{1} << n_sites)) {
    throw SizeError("amplitude count does not match chain length");
  }
}

}  // namespace

int Bipartition::size_a() const { return std::popcount(subset_a); }

std::vector<Bipartition> balanced_bipartitions(int n_sites, PartitionMode mode) {
  check_site_count(n_sites, kMaxSiteCap);
  if (n_sites < 2) throw SizeError("bipartitions need at least 2 sites");
  const int small = n_sites / 2;
  const int large = n_sites - small;
  const std::uint64_t full = (std::uint64_t{1} << n_sites) - 1;
  auto balanced = [&](std::uint64_t a) {
    const int k = std::popcount(a);
    return k == small || k == large;
  };

  std::vector<std::uint64_t> masks;
  if (mode == PartitionMode::all_subsets) {
    for (std::uint64_t a = 1; a < full; a += 2) {  // odd masks contain site 0
      if (balanced(a)) masks.push_back(a);
    }
  } else {
    for (int start = 0; start < n_sites; ++start) {
      for (int len : {small, large}) {
        std::uint64_t a = 0;
        for (int j = 0; j < len; ++j) a |= std::uint64_t{1} << ((start + j) % n_sites);
        if (!(a & 1U)) a = full & ~a;
        masks.push_back(a);
      }
    }
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  }
  std::vector<Bipartition> out;
  out.reserve(masks.size());
  for (auto a : masks) out.push_back({a, n_sites});
  return out;
}

DensityMatrix reduced_density(const PureState& psi, std::uint64_t subset) {
  const int n = psi.n_sites();
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  if (subset == 0 || (subset & full) == full || (subset & ~full) != 0) {
    throw ConfigError("reduced_density needs a nonempty proper subset of sites");
  }
  const Eigen::MatrixXcd m = split_amplitudes(psi.amplitudes(), deposit_offsets(subset, n),
                                              deposit_offsets(full & ~subset, n));
  Eigen::MatrixXcd rho = m * m.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(std::popcount(subset), std::move(rho), Validation::structural);
}

double purity(const DensityMatrix& rho) { return rho.entries().squaredNorm(); }

double participation_number(const PureState& psi, const Bipartition& part) {
  if (part.n_sites != psi.n_sites()) throw std::invalid_argument("partition/state size mismatch");
  const int n = psi.n_sites();
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  const Eigen::MatrixXcd m = split_amplitudes(psi.amplitudes(), deposit_offsets(part.subset_a, n),
                                              deposit_offsets(full & ~part.subset_a, n));
  return 1.0 / purity_of_split(m);
}

ParticipationEvaluator::ParticipationEvaluator(int n_sites, PartitionMode mode)
    : n_sites_(n_sites), partitions_(balanced_bipartitions(n_sites, mode)) {
  const std::uint64_t full = (std::uint64_t{1} << n_sites) - 1;
  layouts_.reserve(partitions_.size());
  for (const auto& p : partitions_) {
    layouts_.push_back({deposit_offsets(p.subset_a, n_sites),
                        deposit_offsets(full & ~p.subset_a, n_sites)});
  }
}

ParticipationStats ParticipationEvaluator::operator()(const Eigen::VectorXcd& amplitudes) const {
  check_state(amplitudes, n_sites_);
  ParticipationStats st;
  st.partitions = partitions_.size();
  std::vector<double> values;
  values.reserve(partitions_.size());
  for (const auto& layout : layouts_) {
    values.push_back(1.0 / purity_of_split(
                               split_amplitudes(amplitudes, layout.offsets_a, layout.offsets_b)));
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  st.mean = sum / static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - st.mean) * (v - st.mean);
  st.variance = var / static_cast<double>(values.size());
  return st;
}

ParticipationStats mean_participation(const PureState& psi, PartitionMode mode) {
  return ParticipationEvaluator(psi.n_sites(), mode)(psi.amplitudes());
}

Eigen::Vector3d bloch_vector(const Eigen::VectorXcd& psi, int n_sites, int site) {
  check_state(psi, n_sites);
  if (site < 0 || site >= n_sites) throw std::out_of_range("site index out of range");
  const Eigen::Index bit = Eigen::Index{1} << site;
  complex cross = 0.0;  // sum conj(psi_down) psi_up
  double z = 0.0;
  for (Eigen::Index s = 0; s < psi.size(); ++s) {
    if (s & bit) continue;
    cross += std::conj(psi[s]) * psi[s | bit];
    z += std::norm(psi[s | bit]) - std::norm(psi[s]);
  }
  return {2.0 * cross.real(), -2.0 * cross.imag(), z};
}

double global_entanglement(const Eigen::VectorXcd& amplitudes, int n_sites) {
  double purity_sum = 0.0;
  for (int k = 0; k < n_sites; ++k) {
    purity_sum += 0.5 * (1.0 + bloch_vector(amplitudes, n_sites, k).squaredNorm());
  }
  return 2.0 * (1.0 - purity_sum / n_sites);
}

double global_entanglement(const PureState& psi) {
  return global_entanglement(psi.amplitudes(), psi.n_sites());
}

double sigma_x_site(const Eigen::VectorXcd& amplitudes, int n_sites, int site) {
  return bloch_vector(amplitudes, n_sites, site).x();
}

double sigma_x_mean(const Eigen::VectorXcd& amplitudes, int n_sites) {
  double sum = 0.0;
  for (int i = 0; i < n_sites; ++i) sum += sigma_x_site(amplitudes, n_sites, i);
  return sum / n_sites;
}

double sigma_x_mean(const PureState& psi) { return sigma_x_mean(psi.amplitudes(), psi.n_sites()); }

}  // namespace wharm
