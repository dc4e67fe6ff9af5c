#pragma once

// Bipartite and multipartite entanglement of pure chain states, and the
// x-polarization observable.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "wharm/basis.hpp"

namespace wharm {

/// Subsystem A as a site bitmask; B is the complement. Canonical partitions
/// have site 0 in A, so {A, B} and {B, A} appear once.
struct Bipartition {
  std::uint64_t subset_a = 0;
  int n_sites = 0;

  int size_a() const;
  int size_b() const { return n_sites - size_a(); }
};

enum class PartitionMode {
  all_subsets,  // every balanced split over arbitrary site subsets
  contiguous,   // A is a block of consecutive sites on the ring
};

/// Canonical balanced bipartitions in ascending mask order. Even N gives
/// C(N, N/2)/2 partitions, odd N gives C(N, floor(N/2)).
std::vector<Bipartition> balanced_bipartitions(int n_sites,
                                               PartitionMode mode = PartitionMode::all_subsets);

/// rho_A = Tr_B |psi><psi| on the sites of `subset` (in ascending site order).
DensityMatrix reduced_density(const PureState& psi, std::uint64_t subset);

/// Tr[rho^2] as the squared Frobenius norm.
double purity(const DensityMatrix& rho);

/// 1 / Tr[rho_A^2].
double participation_number(const PureState& psi, const Bipartition& part);

struct ParticipationStats {
  double mean = 0.0;
  double variance = 0.0;  // population variance over partitions
  std::size_t partitions = 0;
};

class ParticipationEvaluator {
 public:
  explicit ParticipationEvaluator(int n_sites, PartitionMode mode = PartitionMode::all_subsets);

  const std::vector<Bipartition>& partitions() const { return partitions_; }
  ParticipationStats operator()(const Eigen::VectorXcd& amplitudes) const;

 private:
  struct Layout {
    std::vector<std::uint64_t> offsets_a;
    std::vector<std::uint64_t> offsets_b;
  };
  int n_sites_;
  std::vector<Bipartition> partitions_;
  std::vector<Layout> layouts_;
};

ParticipationStats mean_participation(const PureState& psi,
                                      PartitionMode mode = PartitionMode::all_subsets);

/// (<sx>, <sy>, <sz>) of one site.
Eigen::Vector3d bloch_vector(const Eigen::VectorXcd& amplitudes, int n_sites, int site);

/// 2 (1 - mean single-site purity), single-site purities from Bloch vectors.
double global_entanglement(const Eigen::VectorXcd& amplitudes, int n_sites);
double global_entanglement(const PureState& psi);

double sigma_x_site(const Eigen::VectorXcd& amplitudes, int n_sites, int site);
/// Site average of <sx_i>.
double sigma_x_mean(const Eigen::VectorXcd& amplitudes, int n_sites);
double sigma_x_mean(const PureState& psi);

}  // namespace wharm
