#include "wharm/basis.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "wharm/errors.hpp"

namespace wharm {

namespace {

constexpr double kStateTol = 1e-9;

}  // namespace

void check_site_count(int n_sites, int cap) {
  if (cap < 1 || cap > kMaxSiteCap) {
    throw SizeError(fmt::format("site cap {} outside [1, {}]", cap, kMaxSiteCap));
  }
  if (n_sites < 1 || n_sites > cap) {
    throw SizeError(fmt::format("n_sites = {} outside [1, {}]", n_sites, cap));
  }
}

void ChainSpec::validate() const {
  check_site_count(n_sites, site_cap);
  if (!std::isfinite(coupling) || !std::isfinite(field_x) || !std::isfinite(field_z)) {
    throw ConfigError("chain couplings must be finite");
  }
}

BasisState flip(BasisState state, HarmonicIndex mask) {
  if ((state.bits & mask.mask) != 0) {
    throw IncompatibleError(fmt::format(
        "mask {:#b} overlaps up sites of ket {:#b}", mask.mask, state.bits));
  }
  return BasisState{state.bits | mask.mask};
}

std::vector<BasisState> compatible_kets(HarmonicIndex mask, int n_sites) {
  check_site_count(n_sites, kMaxSiteCap);
  if (mask.mask >> n_sites) {
    throw std::invalid_argument("mask exceeds chain length");
  }
  std::vector<BasisState> out;
  out.reserve(std::size_t{1} << (n_sites - mask.popcount()));
  for_each_compatible_ket(mask.mask, n_sites,
                          [&](std::uint64_t s) { out.push_back(BasisState{s}); });
  return out;
}

PureState::PureState(int n_sites, Eigen::VectorXcd amplitudes)
    : n_sites_(n_sites), amplitudes_(std::move(amplitudes)) {
  check_site_count(n_sites, kMaxSiteCap);
  if (amplitudes_.size() != (Eigen::Index{1} << n_sites)) {
    throw SizeError(fmt::format("state has {} amplitudes, expected 2^{}",
                                amplitudes_.size(), n_sites));
  }
  const double norm = amplitudes_.norm();
  if (!(std::abs(norm - 1.0) <= kStateTol)) {
    throw NumericError(fmt::format("state norm {:.17g} is not 1", norm));
  }
}

PureState PureState::normalized(int n_sites, Eigen::VectorXcd amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw NumericError("cannot normalize a zero or non-finite state");
  }
  amplitudes /= norm;
  return PureState(n_sites, std::move(amplitudes));
}

PureState all_down_state(int n_sites, int cap) {
  check_site_count(n_sites, cap);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_sites);
  v[0] = 1.0;
  return PureState(n_sites, std::move(v));
}

PureState basis_state(int n_sites, BasisState state) {
  check_site_count(n_sites, kMaxSiteCap);
  if (state.bits >> n_sites) throw std::invalid_argument("basis state exceeds chain length");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_sites);
  v[static_cast<Eigen::Index>(state.bits)] = 1.0;
  return PureState(n_sites, std::move(v));
}

DensityMatrix::DensityMatrix(int n_sites, Eigen::MatrixXcd entries, Validation validation)
    : n_sites_(n_sites), entries_(std::move(entries)) {
  check_site_count(n_sites, kMaxSiteCap);
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  if (entries_.rows() != dim || entries_.cols() != dim) {
    throw SizeError(fmt::format("density matrix is {}x{}, expected {}x{}",
                                entries_.rows(), entries_.cols(), dim, dim));
  }
  const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (!(herm <= kStateTol)) {
    throw NumericError(fmt::format("density matrix not Hermitian (max dev {:.3g})", herm));
  }
  const complex tr = entries_.trace();
  if (!(std::abs(tr - 1.0) <= kStateTol)) {
    throw NumericError(fmt::format("density matrix trace {:.17g} is not 1", tr.real()));
  }
  if (validation == Validation::full) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kStateTol) {
      throw NumericError("density matrix has negative eigenvalues");
    }
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  const auto& a = psi.amplitudes();
  return DensityMatrix(psi.n_sites(), a * a.adjoint(), Validation::structural);
}

DensityMatrix DensityMatrix::maximally_mixed(int n_sites) {
  check_site_count(n_sites, kMaxSiteCap);
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  return DensityMatrix(n_sites,
                       Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim),
                       Validation::structural);
}

}  // namespace wharm
