#pragma once

// Time evolution under a time-independent Ising Hamiltonian (hbar = 1).

#include <span>

#include <Eigen/Dense>

#include "wharm/basis.hpp"
#include "wharm/hamiltonian.hpp"

namespace wharm {

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // orthonormal columns
  int n_sites = 0;

  std::size_t dim() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

/// Full eigendecomposition of a real symmetric 2^N x 2^N matrix. Throws
/// std::invalid_argument when the input is not symmetric to 1e-12 and
/// SizeError when it is not 2^N square with N <= site_cap.
SpectralDecomposition spectral_decompose(const Eigen::MatrixXd& h,
                                         int site_cap = kDefaultSiteCap);
SpectralDecomposition spectral_decompose(const ChainSpec& spec);

struct TimeGrid {
  double t_start = 0.0;
  double t_end = 1.0;
  double dt = 0.01;

  /// Throws ConfigError when the grid is empty or has more than 1e7 steps.
  void validate() const;
  /// t_start, t_start + dt, ..., up to t_end inclusive (within dt/1e6).
  std::vector<double> samples() const;
};

/// Psi(t) = V exp(-iEt) V^T Psi(0), evaluated directly for any real t.
PureState evolve_spectral(const SpectralDecomposition& decomp, const PureState& psi0, double t);

/// Reuses the eigenbasis coefficients of one initial state for many times.
class SpectralEvolver {
 public:
  SpectralEvolver(const SpectralDecomposition& decomp, const PureState& psi0);

  Eigen::VectorXcd state_at(double t) const;
  /// Column k holds Psi(times[k]).
  Eigen::MatrixXcd states_at(std::span<const double> times) const;

 private:
  const SpectralDecomposition* decomp_;
  Eigen::VectorXd coeffs_;
  Eigen::VectorXcd complex_coeffs_;
  bool real_coeffs_ = true;
};

struct KrylovOptions {
  double step = 0.05;
  int subspace_dim = 30;
  double tolerance = 1e-10;
  int max_bisections = 30;
};

struct KrylovStats {
  double norm_drift = 0.0;  // largest |norm - 1| seen before renormalizing
  double max_error_estimate = 0.0;
  int steps = 0;
  int bisections = 0;
};

struct KrylovResult {
  PureState state;
  KrylovStats stats;
};

/// Advances amplitudes by time t under H with Lanczos steps, bisecting any
/// step whose a posteriori error estimate exceeds the tolerance.
class KrylovPropagator {
 public:
  KrylovPropagator(const ChainSpec& spec, KrylovOptions options = {});

  const KrylovOptions& options() const { return options_; }

  /// Evolves `amplitudes` in place by t. Throws NumericError when a step
  /// cannot meet the tolerance within max_bisections halvings.
  void advance(Eigen::VectorXcd& amplitudes, double t, KrylovStats* stats = nullptr) const;

 private:
  /// One exponential step of length tau; returns the error estimate.
  double try_step(const Eigen::VectorXcd& in, double tau, Eigen::VectorXcd& out) const;

  IsingOperator op_;
  KrylovOptions options_;
};

KrylovResult evolve_krylov(const ChainSpec& spec, const PureState& psi0, double t,
                           KrylovOptions options = {});

/// U rho U^dagger with U = V exp(-iEt) V^T.
DensityMatrix evolve_density(const SpectralDecomposition& decomp, const DensityMatrix& rho0,
                             double t);

/// exp(-beta H)/Z in the eigenbasis, with the ground energy shifted out.
DensityMatrix gibbs_state(const SpectralDecomposition& decomp, double beta);

}  // namespace wharm
