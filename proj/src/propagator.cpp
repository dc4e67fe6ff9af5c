#include "wharm/propagator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include <fmt/format.h>
#include <lapacke.h>

#include "wharm/errors.hpp"

namespace wharm {

namespace {

int sites_for_dim(Eigen::Index dim, int cap) {
  if (dim < 2 || !std::has_single_bit(static_cast<std::uint64_t>(dim))) {
    throw SizeError(fmt::format("dimension {} is not 2^N", dim));
  }
  const int n = std::countr_zero(static_cast<std::uint64_t>(dim));
  check_site_count(n, cap);
  return n;
}

}  // namespace

SpectralDecomposition spectral_decompose(const Eigen::MatrixXd& h, int site_cap) {
  if (h.rows() != h.cols()) throw SizeError("matrix is not square");
  const int n_sites = sites_for_dim(h.rows(), site_cap);
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("matrix is not symmetric");
  }
  SpectralDecomposition out;
  out.n_sites = n_sites;
  out.eigenvectors = h;
  out.eigenvalues.resize(h.rows());
  const auto n = static_cast<lapack_int>(h.rows());
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, out.eigenvectors.data(),
                                         n, out.eigenvalues.data());
  if (info != 0) throw NumericError(fmt::format("dsyevd failed (info = {})", info));
  return out;
}

SpectralDecomposition spectral_decompose(const ChainSpec& spec) {
  return spectral_decompose(build_dense(spec), spec.site_cap);
}

void TimeGrid::validate() const {
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || !std::isfinite(dt)) {
    throw ConfigError("time grid values must be finite");
  }
  if (!(t_end > t_start)) throw ConfigError("time grid needs t_end > t_start");
  if (!(dt > 0.0)) throw ConfigError("time grid needs dt > 0");
  if ((t_end - t_start) / dt > 1e7) throw ConfigError("time grid exceeds 1e7 steps");
}

std::vector<double> TimeGrid::samples() const {
  validate();
  const auto steps = static_cast<std::size_t>(std::floor((t_end - t_start) / dt + 1e-6));
  std::vector<double> out(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) out[k] = t_start + static_cast<double>(k) * dt;
  return out;
}

SpectralEvolver::SpectralEvolver(const SpectralDecomposition& decomp, const PureState& psi0)
    : decomp_(&decomp) {
  if (psi0.dim() != decomp.dim()) throw SizeError("state and decomposition dimensions differ");
  const auto& a = psi0.amplitudes();
  real_coeffs_ = a.imag().cwiseAbs().maxCoeff() == 0.0;
  if (real_coeffs_) {
    coeffs_ = decomp.eigenvectors.transpose() * a.real();
  } else {
    complex_coeffs_ = decomp.eigenvectors.transpose().cast<complex>() * a;
  }
}

Eigen::VectorXcd SpectralEvolver::state_at(double t) const {
  const double times[] = {t};
  return states_at(times).col(0);
}

Eigen::MatrixXcd SpectralEvolver::states_at(std::span<const double> times) const {
  const auto dim = static_cast<Eigen::Index>(decomp_->dim());
  const auto count = static_cast<Eigen::Index>(times.size());
  const Eigen::VectorXd& e = decomp_->eigenvalues;
  Eigen::MatrixXd re(dim, count);
  Eigen::MatrixXd im(dim, count);
  for (Eigen::Index k = 0; k < count; ++k) {
    const double t = times[static_cast<std::size_t>(k)];
    for (Eigen::Index j = 0; j < dim; ++j) {
      const complex c = real_coeffs_ ? complex(coeffs_[j], 0.0) : complex_coeffs_[j];
      const complex z = std::polar(1.0, -e[j] * t) * c;
      re(j, k) = z.real();
      im(j, k) = z.imag();
    }
  }
  Eigen::MatrixXcd out(dim, count);
  out.real() = decomp_->eigenvectors * re;
  out.imag() = decomp_->eigenvectors * im;
  return out;
}

PureState evolve_spectral(const SpectralDecomposition& decomp, const PureState& psi0, double t) {
  return PureState(psi0.n_sites(), SpectralEvolver(decomp, psi0).state_at(t));
}

KrylovPropagator::KrylovPropagator(const ChainSpec& spec, KrylovOptions options)
    : op_(spec), options_(options) {
  if (!(options_.step > 0.0)) throw ConfigError("Krylov step must be positive");
  if (options_.subspace_dim < 4) throw ConfigError("Krylov subspace dimension must be >= 4");
  if (!(options_.tolerance > 0.0)) throw ConfigError("Krylov tolerance must be positive");
}

double KrylovPropagator::try_step(const Eigen::VectorXcd& in, double tau,
                                  Eigen::VectorXcd& out) const {
  const int m = options_.subspace_dim;
  const double beta0 = in.norm();
  std::vector<Eigen::VectorXcd> q;
  q.reserve(static_cast<std::size_t>(m));
  q.push_back(in / beta0);
  std::vector<double> alpha;
  std::vector<double> beta;
  Eigen::VectorXcd w;
  Eigen::VectorXcd y;
  double estimate = 0.0;

  // Lanczos with full reorthogonalization; the subspace grows until the
  // error estimate of exp(-i T tau) e_1 drops below tolerance or m is hit.
  for (int j = 0; j < m; ++j) {
    op_.apply(q[j], w);
    alpha.push_back(q[j].dot(w).real());
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) w -= q[i].dot(w) * q[i];
    }
    const double b = w.norm();
    const int k = j + 1;

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) tri(i, i) = alpha[i];
    for (int i = 0; i + 1 < k; ++i) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    const Eigen::MatrixXd& qv = es.eigenvectors();
    Eigen::VectorXcd phase(k);
    for (int i = 0; i < k; ++i) phase[i] = std::polar(qv(0, i), -es.eigenvalues()[i] * tau);
    y = qv.cast<complex>() * phase;

    const double scale = std::max(1.0, std::abs(alpha[j]));
    const bool breakdown = b <= 1e-13 * scale;
    estimate = breakdown ? 0.0 : b * std::abs(y[k - 1]);
    if (breakdown || (k >= 4 && estimate <= options_.tolerance) || k == m) break;
    beta.push_back(b);
    q.push_back(w / b);
  }

  out = Eigen::VectorXcd::Zero(in.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) out += y[i] * q[static_cast<std::size_t>(i)];
  out *= beta0;
  return estimate;
}

void KrylovPropagator::advance(Eigen::VectorXcd& amplitudes, double t, KrylovStats* stats) const {
  if (static_cast<std::size_t>(amplitudes.size()) != op_.dim()) {
    throw SizeError("state and Hamiltonian dimensions differ");
  }
  KrylovStats local;
  KrylovStats& st = stats ? *stats : local;
  const double direction = t < 0.0 ? -1.0 : 1.0;
  double remaining = std::abs(t);
  Eigen::VectorXcd next;
  while (remaining > 0.0) {
    double tau = std::min(options_.step, remaining);
    // Avoid a sliver step at the end from accumulated rounding.
    if (remaining - tau < 1e-12 * options_.step) tau = remaining;
    int halvings = 0;
    double estimate = try_step(amplitudes, direction * tau, next);
    while (estimate > options_.tolerance) {
      if (++halvings > options_.max_bisections) {
        throw NumericError(fmt::format(
            "Krylov step did not converge (estimate {:.3g} after {} bisections)", estimate,
            options_.max_bisections));
      }
      tau *= 0.5;
      estimate = try_step(amplitudes, direction * tau, next);
    }
    st.bisections += halvings;
    st.max_error_estimate = std::max(st.max_error_estimate, estimate);
    const double norm = next.norm();
    st.norm_drift = std::max(st.norm_drift, std::abs(norm - 1.0));
    amplitudes = next / norm;
    remaining = tau == remaining ? 0.0 : remaining - tau;
    ++st.steps;
  }
}

KrylovResult evolve_krylov(const ChainSpec& spec, const PureState& psi0, double t,
                           KrylovOptions options) {
  Eigen::VectorXcd v = psi0.amplitudes();
  KrylovStats stats;
  KrylovPropagator(spec, options).advance(v, t, &stats);
  return {PureState(psi0.n_sites(), std::move(v)), stats};
}

DensityMatrix evolve_density(const SpectralDecomposition& decomp, const DensityMatrix& rho0,
                             double t) {
  if (rho0.dim() != decomp.dim()) throw SizeError("density matrix and decomposition differ");
  const Eigen::MatrixXcd v = decomp.eigenvectors.cast<complex>();
  Eigen::MatrixXcd eig = v.adjoint() * rho0.entries() * v;
  const Eigen::VectorXd& e = decomp.eigenvalues;
  for (Eigen::Index k = 0; k < eig.cols(); ++k) {
    for (Eigen::Index j = 0; j < eig.rows(); ++j) eig(j, k) *= std::polar(1.0, -(e[j] - e[k]) * t);
  }
  Eigen::MatrixXcd rho = v * eig * v.adjoint();
  // Restore exact Hermiticity lost to rounding.
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(rho0.n_sites(), std::move(rho), Validation::structural);
}

DensityMatrix gibbs_state(const SpectralDecomposition& decomp, double beta) {
  if (!std::isfinite(beta) || beta < 0.0) throw ConfigError("beta must be finite and >= 0");
  const Eigen::VectorXd& e = decomp.eigenvalues;
  const double ground = e.minCoeff();
  Eigen::VectorXd w(e.size());
  for (Eigen::Index j = 0; j < e.size(); ++j) w[j] = std::exp(-beta * (e[j] - ground));
  w /= w.sum();
  const Eigen::MatrixXd& v = decomp.eigenvectors;
  Eigen::MatrixXd rho = v * w.asDiagonal() * v.transpose();
  rho = 0.5 * (rho + rho.transpose()).eval();
  return DensityMatrix(decomp.n_sites, rho.cast<complex>(), Validation::structural);
}

}  // namespace wharm
