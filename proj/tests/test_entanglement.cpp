#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "wharm/entanglement.hpp"
#include "wharm/errors.hpp"

using namespace wharm;

namespace {

Eigen::VectorXcd ghz(int n) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
  v[0] = v[v.size() - 1] = 1.0 / std::sqrt(2.0);
  return v;
}

Eigen::VectorXd sorted_eigenvalues(const Eigen::MatrixXcd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace

TEST_CASE("balanced bipartition counts and canonical form") {
  CHECK(balanced_bipartitions(2).size() == 1);
  CHECK(balanced_bipartitions(4).size() == 3);
  CHECK(balanced_bipartitions(5).size() == 10);
  CHECK(balanced_bipartitions(10).size() == 126);
  CHECK(balanced_bipartitions(11).size() == 462);
  for (int n = 2; n <= 9; ++n) {
    std::uint64_t previous = 0;
    for (const auto& p : balanced_bipartitions(n)) {
      CHECK((p.subset_a & 1) == 1);
      CHECK(std::abs(p.size_a() - p.size_b()) <= 1);
      CHECK(p.subset_a > previous);
      previous = p.subset_a;
    }
  }
  // Contiguous blocks containing site 0 on a ring of 6: {0,1,2}, {5,0,1}, {4,5,0}.
  CHECK(balanced_bipartitions(6, PartitionMode::contiguous).size() == 3);
  CHECK_THROWS_AS(balanced_bipartitions(1), SizeError);
}

TEST_CASE("reduced density of a Bell pair is maximally mixed") {
  const PureState bell(2, ghz(2));
  for (std::uint64_t subset : {0b01ULL, 0b10ULL}) {
    const auto rho = reduced_density(bell, subset);
    CHECK((rho.entries() - Eigen::MatrixXcd::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-14);
  }
  CHECK_THROWS_AS(reduced_density(bell, 0), ConfigError);
  CHECK_THROWS_AS(reduced_density(bell, 0b11), ConfigError);
  CHECK_THROWS_AS(reduced_density(bell, 0b100), ConfigError);
}

TEST_CASE("reduced density matches the explicit partial trace") {
  std::mt19937_64 rng(20);
  for (int n = 2; n <= 6; ++n) {
    const PureState psi(n, oracle::random_state(n, rng));
    for (std::uint64_t subset = 1; subset + 1 < (std::uint64_t{1} << n); ++subset) {
      const auto rho = reduced_density(psi, subset);
      CHECK(rho.n_sites() == std::popcount(subset));
      CHECK((rho.entries() - oracle::partial_trace(psi.amplitudes(), n, subset)).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}

TEST_CASE("product states have pure reductions") {
  std::mt19937_64 rng(21);
  const int n = 5;
  std::vector<Eigen::Vector2cd> sites;
  for (int i = 0; i < n; ++i) sites.push_back(oracle::random_site_state(rng));
  const PureState psi(n, oracle::product_state(sites));
  for (std::uint64_t subset = 1; subset < 31; ++subset) {
    CHECK(purity(reduced_density(psi, subset)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto stats = mean_participation(psi);
  CHECK(stats.mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(stats.variance < 1e-20);
  CHECK(stats.partitions == 10);
}

TEST_CASE("Schmidt symmetry of complementary reductions") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    const PureState psi(4, oracle::random_state(4, rng));
    for (std::uint64_t a = 1; a < 15; ++a) {
      const auto ra = reduced_density(psi, a);
      const auto rb = reduced_density(psi, 15 & ~a);
      CHECK(std::abs(purity(ra) - purity(rb)) < 1e-10);
      Eigen::VectorXd ea = sorted_eigenvalues(ra.entries());
      Eigen::VectorXd eb = sorted_eigenvalues(rb.entries());
      // The larger side carries extra zero eigenvalues.
      const Eigen::Index k = std::min(ea.size(), eb.size());
      CHECK((ea.tail(k) - eb.tail(k)).cwiseAbs().maxCoeff() < 1e-10);
      for (Eigen::Index i = 0; i < ea.size() - k; ++i) CHECK(std::abs(ea[i]) < 1e-10);
      for (Eigen::Index i = 0; i < eb.size() - k; ++i) CHECK(std::abs(eb[i]) < 1e-10);
    }
  }
}

TEST_CASE("purity examples") {
  CHECK(purity(DensityMatrix::maximally_mixed(1)) == doctest::Approx(0.5));
  CHECK(purity(DensityMatrix::from_pure(all_down_state(3))) == doctest::Approx(1.0));
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 0.75;
  d(1, 1) = 0.25;
  CHECK(purity(DensityMatrix(1, d)) == doctest::Approx(0.625));
}

TEST_CASE("participation numbers of entangled states") {
  const PureState bell(2, ghz(2));
  CHECK(participation_number(bell, balanced_bipartitions(2).front()) == doctest::Approx(2.0));

  const PureState g4(4, ghz(4));
  for (const auto& p : balanced_bipartitions(4)) CHECK(participation_number(g4, p) == doctest::Approx(2.0));

  for (int n = 2; n <= 10; ++n) {
    const auto stats = mean_participation(PureState(n, ghz(n)));
    CHECK(stats.mean == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(stats.variance < 1e-20);
  }
}

TEST_CASE("ParticipationEvaluator matches the explicit partial trace") {
  std::mt19937_64 rng(23);
  for (int n : {3, 6, 7}) {
    const Eigen::VectorXcd v = oracle::random_state(n, rng);
    const ParticipationEvaluator eval(n);
    const auto stats = eval(v);
    double sum = 0.0;
    double sq = 0.0;
    for (const auto& p : eval.partitions()) {
      const Eigen::MatrixXcd rho = oracle::partial_trace(v, n, p.subset_a);
      const double np = 1.0 / (rho * rho).trace().real();
      CHECK(np >= 1.0);
      CHECK(np <= std::ldexp(1.0, std::min(p.size_a(), p.size_b())) * (1 + 1e-12));
      sum += np;
      sq += np * np;
    }
    const double k = static_cast<double>(eval.partitions().size());
    CHECK(stats.mean == doctest::Approx(sum / k).epsilon(1e-12));
    CHECK(stats.variance == doctest::Approx(sq / k - (sum / k) * (sum / k)).epsilon(1e-8));
  }
}

TEST_CASE("mean participation is invariant under site relabeling") {
  std::mt19937_64 rng(24);
  const int n = 6;
  const std::vector<int> perm{2, 5, 0, 3, 1, 4};
  const Eigen::VectorXcd v = oracle::random_state(n, rng);
  Eigen::VectorXcd w(v.size());
  for (Eigen::Index s = 0; s < v.size(); ++s) {
    Eigen::Index t = 0;
    for (int i = 0; i < n; ++i) {
      if ((s >> i) & 1) t |= Eigen::Index{1} << perm[i];
    }
    w[t] = v[s];
  }
  const auto a = mean_participation(PureState(n, v));
  const auto b = mean_participation(PureState(n, w));
  CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-12));
  CHECK(a.variance == doctest::Approx(b.variance).epsilon(1e-9));
}

TEST_CASE("global entanglement examples") {
  std::mt19937_64 rng(25);
  std::vector<Eigen::Vector2cd> sites;
  for (int i = 0; i < 6; ++i) sites.push_back(oracle::random_site_state(rng));
  CHECK(std::abs(global_entanglement(oracle::product_state(sites), 6)) < 1e-12);

  for (int n = 2; n <= 10; ++n) CHECK(global_entanglement(PureState(n, ghz(n))) == doctest::Approx(1.0));

  for (double theta : {0.1, 0.4, 0.7853981633974483, 1.2}) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
    v[0] = std::cos(theta);
    v[3] = std::sin(theta);
    CHECK(global_entanglement(v, 2) == doctest::Approx(std::pow(std::sin(2 * theta), 2)).epsilon(1e-12));
  }
}

TEST_CASE("global entanglement from Bloch vectors matches single-site traces") {
  std::mt19937_64 rng(26);
  const int n = 5;
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXcd v = oracle::random_state(n, rng);
    double mean_purity = 0.0;
    for (int k = 0; k < n; ++k) {
      const Eigen::MatrixXcd rho = oracle::partial_trace(v, n, std::uint64_t{1} << k);
      mean_purity += (rho * rho).trace().real() / n;

      const Eigen::Vector3d b = bloch_vector(v, n, k);
      CHECK(b[0] == doctest::Approx(2.0 * rho(1, 0).real()).epsilon(1e-12));
      CHECK(std::abs(b[1]) == doctest::Approx(std::abs(2.0 * rho(1, 0).imag())).epsilon(1e-12));
      CHECK(b[2] == doctest::Approx((rho(1, 1) - rho(0, 0)).real()).epsilon(1e-12));
    }
    const double ge = global_entanglement(v, n);
    CHECK(std::abs(ge - 2.0 * (1.0 - mean_purity)) < 1e-12);
    CHECK(ge >= 0.0);
    CHECK(ge <= 1.0);
  }
}

TEST_CASE("sigma_x observable") {
  CHECK(sigma_x_mean(all_down_state(6)) == 0.0);

  const Eigen::Vector2cd plus_x = Eigen::Vector2cd(1.0, 1.0) / std::sqrt(2.0);
  const Eigen::VectorXcd px = oracle::product_state(std::vector<Eigen::Vector2cd>(4, plus_x));
  CHECK(sigma_x_mean(px, 4) == doctest::Approx(1.0));

  const double a = 0.785398163397448;  // h_x t = pi/4
  Eigen::VectorXcd rabi(2);
  rabi << complex(std::cos(a), 0.0), complex(0.0, -std::sin(a));
  CHECK(std::abs(sigma_x_mean(rabi, 1)) < 1e-15);

  std::mt19937_64 rng(27);
  const int n = 4;
  const Eigen::VectorXcd v = oracle::random_state(n, rng);
  double mean = 0.0;
  for (int k = 0; k < n; ++k) {
    const Eigen::MatrixXcd sx = oracle::site_operator(oracle::pauli_x(), k, n).cast<complex>();
    const double ref = v.dot(sx * v).real();
    CHECK(sigma_x_site(v, n, k) == doctest::Approx(ref).epsilon(1e-12));
    mean += ref / n;
  }
  CHECK(sigma_x_mean(v, n) == doctest::Approx(mean).epsilon(1e-12));
}
