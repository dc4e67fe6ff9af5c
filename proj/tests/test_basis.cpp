#include <doctest.h>

#include <bit>
#include <random>

#include "oracles.hpp"
#include "wharm/basis.hpp"
#include "wharm/errors.hpp"

using namespace wharm;

TEST_CASE("all_down_state puts unit amplitude on index 0") {
  const auto one = all_down_state(1);
  CHECK(one.dim() == 2);
  CHECK(one[0] == complex(1.0, 0.0));
  CHECK(one[1] == complex(0.0, 0.0));

  const auto two = all_down_state(2);
  CHECK(two.dim() == 4);
  CHECK(two[0] == complex(1.0, 0.0));
  for (std::size_t i = 1; i < 4; ++i) CHECK(two[i] == complex(0.0, 0.0));

  const auto ten = all_down_state(10);
  CHECK(ten.dim() == 1024);
  CHECK(ten.amplitudes().squaredNorm() == 1.0);
}

TEST_CASE("all_down_state rejects sizes outside the cap") {
  CHECK_THROWS_AS(all_down_state(0), SizeError);
  CHECK_THROWS_AS(all_down_state(15), SizeError);
  CHECK_NOTHROW(all_down_state(15, 16));
  CHECK_THROWS_AS(check_site_count(5, kMaxSiteCap + 1), SizeError);
}

TEST_CASE("flip sets mask bits on compatible kets") {
  CHECK(flip(BasisState{0b00}, HarmonicIndex{0b11}) == BasisState{0b11});
  CHECK(flip(BasisState{0b01}, HarmonicIndex{0b10}) == BasisState{0b11});
  CHECK_THROWS_AS(flip(BasisState{0b01}, HarmonicIndex{0b01}), IncompatibleError);
}

TEST_CASE("compatible_kets enumerates ascending kets with mask sites down") {
  auto bits = [](const std::vector<BasisState>& v) {
    std::vector<std::uint64_t> out;
    for (auto s : v) out.push_back(s.bits);
    return out;
  };
  CHECK(bits(compatible_kets(HarmonicIndex{0}, 2)) == std::vector<std::uint64_t>{0, 1, 2, 3});
  CHECK(bits(compatible_kets(HarmonicIndex{0b01}, 2)) == std::vector<std::uint64_t>{0b00, 0b10});
  CHECK(bits(compatible_kets(HarmonicIndex{0b11}, 2)) == std::vector<std::uint64_t>{0});
}

TEST_CASE("compatible ket counts sum to 3^N") {
  for (int n = 1; n <= 8; ++n) {
    std::size_t total = 0;
    std::size_t expected = 1;
    for (int i = 0; i < n; ++i) expected *= 3;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      const auto kets = compatible_kets(HarmonicIndex{mask}, n);
      CHECK(kets.size() == (std::size_t{1} << (n - std::popcount(mask))));
      total += kets.size();
    }
    CHECK(total == expected);
  }
}

TEST_CASE("flip raises bits and popcount monotonically") {
  const int n = 6;
  for (std::uint64_t mask = 0; mask < 64; ++mask) {
    for (auto s : compatible_kets(HarmonicIndex{mask}, n)) {
      const auto f = flip(s, HarmonicIndex{mask});
      CHECK(f.bits >= s.bits);
      CHECK(std::popcount(f.bits) == std::popcount(s.bits) + std::popcount(mask));
    }
  }
}

TEST_CASE("for_each_compatible_ket matches compatible_kets") {
  const int n = 7;
  for (std::uint64_t mask : {0ULL, 1ULL, 0b1010ULL, 0b1111111ULL, 0b1000001ULL}) {
    std::vector<std::uint64_t> visited;
    for_each_compatible_ket(mask, n, [&](std::uint64_t s) { visited.push_back(s); });
    const auto kets = compatible_kets(HarmonicIndex{mask}, n);
    REQUIRE(visited.size() == kets.size());
    for (std::size_t i = 0; i < kets.size(); ++i) CHECK(visited[i] == kets[i].bits);
  }
}

TEST_CASE("PureState validates length and norm") {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v[1] = 1.0;
  CHECK_NOTHROW(PureState(2, v));
  CHECK_THROWS_AS(PureState(3, v), SizeError);
  v[1] = 2.0;
  CHECK_THROWS_AS(PureState(2, v), NumericError);
  const auto p = PureState::normalized(2, v);
  CHECK(p[1].real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(PureState::normalized(2, Eigen::VectorXcd::Zero(4)), NumericError);
}

TEST_CASE("DensityMatrix validation") {
  std::mt19937_64 rng(7);
  const auto rho = oracle::random_density(3, rng);
  CHECK_NOTHROW(DensityMatrix(3, rho));

  Eigen::MatrixXcd bad_trace = 2.0 * rho;
  CHECK_THROWS_AS(DensityMatrix(3, bad_trace), NumericError);

  Eigen::MatrixXcd non_hermitian = rho;
  non_hermitian(0, 1) += complex(0.0, 0.01);
  CHECK_THROWS_AS(DensityMatrix(3, non_hermitian), NumericError);

  // Unit trace and Hermitian but with a negative eigenvalue.
  Eigen::MatrixXcd indefinite = Eigen::MatrixXcd::Zero(2, 2);
  indefinite(0, 0) = 1.5;
  indefinite(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix(1, indefinite), NumericError);
  CHECK_NOTHROW(DensityMatrix(1, indefinite, Validation::structural));

  CHECK_THROWS_AS(DensityMatrix(2, rho), SizeError);
}

TEST_CASE("DensityMatrix factories") {
  const auto mixed = DensityMatrix::maximally_mixed(3);
  CHECK(mixed.entries().isApprox(Eigen::MatrixXcd::Identity(8, 8) / 8.0));

  std::mt19937_64 rng(11);
  const PureState psi(3, oracle::random_state(3, rng));
  const auto rho = DensityMatrix::from_pure(psi);
  const Eigen::MatrixXcd expected = psi.amplitudes() * psi.amplitudes().adjoint();
  CHECK((rho.entries() - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("ChainSpec validation") {
  ChainSpec spec;
  spec.n_sites = 4;
  CHECK_NOTHROW(spec.validate());
  spec.field_x = std::nan("");
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec.field_x = 0.0;
  spec.n_sites = 0;
  CHECK_THROWS_AS(spec.validate(), SizeError);
  spec.n_sites = 16;
  CHECK_THROWS_AS(spec.validate(), SizeError);
  spec.site_cap = 16;
  CHECK_NOTHROW(spec.validate());
}
