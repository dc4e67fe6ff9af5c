#include "wharm/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "wharm/errors.hpp"

namespace wharm {

HamiltonianSplit split_hamiltonian(const ChainSpec& spec) {
  ChainSpec diagonal = spec;
  diagonal.field_x = 0.0;
  ChainSpec transverse = spec;
  transverse.coupling = 0.0;
  transverse.field_z = 0.0;
  if (spec.quant_axis == QuantAxis::z) return {diagonal, transverse};
  return {transverse, diagonal};
}

int bond_count(const ChainSpec& spec) {
  // The wrap-around bond would duplicate the single bond of a 2-site ring.
  if (spec.boundary == Boundary::periodic && spec.n_sites > 2) return spec.n_sites;
  return spec.n_sites - 1;
}

Eigen::VectorXd diagonal_energies(const ChainSpec& spec) {
  spec.validate();
  const int n = spec.n_sites;
  const int bonds = bond_count(spec);
  const auto dim = static_cast<Eigen::Index>(spec.dim());
  Eigen::VectorXd diag(dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    const auto bits = static_cast<std::uint64_t>(s);
    auto z = [bits](int i) { return ((bits >> i) & 1U) ? 1.0 : -1.0; };
    double bond_sum = 0.0;
    for (int b = 0; b < bonds; ++b) bond_sum += z(b) * z((b + 1) % n);
    double field_sum = 0.0;
    for (int i = 0; i < n; ++i) field_sum += z(i);
    diag[s] = spec.coupling * bond_sum + spec.field_z * field_sum;
  }
  return diag;
}

Eigen::MatrixXd build_dense(const ChainSpec& spec) {
  const Eigen::VectorXd diag = diagonal_energies(spec);
  const auto dim = diag.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  h.diagonal() = diag;
  if (spec.field_x != 0.0) {
    for (Eigen::Index s = 0; s < dim; ++s) {
      for (int i = 0; i < spec.n_sites; ++i) {
        h(s ^ (Eigen::Index{1} << i), s) = spec.field_x;
      }
    }
  }
  return h;
}

IsingOperator::IsingOperator(const ChainSpec& spec)
    : spec_(spec), diagonal_(diagonal_energies(spec)) {}

void IsingOperator::apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
  const auto dim = diagonal_.size();
  if (in.size() != dim) {
    throw SizeError(fmt::format("vector length {} does not match dimension {}", in.size(), dim));
  }
  out.resize(dim);
  const double hx = spec_.field_x;
  const int n = spec_.n_sites;
  for (Eigen::Index s = 0; s < dim; ++s) {
    complex acc = diagonal_[s] * in[s];
    if (hx != 0.0) {
      complex flips = 0.0;
      for (int i = 0; i < n; ++i) flips += in[s ^ (Eigen::Index{1} << i)];
      acc += hx * flips;
    }
    out[s] = acc;
  }
}

Eigen::VectorXcd IsingOperator::operator()(const Eigen::VectorXcd& in) const {
  Eigen::VectorXcd out;
  apply(in, out);
  return out;
}

Eigen::VectorXcd apply(const ChainSpec& spec, const Eigen::VectorXcd& v) {
  return IsingOperator(spec)(v);
}

void rotate_axis_inplace(Eigen::VectorXcd& amplitudes, int n_sites) {
  const auto dim = Eigen::Index{1} << n_sites;
  if (amplitudes.size() != dim) throw SizeError("rotate_axis: length mismatch");
  constexpr double r = std::numbers::sqrt2 / 2.0;
  for (int i = 0; i < n_sites; ++i) {
    const Eigen::Index bit = Eigen::Index{1} << i;
    for (Eigen::Index s = 0; s < dim; ++s) {
      if (s & bit) continue;
      const complex down = amplitudes[s];
      const complex up = amplitudes[s | bit];
      amplitudes[s] = r * (up - down);
      amplitudes[s | bit] = r * (up + down);
    }
  }
}

PureState rotate_axis(const PureState& state) {
  Eigen::VectorXcd v = state.amplitudes();
  rotate_axis_inplace(v, state.n_sites());
  return PureState(state.n_sites(), std::move(v));
}

SpacingRatioResult mean_spacing_ratio(std::span<const double> levels) {
  const std::size_t n = levels.size();
  const std::size_t lo = n / 4;
  const std::size_t hi = n - n / 4;
  SpacingRatioResult out;
  out.n_levels = hi - lo;
  if (out.n_levels < 10) {
    throw NumericError(fmt::format("spacing ratio needs >= 10 levels, got {}", out.n_levels));
  }
  if (!std::is_sorted(levels.begin(), levels.end())) {
    throw std::invalid_argument("levels must be ascending");
  }
  const double spread = std::max(1.0, std::abs(levels.back() - levels.front()));
  const double zero_tol = 1e-9 * spread;

  std::vector<double> spacings;
  spacings.reserve(out.n_levels - 1);
  std::size_t zeros = 0;
  for (std::size_t k = lo; k + 1 < hi; ++k) {
    double s = levels[k + 1] - levels[k];
    if (s <= zero_tol) {
      s = 0.0;
      ++zeros;
    }
    spacings.push_back(s);
  }
  out.degenerate_fraction = static_cast<double>(zeros) / static_cast<double>(spacings.size());

  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < spacings.size(); ++k) {
    const double a = spacings[k];
    const double b = spacings[k + 1];
    const double big = std::max(a, b);
    if (big == 0.0) continue;
    sum += std::min(a, b) / big;
    ++out.n_ratios;
  }
  if (out.n_ratios == 0) {
    out.mean_ratio = std::nan("");
  } else {
    out.mean_ratio = sum / static_cast<double>(out.n_ratios);
  }
  return out;
}

namespace {

struct Symmetry {
  std::vector<int> site_image;  // site i -> site_image[i]
  bool spin_flip = false;
};

std::vector<Symmetry> symmetry_group(const ChainSpec& spec) {
  const int n = spec.n_sites;
  std::vector<std::vector<int>> perms;
  auto identity = [n] {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    return p;
  };
  auto reflect = [n](const std::vector<int>& p) {
    std::vector<int> q(n);
    for (int i = 0; i < n; ++i) q[i] = n - 1 - p[i];
    return q;
  };
  if (spec.boundary == Boundary::periodic && n > 2) {
    for (int k = 0; k < n; ++k) {
      std::vector<int> p(n);
      for (int i = 0; i < n; ++i) p[i] = (i + k) % n;
      perms.push_back(p);
      perms.push_back(reflect(p));
    }
  } else {
    perms.push_back(identity());
    perms.push_back(reflect(identity()));
  }
  std::vector<Symmetry> group;
  for (auto& p : perms) {
    group.push_back({p, false});
    if (spec.field_z == 0.0) group.push_back({p, true});
  }
  return group;
}

std::uint64_t act(const Symmetry& g, std::uint64_t bits, int n) {
  std::uint64_t out = 0;
  for (int i = 0; i < n; ++i) {
    if ((bits >> i) & 1U) out |= std::uint64_t{1} << g.site_image[i];
  }
  if (g.spin_flip) out ^= (std::uint64_t{1} << n) - 1;
  return out;
}

struct Orbits {
  std::vector<std::int64_t> orbit_of;  // basis state -> orbit index
  std::vector<std::vector<std::uint64_t>> members;
};

Orbits symmetric_orbits(const ChainSpec& spec) {
  spec.validate();
  const int n = spec.n_sites;
  const auto group = symmetry_group(spec);
  Orbits o;
  o.orbit_of.assign(spec.dim(), -1);
  for (std::uint64_t s = 0; s < spec.dim(); ++s) {
    if (o.orbit_of[s] >= 0) continue;
    std::vector<std::uint64_t> orbit;
    for (const auto& g : group) orbit.push_back(act(g, s, n));
    std::sort(orbit.begin(), orbit.end());
    orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
    const auto idx = static_cast<std::int64_t>(o.members.size());
    for (auto t : orbit) o.orbit_of[t] = idx;
    o.members.push_back(std::move(orbit));
  }
  return o;
}

}  // namespace

Eigen::MatrixXd symmetric_sector_basis(const ChainSpec& spec) {
  const Orbits o = symmetric_orbits(spec);
  const auto dim = static_cast<Eigen::Index>(spec.dim());
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(dim, static_cast<Eigen::Index>(o.members.size()));
  for (std::size_t a = 0; a < o.members.size(); ++a) {
    const double amp = 1.0 / std::sqrt(static_cast<double>(o.members[a].size()));
    for (auto s : o.members[a]) basis(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(a)) = amp;
  }
  return basis;
}

Eigen::MatrixXd symmetric_sector_hamiltonian(const ChainSpec& spec) {
  const Orbits o = symmetric_orbits(spec);
  const Eigen::VectorXd diag = diagonal_energies(spec);
  const auto sector = static_cast<Eigen::Index>(o.members.size());
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(sector, sector);

  // <a|H|b> = sqrt|a| (H|b>)_rep(a), since H|b> is constant on each orbit.
  auto accumulate = [&](std::uint64_t target, Eigen::Index b, double coef) {
    const auto a = o.orbit_of[target];
    if (o.members[a].front() != target) return;
    block(a, b) += std::sqrt(static_cast<double>(o.members[a].size())) * coef;
  };
  for (Eigen::Index b = 0; b < sector; ++b) {
    const auto& orbit = o.members[b];
    const double amp = 1.0 / std::sqrt(static_cast<double>(orbit.size()));
    for (auto t : orbit) {
      accumulate(t, b, diag[static_cast<Eigen::Index>(t)] * amp);
      if (spec.field_x == 0.0) continue;
      for (int i = 0; i < spec.n_sites; ++i) {
        accumulate(t ^ (std::uint64_t{1} << i), b, spec.field_x * amp);
      }
    }
  }
  return block;
}

SpacingRatioResult spacing_ratio(const ChainSpec& spec, SymmetryResolution resolution) {
  const Eigen::MatrixXd h = resolution == SymmetryResolution::resolve
                                ? symmetric_sector_hamiltonian(spec)
                                : build_dense(spec);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("eigenvalue solver failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  SpacingRatioResult out = mean_spacing_ratio(std::span<const double>(ev.data(), ev.size()));
  out.sector_dim = static_cast<std::size_t>(h.rows());
  out.symmetry_resolved = resolution == SymmetryResolution::resolve;
  return out;
}

}  // namespace wharm
