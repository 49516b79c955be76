#include "magblock/model.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "magblock/errors.hpp"

namespace magblock {

namespace {

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) throw InvalidParameter(std::string(name) + " must be finite");
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }

void require_mode_count(std::span<const ModeSpec> modes, std::size_t count, const char* who) {
  if (modes.size() != count) {
    throw InvalidConfiguration(std::string(who) + ": expected " + std::to_string(count) + " modes, got " +
                               std::to_string(modes.size()));
  }
  validate_modes(modes);
  if (modes[kCavity].cutoff < 2 || modes[kMagnon].cutoff < 2) {
    throw InvalidDimension(std::string(who) + ": cavity and magnon cutoffs must be >= 2");
  }
}

// Shared cavity-magnon part of H3/H4 with the quartic coefficient supplied.
Operator cavity_magnon_hamiltonian(const SystemParams& p, std::span<const ModeSpec> modes, double quartic) {
  const Operator a = embed(annihilation(modes[kCavity].cutoff), kCavity, modes);
  const Operator m = embed(annihilation(modes[kMagnon].cutoff), kMagnon, modes);
  const Operator ad = dagger(a);
  const Operator md = dagger(m);
  const Operator nm = md * m;
  return p.delta_a * (ad * a) + p.delta_m * nm + p.g_ma * (md * a + ad * m) + quartic * (nm * nm) +
         p.drive_omega * (md + m);
}

}  // namespace

SystemParams SystemParams::from_absolute(const AbsoluteFrequencies& freq) { return from_absolute(freq, SystemParams{}); }

SystemParams SystemParams::from_absolute(const AbsoluteFrequencies& freq, SystemParams base) {
  base.delta_a = freq.omega_a - freq.omega_l;
  base.delta_m = freq.omega_m - freq.omega_l;
  base.absolute = freq;
  return base;
}

SystemParams reference_parameters() { return SystemParams{}; }

bool polaron_guard_ok(const SystemParams& p) noexcept { return p.g_mb <= p.omega_b / 10.0; }

std::vector<std::string> validate(const SystemParams& p) {
  require_finite(p.omega_b, "omega_b");
  require_finite(p.delta_a, "delta_a");
  require_finite(p.delta_m, "delta_m");
  require_finite(p.g_ma, "g_ma");
  require_finite(p.g_mb, "g_mb");
  require_finite(p.kerr_k, "kerr_k");
  require_finite(p.drive_omega, "drive_omega");
  require_finite(p.kappa_a, "kappa_a");
  require_finite(p.kappa_m, "kappa_m");
  require_finite(p.gamma_b, "gamma_b");
  require_finite(p.n_th, "n_th");
  if (p.kappa_m <= 0.0) throw InvalidParameter("kappa_m must be > 0");
  if (p.gamma_b < 0.0) throw InvalidParameter("gamma_b must be >= 0");
  if (p.n_th < 0.0) throw InvalidParameter("n_th must be >= 0");
  if (p.omega_b <= 0.0) throw InvalidParameter("omega_b must be > 0");
  if (p.absolute) {
    if (!close(p.delta_a, p.absolute->omega_a - p.absolute->omega_l)) {
      throw InvalidParameter("delta_a disagrees with omega_a - omega_l");
    }
    if (!close(p.delta_m, p.absolute->omega_m - p.absolute->omega_l)) {
      throw InvalidParameter("delta_m disagrees with omega_m - omega_l");
    }
  }
  std::vector<std::string> warnings;
  if (!polaron_guard_ok(p)) {
    warnings.emplace_back("g_mb exceeds omega_b/10; the polaron elimination of the phonon is not reliable");
  }
  return warnings;
}

EffectiveNonlinearity effective_nonlinearity(const SystemParams& p) {
  return {p.kerr_k - p.g_mb * p.g_mb / p.omega_b};
}

std::vector<ModeSpec> three_mode_system(int cutoff_a, int cutoff_m, int cutoff_b) {
  return {{"cavity", cutoff_a}, {"magnon", cutoff_m}, {"phonon", cutoff_b}};
}

std::vector<ModeSpec> two_mode_system(int cutoff_a, int cutoff_m) { return {{"cavity", cutoff_a}, {"magnon", cutoff_m}}; }

Operator hamiltonian_h1(const SystemParams& p, std::span<const ModeSpec> modes) {
  if (modes.size() < 3) throw InvalidConfiguration("hamiltonian_h1: phonon mode missing");
  require_mode_count(modes, 3, "hamiltonian_h1");
  const Operator a = embed(annihilation(modes[kCavity].cutoff), kCavity, modes);
  const Operator m = embed(annihilation(modes[kMagnon].cutoff), kMagnon, modes);
  const Operator b = embed(annihilation(modes[kPhonon].cutoff), kPhonon, modes);
  const Operator ad = dagger(a);
  const Operator md = dagger(m);
  const Operator bd = dagger(b);
  const Operator nm = md * m;
  return p.delta_a * (ad * a) + p.omega_b * (bd * b) + p.delta_m * nm + p.g_ma * (md * a + ad * m) -
         p.g_mb * ((bd + b) * nm) + p.kerr_k * (nm * nm) + p.drive_omega * (md + m);
}

Operator hamiltonian_h3(const SystemParams& p, std::span<const ModeSpec> modes) {
  require_mode_count(modes, 2, "hamiltonian_h3");
  return cavity_magnon_hamiltonian(p, modes, effective_nonlinearity(p).n_eff);
}

Operator hamiltonian_h4(const SystemParams& p, std::span<const ModeSpec> modes) {
  require_mode_count(modes, 2, "hamiltonian_h4");
  const Operator a = embed(annihilation(modes[kCavity].cutoff), kCavity, modes);
  const Operator m = embed(annihilation(modes[kMagnon].cutoff), kMagnon, modes);
  return hamiltonian_h3(p, modes) + (kI * (p.kappa_a / 2.0)) * (dagger(a) * a) -
         (kI * (p.kappa_m / 2.0)) * (dagger(m) * m);
}

Eigen::Matrix2cd coupling_matrix_hk(const SystemParams& p) {
  Eigen::Matrix2cd hk;
  hk << cplx(p.delta_m, -p.kappa_m / 2.0), p.g_ma, p.g_ma, cplx(p.delta_a, p.kappa_a / 2.0);
  return hk;
}

std::vector<ExcitationManifold> excitation_spectrum(const SystemParams& p, int max_total_excitations) {
  if (max_total_excitations < 2) throw InvalidParameter("excitation_spectrum: need at least two excitations");
  SystemParams undriven = p;
  undriven.drive_omega = 0.0;
  const auto modes = two_mode_system(max_total_excitations, max_total_excitations);
  const Matrix h = hamiltonian_h4(undriven, modes).data();
  const std::vector<int> dims = mode_dims(modes);

  std::vector<ExcitationManifold> out;
  for (int n = 0; n <= max_total_excitations; ++n) {
    std::vector<Eigen::Index> idx;
    for (int na = 0; na <= n; ++na) {
      const int occ[2] = {na, n - na};
      idx.push_back(basis_index(occ, dims));
    }
    const auto size = static_cast<Eigen::Index>(idx.size());
    Matrix block(size, size);
    for (Eigen::Index r = 0; r < size; ++r) {
      for (Eigen::Index c = 0; c < size; ++c) block(r, c) = h(idx[r], idx[c]);
    }
    Eigen::ComplexEigenSolver<Matrix> solver(block, false);
    std::vector<cplx> values(solver.eigenvalues().begin(), solver.eigenvalues().end());
    std::sort(values.begin(), values.end(), [](cplx x, cplx y) {
      return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    out.push_back({n, std::move(values)});
  }
  return out;
}

}  // namespace magblock
