#pragma once

// Physical parameters and the Hamiltonian family of the cavity magnomechanical
// system. Every energy and rate is expressed in units of the magnon decay
// rate kappa_m.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "magblock/fock.hpp"

namespace magblock {

/// Lab-frame frequencies. When present they must agree with the detunings.
struct AbsoluteFrequencies {
  double omega_a = 0.0;  // cavity
  double omega_m = 0.0;  // magnon (Kittel mode)
  double omega_l = 0.0;  // drive
};

struct SystemParams {
  double omega_b = 100.0;  // mechanical frequency
  double delta_a = 0.04;   // omega_a - omega_l
  double delta_m = 0.04;   // omega_m - omega_l
  double g_ma = 0.5;       // magnon-photon coupling
  double g_mb = 3.0;       // single-magnon magnomechanical coupling
  double kerr_k = 0.01;    // magnon Kerr coefficient K
  double drive_omega = 0.01;
  double kappa_a = 1.0;  // cavity gain rate
  double kappa_m = 1.0;  // magnon decay rate
  double gamma_b = 1e-4;  // mechanical damping
  double n_th = 0.0;      // shared thermal occupation
  std::optional<AbsoluteFrequencies> absolute;

  /// Builds the detuned parametrization from lab-frame frequencies.
  static SystemParams from_absolute(const AbsoluteFrequencies& freq);
  static SystemParams from_absolute(const AbsoluteFrequencies& freq, SystemParams base);
};

/// Parameter set of the reference Δ_m sweep: κ_a = κ_m, Δ_a = Δ_m,
/// ω_b = 100, γ_b = 1e-4, K = 0.01, g_ma = 0.5, g_mb = 3, Ω = 0.01, n_th = 0.
SystemParams reference_parameters();

/// Throws InvalidParameter on hard violations; returns soft warnings
/// (currently only the polaron guard g_mb <= ω_b / 10).
std::vector<std::string> validate(const SystemParams& p);

/// True when g_mb <= ω_b / 10.
bool polaron_guard_ok(const SystemParams& p) noexcept;

struct EffectiveNonlinearity {
  double n_eff = 0.0;  // K - g_mb² / ω_b
};

EffectiveNonlinearity effective_nonlinearity(const SystemParams& p);

inline constexpr std::size_t kCavity = 0;
inline constexpr std::size_t kMagnon = 1;
inline constexpr std::size_t kPhonon = 2;

std::vector<ModeSpec> three_mode_system(int cutoff_a, int cutoff_m, int cutoff_b);
std::vector<ModeSpec> two_mode_system(int cutoff_a, int cutoff_m);

/// Rotating-frame Hamiltonian with the phonon retained.
Operator hamiltonian_h1(const SystemParams& p, std::span<const ModeSpec> modes);

/// Phonon-eliminated Hamiltonian with the effective nonlinearity N.
Operator hamiltonian_h3(const SystemParams& p, std::span<const ModeSpec> modes);

/// H3 plus cavity gain +iκ_a/2 a†a and magnon loss -iκ_m/2 m†m.
Operator hamiltonian_h4(const SystemParams& p, std::span<const ModeSpec> modes);

/// Single-excitation coupling matrix in the basis [m, a].
Eigen::Matrix2cd coupling_matrix_hk(const SystemParams& p);

struct ExcitationManifold {
  int total_excitations = 0;
  std::vector<cplx> eigenvalues;  // sorted by real part, then imaginary part
};

/// Eigenvalues of the undriven H4 restricted to each fixed-excitation block
/// {|n_a, n - n_a>}.
std::vector<ExcitationManifold> excitation_spectrum(const SystemParams& p, int max_total_excitations);

}  // namespace magblock
