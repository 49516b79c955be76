#pragma once

// Weak-drive amplitude picture: the state is truncated to at most two
// excitations, |n_m, n_a> with the magnon number first, and the equal-time
// magnon correlation follows from the steady-state amplitudes.

#include <span>
#include <vector>

#include "magblock/model.hpp"

namespace magblock {

struct AmplitudeVector {
  cplx c00{1.0, 0.0};
  cplx c10;  // one magnon
  cplx c01;  // one photon
  cplx c20;  // two magnons
  cplx c11;  // one magnon, one photon
  cplx c02;  // two photons

  static AmplitudeVector vacuum() { return {}; }
  static AmplitudeVector zero() { return {cplx{}, {}, {}, {}, {}, {}}; }

  [[nodiscard]] Eigen::Vector<cplx, 6> to_vector() const;
  static AmplitudeVector from_vector(const Eigen::Vector<cplx, 6>& v);
};

enum class RhsVariant {
  /// The six printed equations; photon-bearing states carry Δ_m and +iκ_m/2,
  /// i.e. κ_a = κ_m and Δ_a = Δ_m are implied.
  printed,
  /// Same structure with explicit Δ_a and cavity gain +iκ_a/2 per photon.
  generalized,
};

/// Time derivative dC/dt of every amplitude (i dC/dt = H C).
AmplitudeVector amplitude_rhs(const AmplitudeVector& state, const SystemParams& p,
                              RhsVariant variant = RhsVariant::printed);

struct EvolveOptions {
  RhsVariant variant = RhsVariant::generalized;
  /// Hold c00 fixed instead of integrating it (the driven-linear picture the
  /// steady state is defined in).
  bool pin_vacuum = false;
};

/// Fixed-step RK4. The step is shrunk so that an integer number of steps
/// lands exactly on t_final. Throws Divergence on non-finite amplitudes.
AmplitudeVector evolve_amplitudes(const AmplitudeVector& initial, const SystemParams& p, double t_final, double dt,
                                  EvolveOptions options = {});

/// Closed-form steady-state amplitudes with c00 = 1, valid for κ_a = κ_m and
/// Δ_a = Δ_m. Throws UnsupportedRegime off that line and SingularDenominator
/// when the shared denominator vanishes.
AmplitudeVector steady_state_amplitudes(const SystemParams& p);

enum class Coupling {
  /// Drop the terms that feed a lower excitation manifold from a higher one
  /// (E c11, sqrt2 E c20 in the single-excitation rows). Exact counterpart of
  /// the closed form.
  perturbative,
  /// Keep every term of the generalized equations.
  full,
};

/// Independent route to the steady state: zero the five excited-state
/// derivatives of the generalized equations with c00 = 1 and solve the 5x5
/// system directly.
AmplitudeVector steady_state_linear_solve(const SystemParams& p, Coupling coupling = Coupling::perturbative);

enum class CorrelationMethod { analytic_approx, analytic_exact_state, master_equation };

const char* to_string(CorrelationMethod method) noexcept;

struct CorrelationResult {
  double g2 = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  CorrelationMethod method = CorrelationMethod::analytic_approx;
};

/// approximate: 2|c20|²/|c10|⁴. Otherwise 2|c20|²/(|c10|²+|c11|²+2|c20|²)².
CorrelationResult g2_analytic(const AmplitudeVector& state, bool approximate = true);

/// Root of the two-magnon numerator factor ω_b(2Δ_m + K) - g_mb²:
/// Δ_opt = g_mb²/(2ω_b) - K/2.
double optimal_detuning(const SystemParams& p);

/// Detuning from the alternative condition K = -2Δ_m (ignores the phonon
/// term). Comparison value only.
double kerr_only_optimal_detuning(const SystemParams& p) noexcept;

struct ProbabilityRow {
  double delta_m = 0.0;
  double abs_c10 = 0.0;
  double abs_c20 = 0.0;
  bool ok = true;  // false marks a singular point; magnitudes are NaN
};

/// |c10| and |c20| of the closed-form steady state along a Δ_m grid
/// (Δ_a follows Δ_m).
std::vector<ProbabilityRow> probability_curves(const SystemParams& p, std::span<const double> delta_grid);

/// Indices strictly below both neighbours and below `threshold`.
std::vector<std::size_t> find_dips(std::span<const double> values, double threshold = 0.99);

/// Indices strictly above both neighbours.
std::vector<std::size_t> find_local_maxima(std::span<const double> values);

/// Index of the smallest finite value; values.size() if none.
std::size_t argmin_finite(std::span<const double> values);

/// `points` evenly spaced values over [lo, hi] inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t points);

}  // namespace magblock
