#pragma once

// Eigenvalues of the 2x2 gain/loss coupling matrix and PT-phase
// classification.

#include <span>
#include <vector>

#include "magblock/model.hpp"

namespace magblock {

struct EigenPair {
  cplx xi_plus;
  cplx xi_minus;
  double lambda = 0.0;        // (κ_a - κ_m) / 2
  double discriminant = 0.0;  // g_ma² - ((κ_a + κ_m) / 4)²
};

enum class PtRegion { broken, exceptional_point, unbroken };

/// Classification tolerance on the discriminant, in units of κ_m².
inline constexpr double kEpTolerance = 1e-9;

PtRegion classify(double discriminant, double ep_tol = kEpTolerance) noexcept;
const char* to_string(PtRegion region) noexcept;

/// Closed-form eigenvalues, valid for Δ_a == Δ_m only.
///
/// ξ± = Δ_m + iλ/2 ± sqrt(g_ma² - ((κ_a + κ_m)/4)²). The square root takes
/// the principal branch (non-negative real part, else non-negative imaginary
/// part). Throws UnsupportedRegime when the detunings differ.
EigenPair eigenvalues_closed_form(const SystemParams& p);

/// Roots of an arbitrary 2x2 matrix via the quadratic formula, labelled so
/// that xi_plus = mean + principal sqrt.
std::pair<cplx, cplx> eigenvalues_2x2(const Eigen::Matrix2cd& m);

/// Numeric eigenvalues of coupling_matrix_hk(p). λ and the discriminant are
/// filled from the rates as in the closed form.
EigenPair eigenvalues_numeric(const SystemParams& p);

/// Returns `candidate` with its two roots swapped if that lowers the total
/// distance to `reference`.
EigenPair pair_to(const EigenPair& reference, const EigenPair& candidate);

/// g_EP = (κ_a + κ_m) / 4. Throws InvalidParameter if κ_a + κ_m <= 0.
double exceptional_point_coupling(double kappa_a, double kappa_m);

enum class EigenSweepAxis { g_ma, kappa_a };

struct EigenSweepRow {
  double value = 0.0;
  cplx shifted_plus;   // ξ+ - Δ_m
  cplx shifted_minus;  // ξ- - Δ_m
  double discriminant = 0.0;
  PtRegion region = PtRegion::broken;
};

/// Eigenvalues along a strictly increasing grid, branch-continued by nearest
/// neighbour matching between consecutive points.
std::vector<EigenSweepRow> sweep_eigenvalues(const SystemParams& p, EigenSweepAxis axis, std::span<const double> grid);

}  // namespace magblock
