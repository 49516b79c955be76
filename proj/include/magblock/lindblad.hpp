#pragma once

// Master-equation pipeline. Density matrices are vectorized column-stacked,
// so vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ).

#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "magblock/model.hpp"
#include "magblock/weak_drive.hpp"

namespace magblock {

using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;

struct DensityMatrix {
  std::vector<int> dims;
  Matrix data;

  [[nodiscard]] Eigen::Index size() const noexcept { return data.rows(); }
};

/// Superoperator acting on vec(ρ).
class Liouvillian {
 public:
  Liouvillian(std::vector<int> dims, SparseMatrix data);

  [[nodiscard]] const std::vector<int>& dims() const noexcept { return dims_; }
  [[nodiscard]] const SparseMatrix& data() const noexcept { return data_; }
  /// Hilbert-space dimension D; the generator is D² x D².
  [[nodiscard]] Eigen::Index hilbert_dim() const noexcept { return hilbert_dim_; }

 private:
  std::vector<int> dims_;
  SparseMatrix data_;
  Eigen::Index hilbert_dim_ = 0;
};

Liouvillian operator+(const Liouvillian& lhs, const Liouvillian& rhs);
Liouvillian operator*(double scale, const Liouvillian& l);

/// L_o[ρ] = 2 o ρ o† - o†o ρ - ρ o†o (no 1/2 prefactor).
Liouvillian lindblad_dissipator(const Operator& op);

/// ρ -> i[ρ, H].
Liouvillian commutator_part(const Operator& hamiltonian);

enum class GainMode {
  /// Cavity enters as -(κ_a/2) L_a.
  paper_literal,
  /// Cavity enters as +(κ_a/2) L_{a†}.
  physical_gain,
  /// Cavity enters as +(κ_a/2) L_a.
  passive_loss,
};

const char* to_string(GainMode mode) noexcept;
GainMode gain_mode_from_string(std::string_view name);

/// Generator with H1 and the cavity, phonon and magnon channels. Thermal
/// raising terms carry n_th (not n_th + 1).
Liouvillian liouvillian_full(const SystemParams& p, std::span<const ModeSpec> modes, GainMode gain_mode);

/// Two-mode variant built on H3 (phonon eliminated).
Liouvillian liouvillian_reduced(const SystemParams& p, std::span<const ModeSpec> modes, GainMode gain_mode);

Vector vectorize(const Matrix& rho);
Matrix unvectorize(const Vector& v, Eigen::Index dim);

/// dρ/dt for a given ρ.
DensityMatrix apply(const Liouvillian& l, const DensityMatrix& rho);

enum class SteadyStateMethod {
  /// svd when D² <= kDenseSvdLimit, lu otherwise.
  automatic,
  /// Dense singular-value decomposition of the generator. The smallest
  /// singular value must be < 1e-8 and the next one > 1e-6.
  svd,
  /// Sparse LU with the trace functional replacing one population row; a
  /// unique kernel is certified by a non-singular bordered system.
  lu,
};

inline constexpr Eigen::Index kDenseSvdLimit = 1024;

DensityMatrix steady_state(const Liouvillian& l, SteadyStateMethod method = SteadyStateMethod::automatic);

struct DensityEvolveOptions {
  bool renormalize = true;  // Hermitize and rescale the trace after every step
};

/// Fixed-step RK4 on vec(ρ). Throws Divergence on non-finite entries or when
/// the state grows by more than 10x.
DensityMatrix evolve_density(const DensityMatrix& initial, const Liouvillian& l, double t_final, double dt,
                             DensityEvolveOptions options = {});

/// Tr(m†² m² ρ) / Tr(m† m ρ)² for the mode at `mode`. The numerator field
/// stores half the fourth moment so that g2 = 2 num / den².
CorrelationResult g2_numeric(const DensityMatrix& rho, std::size_t mode);

/// Tr(n ρ) for the mode at `mode`.
double population(const DensityMatrix& rho, std::size_t mode);

DensityMatrix fock_state(std::vector<int> dims, std::span<const int> occupation);
/// Truncated thermal state of a single mode.
DensityMatrix thermal_state(int cutoff, double n_th);
/// Truncated and renormalized coherent state of a single mode.
DensityMatrix coherent_state(int cutoff, cplx alpha);

double min_eigenvalue(const DensityMatrix& rho);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

struct MasterEquationOptions {
  int cutoff_a = 3;
  int cutoff_m = 3;
  int cutoff_b = 3;
  GainMode gain_mode = GainMode::paper_literal;
  bool reduced = false;  // drop the phonon and use H3
  SteadyStateMethod method = SteadyStateMethod::automatic;
};

/// Steady-state magnon g2 from the master equation.
CorrelationResult magnon_correlation(const SystemParams& p, const MasterEquationOptions& options = {});

/// Steady state used by magnon_correlation().
DensityMatrix magnon_steady_state(const SystemParams& p, const MasterEquationOptions& options = {});

}  // namespace magblock
