#pragma once

// Truncated Fock-space operators over a fixed tensor-product ordering.
//
// Modes are always laid out cavity ⊗ magnon ⊗ phonon (first mode is the most
// significant index). All basis-index <-> occupation conversions go through
// basis_index() / occupations().

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace magblock {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};

struct ModeSpec {
  std::string label;
  int cutoff = 1;  // maximum occupation n_max; dimension is cutoff + 1

  [[nodiscard]] int dim() const noexcept { return cutoff + 1; }
};

/// Throws InvalidDimension for cutoff < 1 and InvalidConfiguration for
/// duplicate labels.
void validate_modes(std::span<const ModeSpec> modes);

std::vector<int> mode_dims(std::span<const ModeSpec> modes);

/// Dense operator on a product of truncated modes. Immutable after
/// construction.
class Operator {
 public:
  Operator(std::vector<int> dims, Matrix data);

  /// Single-mode operator of dimension `dim`.
  explicit Operator(Matrix data);

  [[nodiscard]] const std::vector<int>& dims() const noexcept { return dims_; }
  [[nodiscard]] const Matrix& data() const noexcept { return data_; }
  [[nodiscard]] Eigen::Index size() const noexcept { return data_.rows(); }
  [[nodiscard]] cplx operator()(Eigen::Index r, Eigen::Index c) const { return data_(r, c); }

 private:
  std::vector<int> dims_;
  Matrix data_;
};

Operator annihilation(int cutoff);
Operator creation(int cutoff);
Operator number(int cutoff);
Operator identity(std::vector<int> dims);

/// I ⊗ … ⊗ op ⊗ … ⊗ I with `op` placed at `target_mode`.
Operator embed(const Operator& op, std::size_t target_mode, std::span<const ModeSpec> system);

Operator dagger(const Operator& op);
Operator kron(const Operator& lhs, const Operator& rhs);
cplx trace(const Operator& op);

Operator operator*(const Operator& lhs, const Operator& rhs);
Operator operator+(const Operator& lhs, const Operator& rhs);
Operator operator-(const Operator& lhs, const Operator& rhs);
Operator operator*(cplx scale, const Operator& op);
Operator operator*(double scale, const Operator& op);

/// max |A - A†|
double hermiticity_defect(const Matrix& m);

/// Flat basis index of an occupation tuple, first mode most significant.
Eigen::Index basis_index(std::span<const int> occupation, std::span<const int> dims);

/// Inverse of basis_index().
std::vector<int> occupations(Eigen::Index index, std::span<const int> dims);

}  // namespace magblock
