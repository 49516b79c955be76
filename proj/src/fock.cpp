#include "magblock/fock.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <set>

#include "magblock/errors.hpp"

namespace magblock {

namespace {

Eigen::Index product(std::span<const int> dims) {
  return std::accumulate(dims.begin(), dims.end(), Eigen::Index{1}, std::multiplies<>());
}

void require_same_shape(const Operator& lhs, const Operator& rhs, const char* what) {
  if (lhs.dims() != rhs.dims()) {
    throw InvalidDimension(std::string(what) + ": operand mode dimensions differ");
  }
}

}  // namespace

void validate_modes(std::span<const ModeSpec> modes) {
  std::set<std::string> seen;
  for (const auto& mode : modes) {
    if (mode.cutoff < 1) {
      throw InvalidDimension("mode '" + mode.label + "': cutoff must be >= 1, got " +
                             std::to_string(mode.cutoff));
    }
    if (!seen.insert(mode.label).second) {
      throw InvalidConfiguration("duplicate mode label '" + mode.label + "'");
    }
  }
}

std::vector<int> mode_dims(std::span<const ModeSpec> modes) {
  std::vector<int> dims;
  dims.reserve(modes.size());
  for (const auto& mode : modes) dims.push_back(mode.dim());
  return dims;
}

Operator::Operator(std::vector<int> dims, Matrix data) : dims_(std::move(dims)), data_(std::move(data)) {
  if (dims_.empty()) throw InvalidDimension("operator needs at least one mode");
  for (int d : dims_) {
    if (d < 1) throw InvalidDimension("mode dimension must be positive");
  }
  const Eigen::Index side = product(dims_);
  if (data_.rows() != side || data_.cols() != side) {
    throw InvalidDimension("operator matrix is " + std::to_string(data_.rows()) + "x" +
                           std::to_string(data_.cols()) + ", expected side " + std::to_string(side));
  }
}

Operator::Operator(Matrix data) : dims_{static_cast<int>(data.rows())}, data_(std::move(data)) {
  if (dims_[0] < 1) throw InvalidDimension("mode dimension must be positive");
  if (data_.cols() != data_.rows()) throw InvalidDimension("operator matrix must be square");
}

Operator annihilation(int cutoff) {
  if (cutoff < 1) throw InvalidDimension("annihilation: cutoff must be >= 1");
  Matrix a = Matrix::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return Operator(std::move(a));
}

Operator creation(int cutoff) { return dagger(annihilation(cutoff)); }

Operator number(int cutoff) {
  if (cutoff < 1) throw InvalidDimension("number: cutoff must be >= 1");
  Matrix n = Matrix::Zero(cutoff + 1, cutoff + 1);
  for (int k = 0; k <= cutoff; ++k) n(k, k) = static_cast<double>(k);
  return Operator(std::move(n));
}

Operator identity(std::vector<int> dims) {
  const Eigen::Index side = product(dims);
  return Operator(std::move(dims), Matrix::Identity(side, side));
}

Operator embed(const Operator& op, std::size_t target_mode, std::span<const ModeSpec> system) {
  if (target_mode >= system.size()) {
    throw InvalidDimension("embed: target mode " + std::to_string(target_mode) + " out of range");
  }
  if (op.dims().size() != 1 || op.dims().front() != system[target_mode].dim()) {
    throw InvalidDimension("embed: operator does not match mode '" + system[target_mode].label + "'");
  }
  Operator out = target_mode == 0 ? op : identity({system[0].dim()});
  for (std::size_t k = 1; k < system.size(); ++k) {
    out = kron(out, k == target_mode ? op : identity({system[k].dim()}));
  }
  return out;
}

Operator dagger(const Operator& op) { return Operator(op.dims(), op.data().adjoint()); }

Operator kron(const Operator& lhs, const Operator& rhs) {
  const Matrix& a = lhs.data();
  const Matrix& b = rhs.data();
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  std::vector<int> dims = lhs.dims();
  dims.insert(dims.end(), rhs.dims().begin(), rhs.dims().end());
  return Operator(std::move(dims), std::move(out));
}

cplx trace(const Operator& op) { return op.data().trace(); }

Operator operator*(const Operator& lhs, const Operator& rhs) {
  require_same_shape(lhs, rhs, "matmul");
  return Operator(lhs.dims(), lhs.data() * rhs.data());
}

Operator operator+(const Operator& lhs, const Operator& rhs) {
  require_same_shape(lhs, rhs, "add");
  return Operator(lhs.dims(), lhs.data() + rhs.data());
}

Operator operator-(const Operator& lhs, const Operator& rhs) {
  require_same_shape(lhs, rhs, "subtract");
  return Operator(lhs.dims(), lhs.data() - rhs.data());
}

Operator operator*(cplx scale, const Operator& op) { return Operator(op.dims(), scale * op.data()); }

Operator operator*(double scale, const Operator& op) { return Operator(op.dims(), scale * op.data()); }

double hermiticity_defect(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::Index basis_index(std::span<const int> occupation, std::span<const int> dims) {
  if (occupation.size() != dims.size()) throw InvalidDimension("basis_index: rank mismatch");
  Eigen::Index index = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (occupation[k] < 0 || occupation[k] >= dims[k]) {
      throw InvalidDimension("basis_index: occupation exceeds cutoff");
    }
    index = index * dims[k] + occupation[k];
  }
  return index;
}

std::vector<int> occupations(Eigen::Index index, std::span<const int> dims) {
  if (index < 0 || index >= product(dims)) throw InvalidDimension("occupations: index out of range");
  std::vector<int> occ(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    occ[k] = static_cast<int>(index % dims[k]);
    index /= dims[k];
  }
  return occ;
}

}  // namespace magblock
