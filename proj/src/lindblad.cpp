#include "magblock/lindblad.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/SparseLU>

#ifdef MAGBLOCK_HAVE_UMFPACK
#include <umfpack.h>
#endif

#include "magblock/errors.hpp"

namespace magblock {

namespace {

using Triplets = std::vector<Eigen::Triplet<cplx>>;

Eigen::Index product(std::span<const int> dims) {
  return std::accumulate(dims.begin(), dims.end(), Eigen::Index{1}, std::multiplies<>());
}

SparseMatrix from_triplets(Eigen::Index n, const Triplets& entries) {
  SparseMatrix out(n, n);
  out.setFromTriplets(entries.begin(), entries.end());
  out.makeCompressed();
  return out;
}

// I ⊗ A, scaled.
void add_left(Triplets& out, const Matrix& a, cplx scale) {
  const Eigen::Index d = a.rows();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) {
      if (a(i, k) == 0.0) continue;
      for (Eigen::Index j = 0; j < d; ++j) out.emplace_back(j * d + i, j * d + k, scale * a(i, k));
    }
  }
}

// Aᵀ ⊗ I, scaled.
void add_right(Triplets& out, const Matrix& a, cplx scale) {
  const Eigen::Index d = a.rows();
  for (Eigen::Index k = 0; k < d; ++k) {
    for (Eigen::Index i = 0; i < d; ++i) {
      if (a(k, i) == 0.0) continue;
      for (Eigen::Index j = 0; j < d; ++j) out.emplace_back(i * d + j, k * d + j, scale * a(k, i));
    }
  }
}

// conj(A) ⊗ B, scaled.
void add_sandwich(Triplets& out, const Matrix& a, const Matrix& b, cplx scale) {
  const Eigen::Index d = a.rows();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (a(i, j) == 0.0) continue;
      const cplx aij = scale * std::conj(a(i, j));
      for (Eigen::Index k = 0; k < d; ++k) {
        for (Eigen::Index l = 0; l < d; ++l) {
          if (b(k, l) == 0.0) continue;
          out.emplace_back(i * d + k, j * d + l, aij * b(k, l));
        }
      }
    }
  }
}

void add_dissipator(Triplets& out, const Matrix& o, double rate) {
  if (rate == 0.0) return;
  const Matrix n = o.adjoint() * o;
  add_sandwich(out, o, o, 2.0 * rate);
  add_left(out, n, -rate);
  add_right(out, n, -rate);
}

void add_cavity_channel(Triplets& out, const Matrix& a, double kappa_a, GainMode mode) {
  switch (mode) {
    case GainMode::paper_literal:
      add_dissipator(out, a, -kappa_a / 2.0);
      break;
    case GainMode::physical_gain:
      add_dissipator(out, a.adjoint(), kappa_a / 2.0);
      break;
    case GainMode::passive_loss:
      add_dissipator(out, a, kappa_a / 2.0);
      break;
  }
}

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

DensityMatrix normalized(std::vector<int> dims, Matrix data) {
  data = hermitize(data);
  const cplx tr = data.trace();
  if (std::abs(tr) == 0.0 || !std::isfinite(std::abs(tr))) {
    throw NoUniqueSteadyState("steady state has zero or non-finite trace");
  }
  data /= tr;
  return {std::move(dims), std::move(data)};
}

DensityMatrix steady_state_svd(const Liouvillian& l) {
  const Matrix dense(l.data());
  Eigen::BDCSVD<Matrix> svd(dense, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const Eigen::Index n = sigma.size();
  const double smallest = sigma[n - 1];
  const double next = n > 1 ? sigma[n - 2] : std::numeric_limits<double>::infinity();
  if (!(smallest < 1e-8) || !(next > 1e-6)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "(smallest singular values %.3e, %.3e)", smallest, next);
    throw NoUniqueSteadyState(std::string("generator kernel is not one-dimensional ") + buf);
  }
  return normalized(l.dims(), unvectorize(svd.matrixV().col(n - 1), l.hilbert_dim()));
}

#ifdef MAGBLOCK_HAVE_UMFPACK
// UMFPACK (packed complex) behind the two solves the LU route needs.
class SparseFactor {
 public:
  explicit SparseFactor(const SparseMatrix& a) : a_(a) {
    a_.makeCompressed();
    umfpack_zi_defaults(control_);
    const int n = static_cast<int>(a_.rows());
    void* symbolic = nullptr;
    int status = umfpack_zi_symbolic(n, n, a_.outerIndexPtr(), a_.innerIndexPtr(), values(), nullptr, &symbolic,
                                     control_, info_);
    if (status == UMFPACK_OK) {
      status = umfpack_zi_numeric(a_.outerIndexPtr(), a_.innerIndexPtr(), values(), nullptr, symbolic, &numeric_,
                                  control_, info_);
    }
    umfpack_zi_free_symbolic(&symbolic);
    if (status != UMFPACK_OK) {
      throw NoUniqueSteadyState("bordered generator is singular (UMFPACK status " + std::to_string(status) + ")");
    }
  }
  SparseFactor(const SparseFactor&) = delete;
  SparseFactor& operator=(const SparseFactor&) = delete;
  ~SparseFactor() { umfpack_zi_free_numeric(&numeric_); }

  [[nodiscard]] Vector solve(const Vector& b) const { return run(UMFPACK_A, b); }
  [[nodiscard]] Vector solve_adjoint(const Vector& b) const { return run(UMFPACK_At, b); }

 private:
  double* values() { return reinterpret_cast<double*>(a_.valuePtr()); }

  Vector run(int system, const Vector& b) const {
    Vector x(b.size());
    auto& self = const_cast<SparseFactor&>(*this);
    const int status = umfpack_zi_solve(system, a_.outerIndexPtr(), a_.innerIndexPtr(), self.values(), nullptr,
                                        reinterpret_cast<double*>(x.data()), nullptr,
                                        reinterpret_cast<const double*>(b.data()), nullptr, numeric_,
                                        self.control_, self.info_);
    if (status != UMFPACK_OK && status != UMFPACK_WARNING_singular_matrix) {
      throw NoUniqueSteadyState("UMFPACK solve failed with status " + std::to_string(status));
    }
    return x;
  }

  SparseMatrix a_;
  void* numeric_ = nullptr;
  double control_[UMFPACK_CONTROL];
  double info_[UMFPACK_INFO];
};
#else
class SparseFactor {
 public:
  explicit SparseFactor(const SparseMatrix& a) {
    lu_.analyzePattern(a);
    lu_.factorize(a);
    if (lu_.info() != Eigen::Success) {
      throw NoUniqueSteadyState("bordered generator is singular: " + lu_.lastErrorMessage());
    }
  }
  [[nodiscard]] Vector solve(const Vector& b) const { return lu_.solve(b); }
  [[nodiscard]] Vector solve_adjoint(const Vector& b) const { return lu_.adjoint().solve(b); }

 private:
  mutable Eigen::SparseLU<SparseMatrix> lu_;
};
#endif

DensityMatrix steady_state_lu(const Liouvillian& l) {
  const Eigen::Index d = l.hilbert_dim();
  const Eigen::Index n = d * d;
  // Row 0 is the population ρ_00; trace preservation makes it a combination
  // of the other population rows, so the trace functional can take its place.
  Triplets entries;
  entries.reserve(static_cast<std::size_t>(l.data().nonZeros() + d));
  for (Eigen::Index col = 0; col < l.data().outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(l.data(), col); it; ++it) {
      if (it.row() != 0) entries.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (Eigen::Index k = 0; k < d; ++k) entries.emplace_back(0, k * d + k, 1.0);
  const SparseMatrix bordered = from_triplets(n, entries);

  SparseFactor lu(bordered);

  // Inverse iteration on (BᴴB)⁻¹ estimates the smallest singular value of the
  // bordered matrix; a non-singular border implies a one-dimensional kernel.
  Vector probe = Vector::Ones(n).normalized();
  double sigma_min = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 4; ++iter) {
    const Vector z = lu.solve_adjoint(lu.solve(probe));
    const double growth = z.norm();
    if (!std::isfinite(growth) || growth == 0.0) {
      throw NoUniqueSteadyState("bordered generator solve produced non-finite values");
    }
    sigma_min = 1.0 / std::sqrt(growth);
    probe = z / growth;
  }
  double scale = 1.0;
  for (Eigen::Index k = 0; k < bordered.nonZeros(); ++k) scale = std::max(scale, std::abs(bordered.valuePtr()[k]));
  if (sigma_min < 1e-12 * scale) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "(bordered sigma_min %.3e, threshold %.3e)", sigma_min, 1e-12 * scale);
    throw NoUniqueSteadyState(std::string("generator kernel is not one-dimensional ") + buf);
  }

  Vector rhs = Vector::Zero(n);
  rhs[0] = 1.0;
  const Vector x = lu.solve(rhs);
  if (!x.allFinite()) throw NoUniqueSteadyState("steady-state solve produced non-finite values");
  return normalized(l.dims(), unvectorize(x, d));
}

bool finite(const Matrix& m) { return m.allFinite(); }

}  // namespace

Liouvillian::Liouvillian(std::vector<int> dims, SparseMatrix data) : dims_(std::move(dims)), data_(std::move(data)) {
  hilbert_dim_ = product(dims_);
  if (data_.rows() != hilbert_dim_ * hilbert_dim_ || data_.cols() != hilbert_dim_ * hilbert_dim_) {
    throw InvalidDimension("Liouvillian side must be the squared Hilbert dimension");
  }
  data_.makeCompressed();
}

Liouvillian operator+(const Liouvillian& lhs, const Liouvillian& rhs) {
  if (lhs.dims() != rhs.dims()) throw InvalidDimension("Liouvillian sum: dimension mismatch");
  return Liouvillian(lhs.dims(), lhs.data() + rhs.data());
}

Liouvillian operator*(double scale, const Liouvillian& l) { return Liouvillian(l.dims(), cplx(scale) * l.data()); }

Liouvillian lindblad_dissipator(const Operator& op) {
  Triplets entries;
  add_dissipator(entries, op.data(), 1.0);
  return Liouvillian(op.dims(), from_triplets(op.size() * op.size(), entries));
}

Liouvillian commutator_part(const Operator& hamiltonian) {
  Triplets entries;
  add_right(entries, hamiltonian.data(), kI);
  add_left(entries, hamiltonian.data(), -kI);
  return Liouvillian(hamiltonian.dims(), from_triplets(hamiltonian.size() * hamiltonian.size(), entries));
}

const char* to_string(GainMode mode) noexcept {
  switch (mode) {
    case GainMode::paper_literal:
      return "paper_literal";
    case GainMode::physical_gain:
      return "physical_gain";
    case GainMode::passive_loss:
      return "passive_loss";
  }
  return "unknown";
}

GainMode gain_mode_from_string(std::string_view name) {
  if (name == "paper_literal") return GainMode::paper_literal;
  if (name == "physical_gain") return GainMode::physical_gain;
  if (name == "passive_loss") return GainMode::passive_loss;
  throw InvalidConfiguration("unknown gain mode '" + std::string(name) + "'");
}

Liouvillian liouvillian_full(const SystemParams& p, std::span<const ModeSpec> modes, GainMode gain_mode) {
  if (modes.size() != 3) throw InvalidConfiguration("liouvillian_full: expected cavity, magnon and phonon modes");
  const Operator h = hamiltonian_h1(p, modes);
  const Matrix a = embed(annihilation(modes[kCavity].cutoff), kCavity, modes).data();
  const Matrix m = embed(annihilation(modes[kMagnon].cutoff), kMagnon, modes).data();
  const Matrix b = embed(annihilation(modes[kPhonon].cutoff), kPhonon, modes).data();

  Triplets entries;
  add_right(entries, h.data(), kI);
  add_left(entries, h.data(), -kI);
  add_cavity_channel(entries, a, p.kappa_a, gain_mode);
  add_dissipator(entries, b, p.gamma_b / 2.0 * (p.n_th + 1.0));
  add_dissipator(entries, b.adjoint(), p.gamma_b / 2.0 * p.n_th);
  add_dissipator(entries, m, p.kappa_m / 2.0 * (p.n_th + 1.0));
  add_dissipator(entries, m.adjoint(), p.kappa_m / 2.0 * p.n_th);
  return Liouvillian(h.dims(), from_triplets(h.size() * h.size(), entries));
}

Liouvillian liouvillian_reduced(const SystemParams& p, std::span<const ModeSpec> modes, GainMode gain_mode) {
  if (modes.size() != 2) throw InvalidConfiguration("liouvillian_reduced: expected cavity and magnon modes");
  const Operator h = hamiltonian_h3(p, modes);
  const Matrix a = embed(annihilation(modes[kCavity].cutoff), kCavity, modes).data();
  const Matrix m = embed(annihilation(modes[kMagnon].cutoff), kMagnon, modes).data();

  Triplets entries;
  add_right(entries, h.data(), kI);
  add_left(entries, h.data(), -kI);
  add_cavity_channel(entries, a, p.kappa_a, gain_mode);
  add_dissipator(entries, m, p.kappa_m / 2.0 * (p.n_th + 1.0));
  add_dissipator(entries, m.adjoint(), p.kappa_m / 2.0 * p.n_th);
  return Liouvillian(h.dims(), from_triplets(h.size() * h.size(), entries));
}

Vector vectorize(const Matrix& rho) { return Eigen::Map<const Vector>(rho.data(), rho.size()); }

Matrix unvectorize(const Vector& v, Eigen::Index dim) {
  if (v.size() != dim * dim) throw InvalidDimension("unvectorize: length is not dim²");
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

DensityMatrix apply(const Liouvillian& l, const DensityMatrix& rho) {
  if (rho.size() != l.hilbert_dim()) throw InvalidDimension("apply: state and generator dimensions differ");
  return {rho.dims, unvectorize(l.data() * vectorize(rho.data), rho.size())};
}

DensityMatrix steady_state(const Liouvillian& l, SteadyStateMethod method) {
  if (method == SteadyStateMethod::automatic) {
    method = l.data().rows() <= kDenseSvdLimit ? SteadyStateMethod::svd : SteadyStateMethod::lu;
  }
  return method == SteadyStateMethod::svd ? steady_state_svd(l) : steady_state_lu(l);
}

DensityMatrix evolve_density(const DensityMatrix& initial, const Liouvillian& l, double t_final, double dt,
                             DensityEvolveOptions options) {
  if (!(t_final > 0.0) || !(dt > 0.0)) throw InvalidParameter("evolve_density: t_final and dt must be > 0");
  if (initial.size() != l.hilbert_dim()) throw InvalidDimension("evolve_density: dimension mismatch");
  const Eigen::Index d = initial.size();
  const auto steps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
  const double h = t_final / static_cast<double>(steps);
  const SparseMatrix& gen = l.data();
  const double start_scale = std::max(1.0, initial.data.cwiseAbs().maxCoeff());

  Vector y = vectorize(initial.data);
  for (long n = 0; n < steps; ++n) {
    const Vector k1 = gen * y;
    const Vector k2 = gen * (y + 0.5 * h * k1);
    const Vector k3 = gen * (y + 0.5 * h * k2);
    const Vector k4 = gen * (y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!y.allFinite()) throw Divergence("evolve_density: non-finite state at t = " + std::to_string((n + 1) * h));
    if (y.cwiseAbs().maxCoeff() > 10.0 * start_scale) {
      throw Divergence("evolve_density: state grew more than tenfold at t = " + std::to_string((n + 1) * h));
    }
    if (options.renormalize) {
      Matrix rho = hermitize(unvectorize(y, d));
      const cplx tr = rho.trace();
      if (std::abs(tr) > 10.0 || std::abs(tr) < 0.1) {
        throw Divergence("evolve_density: trace left [0.1, 10] at t = " + std::to_string((n + 1) * h));
      }
      y = vectorize(rho / tr);
    }
  }
  Matrix out = unvectorize(y, d);
  if (options.renormalize) out = hermitize(out);
  if (!finite(out)) throw Divergence("evolve_density: non-finite final state");
  return {initial.dims, std::move(out)};
}

double population(const DensityMatrix& rho, std::size_t mode) {
  if (mode >= rho.dims.size()) throw InvalidDimension("population: mode index out of range");
  std::vector<ModeSpec> modes;
  for (std::size_t k = 0; k < rho.dims.size(); ++k) modes.push_back({"mode" + std::to_string(k), rho.dims[k] - 1});
  const Matrix n = embed(number(rho.dims[mode] - 1), mode, modes).data();
  return (n * rho.data).trace().real();
}

CorrelationResult g2_numeric(const DensityMatrix& rho, std::size_t mode) {
  if (mode >= rho.dims.size()) throw InvalidDimension("g2_numeric: mode index out of range");
  std::vector<ModeSpec> modes;
  for (std::size_t k = 0; k < rho.dims.size(); ++k) modes.push_back({"mode" + std::to_string(k), rho.dims[k] - 1});
  if (rho.dims[mode] < 2) throw InvalidDimension("g2_numeric: mode needs at least two levels");
  const Matrix m = embed(annihilation(rho.dims[mode] - 1), mode, modes).data();
  const Matrix md = m.adjoint();
  const double first = (md * m * rho.data).trace().real();
  const double second = (md * md * m * m * rho.data).trace().real();
  // Solver round-off leaves ~1e-17 in an empty mode.
  if (!(first > 1e-14)) throw DivisionByZero("g2_numeric: zero population in the selected mode");
  CorrelationResult out;
  out.method = CorrelationMethod::master_equation;
  out.numerator = second / 2.0;
  out.denominator = first;
  out.g2 = second / (first * first);
  return out;
}

DensityMatrix fock_state(std::vector<int> dims, std::span<const int> occupation) {
  const Eigen::Index d = product(dims);
  Matrix data = Matrix::Zero(d, d);
  const Eigen::Index idx = basis_index(occupation, dims);
  data(idx, idx) = 1.0;
  return {std::move(dims), std::move(data)};
}

DensityMatrix thermal_state(int cutoff, double n_th) {
  if (cutoff < 1) throw InvalidDimension("thermal_state: cutoff must be >= 1");
  if (n_th < 0.0) throw InvalidParameter("thermal_state: n_th must be >= 0");
  Matrix data = Matrix::Zero(cutoff + 1, cutoff + 1);
  const double ratio = n_th / (n_th + 1.0);
  double weight = 1.0;
  double total = 0.0;
  for (int n = 0; n <= cutoff; ++n) {
    data(n, n) = weight;
    total += weight;
    weight *= ratio;
  }
  data /= total;
  return {{cutoff + 1}, std::move(data)};
}

DensityMatrix coherent_state(int cutoff, cplx alpha) {
  if (cutoff < 1) throw InvalidDimension("coherent_state: cutoff must be >= 1");
  Vector ket(cutoff + 1);
  cplx term = 1.0;
  for (int n = 0; n <= cutoff; ++n) {
    if (n > 0) term *= alpha / std::sqrt(static_cast<double>(n));
    ket[n] = term;
  }
  ket.normalize();
  return {{cutoff + 1}, ket * ket.adjoint()};
}

double min_eigenvalue(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(rho.data), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.size() != b.size()) throw InvalidDimension("trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(a.data - b.data), Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

DensityMatrix magnon_steady_state(const SystemParams& p, const MasterEquationOptions& options) {
  if (options.reduced) {
    const auto modes = two_mode_system(options.cutoff_a, options.cutoff_m);
    return steady_state(liouvillian_reduced(p, modes, options.gain_mode), options.method);
  }
  const auto modes = three_mode_system(options.cutoff_a, options.cutoff_m, options.cutoff_b);
  return steady_state(liouvillian_full(p, modes, options.gain_mode), options.method);
}

CorrelationResult magnon_correlation(const SystemParams& p, const MasterEquationOptions& options) {
  return g2_numeric(magnon_steady_state(p, options), kMagnon);
}

}  // namespace magblock
