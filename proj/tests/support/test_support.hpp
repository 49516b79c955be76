#pragma once

// Shared helpers for the test binaries: seeded draws and reference
// implementations written directly from the model definitions, independent
// of the library's own solvers.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "magblock/lindblad.hpp"
#include "magblock/model.hpp"
#include "magblock/weak_drive.hpp"

namespace testing_support {

using magblock::cplx;
using magblock::Matrix;
using magblock::SystemParams;

inline double rel_err(cplx got, cplx want) {
  const double scale = std::abs(want);
  return scale == 0.0 ? std::abs(got) : std::abs(got - want) / scale;
}

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  cplx complex(double scale = 1.0) { return {uniform(-scale, scale), uniform(-scale, scale)}; }
  Matrix matrix(Eigen::Index n, double scale = 1.0) {
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = complex(scale);
    }
    return m;
  }
  // Random density matrix: A A† normalized.
  Matrix density(Eigen::Index n) {
    const Matrix a = matrix(n);
    Matrix rho = a * a.adjoint();
    return rho / rho.trace();
  }
  // Weak-drive draw on the symmetric line κ_a = κ_m, Δ_a = Δ_m.
  SystemParams weak_drive_params() {
    SystemParams p;
    p.kappa_m = uniform(0.5, 2.0);
    p.kappa_a = p.kappa_m;
    p.delta_m = uniform(-2.0, 2.0);
    p.delta_a = p.delta_m;
    p.g_ma = uniform(0.05, 2.0);
    p.omega_b = uniform(20.0, 200.0);
    p.g_mb = uniform(0.0, p.omega_b / 10.0);
    p.kerr_k = uniform(-0.2, 0.2);
    p.drive_omega = uniform(0.001, 0.01);
    return p;
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Weak-drive generator over |n_m, n_a>, slots 00 10 01 20 11 02, built from
// the non-Hermitian H4 plus the drive Ω(m + m†): i dC/dt = G C.
inline Eigen::Matrix<cplx, 6, 6> amplitude_generator(const SystemParams& p) {
  const double n_eff = p.kerr_k - p.g_mb * p.g_mb / p.omega_b;
  const cplx em{p.delta_m, -p.kappa_m / 2.0};
  const cplx ea{p.delta_a, p.kappa_a / 2.0};
  const int nm[6] = {0, 1, 0, 2, 1, 0};
  const int na[6] = {0, 0, 1, 0, 1, 2};
  Eigen::Matrix<cplx, 6, 6> g = Eigen::Matrix<cplx, 6, 6>::Zero();
  for (int s = 0; s < 6; ++s) g(s, s) = double(nm[s]) * em + double(na[s]) * ea + n_eff * nm[s] * nm[s];
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) {
      // m† : (nm, na) -> (nm+1, na), amplitude sqrt(nm+1)
      if (nm[r] == nm[c] + 1 && na[r] == na[c]) {
        g(r, c) += p.drive_omega * std::sqrt(double(nm[c] + 1));
        g(c, r) += p.drive_omega * std::sqrt(double(nm[c] + 1));
      }
      // m† a : (nm, na) -> (nm+1, na-1)
      if (nm[r] == nm[c] + 1 && na[r] == na[c] - 1) {
        const double amp = std::sqrt(double(nm[c] + 1) * double(na[c]));
        g(r, c) += p.g_ma * amp;
        g(c, r) += p.g_ma * amp;
      }
    }
  }
  return g;
}

// Order-by-order steady state with c00 = 1: each manifold is driven only by
// the one below it.
inline magblock::AmplitudeVector perturbative_steady_state(const SystemParams& p) {
  const auto g = amplitude_generator(p);
  const Eigen::Matrix2cd h1 = g.block<2, 2>(1, 1);
  const Eigen::Vector2cd c1 = -h1.partialPivLu().solve(g.block<2, 1>(1, 0));
  const Eigen::Matrix3cd h2 = g.block<3, 3>(3, 3);
  const Eigen::Vector3cd c2 = -h2.partialPivLu().solve(g.block<3, 2>(3, 1) * c1);
  magblock::AmplitudeVector out;
  out.c00 = 1.0;
  out.c10 = c1[0];
  out.c01 = c1[1];
  out.c20 = c2[0];
  out.c11 = c2[1];
  out.c02 = c2[2];
  return out;
}

// <n'|H1|n> from the occupation tuples (cavity, magnon, phonon).
inline Matrix h1_elementwise(const SystemParams& p, int ca, int cm, int cb) {
  const int da = ca + 1, dm = cm + 1, db = cb + 1;
  const int d = da * dm * db;
  auto index = [&](int a, int m, int b) { return (a * dm + m) * db + b; };
  Matrix h = Matrix::Zero(d, d);
  for (int a = 0; a < da; ++a) {
    for (int m = 0; m < dm; ++m) {
      for (int b = 0; b < db; ++b) {
        const int col = index(a, m, b);
        h(col, col) += p.delta_a * a + p.omega_b * b + p.delta_m * m + p.kerr_k * m * m;
        if (b + 1 < db) h(index(a, m, b + 1), col) += -p.g_mb * m * std::sqrt(double(b + 1));
        if (b > 0) h(index(a, m, b - 1), col) += -p.g_mb * m * std::sqrt(double(b));
        if (m + 1 < dm) h(index(a, m + 1, b), col) += p.drive_omega * std::sqrt(double(m + 1));
        if (m > 0) h(index(a, m - 1, b), col) += p.drive_omega * std::sqrt(double(m));
        if (m + 1 < dm && a > 0) h(index(a - 1, m + 1, b), col) += p.g_ma * std::sqrt(double(m + 1) * a);
        if (a + 1 < da && m > 0) h(index(a + 1, m - 1, b), col) += p.g_ma * std::sqrt(double(a + 1) * m);
      }
    }
  }
  return h;
}

// Direct matrix evaluation of the generator: i[ρ,H] + Σ rate (2 o ρ o† - o†o ρ - ρ o†o).
struct Channel {
  double rate;
  Matrix op;
};

inline Matrix lindblad_direct(const Matrix& rho, const Matrix& h, const std::vector<Channel>& channels) {
  const cplx i{0.0, 1.0};
  Matrix out = i * (rho * h - h * rho);
  for (const auto& ch : channels) {
    const Matrix od = ch.op.adjoint();
    out += ch.rate * (2.0 * ch.op * rho * od - od * ch.op * rho - rho * od * ch.op);
  }
  return out;
}

}  // namespace testing_support
