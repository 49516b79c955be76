#include <doctest.h>

#include "magblock/errors.hpp"
#include "magblock/model.hpp"
#include "test_support.hpp"

using namespace magblock;
using testing_support::Draw;

namespace {

SystemParams random_params(Draw& d) {
  SystemParams p;
  p.omega_b = d.uniform(10.0, 200.0);
  p.delta_a = d.uniform(-2.0, 2.0);
  p.delta_m = d.uniform(-2.0, 2.0);
  p.g_ma = d.uniform(0.0, 2.0);
  p.g_mb = d.uniform(0.0, p.omega_b / 10.0);
  p.kerr_k = d.uniform(-0.5, 0.5);
  p.drive_omega = d.uniform(0.0, 0.1);
  p.kappa_a = d.uniform(0.0, 2.0);
  p.kappa_m = d.uniform(0.1, 2.0);
  return p;
}

Eigen::Index idx2(const std::vector<ModeSpec>& modes, int na, int nm) {
  const int occ[2] = {na, nm};
  return basis_index(occ, mode_dims(modes));
}

}  // namespace

TEST_CASE("reference parameter set") {
  const SystemParams p = reference_parameters();
  CHECK(p.kappa_a == 1.0);
  CHECK(p.kappa_m == 1.0);
  CHECK(p.delta_a == p.delta_m);
  CHECK(p.omega_b == 100.0);
  CHECK(p.gamma_b == 1e-4);
  CHECK(p.kerr_k == 0.01);
  CHECK(p.g_ma == 0.5);
  CHECK(p.g_mb == 3.0);
  CHECK(p.drive_omega == 0.01);
  CHECK(p.n_th == 0.0);
  CHECK(effective_nonlinearity(p).n_eff == doctest::Approx(-0.08).epsilon(1e-14));
}

TEST_CASE("effective nonlinearity is exact") {
  Draw d(21);
  for (int i = 0; i < 100; ++i) {
    SystemParams p;
    p.kerr_k = d.uniform(-1.0, 1.0);
    p.omega_b = d.uniform(1.0, 500.0);
    p.g_mb = d.uniform(0.0, 50.0);
    CHECK(effective_nonlinearity(p).n_eff - (p.kerr_k - p.g_mb * p.g_mb / p.omega_b) == 0.0);
  }
}

TEST_CASE("validation") {
  SystemParams p;
  CHECK(validate(p).empty());
  p.kappa_m = 0.0;
  CHECK_THROWS_AS(validate(p), InvalidParameter);
  p = SystemParams{};
  p.gamma_b = -1.0;
  CHECK_THROWS_AS(validate(p), InvalidParameter);
  p = SystemParams{};
  p.n_th = -0.1;
  CHECK_THROWS_AS(validate(p), InvalidParameter);
  p = SystemParams{};
  p.g_ma = std::nan("");
  CHECK_THROWS_AS(validate(p), InvalidParameter);
  p = SystemParams{};
  p.g_mb = 50.0;
  CHECK_FALSE(polaron_guard_ok(p));
  CHECK(validate(p).size() == 1);

  const SystemParams abs = SystemParams::from_absolute({10.04, 10.05, 10.0});
  CHECK(abs.delta_a == doctest::Approx(0.04));
  CHECK(abs.delta_m == doctest::Approx(0.05));
  CHECK(validate(abs).empty());
  SystemParams bad = abs;
  bad.delta_m = 0.3;
  CHECK_THROWS_AS(validate(bad), InvalidParameter);
}

TEST_CASE("H1 decoupled limit is diagonal") {
  SystemParams p;
  p.drive_omega = 0.0;
  p.g_ma = 0.0;
  p.g_mb = 0.0;
  p.kerr_k = 0.0;
  p.delta_a = 0.3;
  p.delta_m = -0.7;
  const auto modes = three_mode_system(2, 3, 2);
  const Matrix h = hamiltonian_h1(p, modes).data();
  const auto dims = mode_dims(modes);
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    for (Eigen::Index c = 0; c < h.cols(); ++c) {
      if (r != c) {
        CHECK(h(r, c) == cplx(0.0));
        continue;
      }
      const auto occ = occupations(r, dims);
      CHECK(std::abs(h(r, r) - (p.delta_a * occ[0] + p.delta_m * occ[1] + p.omega_b * occ[2])) < 1e-13);
    }
  }
}

TEST_CASE("H1 matches per-element formula") {
  const SystemParams p = reference_parameters();
  const auto modes = three_mode_system(2, 2, 2);
  const Matrix h = hamiltonian_h1(p, modes).data();
  CHECK((h - testing_support::h1_elementwise(p, 2, 2, 2)).cwiseAbs().maxCoeff() < 1e-13);

  Draw d(22);
  for (int i = 0; i < 20; ++i) {
    const SystemParams q = random_params(d);
    const int ca = d.integer(2, 3), cm = d.integer(2, 3), cb = d.integer(1, 3);
    const Matrix hq = hamiltonian_h1(q, three_mode_system(ca, cm, cb)).data();
    CHECK((hq - testing_support::h1_elementwise(q, ca, cm, cb)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("H1 and H3 are Hermitian") {
  Draw d(23);
  for (int i = 0; i < 50; ++i) {
    const SystemParams p = random_params(d);
    CHECK(hermiticity_defect(hamiltonian_h1(p, three_mode_system(2, 3, 2)).data()) < 1e-14);
    CHECK(hermiticity_defect(hamiltonian_h3(p, two_mode_system(3, 3)).data()) < 1e-14);
  }
}

TEST_CASE("H1 needs three modes") {
  CHECK_THROWS_AS(hamiltonian_h1(SystemParams{}, two_mode_system(2, 2)), InvalidConfiguration);
  CHECK_THROWS_AS(hamiltonian_h1(SystemParams{}, three_mode_system(1, 2, 1)), InvalidDimension);
}

TEST_CASE("H3 examples") {
  SystemParams p = reference_parameters();
  const auto modes = two_mode_system(2, 2);
  const double n_eff = effective_nonlinearity(p).n_eff;
  const Matrix h3 = hamiltonian_h3(p, modes).data();
  const Eigen::Index one_magnon = idx2(modes, 0, 1);
  CHECK(std::abs(h3(one_magnon, one_magnon) - (p.delta_m + n_eff)) < 1e-15);

  // g_mb = 0: H3 is H1 without the phonon and with K in place of N.
  p.g_mb = 0.0;
  const Matrix h1 = hamiltonian_h1(p, three_mode_system(2, 2, 1)).data();
  const Matrix h3k = hamiltonian_h3(p, modes).data();
  for (Eigen::Index r = 0; r < h3k.rows(); ++r) {
    for (Eigen::Index c = 0; c < h3k.cols(); ++c) CHECK(std::abs(h3k(r, c) - h1(2 * r, 2 * c)) < 1e-15);
  }

  // K = g_mb²/ω_b removes the quartic term.
  SystemParams q = reference_parameters();
  q.kerr_k = q.g_mb * q.g_mb / q.omega_b;
  q.g_ma = 0.0;
  q.drive_omega = 0.0;
  const Matrix hq = hamiltonian_h3(q, modes).data();
  for (int nm = 0; nm <= 2; ++nm) {
    const Eigen::Index k = idx2(modes, 0, nm);
    CHECK(std::abs(hq(k, k) - q.delta_m * nm) < 1e-14);
  }
}

TEST_CASE("H4 examples") {
  SystemParams p = reference_parameters();
  const auto modes = two_mode_system(2, 2);
  const Matrix h4 = hamiltonian_h4(p, modes).data();
  const Eigen::Index one_magnon = idx2(modes, 0, 1);
  const double n_eff = effective_nonlinearity(p).n_eff;
  CHECK(std::abs(h4(one_magnon, one_magnon) - cplx(p.delta_m + n_eff, -p.kappa_m / 2.0)) < 1e-15);

  const Matrix anti = (h4 - h4.adjoint()) / cplx(0.0, 2.0);
  const auto dims = mode_dims(modes);
  for (Eigen::Index r = 0; r < anti.rows(); ++r) {
    const auto occ = occupations(r, dims);
    for (Eigen::Index c = 0; c < anti.cols(); ++c) {
      const double want = r == c ? (p.kappa_a * occ[0] - p.kappa_m * occ[1]) / 2.0 : 0.0;
      CHECK(std::abs(anti(r, c) - want) < 1e-15);
    }
  }

  p.kappa_a = 0.0;
  p.kappa_m = 0.0;
  CHECK((hamiltonian_h4(p, modes).data() - hamiltonian_h3(p, modes).data()).norm() == 0.0);
}

TEST_CASE("coupling matrix") {
  SystemParams p;
  p.delta_a = 0.0;
  p.delta_m = 0.0;
  p.kappa_a = 1.0;
  p.kappa_m = 1.0;
  p.g_ma = 0.5;
  const Eigen::Matrix2cd hk = coupling_matrix_hk(p);
  CHECK(hk(0, 0) == cplx(0.0, -0.5));
  CHECK(hk(0, 1) == cplx(0.5));
  CHECK(hk(1, 0) == cplx(0.5));
  CHECK(hk(1, 1) == cplx(0.0, 0.5));

  p.g_ma = 0.0;
  p.delta_a = 0.2;
  p.delta_m = -0.1;
  const Eigen::Matrix2cd diag = coupling_matrix_hk(p);
  CHECK(diag(0, 1) == cplx(0.0));
  CHECK(diag(0, 0) == cplx(-0.1, -0.5));
  CHECK(diag(1, 1) == cplx(0.2, 0.5));

  Draw d(24);
  for (int i = 0; i < 100; ++i) {
    SystemParams q = random_params(d);
    const Eigen::Matrix2cd m = coupling_matrix_hk(q);
    CHECK(m(0, 1) == m(1, 0));
    // Single-excitation block of H4 with N = 0, Ω = 0, basis [|0,1>, |1,0>]
    // in (cavity, magnon) order, i.e. [magnon, photon].
    q.kerr_k = 0.0;
    q.g_mb = 0.0;
    q.drive_omega = 0.0;
    const auto modes = two_mode_system(2, 2);
    const Matrix h4 = hamiltonian_h4(q, modes).data();
    const Eigen::Index im = idx2(modes, 0, 1), ia = idx2(modes, 1, 0);
    CHECK(std::abs(h4(im, im) - m(0, 0)) < 1e-15);
    CHECK(std::abs(h4(im, ia) - m(0, 1)) < 1e-15);
    CHECK(std::abs(h4(ia, im) - m(1, 0)) < 1e-15);
    CHECK(std::abs(h4(ia, ia) - m(1, 1)) < 1e-15);
  }
}

TEST_CASE("excitation number conservation without drive") {
  Draw d(25);
  for (int i = 0; i < 20; ++i) {
    SystemParams p = random_params(d);
    p.drive_omega = 0.0;
    const auto two = two_mode_system(3, 3);
    const Matrix ntot = (embed(number(3), kCavity, two) + embed(number(3), kMagnon, two)).data();
    const auto dims = mode_dims(two);
    for (const Matrix& h : {hamiltonian_h3(p, two).data(), hamiltonian_h4(p, two).data()}) {
      const Matrix comm = h * ntot - ntot * h;
      // Columns of states at the cutoff edge see the truncation; skip them.
      for (Eigen::Index c = 0; c < comm.cols(); ++c) {
        const auto occ = occupations(c, dims);
        if (occ[0] == 3 || occ[1] == 3) continue;
        CHECK(comm.col(c).norm() < 1e-13);
      }
    }
    const auto three = three_mode_system(3, 3, 2);
    const Matrix ntot3 = (embed(number(3), kCavity, three) + embed(number(3), kMagnon, three)).data();
    const Matrix h1 = hamiltonian_h1(p, three).data();
    const Matrix comm1 = h1 * ntot3 - ntot3 * h1;
    const auto dims3 = mode_dims(three);
    for (Eigen::Index c = 0; c < comm1.cols(); ++c) {
      const auto occ = occupations(c, dims3);
      if (occ[0] == 3 || occ[1] == 3) continue;
      CHECK(comm1.col(c).norm() < 1e-12);
    }
  }
}

TEST_CASE("excitation spectrum") {
  SystemParams p;
  p.kerr_k = 0.0;
  p.g_mb = 0.0;
  p.kappa_a = 0.0;
  p.kappa_m = 0.0;
  p.g_ma = 0.0;
  p.delta_a = 0.3;
  p.delta_m = 0.7;
  auto spectrum = excitation_spectrum(p, 3);
  REQUIRE(spectrum.size() == 4);
  for (const auto& m : spectrum) CHECK(m.eigenvalues.size() == std::size_t(m.total_excitations + 1));
  // Harmonic ladder: manifold n holds k Δ_a + (n-k) Δ_m.
  for (const auto& m : spectrum) {
    for (int k = 0; k <= m.total_excitations; ++k) {
      const double want = k * p.delta_a + (m.total_excitations - k) * p.delta_m;
      bool found = false;
      for (cplx e : m.eigenvalues) found = found || std::abs(e - want) < 1e-12;
      CHECK(found);
    }
  }

  // Kerr: magnon branch E1 = Δ_m + N, E2 = 2Δ_m + 4N.
  SystemParams q = reference_parameters();
  q.g_ma = 0.0;
  q.kappa_a = 0.0;
  q.kappa_m = 0.0;
  const double n_eff = effective_nonlinearity(q).n_eff;
  spectrum = excitation_spectrum(q, 2);
  const auto has = [](const ExcitationManifold& m, cplx v) {
    for (cplx e : m.eigenvalues) {
      if (std::abs(e - v) < 1e-12) return true;
    }
    return false;
  };
  const cplx e1 = q.delta_m + n_eff;
  const cplx e2 = 2.0 * q.delta_m + 4.0 * n_eff;
  CHECK(has(spectrum[1], e1));
  CHECK(has(spectrum[2], e2));
  CHECK(std::abs((e2 - 2.0 * e1) - 2.0 * n_eff) < 1e-15);

  CHECK_THROWS_AS(excitation_spectrum(q, 1), InvalidParameter);
}
