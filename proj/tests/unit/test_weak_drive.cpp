#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "magblock/errors.hpp"
#include "magblock/weak_drive.hpp"
#include "test_support.hpp"

using namespace magblock;
using testing_support::Draw;
using testing_support::rel_err;

namespace {

double max_rel(const AmplitudeVector& got, const AmplitudeVector& want) {
  const auto g = got.to_vector();
  const auto w = want.to_vector();
  double worst = 0.0;
  for (int i = 0; i < 6; ++i) worst = std::max(worst, rel_err(g[i], w[i]));
  return worst;
}

AmplitudeVector random_state(Draw& d) {
  return {d.complex(), d.complex(), d.complex(), d.complex(), d.complex(), d.complex()};
}

// Cavity made lossy: κ_a < 0 in the gain convention used by the equations.
SystemParams passive_analog() {
  SystemParams p = reference_parameters();
  p.kappa_a = -1.0;
  return p;
}

}  // namespace

TEST_CASE("rhs examples") {
  const SystemParams p = reference_parameters();
  const AmplitudeVector d = amplitude_rhs(AmplitudeVector::vacuum(), p);
  CHECK(std::abs(d.c10 - cplx(0.0, -p.drive_omega)) < 1e-18);
  CHECK(d.c00 == cplx(0.0));
  CHECK(d.c01 == cplx(0.0));
  CHECK(d.c20 == cplx(0.0));
  CHECK(d.c11 == cplx(0.0));
  CHECK(d.c02 == cplx(0.0));

  SystemParams q = p;
  q.drive_omega = 0.0;
  q.g_ma = 0.0;
  AmplitudeVector photon = AmplitudeVector::zero();
  photon.c01 = 1.0;
  const AmplitudeVector dp = amplitude_rhs(photon, q);
  CHECK(std::abs(dp.c01 - (-kI * cplx(q.delta_m, q.kappa_m / 2.0))) < 1e-16);
  CHECK(std::abs(dp.c10) + std::abs(dp.c11) + std::abs(dp.c00) == 0.0);
}

TEST_CASE("printed and generalized rhs agree on the symmetric line") {
  Draw d(41);
  for (int i = 0; i < 100; ++i) {
    const SystemParams p = d.weak_drive_params();
    const AmplitudeVector c = random_state(d);
    const auto a = amplitude_rhs(c, p, RhsVariant::printed).to_vector();
    const auto b = amplitude_rhs(c, p, RhsVariant::generalized).to_vector();
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-14 * std::max(1.0, a.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("generalized rhs matches the model generator") {
  Draw d(42);
  for (int i = 0; i < 50; ++i) {
    SystemParams p = d.weak_drive_params();
    p.kappa_a = d.uniform(-1.0, 2.0);
    p.delta_a = d.uniform(-2.0, 2.0);
    const AmplitudeVector c = random_state(d);
    const auto want = (-kI * (testing_support::amplitude_generator(p) * c.to_vector())).eval();
    const auto got = amplitude_rhs(c, p, RhsVariant::generalized).to_vector();
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("evolution without drive keeps vacuum") {
  SystemParams p = reference_parameters();
  p.drive_omega = 0.0;
  const AmplitudeVector out = evolve_amplitudes(AmplitudeVector::vacuum(), p, 50.0, 0.01);
  CHECK(out.c00 == cplx(1.0));
  CHECK(std::abs(out.c10) + std::abs(out.c01) + std::abs(out.c20) + std::abs(out.c11) + std::abs(out.c02) == 0.0);
  CHECK_THROWS_AS(evolve_amplitudes(AmplitudeVector::vacuum(), p, 0.0, 0.01), InvalidParameter);
  CHECK_THROWS_AS(evolve_amplitudes(AmplitudeVector::vacuum(), p, 1.0, -0.01), InvalidParameter);
}

TEST_CASE("balanced gain and loss has a growing amplitude mode") {
  // The single-excitation block at the reference set has an eigenvalue with
  // positive imaginary part, so a long run from vacuum cannot settle on the
  // closed-form fixed point.
  const SystemParams p = reference_parameters();
  const auto g = testing_support::amplitude_generator(p);
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(g.block<2, 2>(1, 1));
  const double growth = std::max(es.eigenvalues()[0].imag(), es.eigenvalues()[1].imag());
  CHECK(growth > 0.0);

  EvolveOptions opt;
  opt.pin_vacuum = true;
  const AmplitudeVector ss = steady_state_amplitudes(p);
  bool settled = false;
  try {
    const AmplitudeVector out = evolve_amplitudes(AmplitudeVector::vacuum(), p, 200.0, 0.01, opt);
    settled = rel_err(out.c10, ss.c10) < 1e-4;
  } catch (const Divergence&) {
    settled = false;
  }
  CHECK_FALSE(settled);
}

TEST_CASE("long-time evolution reaches the fixed point for a passive cavity") {
  const SystemParams p = passive_analog();
  EvolveOptions opt;
  opt.pin_vacuum = true;
  const AmplitudeVector out = evolve_amplitudes(AmplitudeVector::vacuum(), p, 200.0, 0.01, opt);
  const AmplitudeVector fixed = steady_state_linear_solve(p, Coupling::full);
  CHECK(max_rel(out, fixed) < 1e-4);

  // Without pinning, c00 leaks at O(Ω² t) but amplitude ratios still settle.
  const AmplitudeVector free = evolve_amplitudes(AmplitudeVector::vacuum(), p, 200.0, 0.01);
  CHECK(rel_err(free.c10 / free.c00, fixed.c10) < 1e-3);
  CHECK(rel_err(free.c20 / free.c00, fixed.c20) < 1e-3);
}

TEST_CASE("RK4 convergence order") {
  const SystemParams p = passive_analog();
  AmplitudeVector start = AmplitudeVector::vacuum();
  start.c10 = 0.3;
  start.c01 = cplx(0.0, 0.2);
  auto run = [&](double dt) { return evolve_amplitudes(start, p, 5.0, dt).to_vector(); };
  const auto y1 = run(0.2), y2 = run(0.1), y3 = run(0.05);
  const double e1 = (y1 - y2).norm();
  const double e2 = (y2 - y3).norm();
  const double order = std::log2(e1 / e2);
  CHECK(order > 3.7);
  CHECK(order < 4.3);
}

TEST_CASE("closed form examples") {
  SystemParams p = reference_parameters();
  p.drive_omega = 0.0;
  const AmplitudeVector z = steady_state_amplitudes(p);
  CHECK(std::abs(z.c10) + std::abs(z.c01) + std::abs(z.c20) + std::abs(z.c11) + std::abs(z.c02) == 0.0);

  Draw d(43);
  for (int i = 0; i < 100; ++i) {
    const SystemParams q = d.weak_drive_params();
    const AmplitudeVector c = steady_state_amplitudes(q);
    CHECK(rel_err(c.c01 / c.c10, -q.g_ma / cplx(q.delta_m, q.kappa_m / 2.0)) < 1e-12);
  }

  SystemParams off = reference_parameters();
  off.kappa_a = 0.8;
  CHECK_THROWS_AS(steady_state_amplitudes(off), UnsupportedRegime);
  off = reference_parameters();
  off.delta_a = 0.1;
  CHECK_THROWS_AS(steady_state_amplitudes(off), UnsupportedRegime);
}

TEST_CASE("two-magnon amplitude vanishes at the optimal detuning") {
  Draw d(44);
  for (int i = 0; i < 200; ++i) {
    SystemParams p = reference_parameters();
    p.omega_b = d.uniform(20.0, 200.0);
    p.g_mb = d.uniform(0.0, p.omega_b / 10.0);
    p.kerr_k = d.uniform(-0.2, 0.2);
    p.delta_m = p.delta_a = optimal_detuning(p);
    const AmplitudeVector c = steady_state_amplitudes(p);
    CHECK(std::abs(c.c20) < 1e-12 * p.drive_omega * p.drive_omega);
  }
}

TEST_CASE("closed form equals the order-by-order oracle") {
  Draw d(45);
  for (int i = 0; i < 500; ++i) {
    const SystemParams p = d.weak_drive_params();
    const AmplitudeVector want = testing_support::perturbative_steady_state(p);
    CHECK(max_rel(steady_state_amplitudes(p), want) < 1e-10);
    CHECK(max_rel(steady_state_linear_solve(p), want) < 1e-10);
  }
  SystemParams ref = reference_parameters();
  ref.delta_m = ref.delta_a = 0.3;
  CHECK(max_rel(steady_state_amplitudes(ref), steady_state_linear_solve(ref)) < 1e-10);
}

TEST_CASE("linear solve examples") {
  SystemParams p = reference_parameters();
  p.g_ma = 0.0;
  // At Δ = 0.04 the uncoupled |1,1> level is resonant and lossless.
  CHECK_THROWS_AS(steady_state_linear_solve(p), SingularDenominator);
  p.delta_m = p.delta_a = 0.3;
  const AmplitudeVector c = steady_state_linear_solve(p);
  CHECK(c.c01 == cplx(0.0));
  CHECK(c.c11 == cplx(0.0));
  CHECK(c.c02 == cplx(0.0));
  const double n_eff = effective_nonlinearity(p).n_eff;
  CHECK(rel_err(c.c10, -p.drive_omega / cplx(p.delta_m + n_eff, -p.kappa_m / 2.0)) < 1e-14);

  const SystemParams one = reference_parameters();
  SystemParams two = one;
  two.drive_omega *= 2.0;
  const AmplitudeVector a = steady_state_linear_solve(one), b = steady_state_linear_solve(two);
  CHECK(rel_err(b.c10, 2.0 * a.c10) < 1e-13);
  CHECK(rel_err(b.c01, 2.0 * a.c01) < 1e-13);
  CHECK(rel_err(b.c20, 4.0 * a.c20) < 1e-13);
  CHECK(rel_err(b.c11, 4.0 * a.c11) < 1e-13);
  CHECK(rel_err(b.c02, 4.0 * a.c02) < 1e-13);

  // Off the symmetric line the linear solve still matches the oracle.
  Draw d(46);
  for (int i = 0; i < 100; ++i) {
    SystemParams q = d.weak_drive_params();
    q.kappa_a = d.uniform(0.2, 2.0);
    q.delta_a = d.uniform(-2.0, 2.0);
    CHECK(max_rel(steady_state_linear_solve(q), testing_support::perturbative_steady_state(q)) < 1e-10);
  }
}

TEST_CASE("amplitude hierarchy at weak drive") {
  Draw d(47);
  for (int i = 0; i < 100; ++i) {
    SystemParams p = d.weak_drive_params();
    p.drive_omega = 0.01;
    const AmplitudeVector c = steady_state_amplitudes(p);
    const double single = std::max(std::abs(c.c10), std::abs(c.c01));
    const double dbl = std::max({std::abs(c.c20), std::abs(c.c11), std::abs(c.c02)});
    CHECK(std::abs(c.c00) >= 3.0 * single);
    CHECK(single >= 3.0 * dbl);
  }
}

TEST_CASE("g2 formulas") {
  AmplitudeVector s = AmplitudeVector::vacuum();
  s.c10 = 0.1;
  s.c20 = 0.0;
  CHECK(g2_analytic(s).g2 == 0.0);
  s.c10 = 1.0;
  s.c20 = 1.0 / std::sqrt(2.0);
  const CorrelationResult r = g2_analytic(s);
  CHECK(r.g2 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.g2 == doctest::Approx(2.0 * r.numerator / (r.denominator * r.denominator)));
  CHECK(r.method == CorrelationMethod::analytic_approx);
  s.c10 = 0.0;
  CHECK_THROWS_AS(g2_analytic(s), DivisionByZero);

  Draw d(48);
  for (int i = 0; i < 200; ++i) {
    const SystemParams p = d.weak_drive_params();
    const AmplitudeVector c = steady_state_amplitudes(p);
    const CorrelationResult exact = g2_analytic(c, false);
    CHECK(exact.g2 >= 0.0);
    CHECK(exact.method == CorrelationMethod::analytic_exact_state);
    CHECK(exact.g2 == doctest::Approx(2.0 * exact.numerator / (exact.denominator * exact.denominator)));
    const double p10 = std::norm(c.c10);
    if (std::norm(c.c11) <= 0.01 * p10 && 2.0 * std::norm(c.c20) <= 0.01 * p10) {
      CHECK(std::abs(exact.g2 - g2_analytic(c).g2) <= 0.05 * g2_analytic(c).g2);
    }
  }
}

TEST_CASE("g2 is drive independent at leading order") {
  SystemParams a = reference_parameters();
  for (double delta : {-0.5, -0.1, 0.0, 0.2, 0.5}) {
    a.delta_m = a.delta_a = delta;
    SystemParams b = a;
    a.drive_omega = 0.005;
    b.drive_omega = 0.01;
    const double ga = g2_analytic(steady_state_amplitudes(a)).g2;
    const double gb = g2_analytic(steady_state_amplitudes(b)).g2;
    CHECK(std::abs(ga - gb) < 0.01 * gb);
  }
}

TEST_CASE("optimal detuning") {
  SystemParams p;
  p.g_mb = 0.0;
  p.kerr_k = 0.0;
  CHECK(optimal_detuning(p) == 0.0);
  CHECK(optimal_detuning(reference_parameters()) == doctest::Approx(0.04).epsilon(1e-14));
  CHECK(kerr_only_optimal_detuning(reference_parameters()) == doctest::Approx(-0.005));
  SystemParams q = reference_parameters();
  const double base = optimal_detuning(q);
  for (double k : {0.0, 0.01, 0.1, 0.5}) {
    q.kerr_k = k;
    CHECK(optimal_detuning(q) - (base + 0.005) == doctest::Approx(-k / 2.0));
  }
  q.omega_b = 0.0;
  CHECK_THROWS_AS(optimal_detuning(q), InvalidParameter);
}

TEST_CASE("probability curves") {
  const std::vector<double> grid = linspace(-2.0, 2.0, 801);
  SystemParams p = reference_parameters();

  p.g_ma = 0.8;
  auto rows = probability_curves(p, grid);
  std::vector<double> c10;
  for (const auto& r : rows) c10.push_back(r.abs_c10);
  CHECK(find_local_maxima(c10).size() == 2);

  p.g_ma = 0.0;
  rows = probability_curves(p, grid);
  c10.clear();
  for (const auto& r : rows) c10.push_back(r.abs_c10);
  CHECK(find_local_maxima(c10).size() <= 1);

  // |c20| vanishes at Δ_opt whenever the photon couples.
  for (double g : {0.3, 0.5, 0.8}) {
    p.g_ma = g;
    const double opt = optimal_detuning(p);
    const std::vector<double> at{opt};
    const auto r = probability_curves(p, at);
    REQUIRE(r[0].ok);
    CHECK(r[0].abs_c20 < 1e-12 * p.drive_omega * p.drive_omega);
  }
  // Without the photon the zero cancels against the denominator: the point
  // is a recorded gap and the neighbourhood stays finite.
  p.g_ma = 0.0;
  const double opt = optimal_detuning(p);
  const std::vector<double> near{opt - 1e-3, opt, opt + 1e-3};
  const auto gap = probability_curves(p, near);
  CHECK(gap[0].ok);
  CHECK_FALSE(gap[1].ok);
  CHECK(std::isnan(gap[1].abs_c20));
  CHECK(gap[2].ok);
  CHECK(gap[0].abs_c20 > 1e-3 * p.drive_omega * p.drive_omega);

  CHECK_THROWS_AS(probability_curves(p, std::vector<double>{}), InvalidParameter);
}

TEST_CASE("grid helpers") {
  const std::vector<double> v{3.0, 1.0, 2.0, 0.5, 0.98, 2.0, 2.0, 1.5, 4.0};
  CHECK(find_dips(v) == std::vector<std::size_t>{3});
  CHECK(find_dips(v, 5.0) == std::vector<std::size_t>{1, 3, 7});
  CHECK(find_local_maxima(v) == std::vector<std::size_t>{2});
  const std::vector<double> w{std::nan(""), 2.0, 1.0, std::nan("")};
  CHECK(argmin_finite(w) == 2);
  CHECK(linspace(-2.0, 2.0, 801)[400] == 0.0);
  CHECK(linspace(-2.0, 2.0, 801).back() == 2.0);
}
