#include "magblock/weak_drive.hpp"

#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "magblock/errors.hpp"

namespace magblock {

namespace {

const double kSqrt2 = std::sqrt(2.0);

enum Slot : Eigen::Index { s00 = 0, s10, s01, s20, s11, s02 };

// Generator of the generalized equations in the slot order above.
Eigen::Matrix<cplx, 6, 6> generalized_generator(const SystemParams& p) {
  const double n_eff = effective_nonlinearity(p).n_eff;
  const cplx magnon(p.delta_m, -p.kappa_m / 2.0);
  const cplx photon(p.delta_a, p.kappa_a / 2.0);
  auto energy = [&](int nm, int na) { return double(nm) * magnon + double(na) * photon + n_eff * nm * nm; };

  const double e = p.drive_omega;
  const double g = p.g_ma;
  Eigen::Matrix<cplx, 6, 6> h = Eigen::Matrix<cplx, 6, 6>::Zero();
  h(s10, s10) = energy(1, 0);
  h(s01, s01) = energy(0, 1);
  h(s20, s20) = energy(2, 0);
  h(s11, s11) = energy(1, 1);
  h(s02, s02) = energy(0, 2);
  auto link = [&h](Slot x, Slot y, double v) { h(x, y) = h(y, x) = v; };
  link(s00, s10, e);
  link(s10, s01, g);
  link(s10, s20, kSqrt2 * e);
  link(s01, s11, e);
  link(s20, s11, kSqrt2 * g);
  link(s11, s02, kSqrt2 * g);
  return h;
}

bool all_finite(const Eigen::Vector<cplx, 6>& v) {
  for (const cplx& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

}  // namespace

Eigen::Vector<cplx, 6> AmplitudeVector::to_vector() const {
  Eigen::Vector<cplx, 6> v;
  v << c00, c10, c01, c20, c11, c02;
  return v;
}

AmplitudeVector AmplitudeVector::from_vector(const Eigen::Vector<cplx, 6>& v) {
  return {v[s00], v[s10], v[s01], v[s20], v[s11], v[s02]};
}

AmplitudeVector amplitude_rhs(const AmplitudeVector& c, const SystemParams& p, RhsVariant variant) {
  if (variant == RhsVariant::generalized) {
    return AmplitudeVector::from_vector(-kI * (generalized_generator(p) * c.to_vector()));
  }
  const double e = p.drive_omega;
  const double g = p.g_ma;
  const double dm = p.delta_m;
  const double km = p.kappa_m;
  const double k = p.kerr_k;
  const double shift = p.g_mb * p.g_mb / p.omega_b;
  // i dC/dt for each amplitude, row by row.
  AmplitudeVector h;
  h.c00 = e * c.c10;
  h.c10 = e * c.c00 + cplx(dm - shift + k, -km / 2.0) * c.c10 + g * c.c01 + kSqrt2 * e * c.c20;
  h.c20 = 2.0 * cplx(dm - 2.0 * shift + 2.0 * k, -km / 2.0) * c.c20 + kSqrt2 * e * c.c10 + kSqrt2 * g * c.c11;
  h.c01 = g * c.c10 + e * c.c11 + cplx(dm, km / 2.0) * c.c01;
  // The drive reaches |1,1> from |0,1> (m† on the photon state).
  h.c11 = kSqrt2 * g * c.c20 + e * c.c01 + kSqrt2 * g * c.c02 + (2.0 * dm + k - shift) * c.c11;
  h.c02 = kSqrt2 * g * c.c11 + 2.0 * cplx(dm, km / 2.0) * c.c02;
  return AmplitudeVector::from_vector(-kI * h.to_vector());
}

AmplitudeVector evolve_amplitudes(const AmplitudeVector& initial, const SystemParams& p, double t_final, double dt,
                                  EvolveOptions options) {
  if (!(t_final > 0.0) || !(dt > 0.0)) throw InvalidParameter("evolve_amplitudes: t_final and dt must be > 0");
  const auto steps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
  const double h = t_final / static_cast<double>(steps);

  auto rhs = [&](const Eigen::Vector<cplx, 6>& v) {
    Eigen::Vector<cplx, 6> d = amplitude_rhs(AmplitudeVector::from_vector(v), p, options.variant).to_vector();
    if (options.pin_vacuum) d[s00] = 0.0;
    return d;
  };

  Eigen::Vector<cplx, 6> y = initial.to_vector();
  for (long n = 0; n < steps; ++n) {
    const Eigen::Vector<cplx, 6> k1 = rhs(y);
    const Eigen::Vector<cplx, 6> k2 = rhs(y + 0.5 * h * k1);
    const Eigen::Vector<cplx, 6> k3 = rhs(y + 0.5 * h * k2);
    const Eigen::Vector<cplx, 6> k4 = rhs(y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!all_finite(y)) {
      throw Divergence("evolve_amplitudes: non-finite amplitude at t = " + std::to_string((n + 1) * h));
    }
  }
  return AmplitudeVector::from_vector(y);
}

AmplitudeVector steady_state_amplitudes(const SystemParams& p) {
  if (p.kappa_a != p.kappa_m || p.delta_a != p.delta_m) {
    throw UnsupportedRegime("closed-form amplitudes need kappa_a == kappa_m and delta_a == delta_m");
  }
  const double d = p.delta_m;
  const double k = p.kappa_m;
  const double kerr = p.kerr_k;
  const double g = p.g_ma;
  const double gb2 = p.g_mb * p.g_mb;
  const double wb = p.omega_b;
  const double w = p.drive_omega;

  const cplx up(d, k / 2.0);  // Δ_m + iκ_m/2
  const cplx single_den = g * g - up * cplx(d + kerr - gb2 / wb, -k / 2.0);
  if (std::abs(single_den) < 1e-300) throw SingularDenominator("single-excitation denominator vanishes");

  const cplx d2(2.0 * d, k);  // 2Δ_m + iκ_m
  // Two-excitation denominator: M = -S * T.
  const cplx s1 = gb2 * wb * (8.0 * g * g - d2 * cplx(10.0 * d + 8.0 * kerr, -k));
  const cplx s2 = wb * wb *
                  ((2.0 * d + kerr) * cplx(4.0 * d * d + k * k + 8.0 * d * kerr, 4.0 * k * kerr) -
                   8.0 * g * g * d - 8.0 * g * g * kerr);
  const cplx s3 = gb2 * gb2 * cplx(8.0 * d, 4.0 * k);
  const cplx s = s1 + s2 + s3;
  const cplx t = 4.0 * g * g * wb + d2 * (2.0 * gb2 + wb * cplx(-2.0 * d - 2.0 * kerr, k));
  const cplx m = -s * t;
  // At g_ma = 0, S shares the root of the two-magnon numerator and the closed
  // form degenerates to 0/0 on the optimal-detuning line.
  const double s_scale = std::abs(s1) + std::abs(s2) + std::abs(s3);
  if (std::abs(m) < 1e-300 || std::abs(s) <= 1e-12 * s_scale) {
    throw SingularDenominator("two-excitation denominator vanishes");
  }

  const double w2 = w * w;
  const double wb2 = wb * wb;
  // Both factors cancel to zero on resonance lines; see optimal_detuning().
  const long double gbl = p.g_mb;
  const double one_photon_factor =
      static_cast<double>(static_cast<long double>(wb) * (static_cast<long double>(d) + kerr) - gbl * gbl);
  const double two_magnon_factor =
      static_cast<double>(static_cast<long double>(wb) * (2.0L * d + kerr) - gbl * gbl);

  AmplitudeVector out;
  out.c00 = 1.0;
  out.c10 = w * up / single_den;
  out.c01 = -w * g / single_den;
  out.c11 = -16.0 * w2 * wb2 * g * d2 * one_photon_factor / m;
  out.c02 = 16.0 * kSqrt2 * w2 * g * g * wb2 * one_photon_factor / m;
  out.c20 = 2.0 * kSqrt2 * w2 * wb2 * d2 * d2 * two_magnon_factor / m;
  return out;
}

AmplitudeVector steady_state_linear_solve(const SystemParams& p, Coupling coupling) {
  Eigen::Matrix<cplx, 6, 6> h = generalized_generator(p);
  if (coupling == Coupling::perturbative) {
    h(s10, s20) = 0.0;
    h(s01, s11) = 0.0;
  }
  const Eigen::Matrix<cplx, 5, 5> a = h.bottomRightCorner<5, 5>();
  const Eigen::Vector<cplx, 5> b = -h.col(s00).tail<5>();
  Eigen::FullPivLU<Eigen::Matrix<cplx, 5, 5>> lu(a);
  const double scale = a.cwiseAbs().maxCoeff();
  lu.setThreshold(1e-14);
  if (scale == 0.0 || !lu.isInvertible()) throw SingularDenominator("steady-state linear system is singular");
  const Eigen::Vector<cplx, 5> x = lu.solve(b);
  AmplitudeVector out;
  out.c00 = 1.0;
  out.c10 = x[0];
  out.c01 = x[1];
  out.c20 = x[2];
  out.c11 = x[3];
  out.c02 = x[4];
  return out;
}

const char* to_string(CorrelationMethod method) noexcept {
  switch (method) {
    case CorrelationMethod::analytic_approx:
      return "analytic_approx";
    case CorrelationMethod::analytic_exact_state:
      return "analytic_exact_state";
    case CorrelationMethod::master_equation:
      return "master_equation";
  }
  return "unknown";
}

CorrelationResult g2_analytic(const AmplitudeVector& state, bool approximate) {
  const double p10 = std::norm(state.c10);
  const double p20 = std::norm(state.c20);
  CorrelationResult out;
  out.numerator = p20;
  if (approximate) {
    out.method = CorrelationMethod::analytic_approx;
    out.denominator = p10;
  } else {
    out.method = CorrelationMethod::analytic_exact_state;
    out.denominator = p10 + std::norm(state.c11) + 2.0 * p20;
  }
  if (out.denominator == 0.0) throw DivisionByZero("g2_analytic: zero single-magnon amplitude");
  out.g2 = 2.0 * out.numerator / (out.denominator * out.denominator);
  return out;
}

double optimal_detuning(const SystemParams& p) {
  if (!(p.omega_b > 0.0)) throw InvalidParameter("optimal_detuning: omega_b must be > 0");
  // The two terms nearly cancel when K ~ g_mb^2/omega_b; extended precision
  // keeps the result within an ulp of the exact root.
  const long double g = p.g_mb;
  return static_cast<double>(g * g / (2.0L * p.omega_b) - static_cast<long double>(p.kerr_k) / 2.0L);
}

double kerr_only_optimal_detuning(const SystemParams& p) noexcept { return -p.kerr_k / 2.0; }

std::vector<ProbabilityRow> probability_curves(const SystemParams& p, std::span<const double> delta_grid) {
  if (delta_grid.empty()) throw InvalidParameter("probability_curves: empty grid");
  std::vector<ProbabilityRow> rows;
  rows.reserve(delta_grid.size());
  for (double delta : delta_grid) {
    SystemParams q = p;
    q.delta_m = q.delta_a = delta;
    try {
      const AmplitudeVector c = steady_state_amplitudes(q);
      rows.push_back({delta, std::abs(c.c10), std::abs(c.c20), true});
    } catch (const SingularDenominator&) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      rows.push_back({delta, nan, nan, false});
    }
  }
  return rows;
}

std::vector<std::size_t> find_dips(std::span<const double> values, double threshold) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] < values[i - 1] && values[i] < values[i + 1] && values[i] < threshold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> find_local_maxima(std::span<const double> values) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] > values[i - 1] && values[i] > values[i + 1]) out.push_back(i);
  }
  return out;
}

std::size_t argmin_finite(std::span<const double> values) {
  std::size_t best = values.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::isfinite(values[i]) && (best == values.size() || values[i] < values[best])) best = i;
  }
  return best;
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  if (points == 0) return {};
  if (points == 1) return {lo};
  std::vector<double> out(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

}  // namespace magblock
