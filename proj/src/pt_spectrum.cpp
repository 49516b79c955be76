#include "magblock/pt_spectrum.hpp"

#include <cmath>

#include "magblock/errors.hpp"

namespace magblock {

namespace {

double discriminant_of(const SystemParams& p) {
  const double loss = (p.kappa_a + p.kappa_m) / 4.0;
  return p.g_ma * p.g_ma - loss * loss;
}

// Principal branch: non-negative real part, ties broken to non-negative
// imaginary part.
cplx principal_sqrt(cplx z) {
  cplx r = std::sqrt(z);
  if (r.real() < 0.0 || (r.real() == 0.0 && r.imag() < 0.0)) r = -r;
  return r;
}

}  // namespace

PtRegion classify(double discriminant, double ep_tol) noexcept {
  if (discriminant < -ep_tol) return PtRegion::broken;
  if (discriminant > ep_tol) return PtRegion::unbroken;
  return PtRegion::exceptional_point;
}

const char* to_string(PtRegion region) noexcept {
  switch (region) {
    case PtRegion::broken:
      return "broken";
    case PtRegion::exceptional_point:
      return "exceptional_point";
    case PtRegion::unbroken:
      return "unbroken";
  }
  return "unknown";
}

EigenPair eigenvalues_closed_form(const SystemParams& p) {
  if (p.delta_a != p.delta_m) {
    throw UnsupportedRegime("closed-form eigenvalues require delta_a == delta_m; use eigenvalues_numeric");
  }
  EigenPair out;
  out.lambda = (p.kappa_a - p.kappa_m) / 2.0;
  out.discriminant = discriminant_of(p);
  const cplx centre(p.delta_m, out.lambda / 2.0);
  const cplx split = principal_sqrt(cplx(out.discriminant, 0.0));
  out.xi_plus = centre + split;
  out.xi_minus = centre - split;
  return out;
}

std::pair<cplx, cplx> eigenvalues_2x2(const Eigen::Matrix2cd& m) {
  const cplx mean = (m(0, 0) + m(1, 1)) / 2.0;
  const cplx half_gap = (m(0, 0) - m(1, 1)) / 2.0;
  const cplx split = principal_sqrt(half_gap * half_gap + m(0, 1) * m(1, 0));
  return {mean + split, mean - split};
}

EigenPair eigenvalues_numeric(const SystemParams& p) {
  const auto [plus, minus] = eigenvalues_2x2(coupling_matrix_hk(p));
  EigenPair out;
  out.xi_plus = plus;
  out.xi_minus = minus;
  out.lambda = (p.kappa_a - p.kappa_m) / 2.0;
  out.discriminant = discriminant_of(p);
  return out;
}

EigenPair pair_to(const EigenPair& reference, const EigenPair& candidate) {
  const double keep = std::abs(candidate.xi_plus - reference.xi_plus) + std::abs(candidate.xi_minus - reference.xi_minus);
  const double swap = std::abs(candidate.xi_minus - reference.xi_plus) + std::abs(candidate.xi_plus - reference.xi_minus);
  if (swap < keep) {
    EigenPair out = candidate;
    std::swap(out.xi_plus, out.xi_minus);
    return out;
  }
  return candidate;
}

double exceptional_point_coupling(double kappa_a, double kappa_m) {
  if (!(kappa_a + kappa_m > 0.0)) throw InvalidParameter("exceptional point needs kappa_a + kappa_m > 0");
  return (kappa_a + kappa_m) / 4.0;
}

std::vector<EigenSweepRow> sweep_eigenvalues(const SystemParams& p, EigenSweepAxis axis, std::span<const double> grid) {
  if (grid.empty()) throw InvalidParameter("sweep_eigenvalues: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw InvalidParameter("sweep_eigenvalues: grid must be strictly increasing");
  }
  std::vector<EigenSweepRow> rows;
  rows.reserve(grid.size());
  EigenPair previous;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SystemParams q = p;
    (axis == EigenSweepAxis::g_ma ? q.g_ma : q.kappa_a) = grid[i];
    EigenPair pair = eigenvalues_numeric(q);
    if (i > 0) pair = pair_to(previous, pair);
    previous = pair;
    rows.push_back({grid[i], pair.xi_plus - q.delta_m, pair.xi_minus - q.delta_m, pair.discriminant,
                    classify(pair.discriminant)});
  }
  return rows;
}

}  // namespace magblock
