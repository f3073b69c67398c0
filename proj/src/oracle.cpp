#include "sublim/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace sublim::oracle {

namespace {

// |u - P_V(u)| for u = sum_i c_i u_i, computed straight from the definition.
double residual_at(const Subspace& u, const Subspace& v, std::span<const double> coeffs) {
  Vector x(u.ambient_dim(), 0.0);
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    for (std::size_t r = 0; r < x.size(); ++r) x[r] += coeffs[i] * u.basis_vector(i)[r];
  const double len = norm(x);
  for (double& c : x) c /= len;
  return dist_point_subspace(x, v);
}

double search_circle(const Subspace& u, const Subspace& v, const SamplingPlan& plan) {
  const double two_pi = 2.0 * std::numbers::pi;
  const std::size_t n = plan.n_samples;
  double best = -1.0;
  double best_angle = 0.0;
  auto visit = [&](double angle) {
    const std::array<double, 2> c{std::cos(angle), std::sin(angle)};
    const double f = residual_at(u, v, c);
    if (f > best) {
      best = f;
      best_angle = angle;
    }
  };
  for (std::size_t m = 0; m < n; ++m) visit(two_pi * static_cast<double>(m) / static_cast<double>(n));
  double radius = two_pi / static_cast<double>(n);
  for (std::size_t level = 1; level < plan.levels; ++level) {
    const double centre = best_angle;
    for (std::size_t m = 0; m <= n; ++m)
      visit(centre - radius + 2.0 * radius * static_cast<double>(m) / static_cast<double>(n));
    radius /= 10.0;
  }
  return best;
}

double search_sphere(const Subspace& u, const Subspace& v, const SamplingPlan& plan) {
  const std::size_t n = plan.n_samples;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  double best = -1.0;
  std::array<double, 3> best_point{1.0, 0.0, 0.0};
  auto visit = [&](const std::array<double, 3>& p) {
    const double f = residual_at(u, v, p);
    if (f > best) {
      best = f;
      best_point = p;
    }
  };
  for (std::size_t m = 0; m < n; ++m) {
    const double z = 1.0 - 2.0 * (static_cast<double>(m) + 0.5) / static_cast<double>(n);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(m);
    visit({rho * std::cos(phi), rho * std::sin(phi), z});
  }
  // Local grid on the tangent plane of the incumbent, projected back to the sphere.
  const auto side = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  double radius = 2.0 * std::sqrt(4.0 * std::numbers::pi / static_cast<double>(n));
  for (std::size_t level = 1; level < plan.levels; ++level) {
    const auto c = best_point;
    // Tangent frame: pick the axis least aligned with c.
    std::array<double, 3> axis{0.0, 0.0, 0.0};
    const auto weakest = static_cast<std::size_t>(
        std::min_element(c.begin(), c.end(), [](double a, double b) { return std::abs(a) < std::abs(b); }) -
        c.begin());
    axis[weakest] = 1.0;
    std::array<double, 3> t1{c[1] * axis[2] - c[2] * axis[1], c[2] * axis[0] - c[0] * axis[2],
                             c[0] * axis[1] - c[1] * axis[0]};
    const double l1 = std::sqrt(t1[0] * t1[0] + t1[1] * t1[1] + t1[2] * t1[2]);
    for (double& x : t1) x /= l1;
    const std::array<double, 3> t2{c[1] * t1[2] - c[2] * t1[1], c[2] * t1[0] - c[0] * t1[2],
                                   c[0] * t1[1] - c[1] * t1[0]};
    for (std::size_t a = 0; a <= side; ++a) {
      const double s = -radius + 2.0 * radius * static_cast<double>(a) / static_cast<double>(side);
      for (std::size_t b = 0; b <= side; ++b) {
        const double t = -radius + 2.0 * radius * static_cast<double>(b) / static_cast<double>(side);
        std::array<double, 3> p{};
        for (std::size_t r = 0; r < 3; ++r) p[r] = c[r] + s * t1[r] + t * t2[r];
        const double len = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        for (double& x : p) x /= len;
        visit(p);
      }
    }
    radius /= 10.0;
  }
  return best;
}

}  // namespace

void SamplingPlan::validate() const {
  if (n_samples < 100) throw UnsupportedError("sampling plan needs n_samples >= 100");
  if (levels < 1) throw UnsupportedError("sampling plan needs levels >= 1");
}

double gap_bruteforce(const Subspace& u, const Subspace& v, const SamplingPlan& plan) {
  plan.validate();
  if (u.ambient_dim() != v.ambient_dim() || u.dim() != v.dim())
    throw DimensionError("gap_bruteforce: subspaces must share ambient and subspace dimension");
  switch (u.dim()) {
    case 1: {
      const std::array<double, 1> plus{1.0};
      const std::array<double, 1> minus{-1.0};
      return std::max(residual_at(u, v, plus), residual_at(u, v, minus));
    }
    case 2:
      return search_circle(u, v, plan);
    case 3:
      return search_sphere(u, v, plan);
    default:
      throw UnsupportedError("gap_bruteforce supports k <= 3 only");
  }
}

double det_bruteforce(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("det_bruteforce: matrix is not square");
  const std::size_t n = m.rows();
  if (n > 6) throw UnsupportedError("det_bruteforce supports k <= 6 only");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double det = 0.0;
  do {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    double term = inversions % 2 == 0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n; ++i) term *= m(i, perm[i]);
    det += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

}  // namespace sublim::oracle
