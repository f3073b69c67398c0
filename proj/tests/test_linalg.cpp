#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sublim/linalg.hpp"
#include "sublim/oracle.hpp"
#include "test_support.hpp"

using namespace sublim;
using sublim::testing::Random;
using sublim::testing::span;
using sublim::testing::unit;

namespace {

double plain_dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("inner product") {
  CHECK(inner(unit(3, 0), unit(3, 0)) == 1.0);
  CHECK(inner(unit(3, 0), unit(3, 1)) == 0.0);
  CHECK(inner(Vector{1, 2}, Vector{3, 4}) == 11.0);
  CHECK_THROWS_AS(inner(Vector{1, 2}, Vector{1, 2, 3}), DimensionError);

  Random rng(7);
  for (int t = 0; t < 50; ++t) {
    const Vector u = rng.vector(5);
    const Vector v = rng.vector(5);
    CHECK(inner(u, v) == doctest::Approx(plain_dot(u, v)).epsilon(1e-14));
    CHECK(inner(u, u) >= 0.0);
  }
}

TEST_CASE("orthonormalize") {
  SUBCASE("already orthonormal input is returned unchanged") {
    const Subspace s = orthonormalize(std::vector<Vector>{unit(2, 0), unit(2, 1)});
    CHECK(s.basis_vector(0) == unit(2, 0));
    CHECK(s.basis_vector(1) == unit(2, 1));
  }
  SUBCASE("scaling") {
    const Subspace s = orthonormalize(std::vector<Vector>{{2, 0, 0}});
    CHECK(s.basis_vector(0) == Vector{1, 0, 0});
  }
  SUBCASE("hand-computed Gram-Schmidt of (1,1), (1,0)") {
    const Subspace s = orthonormalize(std::vector<Vector>{{1, 1}, {1, 0}});
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(s.basis_vector(0)[0] == doctest::Approx(r).epsilon(1e-15));
    CHECK(s.basis_vector(0)[1] == doctest::Approx(r).epsilon(1e-15));
    CHECK(s.basis_vector(1)[0] == doctest::Approx(r).epsilon(1e-15));
    CHECK(s.basis_vector(1)[1] == doctest::Approx(-r).epsilon(1e-15));
    CHECK(orthonormality_defect(s.basis()) <= 1e-15);
  }
  SUBCASE("rank deficiency names the offending vector") {
    try {
      orthonormalize(std::vector<Vector>{{1, 0, 0}, {0, 1, 0}, {1, 1, 1e-12}});
      FAIL("expected RankDeficiencyError");
    } catch (const RankDeficiencyError& e) {
      CHECK(e.index() == 2);
    }
    CHECK_THROWS_AS(orthonormalize(std::vector<Vector>{{0, 0}}), RankDeficiencyError);
    CHECK_THROWS_AS(orthonormalize(std::vector<Vector>{{1, 0}, {0, 1}, {1, 1}}), RankDeficiencyError);
  }
  SUBCASE("mismatched lengths and non-finite input") {
    CHECK_THROWS_AS(orthonormalize(std::vector<Vector>{{1, 0}, {0, 1, 0}}), DimensionError);
    CHECK_THROWS_AS(orthonormalize(std::vector<Vector>{{1, NAN}}), NumericalError);
  }
  SUBCASE("random inputs: orthonormal and span-preserving") {
    Random rng(11);
    for (int t = 0; t < 200; ++t) {
      const std::size_t d = rng.index(1, 8);
      const std::size_t k = rng.index(1, d);
      std::vector<Vector> rows;
      for (std::size_t i = 0; i < k; ++i) rows.push_back(rng.vector(d));
      const Subspace s = orthonormalize(rows);
      CHECK(orthonormality_defect(s.basis()) <= 1e-10);
      for (const auto& x : rows) CHECK(dist_point_subspace(x, s) <= 1e-9 * norm(x));
    }
  }
  SUBCASE("nearly dependent but admissible columns still come out orthonormal") {
    // Hilbert-like columns, the classic Gram-Schmidt stress case.
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < 6; ++i) {
      Vector r(12);
      for (std::size_t j = 0; j < 12; ++j) r[j] = 1.0 / static_cast<double>(i + j + 1);
      rows.push_back(r);
    }
    const Subspace s = orthonormalize(rows);
    CHECK(orthonormality_defect(s.basis()) <= 1e-10);
  }
}

TEST_CASE("Subspace::from_orthonormal validates") {
  CHECK_NOTHROW(Subspace::from_orthonormal({unit(3, 0), unit(3, 2)}));
  CHECK_THROWS_AS(Subspace::from_orthonormal({{1, 1}}), NumericalError);
  CHECK_THROWS_AS(Subspace::from_orthonormal({}), DimensionError);
  CHECK_THROWS_AS(Subspace::from_orthonormal({unit(1, 0), unit(1, 0)}), DimensionError);
}

TEST_CASE("projection and point distance") {
  const Subspace e1 = span({unit(3, 0)});
  const Subspace e2 = span({unit(3, 1)});
  CHECK(project(unit(3, 0), e1) == unit(3, 0));
  CHECK(project(unit(3, 0), e2) == Vector{0, 0, 0});
  CHECK(project(Vector{1, 1, 0}, span({unit(3, 0), unit(3, 2)})) == Vector{1, 0, 0});
  CHECK_THROWS_AS(project(Vector{1, 0}, e1), DimensionError);

  CHECK(dist_point_subspace(unit(3, 0), e1) == 0.0);
  CHECK(dist_point_subspace(unit(3, 0), e2) == 1.0);
  CHECK(dist_point_subspace(Vector{1, 1}, span({unit(2, 0)})) == 1.0);

  CHECK(projection_norm_sq(unit(3, 0), e1) == 1.0);
  CHECK(projection_norm_sq(unit(3, 0), e2) == 0.0);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(projection_norm_sq(Vector{r, r}, span({unit(2, 0)})) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("projection properties on random instances") {
  Random rng(23);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t d = rng.index(1, 6);
    const std::size_t k = rng.index(1, std::min<std::size_t>(3, d));
    const Subspace v = rng.subspace(d, k);
    const Vector u = rng.vector(d);
    const Vector p = project(u, v);
    const double residual = dist_point_subspace(u, v);
    // u - P_V(u) is orthogonal to V.
    Vector diff = u;
    for (std::size_t i = 0; i < d; ++i) diff[i] -= p[i];
    for (const auto& b : v.basis()) CHECK(std::abs(inner(diff, b)) <= 1e-10 * (1.0 + norm(u)));
    // Pythagoras.
    CHECK(std::abs(inner(u, u) - (inner(p, p) + residual * residual)) <= 1e-10 * (1.0 + inner(u, u)));
    // |P_V(u)|^2 as a sum of squared coefficients.
    CHECK(std::abs(projection_norm_sq(u, v) - inner(p, p)) <= 1e-12 * (1.0 + inner(u, u)));
  }
}

TEST_CASE("gap examples") {
  Random rng(5);
  const Subspace u = rng.subspace(4, 2);
  CHECK(gap(u, u) <= 1e-15);
  CHECK(gap(span({unit(2, 0)}), span({unit(2, 1)})) == 1.0);

  const Subspace diag = span({Vector{1, 1}});
  // Frozen from oracle::gap_bruteforce (k = 1: u = +-e1 exhausts the unit sphere).
  const double oracle_value = oracle::gap_bruteforce(span({unit(2, 0)}), diag);
  CHECK(oracle_value == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
  CHECK(gap(span({unit(2, 0)}), diag) == doctest::Approx(oracle_value).epsilon(1e-12));
}

TEST_CASE("gap errors") {
  CHECK_THROWS_AS(gap(span({unit(3, 0)}), span({unit(3, 0), unit(3, 1)})), DimensionError);
  CHECK_THROWS_AS(gap(span({unit(3, 0)}), span({unit(2, 0)})), DimensionError);
}

TEST_CASE("gap properties on random pairs") {
  Random rng(99);
  for (int t = 0; t < 500; ++t) {
    const std::size_t d = rng.index(2, 6);
    const std::size_t k = rng.index(1, std::min<std::size_t>(3, d));
    const Subspace u = rng.subspace(d, k);
    const Subspace v = rng.subspace(d, k);
    const double g = gap(u, v);
    CHECK(g >= 0.0);
    CHECK(g <= 1.0);
    CHECK(std::abs(g - gap(v, u)) <= 1e-9);
    CHECK(std::abs(g - gap(u.with_mixed_basis(rng.orthogonal(k)), v)) <= 1e-9);
    CHECK(std::abs(g - gap(u, v.with_mixed_basis(rng.orthogonal(k)))) <= 1e-9);
    // The literal cross-Gram route agrees up to its own square-root conditioning.
    CHECK(std::abs(g - gap_cross_gram(u, v)) <= 1e-7);
    // Same subspace, different basis.
    CHECK(gap(u, u.with_mixed_basis(rng.orthogonal(k))) <= 1e-8);
    if (k < d) CHECK(g > 1e-8);
  }
}

TEST_CASE("gap resolves small angles") {
  // Two lines at angle t: gap = sin t.
  for (double t : {1e-3, 1e-6, 1e-9, 1e-12}) {
    const Subspace a = span({unit(2, 0)});
    const Subspace b = span({Vector{std::cos(t), std::sin(t)}});
    CHECK(gap(a, b) == doctest::Approx(std::sin(t)).epsilon(1e-6));
  }
}

TEST_CASE("gramian and n-norm") {
  CHECK(gramian(std::vector<Vector>{unit(2, 0), unit(2, 1)}) == 1.0);
  const Vector u{0.3, -1.2, 2.0};
  CHECK(std::abs(gramian(std::vector<Vector>{u, u})) <= 1e-10);
  const std::vector<Vector> pair{{1, 1}, {1, 0}};
  CHECK(gramian(pair) == doctest::Approx(oracle::det_bruteforce(gram_matrix(pair))).epsilon(1e-12));
  CHECK(gramian(pair) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(n_norm(pair) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(n_norm(std::vector<Vector>{unit(3, 0), unit(3, 1), unit(3, 2)}) == 1.0);
  // |u, P_V(u)| with u = e1, V = span{e2}: the second vector is zero.
  CHECK(n_norm(std::vector<Vector>{unit(2, 0), project(unit(2, 0), span({unit(2, 1)}))}) == 0.0);
  CHECK_THROWS_AS(gramian(std::vector<Vector>{{1, 0}, {1, 0, 0}}), DimensionError);
  CHECK_THROWS_AS(gramian(std::vector<Vector>{}), DimensionError);
}

TEST_CASE("gramian agrees with permutation expansion and scales quadratically") {
  Random rng(31);
  for (int t = 0; t < 300; ++t) {
    const std::size_t d = rng.index(1, 7);
    const std::size_t n = rng.index(1, std::min<std::size_t>(6, d));
    std::vector<Vector> xs;
    for (std::size_t i = 0; i < n; ++i) xs.push_back(rng.vector(d));
    const double g = gramian(xs);
    const double ref = oracle::det_bruteforce(gram_matrix(xs));
    CHECK(std::abs(g - ref) <= 1e-9 * std::max(1.0, std::abs(ref)));
    CHECK(g >= -1e-10);

    const double c = rng.uniform(-3.0, 3.0);
    std::vector<Vector> scaled = xs;
    for (double& x : scaled[0]) x *= c;
    CHECK(std::abs(gramian(scaled) - c * c * g) <= 1e-9 * std::max(1.0, std::abs(c * c * g)));

    // A repeated vector makes the family dependent.
    if (n >= 2) {
      std::vector<Vector> dep = xs;
      dep[1] = dep[0];
      CHECK(std::abs(gramian(dep)) <= 1e-10 * std::max(1.0, std::pow(inner(xs[0], xs[0]), 2.0) * 10));
    }
  }
}

TEST_CASE("volume identity: |u, v_1..v_k|^2 + sum <u,v_j>^2 = 1") {
  Random rng(47);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t d = rng.index(2, 6);
    const std::size_t k = rng.index(1, std::min<std::size_t>(3, d));
    const Subspace v = rng.subspace(d, k);
    const Vector u = rng.unit_vector(d);
    std::vector<Vector> args{u};
    for (const auto& b : v.basis()) args.push_back(b);
    const double vol = n_norm(args);
    CHECK(std::abs(vol * vol + projection_norm_sq(u, v) - 1.0) <= 1e-10);
  }
}

TEST_CASE("gramian of more than d vectors is zero") {
  const std::vector<Vector> xs{unit(2, 0), unit(2, 1), Vector{1, 1}};
  CHECK(std::abs(gramian(xs)) <= 1e-12);
}

TEST_CASE("jacobi eigenvalues") {
  Matrix a(3, 3);
  a(0, 0) = 2; a(0, 1) = 1; a(0, 2) = 0;
  a(1, 0) = 1; a(1, 1) = 2; a(1, 2) = 1;
  a(2, 0) = 0; a(2, 1) = 1; a(2, 2) = 2;
  const auto eig = jacobi_eigenvalues(a);
  // 2 - sqrt2, 2, 2 + sqrt2
  CHECK(eig.values[0] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-13));
  CHECK(eig.values[1] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(eig.values[2] == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-13));
  CHECK(eig.sweeps <= 50);

  CHECK(jacobi_eigenvalues(Matrix(2, 2)).values == std::vector<double>{0.0, 0.0});
  CHECK_THROWS_AS(jacobi_eigenvalues(Matrix(2, 3)), DimensionError);

  Random rng(3);
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = rng.index(1, 10);
    Matrix m(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j) m(i, j) = m(j, i) = rng.normal();
    const auto e = jacobi_eigenvalues(m);
    double trace = 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) trace += m(i, i);
    for (double x : e.values) sum += x;
    CHECK(sum == doctest::Approx(trace).epsilon(1e-10));
    CHECK(determinant(m) == doctest::Approx([&] {
                              double p = 1.0;
                              for (double x : e.values) p *= x;
                              return p;
                            }()).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("complement basis") {
  Random rng(17);
  for (int t = 0; t < 50; ++t) {
    const std::size_t d = rng.index(2, 6);
    const std::size_t k = rng.index(1, d - 1);
    const Subspace v = rng.subspace(d, k);
    const auto extra = complement_basis(v);
    REQUIRE(extra.size() == d - k);
    std::vector<Vector> all = v.basis();
    all.insert(all.end(), extra.begin(), extra.end());
    CHECK(orthonormality_defect(all) <= 1e-12);
  }
}
