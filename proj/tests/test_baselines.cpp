#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "geosim/baselines.hpp"
#include "geosim/linalg.hpp"
#include "geosim/stats.hpp"

using namespace geosim;

namespace {

const Grid2D kGrid{25, 25};
const VariogramModel kSpherical{VariogramKind::Spherical, 1.0, 12.0};
const VariogramModel kExponential{VariogramKind::Exponential, 1.0, 6.0};

std::pair<Field, Field> test_pair(std::uint64_t seed) {
  const Rng rng(seed);
  return generate_pair(kGrid, kSpherical, kExponential, {RelationshipKind::GaussianMix, 0.1}, rng);
}

bool same_sorted(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> sa = a, sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return sa == sb;
}

} // namespace

TEST_SUITE_BEGIN("baselines");

TEST_CASE("cholesky factors a known SPD matrix exactly") {
  Matrix a(3, 3);
  a(0, 0) = 4;  a(0, 1) = 2;  a(0, 2) = 2;
  a(1, 0) = 2;  a(1, 1) = 5;  a(1, 2) = 3;
  a(2, 0) = 2;  a(2, 1) = 3;  a(2, 2) = 6;
  REQUIRE(cholesky_in_place(a));
  CHECK(a(0, 0) == 2.0);
  CHECK(a(1, 0) == 1.0);
  CHECK(a(1, 1) == 2.0);
  CHECK(a(2, 0) == 1.0);
  CHECK(a(2, 1) == 1.0);
  CHECK(a(2, 2) == 2.0);
  CHECK(a(0, 1) == 0.0); // upper triangle zeroed

  Matrix indefinite(2, 2);
  indefinite(0, 0) = 1.0;
  indefinite(0, 1) = indefinite(1, 0) = 2.0;
  indefinite(1, 1) = 1.0;
  CHECK_FALSE(cholesky_in_place(indefinite));
}

TEST_CASE("rho estimate is 1 for comonotone data") {
  const Grid2D grid(5, 2);
  std::vector<double> x{1, 5, 2, 8, 3, 9, 4, 7, 6, 0};
  std::vector<double> y;
  for (double v : x) y.push_back(2.0 * v);
  CHECK(estimate_rho(x, y) == doctest::Approx(1.0).epsilon(1e-12));
  for (auto& v : y) v = -v;
  CHECK(estimate_rho(x, y) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("joint covariance has the Kronecker block structure") {
  const Grid2D grid(4, 4);
  const double rho = 0.6;
  const Matrix sigma = joint_covariance(grid, kSpherical, kExponential, rho);
  const int n = grid.size();
  REQUIRE(sigma.rows() == 2 * n);

  // unit diagonal: average of the two unit sills
  CHECK(sigma(0, 0) == 1.0);
  CHECK(sigma(n, n) == 1.0);
  // cross block is rho times the shared spatial covariance
  for (int i = 0; i < n; i += 3)
    for (int j = 0; j < n; j += 5) {
      CHECK(sigma(i, n + j) == doctest::Approx(rho * sigma(i, j)).epsilon(1e-15));
      CHECK(sigma(i, j) == sigma(n + i, n + j));
      CHECK(sigma(i, j) == sigma(j, i)); // symmetry
    }
}

TEST_CASE("lu gaussian stage with rho 0 gives independent halves") {
  const auto [gx, gy] = lu_gaussian_stage(kGrid, kSpherical, kExponential, 0.0, Rng(9));
  // block-diagonal factor: the X half never touches the second noise block,
  // so it is identical for any rho
  const auto [gx2, gy2] = lu_gaussian_stage(kGrid, kSpherical, kExponential, 0.9, Rng(9));
  CHECK(gx == gx2);
  CHECK(gy != gy2);
  // sample correlation of two independent spatially correlated fields; the
  // effective sample count is far below n, so the band is wide
  CHECK(std::abs(pearson(gx, gy)) < 0.3);
}

TEST_CASE("lu gaussian stage reproduces the requested correlation") {
  for (double rho : {0.4, 0.7, 0.9}) {
    const auto [gx, gy] = lu_gaussian_stage(kGrid, kSpherical, kExponential, rho, Rng(10));
    CHECK(std::abs(pearson(gx, gy) - rho) < 0.15);
  }
}

TEST_CASE("both baselines preserve each marginal exactly") {
  const auto [x, y] = test_pair(42);
  const auto [cx, cy] = gaussian_copula_sim(x, y, kGrid, kSpherical, kExponential, Rng(1));
  CHECK(same_sorted(cx.values, x.values));
  CHECK(same_sorted(cy.values, y.values));
  CHECK(cx.values != x.values); // but not the identity arrangement

  const auto [lx, ly] = lu_joint_sim(x, y, kGrid, kSpherical, kExponential, Rng(2));
  CHECK(same_sorted(lx.values, x.values));
  CHECK(same_sorted(ly.values, y.values));
}

TEST_CASE("baselines are deterministic under a fixed stream") {
  const auto [x, y] = test_pair(42);
  const auto a = gaussian_copula_sim(x, y, kGrid, kSpherical, kExponential, Rng(5));
  const auto b = gaussian_copula_sim(x, y, kGrid, kSpherical, kExponential, Rng(5));
  CHECK(a.first.values == b.first.values);
  CHECK(a.second.values == b.second.values);

  const auto c = lu_joint_sim(x, y, kGrid, kSpherical, kExponential, Rng(5));
  const auto d = lu_joint_sim(x, y, kGrid, kSpherical, kExponential, Rng(5));
  CHECK(c.first.values == d.first.values);
  CHECK(c.second.values == d.second.values);
}

TEST_CASE("constant variables are rejected") {
  const Grid2D grid(3, 3);
  const Field constant(std::vector<double>(9, 1.0), grid);
  Rng rng(3);
  std::vector<double> yv(9);
  for (auto& v : yv) v = rng.normal();
  const Field y(yv, grid);
  CHECK_THROWS_AS(gaussian_copula_sim(constant, y, grid, kSpherical, kExponential, Rng(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(lu_joint_sim(y, constant, grid, kSpherical, kExponential, Rng(1)),
                  std::invalid_argument);
}

TEST_CASE("dense factorization cap") {
  const Grid2D big(50, 50);
  Rng rng(4);
  std::vector<double> v(2500);
  for (auto& x : v) x = rng.normal();
  const Field a(v, big);
  for (auto& x : v) x = rng.normal();
  const Field b(v, big);
  CHECK_THROWS_AS(lu_joint_sim(a, b, big, kSpherical, kExponential, Rng(1)),
                  std::invalid_argument);
}

TEST_SUITE_END();
