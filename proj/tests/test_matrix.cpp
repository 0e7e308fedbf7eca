#include "catch_amalgamated.hpp"

#include <qpsurf/matrix.hpp>

#include <random>

using namespace qpsurf;

namespace {

Matrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int spread = 2) {
  std::uniform_int_distribution<int> d(-spread, spread);
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

}  // namespace

TEST_CASE("matrix arithmetic and shapes") {
  Matrix a{{1, 2}, {3, 4}};
  Matrix b{{0, 1}, {1, 0}};
  CHECK(a * b == Matrix{{2, 1}, {4, 3}});
  CHECK(a.transpose() == Matrix{{1, 3}, {2, 4}});
  CHECK((a - a).is_zero());
  CHECK(Matrix::identity(3).is_identity());
  CHECK_THROWS(a + Matrix(3, 2));
  CHECK(hstack({a, b}, 2).cols() == 4);
  CHECK(vstack({a, b}, 2).rows() == 4);
  CHECK(hstack({}, 3).rows() == 3);
}

TEST_CASE("rank, kernel and column space") {
  Matrix m{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  CHECK(rank(m) == 2);
  Matrix k = kernel_basis(m);
  REQUIRE(k.cols() == 1);
  CHECK((m * k).is_zero());
  CHECK(column_space_basis(m).cols() == 2);
  CHECK(kernel_basis(Matrix(0, 3)).cols() == 3);
  CHECK(kernel_basis(Matrix(2, 0)).cols() == 0);
}

TEST_CASE("solve and inverse") {
  Matrix a{{2, 1}, {1, 1}};
  auto inv = inverse(a);
  REQUIRE(inv);
  CHECK((a * *inv).is_identity());
  CHECK_FALSE(inverse(Matrix{{1, 2}, {2, 4}}));
  auto x = solve(a, Matrix{{3}, {2}});
  REQUIRE(x);
  CHECK(*x == Matrix{{1}, {1}});
  CHECK_FALSE(solve(Matrix{{1}, {1}}, Matrix{{1}, {2}}));
}

TEST_CASE("quotient maps kill the span and split it") {
  Matrix span{{1}, {1}, {0}};
  QuotientMaps q = quotient_by(span, 3);
  CHECK(q.projection.rows() == 2);
  CHECK((q.projection * span).is_zero());
  CHECK((q.projection * q.lift).is_identity());
}

TEST_CASE("random rank-nullity and pivot rules agree on dimensions") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 5;
    Matrix m = random_matrix(rng, r, c, trial % 3 == 0 ? 1 : 2);
    for (PivotRule rule : {PivotRule::leftmost, PivotRule::rightmost}) {
      Matrix k = kernel_basis(m, rule);
      CHECK(rank(m) + k.cols() == c);
      CHECK((m * k).is_zero());
      Matrix im = column_space_basis(m, rule);
      CHECK(im.cols() == rank(m));
      CHECK(rank(hstack({im, m}, r)) == rank(m));
      Matrix ext = extend_to_basis(k, c, rule);
      CHECK(is_invertible(ext));
      QuotientMaps q = quotient_by(im, r, rule);
      CHECK((q.projection * m).is_zero());
      CHECK((q.projection * q.lift).is_identity());
    }
  }
}

TEST_CASE("intersection dimension") {
  Matrix u{{1, 0}, {0, 1}, {0, 0}};
  Matrix w{{1}, {1}, {1}};
  Matrix v{{1}, {1}, {0}};
  CHECK(intersection_dim(u, w) == 0);
  CHECK(intersection_dim(u, v) == 1);
}

TEST_CASE("matrix text round trip") {
  Matrix m{{1, Rational(-2, 3)}, {0, 5}};
  CHECK(parse_matrix(to_string(m), 2, 2) == m);
  CHECK_THROWS(parse_matrix("[[1,2],[3]]", 2, 2));
}
