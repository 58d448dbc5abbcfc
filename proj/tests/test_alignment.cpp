#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tge/alignment.hpp"
#include "tge/errors.hpp"
#include "tge/matrix.hpp"
#include "tge/qr.hpp"
#include "tge/rng.hpp"

using namespace tge;

namespace {

DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                          double scale = 2.0) {
  DenseMatrix m(rows, cols);
  Rng rng(seed);
  for (double& x : m.flat()) x = rng.next_symmetric(scale);
  return m;
}

double row_norm(const DenseMatrix& m, std::size_t v) {
  double sum = 0.0;
  for (double x : m.row(v)) sum += x * x;
  return std::sqrt(sum);
}

double orthogonality_defect(const DenseMatrix& q) {
  return max_abs_diff(matmul(transpose(q), q),
                      DenseMatrix::identity(q.rows()));
}

}  // namespace

TEST_CASE("angle matrices on a vanished feature read as no rotation") {
  const DenseMatrix earlier = random_matrix(3, 2, 11);
  const DenseMatrix later(3, 2);  // all zeros
  const AngleMatrices am = angle_matrices(earlier, later);
  for (std::size_t v = 0; v < 3; ++v) {
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(am.cos_alpha(v, i) == 1.0);
      CHECK(am.cos_beta(v, i) == 0.0);
    }
  }
}

TEST_CASE("angle matrices on unchanged values sit at the diagonal angle") {
  DenseMatrix earlier(2, 2);
  earlier(0, 0) = 3.0;
  earlier(0, 1) = -1.5;
  earlier(1, 0) = 0.25;
  earlier(1, 1) = -7.0;
  const AngleMatrices am = angle_matrices(earlier, earlier);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t v = 0; v < 2; ++v) {
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(am.cos_alpha(v, i) == doctest::Approx(inv_sqrt2).epsilon(1e-15));
      CHECK(am.cos_beta(v, i) == doctest::Approx(-inv_sqrt2).epsilon(1e-15));
    }
  }
}

TEST_CASE("angle matrices reproduce the scalar worked example") {
  DenseMatrix earlier(1, 1);
  DenseMatrix later(1, 1);
  earlier(0, 0) = 3.0;
  later(0, 0) = 4.0;
  const AngleMatrices am = angle_matrices(earlier, later);
  CHECK(std::abs(am.cos_alpha(0, 0) - (-0.6)) <= 1e-12);
  CHECK(std::abs(am.cos_beta(0, 0) - 0.8) <= 1e-12);
}

TEST_CASE("angle matrices honor the zero tolerance") {
  DenseMatrix earlier(1, 1);
  DenseMatrix later(1, 1);
  earlier(0, 0) = 2.0;
  later(0, 0) = 1e-8;
  const AngleMatrices strict = angle_matrices(earlier, later, 1e-12);
  CHECK(strict.cos_beta(0, 0) != 0.0);
  const AngleMatrices loose = angle_matrices(earlier, later, 1e-6);
  CHECK(loose.cos_alpha(0, 0) == 1.0);
  CHECK(loose.cos_beta(0, 0) == 0.0);
}

TEST_CASE("angle matrices reject mismatched shapes") {
  CHECK_THROWS_WITH_AS(angle_matrices(DenseMatrix(2, 3), DenseMatrix(3, 2)),
                       doctest::Contains("shape mismatch"), Error);
}

TEST_CASE("angle pairs are unit vectors elementwise") {
  const DenseMatrix earlier = random_matrix(50, 8, 21);
  const DenseMatrix later = random_matrix(50, 8, 22);
  const AngleMatrices am = angle_matrices(earlier, later);
  for (std::size_t v = 0; v < 50; ++v) {
    for (std::size_t i = 0; i < 8; ++i) {
      const double a = am.cos_alpha(v, i);
      const double b = am.cos_beta(v, i);
      REQUIRE(std::abs(a * a + b * b - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("correlation of a 1x1 angle pair is the plain product") {
  AngleMatrices am{DenseMatrix(1, 1), DenseMatrix(1, 1)};
  am.cos_alpha(0, 0) = -0.6;
  am.cos_beta(0, 0) = 0.8;
  const DenseMatrix c = correlation_matrix(am);
  REQUIRE(c.rows() == 1);
  REQUIRE(c.cols() == 1);
  CHECK(c(0, 0) == doctest::Approx(-0.48).epsilon(1e-15));
}

TEST_CASE("correlation vanishes when every second cosine is zero") {
  // Zero cos_beta wipes the product regardless of cos_alpha.
  const AngleMatrices am{random_matrix(4, 3, 31), DenseMatrix(4, 3)};
  const DenseMatrix c = correlation_matrix(am);
  CHECK(max_abs(c) == 0.0);
}

TEST_CASE("correlation matches the brute-force double loop") {
  const DenseMatrix earlier = random_matrix(8, 4, 41);
  const DenseMatrix later = random_matrix(8, 4, 42);
  const AngleMatrices am = angle_matrices(earlier, later);
  const DenseMatrix c = correlation_matrix(am);
  REQUIRE(c.rows() == 4);
  REQUIRE(c.cols() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      double sum = 0.0;
      for (std::size_t v = 0; v < 8; ++v) {
        sum += am.cos_beta(v, i) * am.cos_alpha(v, j);
      }
      CHECK(std::abs(c(i, j) - sum) <= 1e-12);
    }
  }
}

TEST_CASE("stable basis of the identity is the identity") {
  const DenseMatrix q = stable_basis(DenseMatrix::identity(4));
  CHECK(max_abs_diff(q, DenseMatrix::identity(4)) <= 1e-14);
}

TEST_CASE("stable basis of a positive diagonal is the identity") {
  DenseMatrix c(3, 3);
  c(0, 0) = 2.0;
  c(1, 1) = 0.5;
  c(2, 2) = 7.0;
  CHECK(max_abs_diff(stable_basis(c), DenseMatrix::identity(3)) <= 1e-14);
}

TEST_CASE("stable basis is orthogonal for arbitrary input") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DenseMatrix q = stable_basis(random_matrix(5, 5, 100 + seed));
    CHECK(orthogonality_defect(q) <= 1e-10);
  }
}

TEST_CASE("alignment needs at least two snapshots") {
  EmbeddingSeries one;
  one.dim = 2;
  one.snapshots.push_back(DenseMatrix(3, 2));
  CHECK_THROWS_WITH_AS(align_series(one),
                       doctest::Contains("at least two snapshots"), Error);
}

TEST_CASE("alignment keeps the first snapshot and preserves geometry") {
  EmbeddingSeries series;
  series.dim = 4;
  for (std::uint64_t t = 0; t < 5; ++t) {
    series.snapshots.push_back(random_matrix(12, 4, 200 + t));
  }
  const AlignmentResult res = align_series(series);
  REQUIRE(res.aligned.num_snapshots() == 5);
  REQUIRE(res.bases.size() == 4);
  CHECK(res.aligned.snapshots[0] == series.snapshots[0]);
  for (const DenseMatrix& q : res.bases) {
    CHECK(orthogonality_defect(q) <= 1e-10);
  }
  for (std::size_t t = 0; t < 5; ++t) {
    const DenseMatrix& raw = series.snapshots[t];
    const DenseMatrix& rotated = res.aligned.snapshots[t];
    CHECK(std::abs(frobenius_norm(rotated) - frobenius_norm(raw)) <= 1e-10);
    for (std::size_t v = 0; v < 12; ++v) {
      CHECK(std::abs(row_norm(rotated, v) - row_norm(raw, v)) <= 1e-10);
    }
  }
}

TEST_CASE("one-dimensional alignment is a sign choice") {
  EmbeddingSeries series;
  series.dim = 1;
  series.snapshots.push_back(random_matrix(6, 1, 301));
  series.snapshots.push_back(random_matrix(6, 1, 302));
  const AlignmentResult res = align_series(series);
  REQUIRE(res.bases.size() == 1);
  const double q = res.bases[0](0, 0);
  CHECK(std::abs(std::abs(q) - 1.0) <= 1e-12);
  for (std::size_t v = 0; v < 6; ++v) {
    CHECK(res.aligned.snapshots[1](v, 0) ==
          doctest::Approx(series.snapshots[1](v, 0) * q).epsilon(1e-15));
  }
}

TEST_CASE("transposing the basis rotates by the inverse") {
  EmbeddingSeries series;
  series.dim = 3;
  series.snapshots.push_back(random_matrix(9, 3, 401));
  series.snapshots.push_back(random_matrix(9, 3, 402));
  const AlignmentResult plain = align_series(series);
  const AlignmentResult flipped =
      align_series(series, {.transpose_basis = true});
  REQUIRE(plain.bases.size() == 1);
  REQUIRE(flipped.bases.size() == 1);
  CHECK(flipped.bases[0] == transpose(plain.bases[0]));
  CHECK(max_abs_diff(flipped.aligned.snapshots[1],
                     matmul(series.snapshots[1], transpose(plain.bases[0]))) ==
        0.0);
}

TEST_CASE("referencing raw predecessors changes later steps only") {
  EmbeddingSeries series;
  series.dim = 3;
  for (std::uint64_t t = 0; t < 4; ++t) {
    series.snapshots.push_back(random_matrix(10, 3, 500 + t));
  }
  const AlignmentResult chained = align_series(series);
  const AlignmentResult raw_ref = align_series(series, {.reference_raw = true});
  // The first step has the same reference either way.
  CHECK(chained.bases[0] == raw_ref.bases[0]);
  // Later steps see different references, so the bases genuinely diverge.
  CHECK(max_abs_diff(chained.bases[1], raw_ref.bases[1]) > 1e-8);
  // Both stay orthogonal.
  for (const DenseMatrix& q : raw_ref.bases) {
    CHECK(orthogonality_defect(q) <= 1e-10);
  }
}

TEST_CASE("aligning an unchanging series applies one fixed rotation") {
  // When every snapshot equals the first, each step sees the same
  // (reference, next) pair only if the reference is the raw series; with
  // the default chained reference the frame keeps turning. Both variants
  // must preserve norms; the raw-referenced one must reuse one basis.
  EmbeddingSeries series;
  series.dim = 3;
  const DenseMatrix base = random_matrix(7, 3, 601);
  for (int t = 0; t < 3; ++t) series.snapshots.push_back(base);
  const AlignmentResult res = align_series(series, {.reference_raw = true});
  CHECK(res.bases[0] == res.bases[1]);
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK(std::abs(frobenius_norm(res.aligned.snapshots[t]) -
                   frobenius_norm(base)) <= 1e-10);
  }
}
