// Copyright (c) 2026 The lrtf Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "lrtf/numeric.hpp"
#include "lrtf/tensor.hpp"
#include "oracles.hpp"

using namespace lrtf;

namespace {

DenseTensor iota_tensor(const std::vector<std::size_t>& dims) {
  DenseTensor t(dims);
  for (std::size_t f = 0; f < t.size(); ++f) t[f] = static_cast<double>(f + 1);
  return t;
}

}  // namespace

TEST_CASE("tensor construction validates dims and data") {
  CHECK_THROWS_AS(DenseTensor({2, 0, 3}), std::invalid_argument);
  CHECK_THROWS_AS(DenseTensor(std::vector<std::size_t>{}), std::invalid_argument);
  CHECK_THROWS_AS(DenseTensor({2, 2}, std::vector<double>{1.0, 2.0, 3.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Matrix(2, 2, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("unfold of the 2x2x2 iota tensor along mode 1") {
  const DenseTensor t = iota_tensor({2, 2, 2});
  const Matrix m = unfold(t, ModeIndex(1));
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 4);
  const std::vector<double> row0{1, 3, 2, 4};
  const std::vector<double> row1{5, 7, 6, 8};
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(m(0, j) == row0[j]);
    CHECK(m(1, j) == row1[j]);
  }
  CHECK(oracles::unfold(t, 1) == m);
}

TEST_CASE("unfold matches the index-map oracle on random tensors") {
  Rng rng(42);
  for (const auto& dims :
       {std::vector<std::size_t>{3, 4, 5}, {2, 3}, {7}, {2, 2, 2, 3}, {2, 3, 2, 2, 2}}) {
    const DenseTensor t = oracles::random_tensor(dims, rng);
    for (int n = 1; n <= t.order(); ++n)
      CHECK(unfold(t, ModeIndex(n)) == oracles::unfold(t, n));
  }
}

TEST_CASE("fold inverts unfold bitwise, orders up to 5") {
  Rng rng(7);
  for (const auto& dims :
       {std::vector<std::size_t>{3, 4, 5}, {6}, {2, 5}, {2, 3, 2, 4}, {2, 2, 3, 2, 2}}) {
    const DenseTensor t = oracles::random_tensor(dims, rng);
    for (int n = 1; n <= t.order(); ++n)
      CHECK(fold(unfold(t, ModeIndex(n)), ModeIndex(n), dims) == t);
  }
}

TEST_CASE("fold of the documented 2x4 matrix restores the iota tensor") {
  const Matrix m(2, 4, {1, 3, 2, 4, 5, 7, 6, 8});
  CHECK(fold(m, ModeIndex(1), {2, 2, 2}) == iota_tensor({2, 2, 2}));
}

TEST_CASE("degenerate 1-order unfold and fold") {
  const DenseTensor t = iota_tensor({5});
  const Matrix m = unfold(t, ModeIndex(1));
  REQUIRE(m.rows() == 5);
  REQUIRE(m.cols() == 1);
  for (std::size_t i = 0; i < 5; ++i) CHECK(m(i, 0) == t[i]);
  CHECK(fold(m, ModeIndex(1), {5}) == t);
}

TEST_CASE("unfold and fold reject bad modes and shapes") {
  const DenseTensor t = iota_tensor({2, 3});
  CHECK_THROWS_AS(unfold(t, ModeIndex(0)), std::invalid_argument);
  CHECK_THROWS_AS(unfold(t, ModeIndex(3)), std::invalid_argument);
  CHECK_THROWS_AS(fold(Matrix(2, 2), ModeIndex(1), {2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(fold(Matrix(2, 3), ModeIndex(4), {2, 3}), std::invalid_argument);
}

TEST_CASE("mode_n_product identity, summation and zero cases") {
  const DenseTensor t = iota_tensor({2, 2, 2});

  Matrix eye(2, 2);
  eye(0, 0) = eye(1, 1) = 1.0;
  CHECK(mode_n_product(t, eye, ModeIndex(2)) == t);

  const Matrix ones_row(1, 2, {1.0, 1.0});
  const DenseTensor sums = mode_n_product(t, ones_row, ModeIndex(3));
  REQUIRE(sums.dims() == std::vector<std::size_t>{2, 2, 1});
  const std::vector<double> expected{3, 7, 11, 15};
  for (std::size_t f = 0; f < 4; ++f) CHECK(sums[f] == expected[f]);

  const DenseTensor zeros = mode_n_product(t, Matrix(3, 2), ModeIndex(1));
  CHECK(norm(zeros, NormKind::l0) == 0.0);

  CHECK_THROWS_AS(mode_n_product(t, Matrix(2, 3), ModeIndex(1)), std::invalid_argument);
}

TEST_CASE("mode_n_product matches the contraction oracle and is linear") {
  Rng rng(11);
  const DenseTensor t = oracles::random_tensor({3, 4, 2}, rng);
  for (int n = 1; n <= 3; ++n) {
    Matrix a(3, t.dims()[static_cast<std::size_t>(n) - 1]);
    Matrix b(3, a.cols());
    for (double& v : a.data()) v = rng.standard_normal();
    for (double& v : b.data()) v = rng.standard_normal();

    const DenseTensor got = mode_n_product(t, a, ModeIndex(n));
    const DenseTensor want = oracles::mode_n_product(t, a, n);
    for (std::size_t f = 0; f < got.size(); ++f)
      CHECK(got[f] == Catch::Approx(want[f]).margin(1e-12));

    Matrix ab = a;
    for (std::size_t f = 0; f < ab.size(); ++f) ab.data()[f] += b.data()[f];
    const DenseTensor lhs = mode_n_product(t, ab, ModeIndex(n));
    const DenseTensor ra = mode_n_product(t, a, ModeIndex(n));
    const DenseTensor rb = mode_n_product(t, b, ModeIndex(n));
    for (std::size_t f = 0; f < lhs.size(); ++f)
      CHECK(lhs[f] == Catch::Approx(ra[f] + rb[f]).margin(1e-12));
  }
}

TEST_CASE("outer_rank1 basics") {
  const DenseTensor m = outer_rank1({{1, 2}, {3, 4}});
  REQUIRE(m.dims() == std::vector<std::size_t>{2, 2});
  CHECK(m.data() == std::vector<double>{3, 4, 6, 8});

  const DenseTensor z = outer_rank1({{1, 2}, {0, 0}, {5}});
  CHECK(norm(z, NormKind::l0) == 0.0);

  const DenseTensor single = outer_rank1({{5, 6}});
  REQUIRE(single.order() == 1);
  CHECK(single.data() == std::vector<double>{5, 6});

  CHECK_THROWS_AS(outer_rank1({}), std::invalid_argument);
}

TEST_CASE("outer_rank1 then unfold(.,1) matches the elementwise oracle") {
  Rng rng(5);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<std::vector<double>> vecs;
    for (std::size_t m = 0; m < 3; ++m) {
      std::vector<double> v(2 + rng.uniform_index(3));
      for (double& x : v) x = rng.standard_normal();
      vecs.push_back(v);
    }
    const DenseTensor got = outer_rank1(vecs);
    const DenseTensor want = oracles::outer(vecs);
    REQUIRE(got.same_dims(want));
    for (std::size_t f = 0; f < got.size(); ++f)
      CHECK(got[f] == Catch::Approx(want[f]).margin(1e-14));
    CHECK(unfold(got, ModeIndex(1)) == oracles::unfold(want, 1));
  }
}

TEST_CASE("hadamard") {
  const DenseTensor a({3}, {1, 2, 3});
  CHECK(hadamard(a, DenseTensor({3}, 1.0)) == a);
  CHECK(norm(hadamard(a, DenseTensor({3}, 0.0)), NormKind::l0) == 0.0);
  CHECK(hadamard(a, DenseTensor({3}, {4, 5, 6})).data() ==
        std::vector<double>{4, 10, 18});
  CHECK_THROWS_AS(hadamard(a, DenseTensor({4}, 1.0)), std::invalid_argument);
}

TEST_CASE("inner product") {
  const DenseTensor a({2}, {1, 2});
  const DenseTensor b({2}, {3, 4});
  CHECK(inner(a, b) == 11.0);
  CHECK(inner(a, DenseTensor({2}, 0.0)) == 0.0);

  Rng rng(3);
  const DenseTensor t = oracles::random_tensor({4, 3}, rng);
  const double fro = norm(t, NormKind::fro);
  CHECK(inner(t, t) == Catch::Approx(fro * fro).epsilon(1e-12));

  const DenseTensor u = oracles::random_tensor({4, 3}, rng);
  CHECK(inner(t, u) == Catch::Approx(inner(u, t)).margin(1e-14));
  DenseTensor scaled = u;
  for (std::size_t f = 0; f < scaled.size(); ++f) scaled[f] *= 2.5;
  CHECK(inner(t, scaled) == Catch::Approx(2.5 * inner(t, u)).margin(1e-10));
  CHECK_THROWS_AS(inner(a, DenseTensor({3}, 1.0)), std::invalid_argument);
}

TEST_CASE("norms and their unfolding invariance") {
  CHECK(norm(DenseTensor({4}, 0.0), NormKind::fro) == 0.0);
  CHECK(norm(DenseTensor({4}, 0.0), NormKind::l1) == 0.0);
  CHECK(norm(DenseTensor({4}, 0.0), NormKind::l0) == 0.0);
  CHECK(norm(DenseTensor({2}, {3, 4}), NormKind::fro) == 5.0);

  Rng rng(17);
  DenseTensor t = oracles::random_tensor({3, 4, 2}, rng);
  t[5] = 0.0;  // give l0 something to skip
  for (int n = 1; n <= 3; ++n) {
    const Matrix m = unfold(t, ModeIndex(n));
    CHECK(norm(t, NormKind::fro) ==
          Catch::Approx(norm(m, NormKind::fro)).epsilon(1e-12));
    CHECK(norm(t, NormKind::l1) == Catch::Approx(norm(m, NormKind::l1)).epsilon(1e-12));
    CHECK(norm(t, NormKind::l0) == norm(m, NormKind::l0));
  }
}

TEST_CASE("slice3 orientations and errors") {
  const DenseTensor t = iota_tensor({2, 2, 2});
  const Matrix front1 = slice3(t, SliceOrientation::frontal, 1);
  CHECK(front1(0, 0) == 1);
  CHECK(front1(0, 1) == 3);
  CHECK(front1(1, 0) == 5);
  CHECK(front1(1, 1) == 7);

  // Frontal slice k of a rank-1 tensor is t_k * (u v^T).
  const std::vector<double> u{1.5, -2.0}, v{0.5, 3.0}, tk{2.0, -1.0};
  const DenseTensor r1 = outer_rank1({u, v, tk});
  for (std::size_t k = 0; k < 2; ++k) {
    const Matrix s = slice3(r1, SliceOrientation::frontal, static_cast<int>(k) + 1);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        CHECK(s(i, j) == Catch::Approx(tk[k] * u[i] * v[j]).margin(1e-14));
  }

  // All frontal slices reassemble the tensor.
  Rng rng(23);
  const DenseTensor rt = oracles::random_tensor({3, 4, 5}, rng);
  DenseTensor rebuilt(rt.dims(), 0.0);
  for (int k = 1; k <= 5; ++k) {
    const Matrix s = slice3(rt, SliceOrientation::frontal, k);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        rebuilt(i, j, static_cast<std::size_t>(k) - 1) = s(i, j);
  }
  CHECK(rebuilt == rt);

  const Matrix lat = slice3(rt, SliceOrientation::lateral, 2);
  REQUIRE(lat.rows() == 3);
  REQUIRE(lat.cols() == 5);
  CHECK(lat(1, 3) == rt(1, 1, 3));
  const Matrix hor = slice3(rt, SliceOrientation::horizontal, 3);
  REQUIRE(hor.rows() == 4);
  REQUIRE(hor.cols() == 5);
  CHECK(hor(2, 4) == rt(2, 2, 4));

  CHECK_THROWS_AS(slice3(iota_tensor({2, 2}), SliceOrientation::frontal, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(slice3(rt, SliceOrientation::frontal, 6), std::invalid_argument);
  CHECK_THROWS_AS(slice3(rt, SliceOrientation::frontal, 0), std::invalid_argument);
}

TEST_CASE("vec_matrix column-stacks") {
  const Matrix m(2, 2, {1, 2, 3, 4});
  CHECK(vec_matrix(m) == std::vector<double>{1, 3, 2, 4});

  const Matrix col(3, 1, {7, 8, 9});
  CHECK(vec_matrix(col) == std::vector<double>{7, 8, 9});

  const Matrix wide(2, 5, std::vector<double>(10, 1.0));
  CHECK(vec_matrix(wide).size() == 10);
}

TEST_CASE("weighted_objective") {
  Rng rng(31);
  const DenseTensor x = oracles::random_tensor({3, 3}, rng);
  const DenseTensor w = oracles::random_tensor({3, 3}, rng);
  CHECK(weighted_objective(x, w, x) == 0.0);
  CHECK(weighted_objective(x, DenseTensor({3, 3}, 0.0), DenseTensor({3, 3}, 123.0)) ==
        0.0);
  CHECK(weighted_objective(DenseTensor({1}, {2.0}), DenseTensor({1}, {3.0}),
                           DenseTensor({1}, {0.0})) == 36.0);
  CHECK_THROWS_AS(weighted_objective(x, w, DenseTensor({3, 4}, 0.0)),
                  std::invalid_argument);
}
