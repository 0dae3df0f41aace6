#include <random>

#include "doctest.h"
#include "fk/linalg.hpp"

using namespace fk;

namespace {

SparseMatrix random_matrix(std::mt19937& rng, int rows, int cols) {
    SparseMatrix M(rows, cols);
    std::uniform_int_distribution<int> val(-4, 4);
    std::uniform_int_distribution<int> fill(0, 2);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (fill(rng) == 0) M.set(r, c, Scalar(val(rng)));
    return M;
}

SparseVec random_vec(std::mt19937& rng, int n) {
    SparseVec v;
    std::uniform_int_distribution<int> val(-3, 3);
    for (int i = 0; i < n; ++i) v.add_term(i, Scalar(val(rng)));
    return v;
}

}  // namespace

TEST_CASE("scalar fields") {
    CHECK_THROWS(Field(2));
    CHECK_THROWS(Field(3));
    CHECK_THROWS(Field(9));
    Field f5(5);
    Scalar a(3, f5), b(4, f5);
    CHECK((a * b).raw() == 2);          // 12 mod 5
    CHECK((a / b).raw() == 2);          // 3 * 4^{-1} = 3*4 = 12 = 2 mod 5
    Scalar q(mpq_class(2, 6));
    CHECK(q.str() == "1/3");
    CHECK(Scalar(-2).str() == "-2/1");
    CHECK(Scalar(7).pretty() == "7");
}

TEST_CASE("kernel of identity is empty") {
    SparseMatrix I(2, 2);
    I.set(0, 0, Scalar(1));
    I.set(1, 1, Scalar(1));
    CHECK(kernel_basis(I).dim() == 0);
}

TEST_CASE("kernel of [1 1]") {
    SparseMatrix M(1, 2);
    M.set(0, 0, Scalar(1));
    M.set(0, 1, Scalar(1));
    Subspace K = kernel_basis(M);
    REQUIRE(K.dim() == 1);
    // echelon normalization: pivot at the free column with coefficient 1
    CHECK(K.basis[0].at(0) == Scalar(-1));
    CHECK(K.basis[0].at(1) == Scalar(1));
}

TEST_CASE("solve against identity and zero") {
    SparseMatrix I(3, 3);
    for (int i = 0; i < 3; ++i) I.set(i, i, Scalar(1));
    SparseVec b;
    b.add_term(0, Scalar(2));
    b.add_term(2, Scalar(-5));
    auto x = solve(I, b);
    REQUIRE(x.has_value());
    CHECK(*x == b);

    SparseMatrix Z(2, 2);
    SparseVec c = SparseVec::unit(1, Scalar(1));
    CHECK(!solve(Z, c).has_value());
}

TEST_CASE("rank-nullity on random matrices") {
    std::mt19937 rng(12345);
    for (int t = 0; t < 40; ++t) {
        SparseMatrix M = random_matrix(rng, 3 + t % 7, 2 + t % 9);
        RrefSolver s(M, false);
        CHECK(s.rank() + s.kernel().dim() == M.cols);
    }
}

TEST_CASE("solve recovers a vector with the same image") {
    std::mt19937 rng(777);
    for (int t = 0; t < 30; ++t) {
        SparseMatrix M = random_matrix(rng, 4 + t % 5, 3 + t % 6);
        SparseVec x = random_vec(rng, M.cols);
        SparseVec b = M.apply(x);
        auto x2 = solve(M, b);
        REQUIRE(x2.has_value());
        CHECK(M.apply(*x2) == b);
    }
}

TEST_CASE("quotient coordinates") {
    // S = {0}: v maps to itself
    Subspace zero;
    zero.ambient_dim = 3;
    SparseVec v = SparseVec::unit(1, Scalar(4));
    CHECK(quotient_coordinates(v, zero) == v);

    std::mt19937 rng(999);
    for (int t = 0; t < 20; ++t) {
        SparseMatrix M = random_matrix(rng, 4, 6);
        Subspace S = RrefSolver(M, false).row_space();
        // members reduce to zero
        SparseVec combo;
        for (auto& b : S.basis) combo.axpy(Scalar((int)(t % 5) - 2), b);
        CHECK(quotient_coordinates(combo, S).empty());
        // linearity
        SparseVec u = random_vec(rng, 6), w = random_vec(rng, 6);
        SparseVec lhs = quotient_coordinates(u + w, S);
        SparseVec rhs = quotient_coordinates(u, S) + quotient_coordinates(w, S);
        CHECK(lhs == rhs);
        // equal coordinates iff difference in S
        SparseVec u2 = u + combo;
        CHECK(quotient_coordinates(u2, S) == quotient_coordinates(u, S));
        if (!quotient_coordinates(u, S).empty()) CHECK(!S.contains(u));
    }
}

TEST_CASE("permuted column order changes representatives, not ranks") {
    std::mt19937 rng(4242);
    for (int t = 0; t < 10; ++t) {
        SparseMatrix M = random_matrix(rng, 5, 7);
        std::vector<int> rev(7);
        for (int i = 0; i < 7; ++i) rev[i] = 6 - i;
        RrefSolver plain(M, true);
        RrefSolver perm(M, true, rev);
        CHECK(plain.rank() == perm.rank());
        SparseVec x = random_vec(rng, 7);
        SparseVec b = M.apply(x);
        auto s1 = plain.solve(b);
        auto s2 = perm.solve(b);
        REQUIRE(s1.has_value());
        REQUIRE(s2.has_value());
        CHECK(M.apply(*s1) == b);
        CHECK(M.apply(*s2) == b);
    }
}

TEST_CASE("prime field elimination") {
    Field f7(7);
    std::mt19937 rng(31);
    for (int t = 0; t < 10; ++t) {
        SparseMatrix M(4, 5);
        std::uniform_int_distribution<int> val(0, 6);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 5; ++c) M.set(r, c, Scalar(val(rng), f7));
        RrefSolver s(M, true);
        CHECK(s.rank() + s.kernel().dim() == 5);
        SparseVec x;
        for (int i = 0; i < 5; ++i) x.add_term(i, Scalar(val(rng), f7));
        SparseVec b = M.apply(x);
        auto x2 = s.solve(b);
        REQUIRE(x2.has_value());
        CHECK(M.apply(*x2) == b);
    }
}
