#include <random>

#include "doctest.h"
#include "fk/algebra.hpp"

using namespace fk;

namespace {

const GradedAlgebra& fk3() {
    static GradedAlgebra A = GradedAlgebra::build(Presentation::fk3(), 5);
    return A;
}

const DualAlgebra& fk3dual() {
    static DualAlgebra D = DualAlgebra::build(Presentation::fk3(), 8);
    return D;
}

}  // namespace

TEST_CASE("graded dimensions of FK(3)") {
    const auto& A = fk3();
    CHECK(A.dim() == 12);
    CHECK(A.top_degree() == 4);
    int expected[] = {1, 3, 4, 3, 1};
    for (int d = 0; d <= 4; ++d) CHECK(A.dim_of_degree(d) == expected[d]);
}

TEST_CASE("defining products") {
    const auto& A = fk3();
    CHECK(A.multiply(A.element("a"), A.element("a")).empty());
    // ca = -ab - bc
    SparseVec ca = A.multiply(A.element("c"), A.element("a"));
    SparseVec expect = A.element("ab", Scalar(-1)) + A.element("bc", Scalar(-1));
    CHECK(ca == expect);
}

TEST_CASE("two reduction routes agree on b*a*b") {
    const auto& A = fk3();
    // route 1: multiplication table applied stepwise
    SparseVec r1 = A.multiply(A.multiply(A.element("b"), A.element("a")), A.element("b"));
    // route 2: one-shot tensor reduction of the degree-3 word
    SparseVec r2 = A.reduce_word({1, 0, 1});
    CHECK(r1 == r2);
    for (auto& [k, c] : r1.terms()) CHECK(A.degree_of(k) == 3);
}

TEST_CASE("degree-4 products are multiples of abac, degree-5 products vanish") {
    const auto& A = fk3();
    SparseVec p = A.multiply(A.element("ab"), A.element("ac"));
    SparseVec q = A.reduce_word({0, 1, 0, 2});  // independent route
    for (auto& [k, c] : p.terms()) CHECK(A.label(k) == "abac");
    CHECK(A.multiply(A.element("ab"), A.element("ac")) == p);
    (void)q;
    for (int i = 0; i < A.dim(); ++i)
        for (int j = 0; j < A.dim(); ++j)
            if (A.degree_of(i) + A.degree_of(j) > 4) CHECK(A.mult_basis(i, j).empty());
}

TEST_CASE("unit and associativity on all basis triples") {
    const auto& A = fk3();
    for (int i = 0; i < A.dim(); ++i) {
        CHECK(A.mult_basis(A.unit_index(), i) == SparseVec::unit(i, Scalar(1)));
        CHECK(A.mult_basis(i, A.unit_index()) == SparseVec::unit(i, Scalar(1)));
    }
    for (int i = 0; i < A.dim(); ++i)
        for (int j = 0; j < A.dim(); ++j) {
            SparseVec ij = A.mult_basis(i, j);
            for (int k = 0; k < A.dim(); ++k) {
                SparseVec lhs = A.multiply(ij, SparseVec::unit(k, Scalar(1)));
                SparseVec rhs = A.multiply(SparseVec::unit(i, Scalar(1)), A.mult_basis(j, k));
                CHECK(lhs == rhs);
            }
        }
}

TEST_CASE("quadratic dual dimensions and relations") {
    const auto& D = fk3dual();
    CHECK(D.dim_of_degree(0) == 1);
    CHECK(D.dim_of_degree(1) == 3);
    CHECK(D.dim_of_degree(2) == 5);  // A^0 B^2 collapses with B^2
    for (int n = 3; n <= 8; ++n) CHECK(D.dim_of_degree(n) == 6);

    // R-perp is 4-dimensional and contains the four printed relations
    const Subspace& R = D.relation_space();
    CHECK(R.dim() == 4);
    auto idx = [](char x, char y) { return (x - 'A') * 3 + (y - 'A'); };
    auto two_term = [&](char x1, char y1, int c1, char x2, char y2, int c2) {
        SparseVec v;
        v.add_term(idx(x1, y1), Scalar(c1));
        v.add_term(idx(x2, y2), Scalar(c2));
        return v;
    };
    CHECK(R.contains(two_term('B', 'A', 1, 'A', 'C', -1)));
    CHECK(R.contains(two_term('C', 'A', 1, 'A', 'B', -1)));
    CHECK(R.contains(two_term('A', 'B', 1, 'B', 'C', -1)));
    CHECK(R.contains(two_term('C', 'B', 1, 'B', 'A', -1)));

    // pairing check: every relation of FK(3) pairs to zero with every element of R-perp
    Presentation p = Presentation::fk3();
    for (auto& r : p.relations)
        for (auto& s : R.basis) CHECK(s.dot(r).is_zero());
}

TEST_CASE("dual-star labels follow the collapse conventions") {
    const auto& D = fk3dual();
    CHECK(D.dual_star_labels(0) == std::vector<std::string>{"eps"});
    CHECK(D.dual_star_labels(1) == std::vector<std::string>{"alpha", "beta", "gamma"});
    CHECK(D.dual_star_labels(2) ==
          std::vector<std::string>{"alpha2", "beta2", "gamma2", "alphabeta", "alphagamma"});
    CHECK(D.dual_star_labels(3) ==
          std::vector<std::string>{"alpha3", "beta3", "gamma3", "alpha2beta", "alpha2gamma", "alphabeta2"});
}

TEST_CASE("dual bimodule action") {
    const auto& D = fk3dual();
    DualActions act(D);

    // u = v = 1 fixes f
    for (int n = 1; n <= 4; ++n)
        for (int k = 0; k < D.dim_of_degree(n); ++k) {
            DualCo f{n, SparseVec::unit(k, Scalar(1))};
            DualCo r = act.act(0, 0, f, 0, 0);
            CHECK(r.level == n);
            CHECK(r.coords == f.coords);
        }

    // A . alpha_2 = alpha
    DualCo alpha2{2, SparseVec::unit(0, Scalar(1))};
    DualCo r = act.act_left_gen(0, alpha2);
    CHECK(r.level == 1);
    CHECK(r.coords == SparseVec::unit(0, Scalar(1)));

    // associativity (u1 (u2 f)) = ((u1 u2) f) on sampled basis elements
    std::mt19937 rng(5);
    for (int t = 0; t < 60; ++t) {
        int n = 2 + t % 3 + 2;  // levels 4..6
        int p = 1, q = 1;
        std::uniform_int_distribution<int> pick(0, 100);
        int ui = pick(rng) % D.dim_of_degree(p);
        int vi = pick(rng) % D.dim_of_degree(q);
        int fi = pick(rng) % D.dim_of_degree(n);
        DualCo f{n, SparseVec::unit(fi, Scalar(1))};
        // (u f) then (.. v) equals the joint action
        DualCo step1 = act.act(p, ui, f, 0, 0);
        DualCo step2 = act.act(0, 0, step1, q, vi);
        DualCo joint = act.act(p, ui, f, q, vi);
        CHECK(step2.level == joint.level);
        CHECK(step2.coords == joint.coords);
    }

    // defining identity (u f v)(w) = f(v w u) on basis quadruples up to total degree 6
    for (int p = 0; p <= 2; ++p)
        for (int q = 0; q <= 2 - p; ++q)
            for (int n = p + q; n <= 6; ++n) {
                int m = n - p - q;
                for (int ui = 0; ui < D.dim_of_degree(p); ++ui)
                    for (int vi = 0; vi < D.dim_of_degree(q); ++vi)
                        for (int fi = 0; fi < D.dim_of_degree(n); ++fi) {
                            DualCo f{n, SparseVec::unit(fi, Scalar(1))};
                            DualCo ufv = act.act(p, ui, f, q, vi);
                            for (int w = 0; w < D.dim_of_degree(m); ++w) {
                                // f(v w u)
                                SparseVec vw = D.mult_basis(q, vi, m, w);
                                SparseVec vwu;
                                for (auto& [k, c] : vw.terms()) vwu.axpy(c, D.mult_basis(q + m, k, p, ui));
                                CHECK(ufv.coords.at(w) == f.coords.dot(vwu));
                            }
                        }
            }
}

TEST_CASE("center of FK(3)") {
    const auto& A = fk3();
    Subspace Z = A.center();
    CHECK(Z.dim() == 4);
    CHECK(Z.contains(A.element("1")));
    CHECK(Z.contains(A.element("ab") + A.element("ba")));
    CHECK(Z.contains(A.element("ab") + A.element("bc") - A.element("ac")));
    CHECK(Z.contains(A.element("abac")));
    // the four listed elements span
    Subspace listed = span({A.element("1"), A.element("ab") + A.element("ba"),
                            A.element("ab") + A.element("bc") - A.element("ac"), A.element("abac")},
                           A.dim());
    CHECK(listed.dim() == 4);
}

TEST_CASE("derivations of FK(3)") {
    const auto& A = fk3();
    // grading derivation x -> deg(x) x
    std::vector<SparseVec> grading = {A.element("a"), A.element("b"), A.element("c")};
    CHECK(A.is_derivation(grading));
    // rho^4: a -> bac, b,c -> 0
    std::vector<SparseVec> rho4 = {A.element("bac"), SparseVec(), SparseVec()};
    CHECK(A.is_derivation(rho4));
    // rho^7: a -> aba - abc
    std::vector<SparseVec> rho7 = {A.element("aba") - A.element("abc"), SparseVec(), SparseVec()};
    CHECK(A.is_derivation(rho7));
    // a -> b is not a derivation (fails on a^2 relation)
    std::vector<SparseVec> bad = {A.element("b"), SparseVec(), SparseVec()};
    CHECK(!A.is_derivation(bad));

    auto [all, inner] = A.derivation_space();
    // the listed derivations lie in the space
    auto coords_of = [&](const std::vector<SparseVec>& im) {
        SparseVec v;
        for (int g = 0; g < 3; ++g)
            for (auto& [k, c] : im[g].terms()) v.add_term(g * A.dim() + k, c);
        return v;
    };
    CHECK(all.contains(coords_of(grading)));
    CHECK(all.contains(coords_of(rho4)));
    CHECK(all.contains(coords_of(rho7)));
    CHECK(!all.contains(coords_of(bad)));
    // inner derivations are derivations
    for (auto& b : inner.basis) CHECK(all.contains(b));
    CHECK(inner.dim() == 12 - 4);  // dim A - dim Z(A)
}
