#include "doctest.h"
#include "fk/dataio.hpp"
#include "fk/resolution.hpp"

using namespace fk;

#ifndef FK_DATA_DIR
#define FK_DATA_DIR "data"
#endif

namespace {

Resolution& fixture() {
    static GradedAlgebra A = GradedAlgebra::build(Presentation::fk3(), 5);
    static DualAlgebra D = DualAlgebra::build(Presentation::fk3(), 8);
    static Resolution* R = [] {
        auto* r = new Resolution(A, D, Resolution::Options{});
        r->import_fb0(load_fb0(*r, std::string(FK_DATA_DIR) + "/fb0_fact.json"));
        r->assemble();
        return r;
    }();
    return *R;
}

SparseVec k_unit(const Resolution& R, int level, const std::string& x, const std::string& u,
                 const std::string& y, int c = 1) {
    return SparseVec::unit(
        R.kspace(level).flat(R.algebra().index_of(x), dual_star_index(R.dual(), level, u),
                             R.algebra().index_of(y)),
        Scalar(c, R.algebra().field()));
}

}  // namespace

TEST_CASE("koszul differential convention matches the printed comparison map") {
    Resolution& R = fixture();
    // delta_1(1|alpha|1) = -a|eps|1 + 1|eps|a and cyclic
    const char* gens[3] = {"a", "b", "c"};
    const char* duals[3] = {"alpha", "beta", "gamma"};
    for (int g = 0; g < 3; ++g) {
        SparseVec d = R.apply_d(1, k_unit(R, 1, "1", duals[g], "1"));
        SparseVec expect = k_unit(R, 0, gens[g], "eps", "1", -1) + k_unit(R, 0, "1", "eps", gens[g]);
        CHECK(d == expect);
    }
}

TEST_CASE("d squared vanishes and the assembled resolution is valid") {
    Resolution& R = fixture();
    CHECK(R.assembled());
    R.verify_d_squared();
    R.verify_delta_squared();
    R.verify_exactness();
    R.verify_minimality();
}

TEST_CASE("kernel dimension of d_2 equals image dimension of d_3 per internal degree") {
    Resolution& R = fixture();
    // independent rank computation in the K-complex (pure Koszul part is the
    // whole complex in degrees <= 3)
    for (auto& [t, idx] : R.kspace(2).slices) {
        SparseMatrix M2((int)R.kspace(1).slices.count(t) ? (int)R.kspace(1).slices.at(t).size() : 0,
                        (int)idx.size());
        for (size_t c = 0; c < idx.size(); ++c) {
            SparseVec img = R.apply_d(2, SparseVec::unit(idx[c], Scalar(1)));
            for (auto& [k, v] : img.terms()) M2.row[R.kspace(1).slice_pos[k]].add_term((int)c, v);
        }
        int ker2 = (int)idx.size() - rank(M2);
        int im3 = 0;
        if (R.kspace(3).slices.count(t)) {
            const auto& cols3 = R.kspace(3).slices.at(t);
            SparseMatrix M3((int)idx.size(), (int)cols3.size());
            for (size_t c = 0; c < cols3.size(); ++c) {
                SparseVec img = R.apply_d(3, SparseVec::unit(cols3[c], Scalar(1)));
                for (auto& [k, v] : img.terms()) M3.row[R.kspace(2).slice_pos[k]].add_term((int)c, v);
            }
            im3 = rank(M3);
        }
        CHECK(ker2 == im3);
    }
}

TEST_CASE("eta for a central element is solvable through delta_1") {
    Resolution& R = fixture();
    const GradedAlgebra& A = R.algebra();
    SparseVec rho = A.element("ab") + A.element("ba");
    // eta_0(1|eps|1) = rho|eps|1 - 1|eps|rho
    SparseVec eta = k_unit(R, 0, "ab", "eps", "1") + k_unit(R, 0, "ba", "eps", "1") +
                    k_unit(R, 0, "1", "eps", "ab", -1) + k_unit(R, 0, "1", "eps", "ba", -1);
    auto h0 = R.solve_delta(1, eta);
    REQUIRE(h0.has_value());
    CHECK(R.apply_delta(1, *h0) == eta);
}

TEST_CASE("null homotopy of zero is zero") {
    Resolution& R = fixture();
    auto h = R.null_homotopy([](int, int) { return SparseVec(); }, 3);
    for (auto& hn : h)
        for (auto& v : hn.gen_values) CHECK(v.empty());
}

TEST_CASE("null homotopy for central elements satisfies the homotopy identities") {
    Resolution& R = fixture();
    const GradedAlgebra& A = R.algebra();
    for (const char* label : {"ab", "abac"}) {
        SparseVec rho = std::string(label) == "ab" ? A.element("ab") + A.element("ba")
                                                   : A.element("abac");
        auto h = R.null_homotopy_central(rho, 3);
        for (int n = 0; n <= 3; ++n) {
            const PSpace& P = R.pspace(n);
            for (size_t g = 0; g < P.gens.size(); ++g) {
                const KSpace& K = R.kspace(P.levels[P.gens[g].omega]);
                SparseVec gen = SparseVec::unit(P.offsets[P.gens[g].omega] + K.flat(0, P.gens[g].u, 0),
                                                Scalar(1));
                // eta(gen)
                SparseVec eta;
                for (auto& [x, c] : rho.terms()) {
                    eta.add_term(P.offsets[P.gens[g].omega] + K.flat(x, P.gens[g].u, 0), c);
                    eta.add_term(P.offsets[P.gens[g].omega] + K.flat(0, P.gens[g].u, x), -c);
                }
                SparseVec lhs = R.apply_delta(n + 1, h[n].gen_values[g]);
                if (n > 0) lhs += R.apply_map(h[n - 1], R.apply_delta(n, gen));
                CHECK(lhs == eta);
            }
        }
    }
}

TEST_CASE("grading derivation has the internal-degree lifting") {
    Resolution& R = fixture();
    const GradedAlgebra& A = R.algebra();
    std::vector<SparseVec> images = {A.element("a"), A.element("b"), A.element("c")};
    auto L = R.rho_lifting(images, 4);
    // the explicit q = (n + 2i) omega_i 1|u|1 satisfies the defining equation
    for (int n = 1; n <= 4; ++n) {
        const PSpace& P = R.pspace(n);
        for (size_t g = 0; g < P.gens.size(); ++g) {
            int i = P.gens[g].omega;
            const KSpace& K = R.kspace(P.levels[i]);
            SparseVec gen = SparseVec::unit(P.offsets[i] + K.flat(0, P.gens[g].u, 0), Scalar(1));
            SparseVec q_explicit = gen.scaled(Scalar(P.levels[i] + 6 * i - 4 * i + 4 * i + 2 * i));
            // internal degree of the generator is (n - 4i) + 6i = n + 2i
            q_explicit = gen.scaled(Scalar(n + 2 * i));
            CHECK(R.apply_delta(n, q_explicit) == R.apply_rho_n(L, n - 1, R.apply_delta(n, gen)));
            // the solved lifting satisfies the same equation
            CHECK(R.apply_delta(n, L.q[n][g]) == R.apply_rho_n(L, n - 1, R.apply_delta(n, gen)));
        }
    }
    // derivation with all-zero images lifts to zero
    auto Z = R.rho_lifting({SparseVec(), SparseVec(), SparseVec()}, 3);
    for (int n = 1; n <= 3; ++n)
        for (auto& q : Z.q[n]) CHECK(q.empty());
}

TEST_CASE("comparison maps to and from the bar resolution") {
    Resolution& R = fixture();
    BarComplex& B = R.bar();
    const auto& i0 = R.comparison_to_bar(0);
    CHECK(i0[0] == SparseVec::unit((int)B.flat(0, 0, 0, 0), Scalar(1)));
    const auto& i1 = R.comparison_to_bar(1);
    // i_1(1|beta|1) = -1|b|1
    CHECK(i1[1] == SparseVec::unit((int)B.flat(1, 0, 2, 0), Scalar(-1)));

    // chain property d_n i_n = i_{n-1} delta_n for n = 1..3
    for (int n = 1; n <= 3; ++n) {
        const auto& in_vals = R.comparison_to_bar(n);
        const auto& prev = R.comparison_to_bar(n - 1);
        const PSpace& P = R.pspace(n);
        for (size_t g = 0; g < P.gens.size(); ++g) {
            BarComplex::Element lhs = B.differential({n, in_vals[g]});
            SparseVec dv = R.apply_delta(n, SparseVec::unit(
                                                P.offsets[P.gens[g].omega] +
                                                    R.kspace(P.levels[P.gens[g].omega]).flat(0, P.gens[g].u, 0),
                                                Scalar(1)));
            // i_{n-1}(dv)
            BarComplex::Element rhs{n - 1, SparseVec()};
            const PSpace& Pd = R.pspace(n - 1);
            for (auto& [k, c] : dv.terms()) {
                int i = (int)Pd.levels.size() - 1;
                while (Pd.offsets[i] > k) --i;
                const KSpace& K = R.kspace(Pd.levels[i]);
                int kk = k - Pd.offsets[i];
                int gi = 0;
                for (int b = 0; b < i; ++b) gi += R.kspace(Pd.levels[b]).dual_dim;
                gi += K.u_of(kk);
                BarComplex::Element mv = B.multiply(K.x_of(kk), {n - 1, prev[gi]}, K.y_of(kk));
                rhs.coords.axpy(c, mv.coords);
            }
            CHECK(lhs.coords == rhs.coords);
        }
        // augmentation compatibility at n = 1: pi(i_0(delta_1 ...)) handled by eps checks
    }

    // p_0(1|1) = 1|eps|1, eps p_0 = pi, delta_m p_m = p_{m-1} d_m for m <= 2
    const auto& p0 = R.comparison_from_bar(0);
    CHECK(p0[0] == SparseVec::unit(R.kspace(0).flat(0, 0, 0), Scalar(1)));
    for (int m = 1; m <= 2; ++m) {
        const auto& pm = R.comparison_from_bar(m);
        const auto& pprev = R.comparison_from_bar(m - 1);
        for (long w = 0; w < B.word_count(m); ++w) {
            SparseVec lhs = R.apply_delta(m, pm[w]);
            BarComplex::Element dg = B.differential(B.unit_generator(m, w));
            SparseVec rhs;
            for (auto& [k, c] : dg.coords.terms())
                rhs.axpy(c, R.conj(m - 1, B.x_of(m - 1, k), pprev[B.word_of(m - 1, k)], B.y_of(k)));
            CHECK(lhs == rhs);
        }
    }

    // p_1 i_1 - id is a cycle and bounded by a homotopy at degree 1
    {
        const auto& p1 = R.comparison_from_bar(1);
        const PSpace& P1 = R.pspace(1);
        for (int u = 0; u < 3; ++u) {
            // p_1(i_1(1|u|1)) = -p_1(1|g_u|1)
            SparseVec pi1 = p1[1 + u].scaled(Scalar(-1));
            SparseVec diff = pi1 - SparseVec::unit(R.kspace(1).flat(0, u, 0), Scalar(1));
            CHECK(R.apply_delta(1, diff).empty());
            (void)P1;
            // exactness gives a witness s with delta_2 s = diff ... only if diff
            // is also killed by composing into degree 0 exactly, which it is
            auto s = R.solve_delta(2, diff);
            CHECK(s.has_value());
        }
    }
}

TEST_CASE("coefficient structure of the recovered correction generator") {
    Resolution& R = fixture();
    // the coefficient of aba|gamma3|1 minus that of aba|alpha2gamma|1 must be -3
    const SparseVec& F = R.f_generators(0)[0];
    Scalar cg = F.at(R.kspace(3).flat(R.algebra().index_of("aba"),
                                      dual_star_index(R.dual(), 3, "gamma3"),
                                      R.algebra().index_of("1")));
    Scalar cag = F.at(R.kspace(3).flat(R.algebra().index_of("aba"),
                                       dual_star_index(R.dual(), 3, "alpha2gamma"),
                                       R.algebra().index_of("1")));
    CHECK(cg - cag == Scalar(-3));
}

TEST_CASE("d_4 coefficient symmetry used by the paper") {
    Resolution& R = fixture();
    // for every element of K_4 of internal degree 7, the coefficients of
    // aba|gamma3|1 and aba|alpha2gamma|1 in its image coincide, and likewise
    // for the pairs (aba|gamma3|b, aba|alpha2gamma|b), (abc|beta3|c, abc|alpha2beta|c)
    const KSpace& K3 = R.kspace(3);
    const GradedAlgebra& A = R.algebra();
    auto fl = [&](const char* x, const char* u, const char* y) {
        return K3.flat(A.index_of(x), dual_star_index(R.dual(), 3, u), A.index_of(y));
    };
    for (int t : {7, 8}) {
        if (!R.kspace(4).slices.count(t)) continue;
        for (int idx : R.kspace(4).slices.at(t)) {
            SparseVec img = R.apply_d(4, SparseVec::unit(idx, Scalar(1)));
            CHECK(img.at(fl("aba", "gamma3", "1")) == img.at(fl("aba", "alpha2gamma", "1")));
            CHECK(img.at(fl("aba", "gamma3", "a")) == img.at(fl("aba", "alpha2gamma", "a")));
            CHECK(img.at(fl("aba", "gamma3", "b")) == img.at(fl("aba", "alpha2gamma", "b")));
            CHECK(img.at(fl("abc", "beta3", "c")) == img.at(fl("abc", "alpha2beta", "c")));
        }
    }
}

TEST_CASE("delta_4 on the omega_1 summand is f_0") {
    Resolution& R = fixture();
    const PSpace& P4 = R.pspace(4);
    // generator omega_1 1|eps|1 maps to f_0(1|eps|1) inside the omega_0 block
    SparseVec gen = SparseVec::unit(P4.offsets[1] + R.kspace(0).flat(0, 0, 0), Scalar(1));
    SparseVec img = R.apply_delta(4, gen);
    CHECK(img == R.f_generators(0)[0]);  // P_3 = K_3, offset 0
    // and eps(delta_1(x)) = 0
    SparseVec d1 = R.apply_d(1, k_unit(R, 1, "a", "beta", "c"));
    CHECK(R.augment(d1).empty());
}
