#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "fk/algebra.hpp"

namespace fk {

// K^b_j = A (x) (A^!_{-j})^* (x) A with flat basis index
// (x * dual_dim + u) * 12 + y.
struct KSpace {
    int level = 0;
    int dual_dim = 0;
    int adim = 0;
    int dim = 0;
    std::vector<int> tdeg;                 // internal degree per flat index
    std::map<int, std::vector<int>> slices;
    std::vector<int> slice_pos;

    int flat(int x, int u, int y) const { return (x * dual_dim + u) * adim + y; }
    int x_of(int f) const { return f / (dual_dim * adim); }
    int u_of(int f) const { return (f / adim) % dual_dim; }
    int y_of(int f) const { return f % adim; }
};

// P^b_n = (+)_i omega_i K^b_{n-4i}; flat index = offset(i) + K-flat index.
struct PSpace {
    int n = 0;
    std::vector<int> levels;     // K levels, levels[i] = n - 4i
    std::vector<int> offsets;    // flat offset of each omega block
    int dim = 0;
    std::vector<int> tdeg;
    std::map<int, std::vector<int>> slices;
    std::vector<int> slice_pos;
    // free generators omega_i 1|u|1
    struct Gen {
        int omega;
        int u;
        int tdeg;
    };
    std::vector<Gen> gens;
};

// values of a bimodule map on the free generators of its source P-space
struct BimoduleMap {
    int src = 0;  // source homological degree
    int dst = 0;
    std::vector<SparseVec> gen_values;  // per source generator, element of P_dst
};

// A^(x)(m+2) with middle words over the monomial basis; flat index
// (x * 12^m + word) * 12 + y.
class BarComplex;

class Resolution {
  public:
    struct Options {
        int depth = 8;
        int sign_variant = 0;  // 0 = auto, 1..4 = fixed (s_left, s_right) in {+,-}^2
        bool perturb_solves = false;  // perturbed free-variable choice in homotopy-type solves
    };

    Resolution(const GradedAlgebra& A, const DualAlgebra& D, Options opt);

    const GradedAlgebra& algebra() const { return *A_; }
    const DualAlgebra& dual() const { return *D_; }
    const DualActions& actions() const { return act_; }
    int depth() const { return N_; }
    int sign_variant() const { return variant_; }
    bool perturbed() const { return opt_.perturb_solves; }

    const KSpace& kspace(int j) const { return K_[j]; }
    const PSpace& pspace(int n) const { return P_[n]; }

    // Koszul differential applied to a K_j element.
    SparseVec apply_d(int j, const SparseVec& e) const;
    // correction maps f_j : K_j -> K_{j+3}
    const std::vector<SparseVec>& f_generators(int j) const { return f_[j]; }
    SparseVec apply_f(int j, const SparseVec& e) const;
    // full differential on P_n
    SparseVec apply_delta(int n, const SparseVec& e) const;
    // augmentation P_0 -> A
    SparseVec augment(const SparseVec& e) const;

    // x . e . y for e in P_m and basis indices x, y of A
    SparseVec conj(int m, int xi, const SparseVec& e, int yi) const;
    SparseVec conj_coords(int m, const SparseVec& x, const SparseVec& e, const SparseVec& y) const;

    // apply a bimodule map to an arbitrary element of P_{map.src}
    SparseVec apply_map(const BimoduleMap& m, const SparseVec& e) const;

    // import f_0 from the printed expansions {a|eps|1 -> ..., 1|eps|a -> ...}.
    // Solves for the generator value, checks uniqueness and all six constraints.
    void import_fb0(const std::map<std::string, SparseVec>& printed);  // keys "a|1","1|a",...
    // solve f_1 .. f_{N-4} and assemble; verifies the Resolution invariants
    void assemble();
    bool assembled() const { return assembled_; }

    // verification entry points (throw on failure, also usable as checks)
    void verify_d_squared() const;
    void verify_delta_squared() const;
    void verify_exactness() const;
    void verify_minimality() const;

    // echelon-canonical solution of delta_n x = rhs (slice-wise)
    std::optional<SparseVec> solve_delta(int n, const SparseVec& rhs) const;
    // echelon-canonical solution of eps x = value for a homogeneous A-element
    SparseVec lift_through_augmentation(const SparseVec& value) const;

    // null homotopy of the commutator map for a central element rho:
    // h_n : P_n -> P_{n+1}, up to degree max_n (inclusive source degree)
    std::vector<BimoduleMap> null_homotopy_central(const SparseVec& rho, int max_n) const;
    // generic null homotopy for a degree-0 self-map lifting zero, generator values given
    std::vector<BimoduleMap> null_homotopy(const std::function<SparseVec(int, int)>& eta_gen,
                                           int max_n) const;

    // rho^e-lifting: q values per P_n generator for n = 1..max_n; the n=0
    // component is determined by the derivation itself
    struct Lifting {
        std::vector<SparseVec> images;                // derivation on the algebra basis
        std::vector<std::vector<SparseVec>> q;        // q[n][gen] in P_n
    };
    Lifting rho_lifting(const std::vector<SparseVec>& gen_images, int max_n) const;
    // apply rho_n of a lifting to an element of P_n
    SparseVec apply_rho_n(const Lifting& L, int n, const SparseVec& e) const;

    // chain-map lifting of a cocycle phi (values on P_m generators, in A):
    // components phi_k : P_{m+k} -> P_k for k = 0..depth
    std::vector<BimoduleMap> lift_cocycle(int m, const std::vector<SparseVec>& phi_gen_values,
                                          int max_depth) const;

    // comparison maps
    BarComplex& bar() const { return *bar_; }
    const std::vector<SparseVec>& comparison_to_bar(int n) const;    // i_n values per P_n generator
    const std::vector<SparseVec>& comparison_from_bar(int m) const;  // p_m values per bar word

    // slice solver access (shared with cohomology)
    const RrefSolver& delta_slice_solver(int n, int t) const;
    SparseMatrix delta_slice_matrix(int n, int t) const;

    std::string describe_variant() const;

  private:
    const GradedAlgebra* A_;
    const DualAlgebra* D_;
    DualActions act_;
    Options opt_;
    int N_;
    int variant_ = 1;
    bool assembled_ = false;

    std::vector<KSpace> K_;
    std::vector<PSpace> P_;
    // d columns: d_cols_[j][flat] = K_{j-1} element
    std::vector<std::vector<SparseVec>> d_cols_;
    std::vector<std::vector<SparseVec>> f_;  // f_[j][u] in K_{j+3}

    mutable std::unique_ptr<BarComplex> bar_;
    mutable std::vector<std::vector<SparseVec>> i_maps_;  // per n
    mutable std::vector<std::vector<SparseVec>> p_maps_;  // per m

    mutable std::map<std::pair<int, int>, std::unique_ptr<RrefSolver>> delta_solvers_;
    mutable std::map<int, std::unique_ptr<RrefSolver>> eps_solvers_;
    mutable std::mutex cache_mu_;

    void build_spaces();
    void build_koszul(int variant);
    void pick_sign_variant();
    void solve_corrections();
    SparseVec delta_gen_value(int n, int gen_idx) const;  // delta_n(omega_i 1|u|1)
    const RrefSolver& eps_slice_solver(int t) const;
    friend class BarComplex;
};

class BarComplex {
  public:
    BarComplex(const GradedAlgebra& A, int max_m);

    int max_m() const { return maxm_; }
    long word_count(int m) const { return pow12_[m]; }
    long flat(int m, int x, long word, int y) const { return (x * pow12_[m] + word) * 12 + y; }

    struct Element {
        int m = 0;
        SparseVec coords;  // flat (x, word, y)
    };

    Element unit_generator(int m, long word) const;
    Element differential(const Element& e) const;
    Element multiply(int xi, const Element& e, int yi) const;  // basis conjugation
    Element mult_coords(const SparseVec& x, const Element& e, const SparseVec& y) const;

    int internal_degree(int m, long flat) const;
    long word_of(int m, long flat) const { return (flat / 12) % pow12_[m]; }
    int x_of(int m, long flat) const { return (int)(flat / (12 * pow12_[m])); }
    int y_of(long flat) const { return (int)(flat % 12); }
    std::vector<int> word_letters(int m, long word) const;
    long word_from_letters(const std::vector<int>& letters) const;

    // slice of B_m at internal degree t (flat indices, canonical order)
    const std::vector<long>& slice(int m, int t) const;
    // solve d_m x = rhs within a slice
    std::optional<Element> solve_d(int m, const Element& rhs) const;

  private:
    const GradedAlgebra* A_;
    int maxm_;
    std::vector<long> pow12_;
    mutable std::map<std::pair<int, int>, std::vector<long>> slices_;
    mutable std::map<std::pair<int, int>, std::map<long, int>> slice_pos_;
    mutable std::map<std::pair<int, int>, std::unique_ptr<RrefSolver>> d_solvers_;
    mutable std::mutex mu_;

    void build_slice(int m, int t) const;
};

}  // namespace fk
