#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fk/linalg.hpp"

namespace fk {

// Quadratic presentation: degree-1 generators and degree-2 relation tensors.
struct Presentation {
    std::vector<std::string> generators;           // e.g. {"a","b","c"}
    std::vector<SparseVec> relations;              // coordinates in V (x) V, index i*g+j
    Field field;

    int gen_count() const { return (int)generators.size(); }

    static Presentation load(const std::string& path, Field field);
    static Presentation fk3(Field field = Field());
};

// Finite-dimensional graded algebra with a chosen labeled monomial basis per
// degree and a full structure-constant table. Built from a Presentation by
// degreewise tensor quotients.
class GradedAlgebra {
  public:
    static GradedAlgebra build(const Presentation& p, int max_degree);

    Field field() const { return field_; }
    int top_degree() const { return top_; }
    int dim() const { return (int)labels_.size(); }
    int dim_of_degree(int d) const {
        return (d < 0 || d > top_) ? 0 : (int)by_degree_[d].size();
    }
    int degree_of(int idx) const { return degree_[idx]; }
    const std::string& label(int idx) const { return labels_[idx]; }
    int index_of(const std::string& label) const;
    const std::vector<int>& basis_of_degree(int d) const {
        static const std::vector<int> empty;
        return (d < 0 || d > top_) ? empty : by_degree_[d];
    }
    int unit_index() const { return 0; }

    // Structure constants: product of basis elements.
    const SparseVec& mult_basis(int i, int j) const { return table_[i * dim() + j]; }
    SparseVec multiply(const SparseVec& x, const SparseVec& y) const;
    SparseVec element(const std::string& label, Scalar c = Scalar(1)) const;

    // Reduce a degree-n word (sequence of generator indices) to basis coords.
    SparseVec reduce_word(const std::vector<int>& word) const;

    // Basis of {z : zx = xz for all x}, echelon-canonical.
    Subspace center() const;

    // (all derivations, inner derivations) as subspaces of the coordinate
    // space of generator images: index g*dim + k for "coefficient of basis k
    // in the image of generator g".
    std::pair<Subspace, Subspace> derivation_space() const;

    // Whether the images (one element per generator) define a derivation.
    bool is_derivation(const std::vector<SparseVec>& images) const;

    // Extend generator images to the whole basis by the Leibniz rule along
    // each basis monomial's defining word.
    std::vector<SparseVec> derivation_on_basis(const std::vector<SparseVec>& images) const;

    const std::vector<std::vector<int>>& words() const { return words_; }

  private:
    Field field_;
    int top_ = 0;
    std::vector<std::string> labels_;
    std::vector<int> degree_;
    std::vector<std::vector<int>> by_degree_;
    std::vector<std::vector<int>> words_;       // defining word of each basis monomial
    std::map<std::string, int> index_;
    std::vector<SparseVec> table_;
    int gens_ = 0;

    // per degree: tensor-space reducer (mod sum of V^i R V^j) and the
    // expression of reduced monomial coordinates
    struct DegreeData {
        Subspace rel;                       // relation subspace of V^(x)n, RREF
        std::vector<SparseVec> mono_cols;   // reduced tensors of the basis monomials
        RrefSolver* solver = nullptr;
    };
    std::vector<SparseVec> reduce_tensor_to_basis(int deg, const SparseVec& tensor) const;
};

// The quadratic dual A^!: T(V*)/(R-perp), with the paper's labels
// {A^n, B^n, C^n, A^(n-1)B, A^(n-1)C, A^(n-2)B^2} and the collapse
// conventions at low degree.
class DualAlgebra {
  public:
    static DualAlgebra build(const Presentation& p, int max_degree);

    Field field() const { return field_; }
    int max_degree() const { return maxdeg_; }
    int dim_of_degree(int n) const { return (n < 0 || n > maxdeg_) ? 0 : (int)labels_[n].size(); }
    const std::string& label(int n, int k) const { return labels_[n][k]; }
    const std::vector<std::string>& labels(int n) const { return labels_[n]; }

    // Left/right multiplication by a degree-1 generator g (0=A,1=B,2=C):
    // coordinates of g*w resp. w*g in degree n+1 for w a degree-n basis element.
    const SparseVec& left_mult(int g, int n, int k) const { return lmul_[n][g][k]; }
    const SparseVec& right_mult(int g, int n, int k) const { return rmul_[n][g][k]; }

    // Full product of basis elements (m + n <= max_degree).
    SparseVec mult_basis(int m, int i, int n, int j) const;

    // R-perp as a subspace of V* (x) V*.
    const Subspace& relation_space() const { return rperp_; }

    // Dual-star labels for (A^!_{-n})^*: alpha_n, beta_n, gamma_n,
    // alpha_{n-1}beta, alpha_{n-1}gamma, alpha_{n-2}beta_2 (zero-index
    // convention applied). Same index order as labels(n).
    std::vector<std::string> dual_star_labels(int n) const;

  private:
    Field field_;
    int maxdeg_ = 0;
    std::vector<std::vector<std::string>> labels_;   // per degree
    std::vector<std::vector<std::vector<int>>> words_;  // defining words
    // lmul_[n][g][k]: coords of g * (basis k of degree n) in degree n+1
    std::vector<std::array<std::vector<SparseVec>, 3>> lmul_, rmul_;
    Subspace rperp_;
};

// Functionals on (A^!_{-n})^* move under the A^!-bimodule action
// (u f v)(w) = f(v w u). DualCo elements are coordinate vectors over the
// dual-star basis of a fixed level.
struct DualCo {
    int level = 0;
    SparseVec coords;
};

class DualActions {
  public:
    explicit DualActions(const DualAlgebra& dual);

    const DualAlgebra& dual() const { return *dual_; }

    // (g^* . f)(w) = f(w g^*): lowers level by 1.
    DualCo act_left_gen(int g, const DualCo& f) const;
    // (f . g^*)(w) = f(g^* w).
    DualCo act_right_gen(int g, const DualCo& f) const;

    // General bimodule action (u f v)(w) = f(v w u) for basis elements
    // u (level p, index ui) and v (level q, index vi).
    DualCo act(int p, int ui, const DualCo& f, int q, int vi) const;

  private:
    const DualAlgebra* dual_;
    // transposes of the degree-1 multiplication tables
    // left_on_star_[n][g] : level n -> level n-1 table (entry [k] = image coords)
    std::vector<std::array<std::vector<SparseVec>, 3>> left_on_star_, right_on_star_;
};

}  // namespace fk
