#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "fk/resolution.hpp"

namespace fk {

// Q^n = (+)_i omega*_i Hom((A^!_{-(n-4i)})^*, A); symbols (i, u, x) with
// internal degree deg(x) - (n-4i) - 6i, flat index offset(i) + u*12 + x.
struct QSpace {
    int n = 0;
    std::vector<int> levels;
    std::vector<int> offsets;
    int dim = 0;
    std::vector<int> tdeg;
    std::map<int, std::vector<int>> slices;
    std::vector<int> slice_pos;

    int flat(int omega, int u, int x) const { return offsets[omega] + u * 12 + x; }
    int omega_of(int f) const {
        int i = (int)offsets.size() - 1;
        while (offsets[i] > f) --i;
        return i;
    }
    int u_of(int f) const { return (f - offsets[omega_of(f)]) / 12; }
    int x_of(int f) const { return (f - offsets[omega_of(f)]) % 12; }
};

// a cohomology class in canonical coordinates at a fixed bidegree
struct CohClass {
    int n = 0;
    int t = 0;          // internal degree
    SparseVec coords;   // over the canonical basis of H^n at internal degree t

    bool is_zero() const { return coords.empty(); }
    friend bool operator==(const CohClass& a, const CohClass& b) {
        return a.n == b.n && a.t == b.t && a.coords == b.coords;
    }
    friend bool operator!=(const CohClass& a, const CohClass& b) { return !(a == b); }
};

class Cohomology {
  public:
    explicit Cohomology(const Resolution& R);

    const Resolution& resolution() const { return *R_; }
    const QSpace& qspace(int n) const { return Q_[n]; }
    int max_cohomological_degree() const { return R_->depth() - 1; }

    // evaluate the associated Hom_{A^e}(P_n, A) element on a P_n element
    SparseVec evaluate(int n, const SparseVec& cochain, const SparseVec& elem) const;
    // value of the cochain on the generator (omega, u), as an A-element
    SparseVec gen_value(int n, const SparseVec& cochain, int omega, int u) const;
    // transported differential Q^n -> Q^{n+1}
    SparseVec differential(int n, const SparseVec& cochain) const;
    bool is_cocycle(int n, const SparseVec& cochain) const;

    struct HBasis {
        int n, t;
        Subspace boundaries;             // im(Q^{n-1} -> Q^n) in slice coordinates
        Subspace kernel;                 // ker(Q^n -> Q^{n+1}) in slice coordinates
        std::vector<SparseVec> reps;     // canonical representatives (slice coords, RREF rows)
        std::vector<int> rep_pivots;
    };
    const HBasis& basis(int n, int t) const;
    int dim(int n, int t) const;                 // by internal degree t
    int dim_m(int n, int m) const { return dim(n, m - n); }  // paper indexing H^n_m

    // canonical class of a homogeneous cocycle (throws if not a cocycle)
    CohClass reduce(int n, const SparseVec& cochain) const;
    // canonical representative cochain of a class, in full Q^n coordinates
    SparseVec representative(const CohClass& c) const;

    // cup product via chain-map lifting of the right factor
    CohClass cup(const CohClass& a, const CohClass& b) const;
    CohClass zero_class(int n, int t) const { return CohClass{n, t, SparseVec()}; }
    CohClass add(const CohClass& a, const CohClass& b) const;
    CohClass scale(const CohClass& a, const Scalar& c) const;

    // the fourteen printed generator cocycles
    struct Generator {
        std::string name;
        int n, t;
        SparseVec cochain;  // full Q^n coordinates
        CohClass cls;
    };
    void load_generators(const std::string& path);
    const std::vector<Generator>& generators() const { return gens_; }
    const Generator& generator(int i) const { return gens_.at(i - 1); }  // 1-based X_i

    // chain-map lift of the canonical representative of a class, cached
    const std::vector<BimoduleMap>& lifted(const CohClass& c, int depth) const;

    // internal-degree slices present in Q^n
    const std::map<int, std::vector<int>>& slices(int n) const { return Q_[n].slices; }

  private:
    const Resolution* R_;
    std::vector<QSpace> Q_;
    mutable std::map<std::pair<int, int>, std::unique_ptr<HBasis>> bases_;
    mutable std::map<std::string, std::unique_ptr<std::vector<BimoduleMap>>> lift_cache_;
    mutable std::mutex mu_;
    std::vector<Generator> gens_;

    SparseMatrix differential_slice(int n, int t) const;  // rows Q^{n+1}, cols Q^n
    std::string lift_key(const CohClass& c, int depth) const;
};

}  // namespace fk
