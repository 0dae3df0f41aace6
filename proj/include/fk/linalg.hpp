#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "fk/scalar.hpp"

namespace fk {

// Sparse vector: (index, coefficient) pairs, strictly increasing indices,
// no stored zeros.
class SparseVec {
  public:
    using Term = std::pair<int, Scalar>;

    SparseVec() = default;

    const std::vector<Term>& terms() const { return t_; }
    bool empty() const { return t_.empty(); }
    size_t size() const { return t_.size(); }

    void add_term(int idx, const Scalar& c) {
        if (c.is_zero()) return;
        auto it = std::lower_bound(t_.begin(), t_.end(), idx,
                                   [](const Term& a, int i) { return a.first < i; });
        if (it != t_.end() && it->first == idx) {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        } else {
            t_.insert(it, {idx, c});
        }
    }

    Scalar at(int idx) const {
        auto it = std::lower_bound(t_.begin(), t_.end(), idx,
                                   [](const Term& a, int i) { return a.first < i; });
        if (it != t_.end() && it->first == idx) return it->second;
        return Scalar();
    }

    void axpy(const Scalar& c, const SparseVec& o) {  // *this += c * o
        if (c.is_zero() || o.empty()) return;
        std::vector<Term> out;
        out.reserve(t_.size() + o.t_.size());
        size_t i = 0, j = 0;
        while (i < t_.size() || j < o.t_.size()) {
            if (j == o.t_.size() || (i < t_.size() && t_[i].first < o.t_[j].first)) {
                out.push_back(t_[i++]);
            } else if (i == t_.size() || o.t_[j].first < t_[i].first) {
                Scalar v = c * o.t_[j].second;
                if (!v.is_zero()) out.push_back({o.t_[j].first, v});
                ++j;
            } else {
                Scalar v = t_[i].second + c * o.t_[j].second;
                if (!v.is_zero()) out.push_back({t_[i].first, v});
                ++i, ++j;
            }
        }
        t_ = std::move(out);
    }

    SparseVec& operator+=(const SparseVec& o) {
        axpy(Scalar(1), o);
        return *this;
    }
    SparseVec& operator-=(const SparseVec& o) {
        axpy(Scalar(-1), o);
        return *this;
    }
    friend SparseVec operator+(SparseVec a, const SparseVec& b) { return a += b; }
    friend SparseVec operator-(SparseVec a, const SparseVec& b) { return a -= b; }

    SparseVec scaled(const Scalar& c) const {
        SparseVec r;
        if (c.is_zero()) return r;
        r.t_.reserve(t_.size());
        for (auto& [i, v] : t_) r.t_.push_back({i, c * v});
        return r;
    }

    void scale(const Scalar& c) {
        if (c.is_zero()) {
            t_.clear();
            return;
        }
        for (auto& [i, v] : t_) v *= c;
    }

    Scalar dot(const SparseVec& o) const {
        Scalar r;
        size_t i = 0, j = 0;
        while (i < t_.size() && j < o.t_.size()) {
            if (t_[i].first < o.t_[j].first)
                ++i;
            else if (o.t_[j].first < t_[i].first)
                ++j;
            else
                r += t_[i++].second * o.t_[j++].second;
        }
        return r;
    }

    // Relabel indices through a map; entries mapped to -1 are dropped.
    SparseVec mapped(const std::vector<int>& index_map) const {
        SparseVec r;
        for (auto& [i, v] : t_) {
            int k = index_map[i];
            if (k >= 0) r.add_term(k, v);
        }
        return r;
    }

    friend bool operator==(const SparseVec& a, const SparseVec& b) { return a.t_ == b.t_; }
    friend bool operator!=(const SparseVec& a, const SparseVec& b) { return !(a.t_ == b.t_); }

    static SparseVec unit(int idx, Scalar c = Scalar(1)) {
        SparseVec v;
        v.add_term(idx, c);
        return v;
    }

  private:
    std::vector<Term> t_;
};

// Sparse matrix as a list of sparse rows over a fixed column count.
struct SparseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<SparseVec> row;

    SparseMatrix() = default;
    SparseMatrix(int r, int c) : rows(r), cols(c), row(r) {}

    void set(int r, int c, const Scalar& v) {
        Scalar cur = row[r].at(c);
        row[r].add_term(c, v - cur);
    }
    Scalar at(int r, int c) const { return row[r].at(c); }

    SparseVec apply(const SparseVec& x) const {  // M * x
        SparseVec y;
        for (int r = 0; r < rows; ++r) {
            Scalar v = row[r].dot(x);
            if (!v.is_zero()) y.add_term(r, v);
        }
        return y;
    }

    SparseMatrix transposed() const {
        SparseMatrix t(cols, rows);
        for (int r = 0; r < rows; ++r)
            for (auto& [c, v] : row[r].terms()) t.row[c].add_term(r, v);
        return t;
    }
};

// Echelon subspace of a coordinate space: RREF basis rows, pivot columns
// strictly increasing.
struct Subspace {
    int ambient_dim = 0;
    std::vector<SparseVec> basis;  // RREF rows
    std::vector<int> pivots;

    int dim() const { return (int)basis.size(); }

    bool contains(const SparseVec& v) const;
    // Canonical coordinates of v + S in the complement spanned by the
    // non-pivot coordinates: reduce v by the RREF rows. Zero iff v in S.
    SparseVec reduce(const SparseVec& v) const;
};

// Row-reduction engine. Computes the (unique) reduced row echelon form
// with respect to a column order, optionally a permuted one, tracking the
// transform so that repeated solves against the same matrix are cheap.
//
// Over the rationals the forward pass is fraction-free: rows are scaled
// primitive-integer, elimination uses cross-multiplication, and each new
// row is divided by the content of its matrix-and-transform entries. The
// final pass normalizes pivots to 1 and clears entries above them.
class RrefSolver {
  public:
    // perm: optional column permutation (internal order = perm[k]); empty = identity.
    RrefSolver(const SparseMatrix& M, bool track_transform, std::vector<int> perm = {});

    int rank() const { return rank_; }
    int cols() const { return cols_; }
    int rows() const { return rows_; }
    const std::vector<int>& pivot_cols() const { return pivots_; }  // external labels

    // Echelon-canonical particular solution of M x = b (free variables 0),
    // or nullopt when inconsistent. Requires track_transform.
    std::optional<SparseVec> solve(const SparseVec& b) const;

    // For inconsistent systems: a combination of the rows of M that vanishes
    // while pairing to 1 with b. Requires track_transform.
    std::optional<SparseVec> infeasibility_certificate(const SparseVec& b) const;

    // Canonical kernel basis (one vector per free column, in free-column order).
    Subspace kernel() const;

    // Row space as an echelon subspace (canonical w.r.t. the column order used).
    Subspace row_space() const;

  private:
    int rows_, cols_, rank_;
    bool tracked_;
    std::vector<SparseVec> R_;  // RREF rows, external column labels
    std::vector<SparseVec> E_;  // transform rows: R_[i] = sum_j E_[i][j] * M.row[j]
    std::vector<int> pivots_;   // external labels, one per row of R_ up to rank
    std::vector<int> perm_, inv_perm_;
};

// Canonical kernel of M (RREF-based, unique for the natural column order).
Subspace kernel_basis(const SparseMatrix& M);

// Echelon-canonical particular solution of M x = b.
std::optional<SparseVec> solve(const SparseMatrix& M, const SparseVec& b);

int rank(const SparseMatrix& M);

// Canonical coordinates of v modulo the subspace S.
SparseVec quotient_coordinates(const SparseVec& v, const Subspace& S);

// RREF span of a set of vectors.
Subspace span(const std::vector<SparseVec>& vectors, int ambient_dim);

}  // namespace fk
