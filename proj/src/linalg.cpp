#include "fk/linalg.hpp"

#include <stdexcept>

namespace fk {

namespace {

// Scale a (matrix-row, transform-row) pair to primitive integer entries.
// Rational mode only; prime fields skip this.
void make_primitive(SparseVec& r, SparseVec& e) {
    if (r.empty() && e.empty()) return;
    bool rational = true;
    for (auto& [i, v] : r.terms())
        if (!v.field().rational()) rational = false;
    if (!rational) return;

    mpz_class den_lcm = 1, num_gcd = 0;
    auto scan = [&](const SparseVec& v) {
        for (auto& [i, s] : v.terms()) {
            mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), s.raw().get_den().get_mpz_t());
        }
    };
    scan(r);
    scan(e);
    auto scan_num = [&](const SparseVec& v) {
        for (auto& [i, s] : v.terms()) {
            mpz_class n = s.raw().get_num() * (den_lcm / s.raw().get_den());
            mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), n.get_mpz_t());
        }
    };
    scan_num(r);
    scan_num(e);
    if (num_gcd == 0) return;
    Scalar f(mpq_class(den_lcm, num_gcd));
    r.scale(f);
    e.scale(f);
}

}  // namespace

RrefSolver::RrefSolver(const SparseMatrix& M, bool track_transform, std::vector<int> perm)
    : rows_(M.rows), cols_(M.cols), rank_(0), tracked_(track_transform), perm_(std::move(perm)) {
    if (!perm_.empty()) {
        inv_perm_.assign(cols_, 0);
        for (int k = 0; k < cols_; ++k) inv_perm_[perm_[k]] = k;
    }
    auto internal_col = [&](int c) { return perm_.empty() ? c : inv_perm_[c]; };

    // Working rows in internal column labels.
    std::vector<SparseVec> W(rows_), E(rows_);
    for (int r = 0; r < rows_; ++r) {
        if (perm_.empty())
            W[r] = M.row[r];
        else
            for (auto& [c, v] : M.row[r].terms()) W[r].add_term(internal_col(c), v);
        E[r] = SparseVec::unit(r);
        make_primitive(W[r], E[r]);
    }

    std::vector<int> piv_int;
    int next_row = 0;
    for (int c = 0; c < cols_ && next_row < rows_; ++c) {
        int pr = -1;
        for (int r = next_row; r < rows_; ++r) {
            if (!W[r].empty() && W[r].terms().front().first == c) {
                pr = r;
                break;
            }
        }
        if (pr < 0) continue;
        std::swap(W[next_row], W[pr]);
        std::swap(E[next_row], E[pr]);
        const Scalar pv = W[next_row].terms().front().second;
        for (int r = next_row + 1; r < rows_; ++r) {
            if (W[r].empty() || W[r].terms().front().first != c) continue;
            const Scalar rv = W[r].terms().front().second;
            // fraction-free combination: pv*row_r - rv*row_piv
            W[r].scale(pv);
            W[r].axpy(-rv, W[next_row]);
            E[r].scale(pv);
            E[r].axpy(-rv, E[next_row]);
            make_primitive(W[r], E[r]);
        }
        piv_int.push_back(c);
        ++next_row;
    }
    rank_ = next_row;

    // Back substitution: pivots to 1, clear entries above.
    for (int i = rank_ - 1; i >= 0; --i) {
        const Scalar pv = W[i].at(piv_int[i]);
        const Scalar inv = pv.inverse();
        W[i].scale(inv);
        E[i].scale(inv);
        for (int r = 0; r < i; ++r) {
            Scalar v = W[r].at(piv_int[i]);
            if (v.is_zero()) continue;
            W[r].axpy(-v, W[i]);
            E[r].axpy(-v, E[i]);
        }
    }

    // Store with external labels.
    R_.resize(rows_);
    pivots_.resize(rank_);
    for (int r = 0; r < rows_; ++r) {
        if (perm_.empty()) {
            R_[r] = std::move(W[r]);
        } else {
            for (auto& [c, v] : W[r].terms()) R_[r].add_term(perm_[c], v);
        }
    }
    for (int i = 0; i < rank_; ++i) pivots_[i] = perm_.empty() ? piv_int[i] : perm_[piv_int[i]];
    if (tracked_)
        E_ = std::move(E);
}

std::optional<SparseVec> RrefSolver::solve(const SparseVec& b) const {
    if (!tracked_) throw std::logic_error("RrefSolver built without transform tracking");
    SparseVec x;
    for (int i = 0; i < rank_; ++i) {
        Scalar c = E_[i].dot(b);
        if (!c.is_zero()) x.add_term(pivots_[i], c);
    }
    for (int i = rank_; i < rows_; ++i) {
        if (!E_[i].dot(b).is_zero()) return std::nullopt;  // inconsistent
    }
    return x;
}

std::optional<SparseVec> RrefSolver::infeasibility_certificate(const SparseVec& b) const {
    if (!tracked_) throw std::logic_error("RrefSolver built without transform tracking");
    for (int i = rank_; i < rows_; ++i) {
        Scalar c = E_[i].dot(b);
        if (!c.is_zero()) return E_[i].scaled(c.inverse());
    }
    return std::nullopt;
}

Subspace RrefSolver::kernel() const {
    Subspace S;
    S.ambient_dim = cols_;
    std::vector<bool> is_pivot(cols_, false);
    std::vector<int> pivot_row(cols_, -1);
    for (int i = 0; i < rank_; ++i) {
        is_pivot[pivots_[i]] = true;
        pivot_row[pivots_[i]] = i;
    }
    // Free columns in the order induced by the column permutation.
    std::vector<int> free_cols;
    for (int k = 0; k < cols_; ++k) {
        int c = perm_.empty() ? k : perm_[k];
        if (!is_pivot[c]) free_cols.push_back(c);
    }
    for (int f : free_cols) {
        SparseVec v = SparseVec::unit(f);
        for (int i = 0; i < rank_; ++i) {
            Scalar c = R_[i].at(f);
            if (!c.is_zero()) v.add_term(pivots_[i], -c);
        }
        S.basis.push_back(std::move(v));
        S.pivots.push_back(f);
    }
    // Canonical order: sort by pivot (= free column) index so the echelon
    // property holds in the natural labeling even under permuted solves.
    std::vector<size_t> order(S.basis.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return S.pivots[a] < S.pivots[b]; });
    Subspace out;
    out.ambient_dim = S.ambient_dim;
    for (size_t i : order) {
        out.basis.push_back(std::move(S.basis[i]));
        out.pivots.push_back(S.pivots[i]);
    }
    return out;
}

Subspace RrefSolver::row_space() const {
    Subspace S;
    S.ambient_dim = cols_;
    for (int i = 0; i < rank_; ++i) {
        S.basis.push_back(R_[i]);
        S.pivots.push_back(pivots_[i]);
    }
    return S;
}

bool Subspace::contains(const SparseVec& v) const { return reduce(v).empty(); }

SparseVec Subspace::reduce(const SparseVec& v) const {
    SparseVec r = v;
    for (size_t i = 0; i < basis.size(); ++i) {
        Scalar c = r.at(pivots[i]);
        if (!c.is_zero()) r.axpy(-c, basis[i]);
    }
    return r;
}

Subspace kernel_basis(const SparseMatrix& M) { return RrefSolver(M, false).kernel(); }

std::optional<SparseVec> solve(const SparseMatrix& M, const SparseVec& b) {
    if (!b.empty() && b.terms().back().first >= M.rows)
        throw std::invalid_argument("solve: rhs length exceeds row count");
    return RrefSolver(M, true).solve(b);
}

int rank(const SparseMatrix& M) { return RrefSolver(M, false).rank(); }

SparseVec quotient_coordinates(const SparseVec& v, const Subspace& S) {
    if (!v.empty() && v.terms().back().first >= S.ambient_dim)
        throw std::invalid_argument("quotient_coordinates: vector exceeds ambient dimension");
    return S.reduce(v);
}

Subspace span(const std::vector<SparseVec>& vectors, int ambient_dim) {
    SparseMatrix M((int)vectors.size(), ambient_dim);
    M.row = vectors;
    return RrefSolver(M, false).row_space();
}

}  // namespace fk
