#include "fk/algebra.hpp"

#include <array>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace fk {

namespace {

int word_to_tensor_index(const std::vector<int>& w, int g) {
    int idx = 0;
    for (int x : w) idx = idx * g + x;
    return idx;
}

// All tensors V^i (x) R (x) V^j inside V^(x)n.
std::vector<SparseVec> relation_tensors(const std::vector<SparseVec>& relations, int g, int n) {
    std::vector<SparseVec> rows;
    if (n < 2) return rows;
    int total = 1;
    for (int k = 0; k < n; ++k) total *= g;
    for (int i = 0; i + 2 <= n; ++i) {
        int j = n - 2 - i;
        int left_count = 1;
        for (int k = 0; k < i; ++k) left_count *= g;
        int right_count = 1;
        for (int k = 0; k < j; ++k) right_count *= g;
        int rbase = 1;
        for (int k = 0; k < j; ++k) rbase *= g;
        (void)total;
        for (const auto& rel : relations) {
            for (int L = 0; L < left_count; ++L) {
                for (int R = 0; R < right_count; ++R) {
                    SparseVec row;
                    for (auto& [pair_idx, c] : rel.terms()) {
                        // index = ((L*g + p1)*g + p2)*g^j + R
                        long idx = L;
                        idx = idx * g + pair_idx / g;
                        idx = idx * g + pair_idx % g;
                        idx = idx * rbase + R;
                        row.add_term((int)idx, c);
                    }
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    return rows;
}

std::vector<std::vector<int>> fk3_basis_words() {
    // the paper's basis: 1, a, b, c, ab, bc, ba, ac, aba, abc, bac, abac
    return {{}, {0}, {1}, {2}, {0, 1}, {1, 2}, {1, 0}, {0, 2}, {0, 1, 0}, {0, 1, 2}, {1, 0, 2}, {0, 1, 0, 2}};
}

std::string word_label(const std::vector<int>& w, const std::vector<std::string>& gens) {
    if (w.empty()) return "1";
    std::string s;
    for (int x : w) s += gens[x];
    return s;
}

}  // namespace

Presentation Presentation::fk3(Field field) {
    Presentation p;
    p.field = field;
    p.generators = {"a", "b", "c"};
    auto pair_idx = [](int i, int j) { return i * 3 + j; };
    auto rel = [&](std::initializer_list<std::pair<std::pair<int, int>, int>> terms) {
        SparseVec v;
        for (auto& [ij, c] : terms) v.add_term(pair_idx(ij.first, ij.second), Scalar(c, field));
        return v;
    };
    p.relations = {
        rel({{{0, 0}, 1}}),                              // a^2
        rel({{{1, 1}, 1}}),                              // b^2
        rel({{{2, 2}, 1}}),                              // c^2
        rel({{{0, 1}, 1}, {{1, 2}, 1}, {{2, 0}, 1}}),    // ab + bc + ca
        rel({{{1, 0}, 1}, {{0, 2}, 1}, {{2, 1}, 1}}),    // ba + ac + cb
    };
    return p;
}

Presentation Presentation::load(const std::string& path, Field field) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open presentation file: " + path);
    nlohmann::json j;
    in >> j;
    Presentation p;
    p.field = field;
    for (auto& g : j.at("generators")) p.generators.push_back(g.get<std::string>());
    int g = p.gen_count();
    std::map<std::string, int> gi;
    for (int k = 0; k < g; ++k) gi[p.generators[k]] = k;
    for (auto& rel : j.at("relations")) {
        SparseVec v;
        for (auto& term : rel) {
            std::string w = term.at("w").get<std::string>();
            if ((int)w.size() != 2) throw std::runtime_error("relation word must have length 2: " + w);
            int i = gi.at(std::string(1, w[0]));
            int jdx = gi.at(std::string(1, w[1]));
            v.add_term(i * g + jdx, Scalar(term.at("c").get<long>(), field));
        }
        p.relations.push_back(std::move(v));
    }
    return p;
}

std::vector<SparseVec> GradedAlgebra::reduce_tensor_to_basis(int deg, const SparseVec& tensor) const {
    (void)deg;
    (void)tensor;
    return {};
}

GradedAlgebra GradedAlgebra::build(const Presentation& p, int max_degree) {
    GradedAlgebra A;
    A.field_ = p.field;
    A.gens_ = p.gen_count();
    const int g = A.gens_;
    if (g != 3) throw std::runtime_error("only three-generator presentations are supported");

    auto words = fk3_basis_words();
    // degreewise machinery
    std::vector<Subspace> rel_sub(max_degree + 1);
    std::vector<std::vector<int>> by_deg;
    int top = 0;
    std::vector<std::vector<SparseVec>> mono_reduced(max_degree + 1);
    std::vector<std::vector<int>> monos_of_deg(max_degree + 1);

    for (size_t k = 0; k < words.size(); ++k) {
        int d = (int)words[k].size();
        if (d > max_degree) continue;
        monos_of_deg[d].push_back((int)k);
    }

    for (int d = 0; d <= max_degree; ++d) {
        int dim_t = 1;
        for (int k = 0; k < d; ++k) dim_t *= g;
        rel_sub[d] = span(relation_tensors(p.relations, g, d), dim_t);
        int qdim = dim_t - rel_sub[d].dim();
        if (qdim > 0 && d <= 4) {
            if ((int)monos_of_deg[d].size() != qdim)
                throw std::runtime_error("representative set is not a basis of the degree-" +
                                         std::to_string(d) + " quotient");
        }
        for (int m : monos_of_deg[d]) {
            SparseVec t = SparseVec::unit(word_to_tensor_index(words[m], g), Scalar(1, p.field));
            mono_reduced[d].push_back(rel_sub[d].reduce(t));
        }
        // representatives must stay independent after reduction
        if (!monos_of_deg[d].empty()) {
            Subspace s = span(mono_reduced[d], dim_t);
            if (s.dim() != (int)monos_of_deg[d].size())
                throw std::runtime_error("representative monomials dependent in degree " + std::to_string(d));
            if (s.dim() != qdim)
                throw std::runtime_error("representative monomials do not span degree " + std::to_string(d));
        }
        if (qdim > 0) top = d;
    }
    A.top_ = top;

    // index the basis in listing order
    for (size_t k = 0; k < words.size(); ++k) {
        A.labels_.push_back(word_label(words[k], p.generators));
        A.degree_.push_back((int)words[k].size());
        A.words_.push_back(words[k]);
        A.index_[A.labels_.back()] = (int)k;
    }
    A.by_degree_.assign(top + 1, {});
    for (int k = 0; k < A.dim(); ++k) A.by_degree_[A.degree_[k]].push_back(k);

    // expression solvers: columns = reduced monomials of a degree
    std::vector<std::unique_ptr<RrefSolver>> expr(max_degree + 1);
    std::vector<std::vector<int>> cols_to_basis(max_degree + 1);
    for (int d = 0; d <= max_degree; ++d) {
        if (monos_of_deg[d].empty()) continue;
        int dim_t = 1;
        for (int k = 0; k < d; ++k) dim_t *= g;
        SparseMatrix M(dim_t, (int)monos_of_deg[d].size());
        for (size_t c = 0; c < monos_of_deg[d].size(); ++c)
            for (auto& [r, v] : mono_reduced[d][c].terms()) M.row[r].add_term((int)c, v);
        expr[d] = std::make_unique<RrefSolver>(M, true);
        cols_to_basis[d] = monos_of_deg[d];
    }

    auto reduce_word_coords = [&](const std::vector<int>& w) -> SparseVec {
        int d = (int)w.size();
        SparseVec out;
        if (d > top) return out;
        SparseVec t = SparseVec::unit(word_to_tensor_index(w, g), Scalar(1, p.field));
        SparseVec red = rel_sub[d].reduce(t);
        auto x = expr[d]->solve(red);
        if (!x) throw std::runtime_error("word does not reduce to the chosen basis");
        for (auto& [c, v] : x->terms()) out.add_term(cols_to_basis[d][c], v);
        return out;
    };

    // full multiplication table
    A.table_.assign((size_t)A.dim() * A.dim(), SparseVec());
    for (int i = 0; i < A.dim(); ++i) {
        for (int j = 0; j < A.dim(); ++j) {
            std::vector<int> w = A.words_[i];
            w.insert(w.end(), A.words_[j].begin(), A.words_[j].end());
            A.table_[(size_t)i * A.dim() + j] = reduce_word_coords(w);
        }
    }
    return A;
}

int GradedAlgebra::index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw std::runtime_error("unknown basis label: " + label);
    return it->second;
}

SparseVec GradedAlgebra::multiply(const SparseVec& x, const SparseVec& y) const {
    SparseVec r;
    for (auto& [i, a] : x.terms())
        for (auto& [j, b] : y.terms()) r.axpy(a * b, mult_basis(i, j));
    return r;
}

SparseVec GradedAlgebra::element(const std::string& label, Scalar c) const {
    return SparseVec::unit(index_of(label), c);
}

SparseVec GradedAlgebra::reduce_word(const std::vector<int>& word) const {
    SparseVec r = SparseVec::unit(unit_index(), Scalar(1, field_));
    for (int gidx : word) {
        SparseVec gvec = SparseVec::unit(1 + gidx, Scalar(1, field_));
        r = multiply(r, gvec);
    }
    return r;
}

Subspace GradedAlgebra::center() const {
    const int n = dim();
    SparseMatrix M(n * n, n);
    for (int x = 0; x < n; ++x) {
        for (int z = 0; z < n; ++z) {
            // row (x, *) of [z, x]: coeff of basis k in z*x - x*z
            const SparseVec& zx = mult_basis(z, x);
            const SparseVec& xz = mult_basis(x, z);
            SparseVec d = zx - xz;
            for (auto& [k, v] : d.terms()) M.row[x * n + k].add_term(z, v);
        }
    }
    return kernel_basis(M);
}

std::vector<SparseVec> GradedAlgebra::derivation_on_basis(const std::vector<SparseVec>& images) const {
    std::vector<SparseVec> out(dim());
    for (int k = 0; k < dim(); ++k) {
        const auto& w = words_[k];
        SparseVec val;
        for (size_t pos = 0; pos < w.size(); ++pos) {
            SparseVec term = SparseVec::unit(unit_index(), Scalar(1, field_));
            for (size_t q = 0; q < w.size(); ++q) {
                const SparseVec factor = (q == pos) ? images[w[q]] : SparseVec::unit(1 + w[q], Scalar(1, field_));
                term = multiply(term, factor);
            }
            val += term;
        }
        out[k] = std::move(val);
    }
    return out;
}

bool GradedAlgebra::is_derivation(const std::vector<SparseVec>& images) const {
    auto on_basis = derivation_on_basis(images);
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j) {
            // rho(x y) = rho(x) y + x rho(y), evaluated through the basis expansion
            SparseVec lhs;
            for (auto& [k, c] : mult_basis(i, j).terms()) lhs.axpy(c, on_basis[k]);
            SparseVec rhs = multiply(on_basis[i], SparseVec::unit(j, Scalar(1, field_)));
            rhs += multiply(SparseVec::unit(i, Scalar(1, field_)), on_basis[j]);
            if (lhs != rhs) return false;
        }
    return true;
}

std::pair<Subspace, Subspace> GradedAlgebra::derivation_space() const {
    const int n = dim();
    const int unknowns = gens_ * n;  // images of the generators
    // A triple of images defines a derivation iff every relation maps to zero
    // under the induced rule; relations live in degree 2, so it is enough to
    // impose rho(uv) = rho(u)v + u rho(v) consistency on the defining relations.
    // Equivalently: sum over relation terms r_{ij} (rho(g_i) g_j + g_i rho(g_j)) = 0.
    const Presentation p = Presentation::fk3(field_);
    SparseMatrix M((int)p.relations.size() * n, unknowns);
    for (size_t r = 0; r < p.relations.size(); ++r) {
        for (auto& [pair_idx, c] : p.relations[r].terms()) {
            int i = pair_idx / gens_, j = pair_idx % gens_;
            // rho(g_i) g_j contribution: unknown image of g_i multiplied by g_j
            for (int k = 0; k < n; ++k) {
                const SparseVec& kg = mult_basis(k, 1 + j);
                for (auto& [m, v] : kg.terms()) M.row[r * n + m].add_term(i * n + k, c * v);
                const SparseVec& gk = mult_basis(1 + i, k);
                for (auto& [m, v] : gk.terms()) M.row[r * n + m].add_term(j * n + k, c * v);
            }
        }
    }
    Subspace all = kernel_basis(M);

    std::vector<SparseVec> inner_rows;
    for (int x = 0; x < n; ++x) {
        SparseVec row;
        for (int gi = 0; gi < gens_; ++gi) {
            SparseVec ad = mult_basis(x, 1 + gi) - mult_basis(1 + gi, x);
            for (auto& [k, v] : ad.terms()) row.add_term(gi * n + k, v);
        }
        inner_rows.push_back(std::move(row));
    }
    Subspace inner = span(inner_rows, unknowns);
    return {all, inner};
}

// ---------------------------------------------------------------------------

DualAlgebra DualAlgebra::build(const Presentation& p, int max_degree) {
    DualAlgebra D;
    D.field_ = p.field;
    D.maxdeg_ = max_degree;
    const int g = p.gen_count();
    if (g != 3) throw std::runtime_error("only three-generator presentations are supported");

    // R-perp under <f (x) h, v (x) w> = f(v) h(w)
    {
        SparseMatrix M((int)p.relations.size(), g * g);
        for (size_t r = 0; r < p.relations.size(); ++r) M.row[r] = p.relations[r];
        D.rperp_ = kernel_basis(M);
        if (D.rperp_.dim() != g * g - (int)span(p.relations, g * g).dim())
            throw std::runtime_error("inconsistent relation orthogonal");
    }

    // label words: A^n, B^n, C^n, A^(n-1)B, A^(n-1)C, A^(n-2)B^2, with the
    // convention that entries whose formal index drops to zero collapse
    // (degree 2 keeps five labels).
    auto label_words_of_degree = [&](int n) {
        std::vector<std::vector<int>> ws;
        auto rep = [](int x, int k) { return std::vector<int>(k, x); };
        auto cat = [](std::vector<int> a, const std::vector<int>& b) {
            a.insert(a.end(), b.begin(), b.end());
            return a;
        };
        if (n == 0) {
            ws.push_back({});
            return ws;
        }
        if (n == 1) {
            ws = {{0}, {1}, {2}};
            return ws;
        }
        ws.push_back(rep(0, n));                         // A^n
        ws.push_back(rep(1, n));                         // B^n
        ws.push_back(rep(2, n));                         // C^n
        ws.push_back(cat(rep(0, n - 1), {1}));           // A^(n-1) B
        ws.push_back(cat(rep(0, n - 1), {2}));           // A^(n-1) C
        if (n >= 3) ws.push_back(cat(rep(0, n - 2), {1, 1}));  // A^(n-2) B^2
        return ws;
    };

    std::vector<Subspace> rel_sub(max_degree + 1);
    std::vector<std::unique_ptr<RrefSolver>> expr(max_degree + 1);
    std::vector<std::vector<SparseVec>> mono_reduced(max_degree + 1);

    std::vector<SparseVec> rperp_rows;
    for (auto& v : D.rperp_.basis) rperp_rows.push_back(v);

    for (int n = 0; n <= max_degree; ++n) {
        auto ws = label_words_of_degree(n);
        int dim_t = 1;
        for (int k = 0; k < n; ++k) dim_t *= g;
        rel_sub[n] = span(relation_tensors(rperp_rows, g, n), dim_t);
        int qdim = dim_t - rel_sub[n].dim();
        if ((int)ws.size() != qdim)
            throw std::runtime_error("dual dimension mismatch in degree " + std::to_string(n) +
                                     ": expected " + std::to_string(ws.size()) + ", got " + std::to_string(qdim));
        D.words_.push_back(ws);
        std::vector<std::string> labels;
        const char* names = "ABC";
        for (auto& w : ws) {
            std::string s;
            if (w.empty()) s = "1";
            for (int x : w) s += names[x];
            labels.push_back(s);
        }
        D.labels_.push_back(labels);
        for (auto& w : ws) {
            SparseVec t = SparseVec::unit(word_to_tensor_index(w, g), Scalar(1, p.field));
            mono_reduced[n].push_back(rel_sub[n].reduce(t));
        }
        if (!ws.empty()) {
            SparseMatrix M(dim_t, (int)ws.size());
            for (size_t c = 0; c < ws.size(); ++c)
                for (auto& [r, v] : mono_reduced[n][c].terms()) M.row[r].add_term((int)c, v);
            expr[n] = std::make_unique<RrefSolver>(M, true);
            if (expr[n]->rank() != (int)ws.size())
                throw std::runtime_error("dual representative monomials dependent in degree " + std::to_string(n));
        }
    }

    auto reduce_dual_word = [&](const std::vector<int>& w) -> SparseVec {
        int n = (int)w.size();
        SparseVec t = SparseVec::unit(word_to_tensor_index(w, g), Scalar(1, p.field));
        SparseVec red = rel_sub[n].reduce(t);
        auto x = expr[n]->solve(red);
        if (!x) throw std::runtime_error("dual word fails to reduce");
        return *x;
    };

    D.lmul_.resize(max_degree);
    D.rmul_.resize(max_degree);
    for (int n = 0; n + 1 <= max_degree; ++n) {
        for (int gi = 0; gi < 3; ++gi) {
            D.lmul_[n][gi].resize(D.words_[n].size());
            D.rmul_[n][gi].resize(D.words_[n].size());
            for (size_t k = 0; k < D.words_[n].size(); ++k) {
                std::vector<int> lw = {gi};
                lw.insert(lw.end(), D.words_[n][k].begin(), D.words_[n][k].end());
                D.lmul_[n][gi][k] = reduce_dual_word(lw);
                std::vector<int> rw = D.words_[n][k];
                rw.push_back(gi);
                D.rmul_[n][gi][k] = reduce_dual_word(rw);
            }
        }
    }
    return D;
}

SparseVec DualAlgebra::mult_basis(int m, int i, int n, int j) const {
    if (m + n > maxdeg_) throw std::runtime_error("dual product beyond built degree");
    // multiply the degree-n word into the degree-m element one generator at a time
    SparseVec cur = SparseVec::unit(i, Scalar(1, field_));
    int deg = m;
    for (int gi : words_[n][j]) {
        SparseVec next;
        for (auto& [k, c] : cur.terms()) next.axpy(c, rmul_[deg][gi][k]);
        cur = std::move(next);
        ++deg;
    }
    return cur;
}

std::vector<std::string> DualAlgebra::dual_star_labels(int n) const {
    auto name = [&](const std::string& base, int idx) -> std::string {
        // zero or negative formal index collapses to nothing upstream;
        // index 1 is omitted in the printed names
        if (idx == 1) return base;
        return base + std::to_string(idx);
    };
    if (n == 0) return {"eps"};
    if (n == 1) return {"alpha", "beta", "gamma"};
    std::vector<std::string> out = {name("alpha", n), name("beta", n), name("gamma", n),
                                    name("alpha", n - 1) + "beta", name("alpha", n - 1) + "gamma"};
    if (n >= 3) out.push_back(name("alpha", n - 2) + "beta2");
    return out;
}

DualActions::DualActions(const DualAlgebra& dual) : dual_(&dual) {
    int maxdeg = dual.max_degree();
    left_on_star_.resize(maxdeg + 1);
    right_on_star_.resize(maxdeg + 1);
    for (int n = 1; n <= maxdeg; ++n) {
        for (int g = 0; g < 3; ++g) {
            int lo = dual.dim_of_degree(n - 1);
            int hi = dual.dim_of_degree(n);
            // (g^* . f)(w) = f(w g^*): transpose of right multiplication by g
            left_on_star_[n][g].assign(hi, SparseVec());
            right_on_star_[n][g].assign(hi, SparseVec());
            for (int w = 0; w < lo; ++w) {
                for (auto& [k, c] : dual.right_mult(g, n - 1, w).terms())
                    left_on_star_[n][g][k].add_term(w, c);
                for (auto& [k, c] : dual.left_mult(g, n - 1, w).terms())
                    right_on_star_[n][g][k].add_term(w, c);
            }
        }
    }
}

DualCo DualActions::act_left_gen(int g, const DualCo& f) const {
    DualCo r;
    r.level = f.level - 1;
    if (f.level < 1) return r;
    for (auto& [k, c] : f.coords.terms()) r.coords.axpy(c, left_on_star_[f.level][g][k]);
    return r;
}

DualCo DualActions::act_right_gen(int g, const DualCo& f) const {
    DualCo r;
    r.level = f.level - 1;
    if (f.level < 1) return r;
    for (auto& [k, c] : f.coords.terms()) r.coords.axpy(c, right_on_star_[f.level][g][k]);
    return r;
}

DualCo DualActions::act(int p, int ui, const DualCo& f, int q, int vi) const {
    DualCo r;
    r.level = f.level - p - q;
    if (r.level < 0) return r;
    const auto& D = *dual_;
    for (int w = 0; w < D.dim_of_degree(r.level); ++w) {
        // v w u at level f.level
        SparseVec vw = D.mult_basis(q, vi, r.level, w);
        SparseVec vwu;
        for (auto& [k, c] : vw.terms()) vwu.axpy(c, D.mult_basis(q + r.level, k, p, ui));
        Scalar val = f.coords.dot(vwu);
        if (!val.is_zero()) r.coords.add_term(w, val);
    }
    return r;
}

}  // namespace fk
