#include "fk/cohomology.hpp"

#include <sstream>

#include "fk/dataio.hpp"

namespace fk {

Cohomology::Cohomology(const Resolution& R) : R_(&R) {
    if (!R.assembled()) throw std::runtime_error("cohomology requires an assembled resolution");
    const GradedAlgebra& A = R.algebra();
    Q_.resize(R.depth() + 1);
    for (int n = 0; n <= R.depth(); ++n) {
        QSpace& Q = Q_[n];
        Q.n = n;
        for (int i = 0; 4 * i <= n; ++i) {
            Q.levels.push_back(n - 4 * i);
            Q.offsets.push_back(Q.dim);
            Q.dim += R.dual().dim_of_degree(n - 4 * i) * 12;
        }
        Q.tdeg.resize(Q.dim);
        Q.slice_pos.resize(Q.dim);
        for (size_t i = 0; i < Q.levels.size(); ++i) {
            int dd = R.dual().dim_of_degree(Q.levels[i]);
            for (int u = 0; u < dd; ++u)
                for (int x = 0; x < 12; ++x)
                    Q.tdeg[Q.flat((int)i, u, x)] = A.degree_of(x) - Q.levels[i] - 6 * (int)i;
        }
        for (int f = 0; f < Q.dim; ++f) {
            auto& s = Q.slices[Q.tdeg[f]];
            Q.slice_pos[f] = (int)s.size();
            s.push_back(f);
        }
    }
}

SparseVec Cohomology::gen_value(int n, const SparseVec& cochain, int omega, int u) const {
    const QSpace& Q = Q_[n];
    SparseVec v;
    for (int x = 0; x < 12; ++x) {
        Scalar c = cochain.at(Q.flat(omega, u, x));
        if (!c.is_zero()) v.add_term(x, c);
    }
    return v;
}

SparseVec Cohomology::evaluate(int n, const SparseVec& cochain, const SparseVec& elem) const {
    const GradedAlgebra& A = R_->algebra();
    const PSpace& P = R_->pspace(n);
    const QSpace& Q = Q_[n];
    SparseVec out;
    for (auto& [k, c] : elem.terms()) {
        int i = (int)P.levels.size() - 1;
        while (P.offsets[i] > k) --i;
        const KSpace& K = R_->kspace(P.levels[i]);
        int kk = k - P.offsets[i];
        int x = K.x_of(kk), u = K.u_of(kk), y = K.y_of(kk);
        for (int z = 0; z < 12; ++z) {
            Scalar cz = cochain.at(Q.flat(i, u, z));
            if (cz.is_zero()) continue;
            // x . z . y in A
            for (auto& [xz, cxz] : A.mult_basis(x, z).terms()) out.axpy(c * cz * cxz, A.mult_basis(xz, y));
        }
    }
    return out;
}

SparseVec Cohomology::differential(int n, const SparseVec& cochain) const {
    const QSpace& Qn1 = Q_[n + 1];
    const PSpace& P = R_->pspace(n + 1);
    SparseVec out;
    for (size_t g = 0; g < P.gens.size(); ++g) {
        const PSpace::Gen& gen = P.gens[g];
        const KSpace& K = R_->kspace(P.levels[gen.omega]);
        SparseVec dval = R_->apply_delta(
            n + 1,
            SparseVec::unit(P.offsets[gen.omega] + K.flat(0, gen.u, 0), Scalar(1, R_->algebra().field())));
        SparseVec v = evaluate(n, cochain, dval);
        for (auto& [z, c] : v.terms()) out.add_term(Qn1.flat(gen.omega, gen.u, z), c);
    }
    return out;
}

bool Cohomology::is_cocycle(int n, const SparseVec& cochain) const {
    return differential(n, cochain).empty();
}

SparseMatrix Cohomology::differential_slice(int n, int t) const {
    const QSpace& Q = Q_[n];
    const QSpace& Qn1 = Q_[n + 1];
    static const std::vector<int> empty;
    const auto& cols = Q.slices.count(t) ? Q.slices.at(t) : empty;
    const auto& rows = Qn1.slices.count(t) ? Qn1.slices.at(t) : empty;
    SparseMatrix M((int)rows.size(), (int)cols.size());
    for (size_t c = 0; c < cols.size(); ++c) {
        SparseVec img = differential(n, SparseVec::unit(cols[c], Scalar(1, R_->algebra().field())));
        for (auto& [k, v] : img.terms()) M.row[Qn1.slice_pos[k]].add_term((int)c, v);
    }
    return M;
}

const Cohomology::HBasis& Cohomology::basis(int n, int t) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(n, t);
    auto it = bases_.find(key);
    if (it != bases_.end()) return *it->second;
    if (n + 1 > R_->depth())
        throw std::runtime_error("cohomology degree " + std::to_string(n) + " needs depth >= " +
                                 std::to_string(n + 1));
    auto B = std::make_unique<HBasis>();
    B->n = n;
    B->t = t;
    const QSpace& Q = Q_[n];
    static const std::vector<int> empty;
    const auto& idx = Q.slices.count(t) ? Q.slices.at(t) : empty;
    std::vector<SparseVec> bnd;
    if (n >= 1 && Q_[n - 1].slices.count(t)) {
        for (int src : Q_[n - 1].slices.at(t)) {
            SparseVec img = differential(n - 1, SparseVec::unit(src, Scalar(1, R_->algebra().field())));
            SparseVec sl;
            for (auto& [k, v] : img.terms()) sl.add_term(Q.slice_pos[k], v);
            if (!sl.empty()) bnd.push_back(std::move(sl));
        }
    }
    B->boundaries = span(bnd, (int)idx.size());
    B->kernel = RrefSolver(differential_slice(n, t), false).kernel();
    std::vector<SparseVec> reduced;
    for (auto& kv : B->kernel.basis) {
        SparseVec r = B->boundaries.reduce(kv);
        if (!r.empty()) reduced.push_back(std::move(r));
    }
    Subspace H = span(reduced, (int)idx.size());
    B->reps = H.basis;
    B->rep_pivots = H.pivots;
    const HBasis& ref = *B;
    bases_[key] = std::move(B);
    return ref;
}

int Cohomology::dim(int n, int t) const {
    if (n < 0) return 0;
    if (n > max_cohomological_degree()) throw std::runtime_error("dimension beyond computed depth");
    if (!Q_[n].slices.count(t)) return 0;
    return (int)basis(n, t).reps.size();
}

CohClass Cohomology::reduce(int n, const SparseVec& cochain) const {
    if (cochain.empty()) return CohClass{n, 0, SparseVec()};
    const QSpace& Q = Q_[n];
    int t = Q.tdeg[cochain.terms().front().first];
    for (auto& [k, c] : cochain.terms())
        if (Q.tdeg[k] != t) throw std::runtime_error("reduce: cochain not internal-degree homogeneous");
    if (!differential(n, cochain).empty()) throw std::runtime_error("reduce: not a cocycle");
    const HBasis& B = basis(n, t);
    SparseVec sl;
    for (auto& [k, c] : cochain.terms()) sl.add_term(Q.slice_pos[k], c);
    SparseVec r = B.boundaries.reduce(sl);
    CohClass out{n, t, SparseVec()};
    for (size_t i = 0; i < B.reps.size(); ++i) {
        Scalar c = r.at(B.rep_pivots[i]);
        if (!c.is_zero()) {
            out.coords.add_term((int)i, c);
            r.axpy(-c, B.reps[i]);
        }
    }
    if (!r.empty()) throw std::runtime_error("reduce: residue outside the computed basis");
    return out;
}

SparseVec Cohomology::representative(const CohClass& c) const {
    if (c.is_zero()) return SparseVec();
    const HBasis& B = basis(c.n, c.t);
    const auto& idx = Q_[c.n].slices.at(c.t);
    SparseVec out;
    for (auto& [i, v] : c.coords.terms())
        for (auto& [p, w] : B.reps[i].terms()) out.add_term(idx[p], v * w);
    return out;
}

CohClass Cohomology::add(const CohClass& a, const CohClass& b) const {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.n != b.n || a.t != b.t) throw std::runtime_error("adding classes of different bidegree");
    CohClass r = a;
    r.coords += b.coords;
    return r;
}

CohClass Cohomology::scale(const CohClass& a, const Scalar& c) const {
    CohClass r = a;
    r.coords.scale(c);
    return r;
}

std::string Cohomology::lift_key(const CohClass& c, int depth) const {
    std::ostringstream os;
    os << c.n << "," << c.t << ":";
    for (auto& [i, v] : c.coords.terms()) os << i << "=" << v.str() << ";";
    return os.str();
}

const std::vector<BimoduleMap>& Cohomology::lifted(const CohClass& c, int depth) const {
    std::string key = lift_key(c, depth);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = lift_cache_.find(key);
        if (it != lift_cache_.end() && (int)it->second->size() > depth) return *it->second;
    }
    SparseVec rep = representative(c);
    const PSpace& P = R_->pspace(c.n);
    std::vector<SparseVec> gen_vals(P.gens.size());
    for (size_t g = 0; g < P.gens.size(); ++g)
        gen_vals[g] = gen_value(c.n, rep, P.gens[g].omega, P.gens[g].u);
    auto lifts = std::make_unique<std::vector<BimoduleMap>>(R_->lift_cocycle(c.n, gen_vals, depth));
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = lift_cache_[key];
    if (!slot || (int)slot->size() <= depth) slot = std::move(lifts);
    return *slot;
}

CohClass Cohomology::cup(const CohClass& a, const CohClass& b) const {
    if (a.is_zero() || b.is_zero()) return zero_class(a.n + b.n, a.t + b.t);
    // (a cup b) = Y_a composed with the depth-|a| lift of b
    const auto& lifts = lifted(b, a.n);
    const BimoduleMap& top = lifts[a.n];  // P_{a.n + b.n} -> P_{a.n}
    SparseVec rep = representative(a);
    const PSpace& P = R_->pspace(a.n + b.n);
    const QSpace& Q = Q_[a.n + b.n];
    SparseVec cochain;
    for (size_t g = 0; g < P.gens.size(); ++g) {
        const PSpace::Gen& gen = P.gens[g];
        SparseVec val = evaluate(a.n, rep, top.gen_values[g]);
        for (auto& [z, c] : val.terms()) cochain.add_term(Q.flat(gen.omega, gen.u, z), c);
    }
    if (cochain.empty()) return zero_class(a.n + b.n, a.t + b.t);
    CohClass r = reduce(a.n + b.n, cochain);
    if (r.is_zero()) r.t = a.t + b.t;
    return r;
}

void Cohomology::load_generators(const std::string& path) {
    json j = load_json(path);
    gens_.clear();
    for (auto& item : j.at("generators")) {
        Generator g;
        g.name = item.at("name").get<std::string>();
        g.n = item.at("n").get<int>();
        const QSpace& Q = Q_[g.n];
        for (auto& term : item.at("terms")) {
            long c = term.at(0).get<long>();
            int w = term.at(1).get<int>();
            std::string u = term.at(2).get<std::string>();
            std::string x = term.at(3).get<std::string>();
            int ui = dual_star_index(R_->dual(), g.n - 4 * w, u);
            g.cochain.add_term(Q.flat(w, ui, R_->algebra().index_of(x)),
                               Scalar(c, R_->algebra().field()));
        }
        if (!is_cocycle(g.n, g.cochain))
            throw std::runtime_error(g.name + " is not a cocycle of the assembled complex");
        g.t = Q.tdeg[g.cochain.terms().front().first];
        g.cls = reduce(g.n, g.cochain);
        if (g.cls.is_zero()) throw std::runtime_error(g.name + " reduces to the zero class");
        gens_.push_back(std::move(g));
    }
    if (gens_.size() != 14) throw std::runtime_error("expected 14 generators");
}

}  // namespace fk
