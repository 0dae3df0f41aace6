#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fk/cohomology.hpp"
#include "fk/dataio.hpp"

namespace fk {

struct BracketResult {
    int i = 0, j = 0;
    CohClass value;
    std::string method;  // trivial | hh0 | hh1 | descent | degree-vanishing | bar-oracle (+antisymmetry)
};

struct CheckReport {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct TableEntry {
    int i = 0, j = 0;
    CohClass value;
    CohClass expected;
    bool match = false;
    std::string method;
};

struct BVReport {
    bool feasible = true;  // must come out false
    std::vector<CheckReport> chain;
    std::string certificate;  // combination of constraints with no solution
    int unknowns = 0, equations = 0;
};

class Brackets {
  public:
    explicit Brackets(const Cohomology& C);

    const Cohomology& cohomology() const { return *C_; }

    // [phi, l_rho i_0] for rho in the center
    CohClass bracket_hh0(const CohClass& phi, const SparseVec& rho) const;
    // [X_k, phi] for the basis derivations k = 4..8
    CohClass bracket_hh1(int k, const CohClass& phi) const;
    // [G(rho) i_1, phi] for an arbitrary derivation
    CohClass bracket_hh1_general(const std::vector<SparseVec>& images, const CohClass& phi) const;
    // zero when the target bidegree vanishes, declines otherwise
    std::optional<CohClass> bracket_degree_vanishing(const CohClass& a, const CohClass& b) const;
    // descent: recover [y, z] from a_x x = a_y y with injective multiplication
    CohClass bracket_descent(const CohClass& x, const CohClass& y, const CohClass& ax,
                             const CohClass& ay, const CohClass& z,
                             const CohClass& bracket_x_z, const CohClass& bracket_ax_z,
                             const CohClass& bracket_ay_z) const;
    // chain-level bracket on the bar resolution, all degrees with m + n <= 4
    CohClass bracket_bar_oracle(const CohClass& a, const CohClass& b) const;
    // bar-level [phi, l_rho] through the insertion maps t_n, for central rho
    CohClass bracket_bar_oracle_t(const CohClass& phi, const SparseVec& rho) const;

    // routed bracket of generators, i and j in 1..14 (any order)
    BracketResult bracket(int i, int j) const;

    std::vector<TableEntry> table(const std::string& expected_path) const;

    std::vector<CheckReport> verify_printed_homotopies(const std::string& path) const;
    std::vector<CheckReport> verify_printed_liftings(const std::string& path) const;

    std::vector<CheckReport> oracle_agreement() const;
    std::vector<CheckReport> check_antisymmetry() const;
    std::vector<CheckReport> check_jacobi(int samples) const;
    std::vector<CheckReport> check_leibniz(int samples) const;

    BVReport bv_obstruction() const;

    // central element of a degree-0 generator, derivation images of a degree-1 one
    SparseVec central_element(int i) const;
    std::vector<SparseVec> derivation_images(int k) const;

    const std::vector<BimoduleMap>& homotopy_for(const SparseVec& rho, int max_n) const;
    const Resolution::Lifting& lifting_for(int k, int max_n) const;

  private:
    const Cohomology* C_;
    const Resolution* R_;
    mutable std::map<std::string, std::unique_ptr<std::vector<BimoduleMap>>> homotopies_;
    mutable std::map<int, std::unique_ptr<Resolution::Lifting>> liftings_;
    mutable std::mutex mu_;

    CohClass generator_class(int i) const { return C_->generator(i).cls; }
    int internal_degree_of_derivation(const std::vector<SparseVec>& images) const;
    CohClass reduce_or_zero(int n, int t, const SparseVec& cochain) const;
    // expand an expected-table polynomial
    CohClass expand_poly(const json& poly, int n, int t) const;
    friend class Engine;
};

}  // namespace fk
