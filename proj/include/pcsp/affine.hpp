#ifndef PCSP_AFFINE_HPP
#define PCSP_AFFINE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pcsp/hom.hpp"
#include "pcsp/structure.hpp"

namespace pcsp {

// Dense matrix over Z_p, entries reduced to [p).
struct ModMatrix {
    int p = 0;
    int rows = 0;
    int cols = 0;
    std::vector<int> a; // row-major

    int& at(int r, int c) { return a[static_cast<size_t>(r) * static_cast<size_t>(cols) + static_cast<size_t>(c)]; }
    int at(int r, int c) const { return a[static_cast<size_t>(r) * static_cast<size_t>(cols) + static_cast<size_t>(c)]; }
    static ModMatrix zero(int p, int rows, int cols);

    bool operator==(const ModMatrix&) const = default;
};

void validate_matrix(const ModMatrix& m);

std::vector<int> mat_vec(const ModMatrix& m, const std::vector<int>& x);

struct GaussSolution {
    bool solvable = false;
    std::vector<int> particular;             // free variables set to 0
    std::vector<std::vector<int>> nullspace; // canonical reduced basis, free columns ascending
    std::vector<int> pivot_cols;
};

// Reduced row echelon form solve of M x = b over Z_p.
GaussSolution gauss_solve(const ModMatrix& m, const std::vector<int>& b);

// Is v in the span of the (gauss_solve-produced) nullspace basis?
bool in_span(const std::vector<std::vector<int>>& basis, const std::vector<int>& v, int p);

// A coset of a subgroup of Z_p^arity, kept in generator and equation form.
struct AffineRelation {
    int p = 0;
    int arity = 0;
    std::vector<int> particular;
    std::vector<std::vector<int>> basis; // reduced echelon rows
    ModMatrix eqs;                       // annihilator rows
    std::vector<int> rhs;

    bool contains(const std::vector<int>& t) const;
    std::int64_t coset_size() const; // p^dim
    std::vector<Tuple> enumerate(std::int64_t cap) const;
};

// Canonical reduced echelon basis of the row span.
std::vector<std::vector<int>> echelon_basis(std::vector<std::vector<int>> rows, int p);

// Smallest coset containing the tuples: first tuple + span of differences.
AffineRelation affine_closure(const std::vector<Tuple>& tuples, int p);

// Equation form of the generator form (annihilator matrix and right side).
std::pair<ModMatrix, std::vector<int>> relation_to_equations(const AffineRelation& r);

struct AffineStructure {
    std::string name = "C";
    int p = 0;
    std::vector<RelSymbol> signature;
    std::vector<AffineRelation> relations;

    int relation_index(const std::string& symbol) const;
};

// Interprets a finite structure over [p] as an affine structure; throws
// precondition_error when some relation is not a coset.
AffineStructure affine_structure_of(const Structure& s, std::int64_t budget = default_budget());

struct AffineSolve {
    bool sat = false;
    std::vector<int> assignment;
};

// Stacks every constraint's equation form into one system and solves it.
AffineSolve solve_affine_csp(const AffineStructure& c, const CspInstance& inst);

enum class PcspAnswer { yes, no };

// Decides PCSP(A,B) through the sandwiched affine structure; requires the
// sandwich A -> C -> B to have been verified by the caller.
PcspAnswer pcsp_decide_via_sandwich(const Structure& a, const Structure& b,
                                    const AffineStructure& c, const CspInstance& inst,
                                    bool sandwich_verified);

} // namespace pcsp

#endif
