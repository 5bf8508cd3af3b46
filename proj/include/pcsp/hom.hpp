#ifndef PCSP_HOM_HPP
#define PCSP_HOM_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcsp/structure.hpp"

namespace pcsp {

// Default node/tuple budget for the exponential searches; PCSP_BUDGET
// overrides it.
std::int64_t default_budget();

struct Homomorphism {
    std::string name = "f";
    int source_size = 0;
    int target_size = 0;
    std::vector<int> map; // image of each source element

    int at(int x) const { return map[static_cast<size_t>(x)]; }
};

void validate_homomorphism(const Homomorphism& h);

struct CspConstraint {
    std::string symbol;
    std::vector<int> scope;
};

struct CspInstance {
    std::string name = "I";
    int variable_count = 0;
    std::vector<CspConstraint> constraints;
};

void validate_instance(const CspInstance& inst);

// One variable per element, one constraint per relation tuple.
CspInstance instance_of_structure(const Structure& s);

// Lexicographically least homomorphism (variables in index order, values
// ascending), found by backtracking with arc-consistency propagation over
// extensional relations. Constraints over intensional relations are checked
// once their scope is fully assigned.
std::optional<Homomorphism> find_homomorphism(const CspInstance& inst, const Structure& target,
                                              std::int64_t budget = default_budget());
std::optional<Homomorphism> find_homomorphism(const Structure& source, const Structure& target,
                                              std::int64_t budget = default_budget());

bool is_homomorphism(const Homomorphism& f, const CspInstance& inst, const Structure& target);
bool is_homomorphism(const Homomorphism& f, const Structure& source, const Structure& target);

enum class Outcome { found, refuted_exhaustively, unknown };

struct SearchStats {
    std::int64_t nodes = 0;      // search nodes / checks spent
    std::int64_t candidates = 0; // size of the candidate space (when known)
    std::string note;
};

struct PolymorphismSearch {
    Outcome outcome = Outcome::unknown;
    std::optional<FunctionTable> table;
    SearchStats stats;
};

// Searches p-ary functions [|A|]^p -> [|B|] constant on rotation orbits that
// map every p-selection of R^A tuples componentwise into R^B. Requires p
// prime unless allow_nonprime.
PolymorphismSearch find_cyclic_polymorphism(const Structure& a, const Structure& b, int p,
                                            std::int64_t budget = default_budget(),
                                            bool allow_nonprime = false);

// Ternary polymorphism of a with the majority identities pre-assigned.
PolymorphismSearch find_majority_polymorphism(const Structure& a,
                                              std::int64_t budget = default_budget());

enum class WitnessMode { constant_forcing, exhaustive_cyclic };

// p tuples of R^A arranged as a kk x p matrix (the tuples are the columns).
// In constant_forcing mode row j+1 is the left rotation of row j, so any
// cyclic p-ary polymorphism maps the columns to a constant tuple.
struct ObstructionWitness {
    int p = 0;
    WitnessMode mode = WitnessMode::constant_forcing;
    std::vector<Tuple> columns; // p tuples of the relation arity

    int arity() const;
    std::vector<Tuple> rows() const;
};

ObstructionWitness witness_from_rows(int p, WitnessMode mode, const std::vector<Tuple>& rows);

struct WitnessCheck {
    bool valid = false;
    std::string reason; // empty when valid
};

// Valid implies no cyclic p-ary polymorphism from a to b exists.
WitnessCheck verify_obstruction_witness(const Structure& a, const Structure& b,
                                        const ObstructionWitness& w,
                                        std::int64_t budget = default_budget());

// f(x_1,...,x_p) = s(t(r(x_1),...,r(x_p))); cyclic whenever t is.
FunctionTable compose_cyclic(const Homomorphism& r, const FunctionTable& t, const Homomorphism& s,
                             std::int64_t budget = default_budget());

struct SandwichCheck {
    enum class Side { none, left, right };
    bool ok = false;
    Side failed = Side::none;
    std::optional<Homomorphism> left;  // a -> c
    std::optional<Homomorphism> right; // c -> b
};

SandwichCheck check_sandwich(const Structure& a, const Structure& c, const Structure& b,
                             std::int64_t budget = default_budget());

struct CoreResult {
    Outcome outcome = Outcome::unknown; // found = computed, unknown = budget
    Structure core;
    std::vector<int> vertices; // lexicographically least subset carrying the core
    SearchStats stats;
};

// Minimal retract, relabeled onto [k] order-preservingly.
CoreResult core_of(const Structure& a, std::int64_t budget = default_budget());

// Exhaustive isomorphism test for small structures (|A| <= 8).
bool is_isomorphic(const Structure& a, const Structure& b);

} // namespace pcsp

#endif
