#ifndef PCSP_STRUCTURE_HPP
#define PCSP_STRUCTURE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcsp/error.hpp"

namespace pcsp {

using Tuple = std::vector<int>;

// base^exp with overflow detection; throws budget_error past 2^62.
std::int64_t ipow(std::int64_t base, int exp);

bool is_prime(int p);

// Lexicographic rank of x over alphabet [n], x[0] most significant.
std::int64_t point_index(const Tuple& x, int n);
Tuple point_of_index(std::int64_t index, int n, int p);

// Orbit count of the p-cycle rotation acting on [n]^p (Burnside).
std::int64_t rotation_orbit_count(int n, int p);

// A function [n]^p -> [m] stored as a flat value table in point_index order.
struct FunctionTable {
    int n = 0;
    int p = 0;
    int m = 0;
    std::vector<int> values; // length n^p

    int at(const Tuple& x) const { return values[point_index(x, n)]; }
    std::int64_t table_size() const { return static_cast<std::int64_t>(values.size()); }
};

void validate_table(const FunctionTable& f);

Tuple encode_function(const FunctionTable& f);
FunctionTable decode_function(const Tuple& t, int n, int p, int m);

// f(x) == f(rotate_left(x)) for every x.
bool is_cyclic(const FunctionTable& f);

enum class RelKind { extensional, intensional };

// Predicate-backed relation families used by the size-n example structures:
//   thm1_a: encodings of the p projection maps [n]^p -> [n]
//   thm1_b: encodings of the non-cyclic maps [n]^p -> [n]
//   thm1_c: encodings of linear maps [n]^p -> [p] with coefficient sum 1 mod p
enum class IntensionalTag { thm1_a, thm1_b, thm1_c };

struct Relation {
    int arity = 0;
    RelKind kind = RelKind::extensional;
    std::vector<Tuple> tuples;  // extensional data, or cached materialization
    bool materialized = false;  // cache filled (intensional only)
    IntensionalTag tag = IntensionalTag::thm1_a;
    int tag_n = 0;
    int tag_p = 0;

    bool contains(const Tuple& t) const;
    // Exact member count when representable; nullopt when it overflows.
    std::optional<std::int64_t> size() const;
};

Relation extensional_relation(int arity, std::vector<Tuple> tuples);
Relation intensional_relation(IntensionalTag tag, int n, int p);

bool thm1a_contains(const Tuple& t, int n, int p);
bool thm1b_contains(const Tuple& t, int n, int p);
bool thm1c_contains(const Tuple& t, int n, int p);

// Enumerate an intensional relation's members (sorted); throws budget_error
// when the member count exceeds max_tuples.
std::vector<Tuple> enumerate_intensional(const Relation& r, std::int64_t max_tuples);
void materialize_relation(Relation& r, std::int64_t max_tuples);

struct RelSymbol {
    std::string name;
    int arity = 0;
};

struct Structure {
    std::string name = "S";
    int domain_size = 0;
    std::vector<RelSymbol> signature;
    std::vector<Relation> relations; // aligned with signature

    const Relation* find_relation(const std::string& symbol) const;
    int relation_index(const std::string& symbol) const; // -1 if absent
};

// Checks all declared invariants; throws parse_error on violation.
void validate_structure(const Structure& s);

bool same_signature(const Structure& a, const Structure& b);

// Copy of s with every relation extensional; throws budget_error when a
// relation's member count exceeds max_tuples.
Structure materialized_structure(const Structure& s, std::int64_t max_tuples);

// m-th power under point_index encoding of the domain; all relations must be
// extensional and both |A|^m and |R|^m must stay within budget.
Structure power_structure(const Structure& a, int m, std::int64_t budget = 1'000'000);

// { t in R : every coordinate permutation of t is in R }; arity guard kk <= 8.
std::vector<Tuple> max_symmetric_subset(const std::vector<Tuple>& tuples, int arity);
Relation max_symmetric_subset(const Relation& r);

} // namespace pcsp

#endif
