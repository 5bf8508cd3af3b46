#ifndef PCSP_CONSTRUCTIONS_HPP
#define PCSP_CONSTRUCTIONS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "pcsp/affine.hpp"
#include "pcsp/hom.hpp"
#include "pcsp/structure.hpp"

namespace pcsp {

// The arity-n^p family: A holds the projection tables, B the non-cyclic
// tables, C the linear tables over [p] with coefficient sum 1 mod p, with
// sandwich maps g: x -> x mod p and h: x -> x mod n.
struct Thm1Bundle {
    int n = 0;
    int p = 0;
    Structure A, B, C;
    Homomorphism g, h;
};

Thm1Bundle build_thm1(int n, int p, std::int64_t materialize_threshold = 1'000'000);
std::pair<Homomorphism, Homomorphism> thm1_maps(int n, int p);

// The ternary family over [p-1]: C is x - 2y + z = 1 over [p], A its
// restriction to [p-1], B the h-image for h collapsing p-1 to 1. u and U
// carry the constant-forcing witness.
struct Thm2Bundle {
    int p = 0;
    Structure A, B, C;
    Homomorphism h;
    std::vector<int> u;
    ObstructionWitness U;
};

Thm2Bundle build_thm2(int p, bool allow_small = false);

// Solves the circulant system with the last two coordinates zero, then adds
// the least multiple of the all-ones vector avoiding the value p-1.
std::pair<std::vector<int>, ObstructionWitness> build_thm2_witness(int p, bool allow_small = false);

// The circulant coefficient matrix (1, -2, 1 band) and all-ones right side.
ModMatrix thm2_matrix(int p);
std::vector<int> thm2_rhs(int p);

} // namespace pcsp

#endif
