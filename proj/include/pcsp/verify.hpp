#ifndef PCSP_VERIFY_HPP
#define PCSP_VERIFY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcsp/hom.hpp"
#include "pcsp/structure.hpp"

namespace pcsp {

enum class ClaimStatus { holds, fails, skipped };

struct ClaimReport {
    std::string claim;  // e.g. "lemma32.1"
    std::string params; // e.g. "n=2 p=3"
    ClaimStatus status = ClaimStatus::holds;
    std::string detail;                     // skip reason or counterexample rendering
    bool budget_limited = false;            // skipped for budget, not hypothesis
    std::vector<std::vector<int>> evidence; // claim-specific counterexample data
    std::int64_t cases_checked = 0;
    double seconds = 0.0;

    std::string machine_line() const; // "claim=<id> params=<...> status=<...>"
    std::string human_line() const;   // one-sentence plain-text rendering
};

// Enumerates all coefficient vectors in [p]^p and, for each cyclic table
// (sum a_i x_i mod p) mod n, checks: (1) coefficients congruent mod n,
// (2) the floor identity when n does not divide p, (3) symmetry,
// (4) coefficient sum != 1 mod p.
std::vector<ClaimReport> verify_lemma32(int n, int p, std::int64_t budget = 200'000'000);

// The four facts behind the ternary family at one prime: nullspace dimension
// and members, the trailing-zeros solution, the witness vector avoiding p-1,
// and (for p >= 7) the absence of constant tuples in R^B.
std::vector<ClaimReport> verify_thm2_claims(int p);

// g and h of the arity-n^p family are homomorphisms, checked by enumerating
// the p^(p-1) members of R^C.
std::vector<ClaimReport> verify_thm31(int n, int p, std::int64_t budget = 50'000'000);

// g maps the symmetric structure a into the maximal symmetric part of c.
ClaimReport verify_lemma41(const Structure& a, const Structure& c, const Homomorphism& g);

// Everything needed to re-check "no tractable sandwich below size p" from a
// file: the end structures, the prime, and the refutation route.
struct Certificate {
    int p = 0;
    std::string route;            // "witness" | "exhaustive"
    std::int64_t candidates = 0;  // exhaustive route: ruled-out table count
    Structure a, b;
    std::optional<ObstructionWitness> witness;
};

Certificate make_refutation_certificate(const Structure& a, const Structure& b, int p,
                                        const ObstructionWitness& w,
                                        std::int64_t budget = default_budget());
Certificate make_refutation_certificate(const Structure& a, const Structure& b, int p,
                                        const PolymorphismSearch& outcome);

// Serialized form (see io); convenience wrapper used by the certify command.
std::string refutation_certificate_text(const Certificate& cert);

// Re-runs the refutation route from the certificate contents alone.
bool recheck_certificate(const Certificate& cert, std::string* why = nullptr,
                         std::int64_t budget = default_budget());

std::string claim_status_name(ClaimStatus s);

} // namespace pcsp

#endif
