#include "pcsp/verify.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "pcsp/affine.hpp"
#include "pcsp/constructions.hpp"
#include "pcsp/io.hpp"

namespace pcsp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string render_vector(const std::vector<int>& v) {
    std::ostringstream os;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ' ';
        os << v[i];
    }
    return os.str();
}

} // namespace

std::string claim_status_name(ClaimStatus s) {
    switch (s) {
        case ClaimStatus::holds: return "holds";
        case ClaimStatus::fails: return "fails";
        case ClaimStatus::skipped: return "skipped";
    }
    return "?";
}

std::string ClaimReport::machine_line() const {
    std::ostringstream os;
    os << "claim=" << claim << " params=" << params << " status=" << claim_status_name(status);
    if (cases_checked > 0) os << " cases=" << cases_checked;
    if (!detail.empty()) os << " detail=\"" << detail << "\"";
    return os.str();
}

std::string ClaimReport::human_line() const {
    std::ostringstream os;
    os << claim << " (" << params << "): ";
    switch (status) {
        case ClaimStatus::holds:
            os << "holds";
            if (cases_checked > 0) os << " over " << cases_checked << " cases";
            break;
        case ClaimStatus::fails:
            os << "fails";
            if (!detail.empty()) os << " with counterexample " << detail;
            break;
        case ClaimStatus::skipped:
            os << "skipped";
            if (!detail.empty()) os << " (" << detail << ")";
            break;
    }
    return os.str();
}

std::vector<ClaimReport> verify_lemma32(int n, int p, std::int64_t budget) {
    if (n < 2 || p < 2) throw precondition_error("verify_lemma32: n and p must be >= 2");
    const std::string params = "n=" + std::to_string(n) + " p=" + std::to_string(p);
    auto start = Clock::now();

    std::vector<ClaimReport> reports(4);
    for (int i = 0; i < 4; ++i) {
        reports[static_cast<size_t>(i)].claim = "lemma32." + std::to_string(i + 1);
        reports[static_cast<size_t>(i)].params = params;
    }

    std::int64_t work = 0;
    bool over = false;
    try {
        work = ipow(p, p) * ipow(n, p);
    } catch (const budget_error&) {
        over = true;
    }
    if (over || work > budget) {
        for (auto& r : reports) {
            r.status = ClaimStatus::skipped;
            r.budget_limited = true;
            r.detail = "enumeration exceeds budget";
        }
        return reports;
    }

    const bool divides = (p % n == 0);
    if (divides) {
        reports[1].status = ClaimStatus::skipped;
        reports[1].detail = "hypothesis not met: n divides p";
    }

    const std::int64_t points = ipow(n, p);
    const std::int64_t vectors = ipow(p, p);

    // independent cyclicity route: rotation as an index permutation
    std::vector<std::int64_t> rot(static_cast<size_t>(points));
    {
        const std::int64_t high = points / n;
        for (std::int64_t idx = 0; idx < points; ++idx)
            rot[static_cast<size_t>(idx)] = (idx % high) * n + idx / high;
    }
    std::vector<std::int64_t> sorted_idx(static_cast<size_t>(points));
    for (std::int64_t idx = 0; idx < points; ++idx) {
        Tuple x = point_of_index(idx, n, p);
        std::sort(x.begin(), x.end());
        sorted_idx[static_cast<size_t>(idx)] = point_index(x, n);
    }
    std::vector<int> weight(static_cast<size_t>(points));
    for (std::int64_t idx = 0; idx < points; ++idx) {
        Tuple x = point_of_index(idx, n, p);
        int w = 0;
        for (int v : x) w += v;
        weight[static_cast<size_t>(idx)] = w;
    }

    std::vector<int> coeff(static_cast<size_t>(p), 0);
    std::vector<int> table(static_cast<size_t>(points));
    std::vector<std::int64_t> dot(static_cast<size_t>(points));
    std::int64_t cyclic_count = 0;

    for (std::int64_t k = 0; k < vectors; ++k) {
        // integer dot products over the point odometer
        std::int64_t csum = 0;
        for (int a : coeff) csum += a;
        {
            Tuple x(static_cast<size_t>(p), 0);
            std::int64_t s = 0;
            for (std::int64_t idx = 0; idx < points; ++idx) {
                dot[static_cast<size_t>(idx)] = s;
                table[static_cast<size_t>(idx)] = static_cast<int>((s % p) % n);
                for (int j = p - 1; j >= 0; --j) {
                    auto uj = static_cast<size_t>(j);
                    if (++x[uj] < n) {
                        s += coeff[uj];
                        break;
                    }
                    x[uj] = 0;
                    s -= static_cast<std::int64_t>(coeff[uj]) * (n - 1);
                }
            }
        }

        bool cyclic = true;
        for (std::int64_t idx = 0; idx < points && cyclic; ++idx)
            if (table[static_cast<size_t>(idx)] != table[static_cast<size_t>(rot[static_cast<size_t>(idx)])])
                cyclic = false;

        if (cyclic) {
            ++cyclic_count;
            // (1) coefficients congruent mod n
            if (reports[0].status == ClaimStatus::holds) {
                for (int i = 1; i < p; ++i)
                    if ((coeff[static_cast<size_t>(i)] - coeff[0]) % n != 0) {
                        reports[0].status = ClaimStatus::fails;
                        reports[0].evidence = {coeff};
                        reports[0].detail = "a=(" + render_vector(coeff) + ")";
                        break;
                    }
            }
            // (2) floor identity when n does not divide p
            if (!divides && reports[1].status == ClaimStatus::holds) {
                for (std::int64_t idx = 0; idx < points; ++idx) {
                    std::int64_t lhs = dot[static_cast<size_t>(idx)] / p;
                    std::int64_t rhs = csum * weight[static_cast<size_t>(idx)] /
                                       (static_cast<std::int64_t>(p) * p);
                    if (lhs != rhs) {
                        Tuple x = point_of_index(idx, n, p);
                        reports[1].status = ClaimStatus::fails;
                        reports[1].evidence = {coeff, x};
                        reports[1].detail =
                            "a=(" + render_vector(coeff) + ") x=(" + render_vector(x) + ")";
                        break;
                    }
                }
            }
            // (3) symmetry: value determined by the sorted point
            if (reports[2].status == ClaimStatus::holds) {
                for (std::int64_t idx = 0; idx < points; ++idx)
                    if (table[static_cast<size_t>(idx)] !=
                        table[static_cast<size_t>(sorted_idx[static_cast<size_t>(idx)])]) {
                        Tuple x = point_of_index(idx, n, p);
                        reports[2].status = ClaimStatus::fails;
                        reports[2].evidence = {coeff, x};
                        reports[2].detail =
                            "a=(" + render_vector(coeff) + ") x=(" + render_vector(x) + ")";
                        break;
                    }
            }
            // (4) coefficient sum is never 1 mod p
            if (reports[3].status == ClaimStatus::holds && csum % p == 1) {
                reports[3].status = ClaimStatus::fails;
                reports[3].evidence = {coeff};
                reports[3].detail = "a=(" + render_vector(coeff) + ")";
            }
        }

        for (int j = p - 1; j >= 0; --j) {
            if (++coeff[static_cast<size_t>(j)] < p) break;
            coeff[static_cast<size_t>(j)] = 0;
        }
    }

    const double elapsed = seconds_since(start);
    for (auto& r : reports) {
        if (r.status != ClaimStatus::skipped) r.cases_checked = cyclic_count;
        r.seconds = elapsed;
    }
    return reports;
}

std::vector<ClaimReport> verify_thm2_claims(int p) {
    if (!is_prime(p) || p < 3) throw precondition_error("verify_thm2_claims: p must be a prime >= 3");
    const std::string params = "p=" + std::to_string(p);
    auto start = Clock::now();
    std::vector<ClaimReport> reports(4);
    reports[0].claim = "thm2.nullspace";
    reports[1].claim = "thm2.solution";
    reports[2].claim = "thm2.witness-columns";
    reports[3].claim = "thm2.no-constant";
    for (auto& r : reports) r.params = params;

    const ModMatrix m = thm2_matrix(p);
    const std::vector<int> rhs = thm2_rhs(p);
    GaussSolution sol = gauss_solve(m, rhs);

    // nullspace has dimension 2 and contains (0,1,...,p-1) and all-ones
    {
        auto& r = reports[0];
        std::vector<int> ramp(static_cast<size_t>(p));
        for (int i = 0; i < p; ++i) ramp[static_cast<size_t>(i)] = i;
        std::vector<int> ones(static_cast<size_t>(p), 1);
        bool ok = sol.nullspace.size() == 2 && in_span(sol.nullspace, ramp, p) &&
                  in_span(sol.nullspace, ones, p);
        r.status = ok ? ClaimStatus::holds : ClaimStatus::fails;
        if (!ok) r.detail = "dimension=" + std::to_string(sol.nullspace.size());
        r.cases_checked = static_cast<std::int64_t>(sol.nullspace.size());
    }

    // a solution with the last two coordinates zero
    {
        auto& r = reports[1];
        bool ok = sol.solvable && sol.particular[static_cast<size_t>(p - 2)] == 0 &&
                  sol.particular[static_cast<size_t>(p - 1)] == 0 &&
                  mat_vec(m, sol.particular) == rhs;
        r.status = ok ? ClaimStatus::holds : ClaimStatus::fails;
        if (ok) {
            r.evidence = {sol.particular};
            r.detail = "x=(" + render_vector(sol.particular) + ")";
        }
        r.cases_checked = 1;
    }

    Thm2Bundle bundle = build_thm2(p, /*allow_small=*/true);

    // witness vector avoids p-1 and all its columns lie in R^A
    {
        auto& r = reports[2];
        bool ok = std::all_of(bundle.u.begin(), bundle.u.end(),
                              [p](int v) { return v >= 0 && v < p - 1; });
        const Relation& ra = bundle.A.relations.front();
        for (const auto& col : bundle.U.columns)
            if (!ra.contains(col)) ok = false;
        r.status = ok ? ClaimStatus::holds : ClaimStatus::fails;
        r.evidence = {bundle.u};
        r.detail = "u=(" + render_vector(bundle.u) + ")";
        r.cases_checked = static_cast<std::int64_t>(bundle.U.columns.size());
    }

    // R^B has no constant tuple for p >= 7; for p in {3,5} it does
    {
        auto& r = reports[3];
        const Relation& rb = bundle.B.relations.front();
        const Relation& rc = bundle.C.relations.front();
        int constant = -1;
        for (int c = 0; c < p - 1 && constant < 0; ++c)
            if (rb.contains({c, c, c})) constant = c;
        if (constant < 0) {
            r.status = ClaimStatus::holds;
        } else {
            r.status = ClaimStatus::fails;
            // evidence: the constant plus the lexicographically least preimage
            Tuple preimage;
            auto himg = [p](int x) { return x == p - 1 ? 1 : x; };
            for (const auto& t : rc.tuples) {
                if (himg(t[0]) == constant && himg(t[1]) == constant && himg(t[2]) == constant) {
                    preimage = t;
                    break;
                }
            }
            r.evidence = {{constant, constant, constant}, preimage};
            r.detail = "constant=" + std::to_string(constant) + " preimage=(" +
                       render_vector(preimage) + ")";
        }
        r.cases_checked = p - 1;
    }

    const double elapsed = seconds_since(start);
    for (auto& r : reports) r.seconds = elapsed;
    return reports;
}

std::vector<ClaimReport> verify_thm31(int n, int p, std::int64_t budget) {
    if (n < 2 || p < 2) throw precondition_error("verify_thm31: n and p must be >= 2");
    const std::string params = "n=" + std::to_string(n) + " p=" + std::to_string(p);
    auto start = Clock::now();
    std::vector<ClaimReport> reports(2);
    reports[0].claim = "thm31.g-homomorphism";
    reports[1].claim = "thm31.h-homomorphism";
    for (auto& r : reports) r.params = params;

    std::int64_t work = 0;
    bool over = false;
    try {
        work = ipow(p, p - 1) * ipow(n, p);
    } catch (const budget_error&) {
        over = true;
    }
    if (over || work > budget) {
        for (auto& r : reports) {
            r.status = ClaimStatus::skipped;
            r.budget_limited = true;
            r.detail = "enumeration exceeds budget";
        }
        return reports;
    }

    const std::int64_t points = ipow(n, p);
    Thm1Bundle bundle = build_thm1(n, p, /*materialize_threshold=*/0);

    // g sends each projection table into R^C
    {
        auto& r = reports[0];
        const Relation& rc = bundle.C.relations.front();
        r.status = ClaimStatus::holds;
        for (const auto& t : bundle.A.relations.front().tuples) {
            Tuple img(t.size());
            for (size_t i = 0; i < t.size(); ++i) img[i] = bundle.g.at(t[i]);
            if (!rc.contains(img)) {
                r.status = ClaimStatus::fails;
                r.evidence = {t};
                r.detail = "projection image outside R^C";
                break;
            }
        }
        r.cases_checked = static_cast<std::int64_t>(bundle.A.relations.front().tuples.size());
    }

    // h sends each member of R^C to a non-cyclic table
    {
        auto& r = reports[1];
        r.status = ClaimStatus::holds;
        std::vector<std::int64_t> rot(static_cast<size_t>(points));
        const std::int64_t high = points / n;
        for (std::int64_t idx = 0; idx < points; ++idx)
            rot[static_cast<size_t>(idx)] = (idx % high) * n + idx / high;

        std::vector<int> coeff(static_cast<size_t>(p), 0);
        std::vector<int> table(static_cast<size_t>(points));
        std::int64_t checked = 0;
        const std::int64_t combos = ipow(p, p);
        for (std::int64_t k = 0; k < combos && r.status == ClaimStatus::holds; ++k) {
            std::int64_t csum = 0;
            for (int a : coeff) csum += a;
            if (csum % p == 1) {
                ++checked;
                Tuple x(static_cast<size_t>(p), 0);
                std::int64_t s = 0;
                for (std::int64_t idx = 0; idx < points; ++idx) {
                    table[static_cast<size_t>(idx)] = static_cast<int>((s % p) % n);
                    for (int j = p - 1; j >= 0; --j) {
                        auto uj = static_cast<size_t>(j);
                        if (++x[uj] < n) {
                            s += coeff[uj];
                            break;
                        }
                        x[uj] = 0;
                        s -= static_cast<std::int64_t>(coeff[uj]) * (n - 1);
                    }
                }
                bool cyclic = true;
                for (std::int64_t idx = 0; idx < points && cyclic; ++idx)
                    if (table[static_cast<size_t>(idx)] !=
                        table[static_cast<size_t>(rot[static_cast<size_t>(idx)])])
                        cyclic = false;
                if (cyclic) {
                    r.status = ClaimStatus::fails;
                    r.evidence = {coeff};
                    r.detail = "h-image cyclic for a=(" + render_vector(coeff) + ")";
                }
            }
            for (int j = p - 1; j >= 0; --j) {
                if (++coeff[static_cast<size_t>(j)] < p) break;
                coeff[static_cast<size_t>(j)] = 0;
            }
        }
        r.cases_checked = checked;
    }

    const double elapsed = seconds_since(start);
    for (auto& r : reports) r.seconds = elapsed;
    return reports;
}

ClaimReport verify_lemma41(const Structure& a, const Structure& c, const Homomorphism& g) {
    ClaimReport report;
    report.claim = "lemma41";
    report.params = "a=" + a.name + " c=" + c.name;
    auto start = Clock::now();

    if (!same_signature(a, c)) {
        report.status = ClaimStatus::skipped;
        report.detail = "precondition failed: signature mismatch";
        return report;
    }
    Structure am = materialized_structure(a, default_budget());
    Structure cm = materialized_structure(c, default_budget());

    for (size_t i = 0; i < am.relations.size(); ++i) {
        const auto& rel = am.relations[i];
        auto sym = max_symmetric_subset(rel.tuples, rel.arity);
        if (sym != rel.tuples) {
            report.status = ClaimStatus::skipped;
            report.detail = "precondition failed: A is not symmetric (" +
                            am.signature[i].name + ")";
            return report;
        }
    }
    if (g.source_size != a.domain_size || g.target_size != c.domain_size ||
        !is_homomorphism(g, am, cm)) {
        report.status = ClaimStatus::skipped;
        report.detail = "precondition failed: g is not a homomorphism A -> C";
        return report;
    }

    report.status = ClaimStatus::holds;
    for (size_t i = 0; i < am.relations.size(); ++i) {
        const auto& rel = am.relations[i];
        auto sym_part = max_symmetric_subset(cm.relations[i].tuples, cm.relations[i].arity);
        for (const auto& t : rel.tuples) {
            Tuple img(t.size());
            for (size_t j = 0; j < t.size(); ++j) img[j] = g.at(t[j]);
            ++report.cases_checked;
            if (!std::binary_search(sym_part.begin(), sym_part.end(), img)) {
                report.status = ClaimStatus::fails;
                report.evidence = {t, img};
                report.detail = "image tuple outside the symmetric part of " +
                                am.signature[i].name;
                report.seconds = seconds_since(start);
                return report;
            }
        }
    }
    report.seconds = seconds_since(start);
    return report;
}

Certificate make_refutation_certificate(const Structure& a, const Structure& b, int p,
                                        const ObstructionWitness& w, std::int64_t budget) {
    if (!is_prime(p)) throw precondition_error("certificate: p must be prime");
    if (w.p != p) throw precondition_error("certificate: witness arity does not match p");
    WitnessCheck check = verify_obstruction_witness(a, b, w, budget);
    if (!check.valid)
        throw precondition_error("certificate: witness invalid: " + check.reason);
    Certificate cert;
    cert.p = p;
    cert.route = "witness";
    cert.a = a;
    cert.b = b;
    cert.witness = w;
    return cert;
}

Certificate make_refutation_certificate(const Structure& a, const Structure& b, int p,
                                        const PolymorphismSearch& outcome) {
    if (!is_prime(p)) throw precondition_error("certificate: p must be prime");
    if (outcome.outcome == Outcome::unknown)
        throw precondition_error("no certificate from Unknown");
    if (outcome.outcome == Outcome::found)
        throw precondition_error("no certificate: a cyclic polymorphism exists");
    Certificate cert;
    cert.p = p;
    cert.route = "exhaustive";
    cert.candidates = outcome.stats.candidates;
    cert.a = a;
    cert.b = b;
    return cert;
}

std::string refutation_certificate_text(const Certificate& cert) {
    return serialize_certificate(cert);
}

bool recheck_certificate(const Certificate& cert, std::string* why, std::int64_t budget) {
    auto fail = [&](const std::string& reason) {
        if (why) *why = reason;
        return false;
    };
    if (!is_prime(cert.p)) return fail("p is not prime");
    if (!same_signature(cert.a, cert.b)) return fail("signature mismatch");
    if (cert.route == "witness") {
        if (!cert.witness) return fail("witness route without witness");
        WitnessCheck check = verify_obstruction_witness(cert.a, cert.b, *cert.witness, budget);
        if (!check.valid) return fail("witness invalid: " + check.reason);
        return true;
    }
    if (cert.route == "exhaustive") {
        PolymorphismSearch search = find_cyclic_polymorphism(cert.a, cert.b, cert.p, budget);
        if (search.outcome != Outcome::refuted_exhaustively)
            return fail("exhaustive refutation did not reproduce");
        if (cert.candidates != search.stats.candidates)
            return fail("candidate count mismatch");
        return true;
    }
    return fail("unknown route " + cert.route);
}

} // namespace pcsp
