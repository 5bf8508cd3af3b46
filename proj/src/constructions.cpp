#include "pcsp/constructions.hpp"

#include <algorithm>
#include <set>

namespace pcsp {

std::pair<Homomorphism, Homomorphism> thm1_maps(int n, int p) {
    if (n < 2 || p < 2) throw precondition_error("thm1_maps: n and p must be >= 2");
    Homomorphism g, h;
    g.name = "g";
    g.source_size = n;
    g.target_size = p;
    for (int x = 0; x < n; ++x) g.map.push_back(x % p);
    h.name = "h";
    h.source_size = p;
    h.target_size = n;
    for (int x = 0; x < p; ++x) h.map.push_back(x % n);
    return {g, h};
}

Thm1Bundle build_thm1(int n, int p, std::int64_t materialize_threshold) {
    if (n < 2 || p < 2) throw precondition_error("build_thm1: n and p must be >= 2");
    Thm1Bundle bundle;
    bundle.n = n;
    bundle.p = p;

    Relation ra = intensional_relation(IntensionalTag::thm1_a, n, p);
    const int arity = ra.arity;

    bundle.A.name = "A";
    bundle.A.domain_size = n;
    bundle.A.signature = {{"R", arity}};
    bundle.A.relations = {extensional_relation(arity, enumerate_intensional(ra, p))};

    bundle.B.name = "B";
    bundle.B.domain_size = n;
    bundle.B.signature = {{"R", arity}};
    Relation rb = intensional_relation(IntensionalTag::thm1_b, n, p);
    if (auto count = rb.size(); count && *count >= 0) {
        bool fits = false;
        try {
            fits = ipow(n, ipow(n, p)) <= materialize_threshold;
        } catch (const budget_error&) {
            fits = false;
        }
        if (fits) materialize_relation(rb, materialize_threshold);
    }
    bundle.B.relations = {std::move(rb)};

    bundle.C.name = "C";
    bundle.C.domain_size = p;
    bundle.C.signature = {{"R", arity}};
    Relation rc = intensional_relation(IntensionalTag::thm1_c, n, p);
    bool c_fits = false;
    try {
        c_fits = ipow(p, p - 1) <= materialize_threshold;
    } catch (const budget_error&) {
        c_fits = false;
    }
    if (c_fits) materialize_relation(rc, materialize_threshold);
    bundle.C.relations = {std::move(rc)};

    auto [g, h] = thm1_maps(n, p);
    bundle.g = std::move(g);
    bundle.h = std::move(h);

    validate_structure(bundle.A);
    validate_structure(bundle.B);
    validate_structure(bundle.C);
    return bundle;
}

ModMatrix thm2_matrix(int p) {
    if (!is_prime(p)) throw precondition_error("thm2_matrix: p must be prime");
    ModMatrix m = ModMatrix::zero(p, p, p);
    for (int i = 0; i < p; ++i) {
        m.at(i, i) = 1;
        m.at(i, (i + 1) % p) = p - 2;
        m.at(i, (i + 2) % p) = 1;
    }
    return m;
}

std::vector<int> thm2_rhs(int p) { return std::vector<int>(static_cast<size_t>(p), 1); }

std::pair<std::vector<int>, ObstructionWitness> build_thm2_witness(int p, bool allow_small) {
    if (!is_prime(p)) throw precondition_error("build_thm2_witness: p must be prime");
    if (p < 7 && !allow_small)
        throw precondition_error("build_thm2_witness: p must be >= 7 (or pass allow_small)");
    if (p < 3) throw precondition_error("build_thm2_witness: p must be >= 3");

    GaussSolution sol = gauss_solve(thm2_matrix(p), thm2_rhs(p));
    if (!sol.solvable || sol.particular[static_cast<size_t>(p - 2)] != 0 ||
        sol.particular[static_cast<size_t>(p - 1)] != 0)
        throw precondition_error("build_thm2_witness: no canonical solution with trailing zeros");

    std::vector<int> u;
    bool found = false;
    for (int c = 0; c < p && !found; ++c) {
        std::vector<int> shifted;
        shifted.reserve(static_cast<size_t>(p));
        bool ok = true;
        for (int v : sol.particular) {
            int s = (v + c) % p;
            if (s == p - 1) {
                ok = false;
                break;
            }
            shifted.push_back(s);
        }
        if (ok) {
            u = std::move(shifted);
            found = true;
        }
    }
    if (!found) throw precondition_error("build_thm2_witness: no shift avoids p-1");

    std::vector<Tuple> rows(3, Tuple(static_cast<size_t>(p)));
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < 3; ++j)
            rows[static_cast<size_t>(j)][static_cast<size_t>(i)] = u[static_cast<size_t>((i + j) % p)];
    return {u, witness_from_rows(p, WitnessMode::constant_forcing, rows)};
}

Thm2Bundle build_thm2(int p, bool allow_small) {
    if (!is_prime(p)) throw precondition_error("build_thm2: p must be prime");
    if (p < 7 && !allow_small)
        throw precondition_error("build_thm2: p must be >= 7 (or pass allow_small)");
    if (p < 3) throw precondition_error("build_thm2: p must be >= 3");

    Thm2Bundle bundle;
    bundle.p = p;

    std::vector<Tuple> rc, ra;
    std::set<Tuple> rb;
    auto himg = [p](int x) { return x == p - 1 ? 1 : x; };
    for (int x = 0; x < p; ++x)
        for (int y = 0; y < p; ++y) {
            int z = ((1 - x + 2 * y) % p + p) % p;
            Tuple t{x, y, z};
            rc.push_back(t);
            if (x < p - 1 && y < p - 1 && z < p - 1) ra.push_back(t);
            rb.insert({himg(x), himg(y), himg(z)});
        }

    bundle.C.name = "C";
    bundle.C.domain_size = p;
    bundle.C.signature = {{"R", 3}};
    bundle.C.relations = {extensional_relation(3, std::move(rc))};

    bundle.A.name = "A";
    bundle.A.domain_size = p - 1;
    bundle.A.signature = {{"R", 3}};
    bundle.A.relations = {extensional_relation(3, std::move(ra))};

    bundle.B.name = "B";
    bundle.B.domain_size = p - 1;
    bundle.B.signature = {{"R", 3}};
    bundle.B.relations = {
        extensional_relation(3, std::vector<Tuple>(rb.begin(), rb.end()))};

    bundle.h.name = "h";
    bundle.h.source_size = p;
    bundle.h.target_size = p - 1;
    for (int x = 0; x < p; ++x) bundle.h.map.push_back(himg(x));

    auto [u, witness] = build_thm2_witness(p, allow_small);
    bundle.u = std::move(u);
    bundle.U = std::move(witness);

    validate_structure(bundle.A);
    validate_structure(bundle.B);
    validate_structure(bundle.C);
    return bundle;
}

} // namespace pcsp
