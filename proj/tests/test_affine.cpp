#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "pcsp/affine.hpp"
#include "pcsp/constructions.hpp"
#include "pcsp/io.hpp"

using namespace pcsp;

namespace {

std::vector<int> mat_vec_oracle(const ModMatrix& m, const std::vector<int>& x) {
    std::vector<int> out(static_cast<size_t>(m.rows), 0);
    for (int r = 0; r < m.rows; ++r) {
        long long acc = 0;
        for (int c = 0; c < m.cols; ++c)
            acc += static_cast<long long>(m.at(r, c)) * x[static_cast<size_t>(c)];
        out[static_cast<size_t>(r)] = static_cast<int>(((acc % m.p) + m.p) % m.p);
    }
    return out;
}

} // namespace

TEST_CASE("gauss_solve") {
    SUBCASE("identity system") {
        ModMatrix id = ModMatrix::zero(5, 3, 3);
        for (int i = 0; i < 3; ++i) id.at(i, i) = 1;
        GaussSolution sol = gauss_solve(id, {3, 1, 4});
        REQUIRE(sol.solvable);
        CHECK(sol.particular == std::vector<int>{3, 1, 4});
        CHECK(sol.nullspace.empty());
    }

    SUBCASE("the circulant system at p=7 has the canonical solution") {
        ModMatrix m = thm2_matrix(7);
        GaussSolution sol = gauss_solve(m, thm2_rhs(7));
        REQUIRE(sol.solvable);
        CHECK(sol.particular == std::vector<int>{1, 3, 6, 3, 1, 0, 0});
        // row-by-row re-check plus the closed form 4i(i+1) mod 7
        CHECK(mat_vec_oracle(m, sol.particular) == thm2_rhs(7));
        for (int i = 1; i <= 7; ++i)
            CHECK(sol.particular[static_cast<size_t>(i - 1)] == (4 * i * (i + 1)) % 7);

        SUBCASE("nullspace has dimension 2 containing the ramp and all-ones") {
            REQUIRE(sol.nullspace.size() == 2);
            for (const auto& v : sol.nullspace)
                CHECK(mat_vec_oracle(m, v) == std::vector<int>(7, 0));
            // membership by direct 2-coefficient sweep
            auto in_span2 = [&](const std::vector<int>& target) {
                for (int c1 = 0; c1 < 7; ++c1)
                    for (int c2 = 0; c2 < 7; ++c2) {
                        bool all = true;
                        for (int i = 0; i < 7 && all; ++i) {
                            int val = (c1 * sol.nullspace[0][static_cast<size_t>(i)] +
                                       c2 * sol.nullspace[1][static_cast<size_t>(i)]) %
                                      7;
                            if (val != target[static_cast<size_t>(i)]) all = false;
                        }
                        if (all) return true;
                    }
                return false;
            };
            CHECK(in_span2({0, 1, 2, 3, 4, 5, 6}));
            CHECK(in_span2({1, 1, 1, 1, 1, 1, 1}));
        }
    }

    SUBCASE("inconsistent systems report no solution") {
        ModMatrix m = ModMatrix::zero(3, 2, 2);
        m.at(0, 0) = 1;
        m.at(1, 0) = 1; // same row twice, different right sides
        GaussSolution sol = gauss_solve(m, {1, 2});
        CHECK_FALSE(sol.solvable);
    }

    SUBCASE("randomized: particular solves, basis annihilates") {
        std::mt19937 rng(oracle::kDefaultSeed);
        const int primes[] = {2, 3, 5, 7, 11};
        int solvable_count = 0;
        for (int k = 0; k < 1000; ++k) {
            const int p = primes[k % 5];
            std::uniform_int_distribution<int> dim(1, 5), entry(0, p - 1);
            ModMatrix m = ModMatrix::zero(p, dim(rng), dim(rng));
            for (auto& v : m.a) v = entry(rng);
            std::vector<int> b(static_cast<size_t>(m.rows));
            for (auto& v : b) v = entry(rng);
            GaussSolution sol = gauss_solve(m, b);
            if (sol.solvable) {
                ++solvable_count;
                CHECK(mat_vec_oracle(m, sol.particular) == b);
                for (const auto& v : sol.nullspace)
                    CHECK(mat_vec_oracle(m, v) ==
                          std::vector<int>(static_cast<size_t>(m.rows), 0));
            } else if (ipow(p, m.cols) <= 4000) {
                // exhaustively confirm there is no solution
                std::vector<int> x(static_cast<size_t>(m.cols), 0);
                bool found = false;
                for (std::int64_t i = 0; i < ipow(p, m.cols); ++i) {
                    if (mat_vec_oracle(m, x) == b) found = true;
                    for (int j = m.cols - 1; j >= 0; --j) {
                        if (++x[static_cast<size_t>(j)] < p) break;
                        x[static_cast<size_t>(j)] = 0;
                    }
                }
                CHECK_FALSE(found);
            }
        }
        CHECK(solvable_count > 200);
    }

    SUBCASE("composite moduli are rejected") {
        ModMatrix m = ModMatrix::zero(5, 1, 1);
        m.p = 6;
        m.at(0, 0) = 1;
        CHECK_THROWS_AS(gauss_solve(m, {1}), precondition_error);
    }
}

TEST_CASE("affine_closure") {
    SUBCASE("single tuple") {
        AffineRelation r = affine_closure({{2, 4, 1}}, 5);
        CHECK(r.basis.empty());
        CHECK(r.coset_size() == 1);
        CHECK(r.contains({2, 4, 1}));
        CHECK_FALSE(r.contains({2, 4, 2}));
    }
    SUBCASE("two points over Z_2 span everything") {
        AffineRelation r = affine_closure({{0}, {1}}, 2);
        CHECK(r.coset_size() == 2);
    }
    SUBCASE("empty input is rejected") {
        CHECK_THROWS_AS(affine_closure({}, 3), precondition_error);
    }

    SUBCASE("closure of the projection images equals the coefficient relation") {
        // the acceptance identity, on the full parameter list
        for (auto [n, p] : {std::pair{2, 3}, {3, 2}, {3, 3}, {2, 5}}) {
            Thm1Bundle bundle = build_thm1(n, p, 1'000'000);
            std::vector<Tuple> g_images;
            for (const auto& t : bundle.A.relations.front().tuples) {
                Tuple img(t.size());
                for (size_t i = 0; i < t.size(); ++i) img[i] = bundle.g.at(t[i]);
                g_images.push_back(img);
            }
            AffineRelation closure = affine_closure(g_images, p);
            auto closure_set = closure.enumerate(1'000'000);
            auto rc = enumerate_intensional(bundle.C.relations.front(), 1'000'000);
            CHECK(closure_set == rc);

            // independent fixpoint route where the coset stays tiny
            if (ipow(p, p - 1) <= 16) {
                auto fix = oracle::xyz_closure(g_images, p);
                CHECK(std::vector<Tuple>(fix.begin(), fix.end()) == rc);
            }
        }
    }

    SUBCASE("contains inputs, closed under random probes, idempotent") {
        std::mt19937 rng(oracle::kDefaultSeed + 1);
        for (int k = 0; k < 30; ++k) {
            const int primes[] = {2, 3, 5, 7};
            const int p = primes[k % 4];
            std::uniform_int_distribution<int> kd(1, 4), cd(1, 5), entry(0, p - 1);
            const int arity = kd(rng);
            std::vector<Tuple> tuples;
            for (int i = 0, c = cd(rng); i < c; ++i) {
                Tuple t(static_cast<size_t>(arity));
                for (auto& v : t) v = entry(rng);
                tuples.push_back(t);
            }
            AffineRelation r = affine_closure(tuples, p);
            for (const auto& t : tuples) CHECK(r.contains(t));
            auto members = r.enumerate(100'000);
            std::uniform_int_distribution<size_t> pick(0, members.size() - 1);
            for (int probe = 0; probe < 1000; ++probe) {
                const auto& x = members[pick(rng)];
                const auto& y = members[pick(rng)];
                const auto& z = members[pick(rng)];
                Tuple t(x.size());
                for (size_t i = 0; i < x.size(); ++i)
                    t[i] = ((x[i] - y[i] + z[i]) % p + p) % p;
                CHECK(r.contains(t));
            }
            AffineRelation again = affine_closure(members, p);
            CHECK(again.enumerate(100'000) == members);
        }
    }
}

TEST_CASE("relation_to_equations") {
    SUBCASE("full space has a zero-row system") {
        AffineRelation r = affine_closure({{0, 0}, {0, 1}, {1, 0}}, 3);
        REQUIRE(r.coset_size() == 9);
        auto [eqs, rhs] = relation_to_equations(r);
        CHECK(eqs.rows == 0);
        CHECK(rhs.empty());
    }
    SUBCASE("single point gives the identity system") {
        AffineRelation r = affine_closure({{2, 0, 4}}, 5);
        auto [eqs, rhs] = relation_to_equations(r);
        REQUIRE(eqs.rows == 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(eqs.at(i, j) == (i == j ? 1 : 0));
        CHECK(rhs == std::vector<int>{2, 0, 4});
    }
    SUBCASE("the ternary family relation recovers x - 2y + z = 1") {
        Thm2Bundle bundle = build_thm2(7);
        AffineRelation r = affine_closure(bundle.C.relations.front().tuples, 7);
        CHECK(r.coset_size() == 49);
        auto [eqs, rhs] = relation_to_equations(r);
        REQUIRE(eqs.rows == 1);
        CHECK(eqs.at(0, 0) == 1);
        CHECK(eqs.at(0, 1) == 5); // -2 mod 7
        CHECK(eqs.at(0, 2) == 1);
        CHECK(rhs == std::vector<int>{1});
    }
    SUBCASE("equation solutions enumerate back to the coset") {
        std::mt19937 rng(oracle::kDefaultSeed + 2);
        for (int k = 0; k < 25; ++k) {
            const int primes[] = {2, 3, 5, 7};
            const int p = primes[k % 4];
            std::uniform_int_distribution<int> kd(1, 4), cd(1, 4), entry(0, p - 1);
            const int arity = kd(rng);
            std::vector<Tuple> tuples;
            for (int i = 0, c = cd(rng); i < c; ++i) {
                Tuple t(static_cast<size_t>(arity));
                for (auto& v : t) v = entry(rng);
                tuples.push_back(t);
            }
            AffineRelation r = affine_closure(tuples, p);
            std::vector<Tuple> solutions;
            Tuple x(static_cast<size_t>(arity), 0);
            for (std::int64_t i = 0; i < ipow(p, arity); ++i) {
                if (mat_vec_oracle(r.eqs, x) == r.rhs) solutions.push_back(x);
                for (int j = arity - 1; j >= 0; --j) {
                    if (++x[static_cast<size_t>(j)] < p) break;
                    x[static_cast<size_t>(j)] = 0;
                }
            }
            CHECK(solutions == r.enumerate(100'000));
        }
    }
}

TEST_CASE("affine_structure_of") {
    SUBCASE("intensional and closure routes agree for the (2,3) family") {
        Thm1Bundle bundle = build_thm1(2, 3);
        AffineStructure via_tag = affine_structure_of(bundle.C);
        Structure ext = materialized_structure(bundle.C, 1'000'000);
        AffineStructure via_closure = affine_structure_of(ext);
        CHECK(via_tag.relations.front().enumerate(100'000) ==
              via_closure.relations.front().enumerate(100'000));
    }
    SUBCASE("non-coset relations are rejected") {
        Structure s;
        s.name = "or";
        s.domain_size = 2;
        s.signature = {{"R", 2}};
        s.relations = {extensional_relation(2, {{0, 0}, {0, 1}, {1, 0}})};
        CHECK_THROWS_AS(affine_structure_of(s), precondition_error);
    }
    SUBCASE("composite domains are rejected") {
        Structure s;
        s.name = "z4";
        s.domain_size = 4;
        s.signature = {{"R", 1}};
        s.relations = {extensional_relation(1, {{0}, {1}, {2}, {3}})};
        CHECK_THROWS_AS(affine_structure_of(s), precondition_error);
    }
}

TEST_CASE("solve_affine_csp") {
    Thm2Bundle bundle = build_thm2(7);
    AffineStructure c = affine_structure_of(bundle.C);

    SUBCASE("an underdetermined constraint is satisfiable") {
        CspInstance inst;
        inst.name = "one";
        inst.variable_count = 3;
        inst.constraints = {{"R", {0, 1, 2}}};
        AffineSolve s = solve_affine_csp(c, inst);
        REQUIRE(s.sat);
        const auto& a = s.assignment;
        CHECK(((a[0] - 2 * a[1] + a[2]) % 7 + 7) % 7 == 1);
    }
    SUBCASE("collapsing the scope to one variable is unsatisfiable") {
        CspInstance inst;
        inst.name = "diag";
        inst.variable_count = 1;
        inst.constraints = {{"R", {0, 0, 0}}};
        CHECK_FALSE(solve_affine_csp(c, inst).sat);
    }
    SUBCASE("the empty instance is satisfiable") {
        CspInstance inst;
        inst.name = "empty";
        inst.variable_count = 0;
        CHECK(solve_affine_csp(c, inst).sat);
    }
    SUBCASE("unresolved symbols are rejected") {
        CspInstance inst;
        inst.variable_count = 3;
        inst.constraints = {{"Q", {0, 1, 2}}};
        CHECK_THROWS_AS(solve_affine_csp(c, inst), precondition_error);
    }

    SUBCASE("agrees with brute-force homomorphism search on random instances") {
        std::mt19937 rng(oracle::kDefaultSeed + 3);
        std::uniform_int_distribution<int> vd(1, 6), cd(1, 8);
        for (int k = 0; k < 100; ++k) {
            CspInstance inst;
            inst.name = "rand";
            inst.variable_count = vd(rng);
            std::uniform_int_distribution<int> var(0, inst.variable_count - 1);
            const int cons = cd(rng);
            for (int i = 0; i < cons; ++i)
                inst.constraints.push_back({"R", {var(rng), var(rng), var(rng)}});
            AffineSolve s = solve_affine_csp(c, inst);
            auto brute = oracle::brute_hom(inst, bundle.C);
            CHECK(s.sat == brute.has_value());
        }
    }
}

namespace {

// a random instance built as the preimage shape of a map into A, so a
// homomorphism to A exists by construction
CspInstance planted_yes_instance(std::mt19937& rng, const Structure& a, int max_vars,
                                 int max_cons) {
    std::uniform_int_distribution<int> vd(1, max_vars), cd(1, max_cons);
    const auto& tuples = a.relations.front().tuples;
    std::uniform_int_distribution<size_t> pick(0, tuples.size() - 1);
    std::uniform_int_distribution<int> img(0, a.domain_size - 1);

    CspInstance inst;
    inst.name = "planted";
    std::vector<int> sigma;
    for (int i = 0, v = vd(rng); i < v; ++i) sigma.push_back(img(rng));
    const int cons = cd(rng);
    for (int i = 0; i < cons; ++i) {
        const Tuple& t = tuples[pick(rng)];
        CspConstraint con;
        con.symbol = a.signature.front().name;
        for (int coord : t) {
            // reuse a variable already mapped to this value, else mint one
            int found = -1;
            for (size_t v2 = 0; v2 < sigma.size(); ++v2)
                if (sigma[v2] == coord) {
                    found = static_cast<int>(v2);
                    break;
                }
            if (found < 0) {
                sigma.push_back(coord);
                found = static_cast<int>(sigma.size()) - 1;
            }
            con.scope.push_back(found);
        }
        inst.constraints.push_back(std::move(con));
    }
    inst.variable_count = static_cast<int>(sigma.size());

    // sanity: sigma really is a homomorphism into a
    oracle::FlatTarget flat = oracle::flatten(a);
    REQUIRE(oracle::map_is_hom(sigma, inst, flat));
    return inst;
}

} // namespace

TEST_CASE("pcsp_decide_via_sandwich") {
    Thm2Bundle bundle = build_thm2(7);
    AffineStructure c = affine_structure_of(bundle.C);

    SUBCASE("requires the sandwich flag") {
        CspInstance inst;
        inst.variable_count = 0;
        CHECK_THROWS_AS(pcsp_decide_via_sandwich(bundle.A, bundle.B, c, inst, false),
                        precondition_error);
    }

    SUBCASE("planted yes instances answer yes") {
        std::mt19937 rng(oracle::kDefaultSeed + 4);
        for (int k = 0; k < 50; ++k) {
            CspInstance inst = planted_yes_instance(rng, bundle.A, 6, 7);
            CHECK(pcsp_decide_via_sandwich(bundle.A, bundle.B, c, inst, true) ==
                  PcspAnswer::yes);
        }
    }

    SUBCASE("instances with no homomorphism to B answer no") {
        std::mt19937 rng(oracle::kDefaultSeed + 5);
        std::uniform_int_distribution<int> vd(1, 4), cd(2, 7);
        int checked = 0;
        while (checked < 20) {
            CspInstance inst;
            inst.name = "neg";
            inst.variable_count = vd(rng);
            std::uniform_int_distribution<int> var(0, inst.variable_count - 1);
            for (int i = 0, c2 = cd(rng); i < c2; ++i)
                inst.constraints.push_back({"R", {var(rng), var(rng), var(rng)}});
            if (oracle::brute_hom(inst, bundle.B)) continue; // keep only true no-instances
            ++checked;
            CHECK(pcsp_decide_via_sandwich(bundle.A, bundle.B, c, inst, true) ==
                  PcspAnswer::no);
        }
    }

    SUBCASE("the empty instance is a yes instance") {
        CspInstance inst;
        inst.variable_count = 0;
        CHECK(pcsp_decide_via_sandwich(bundle.A, bundle.B, c, inst, true) == PcspAnswer::yes);
    }
}

TEST_CASE("matrix text format round trips") {
    ModMatrix m = thm2_matrix(7);
    std::string text = serialize_matrix(m);
    ModMatrix back = parse_matrix(text);
    CHECK(back == m);
    CHECK(serialize_matrix(back) == text);
    CHECK_THROWS_AS(parse_matrix("matrix p=4 rows=1 cols=1\n1\n"), precondition_error);
    CHECK_THROWS_AS(parse_matrix("matrix p=5 rows=2 cols=1\n1\n"), parse_error);
}

TEST_CASE("instance text format round trips") {
    CspInstance inst;
    inst.name = "I";
    inst.variable_count = 4;
    inst.constraints = {{"R", {0, 1, 2}}, {"R", {3, 3, 0}}};
    std::string text = serialize_instance(inst);
    CspInstance back = parse_instance(text);
    CHECK(serialize_instance(back) == text);
    CHECK(back.variable_count == 4);
    CHECK(back.constraints.size() == 2);
    CHECK_THROWS_AS(parse_instance("instance I\nvariables 2\nconstraint R 0 5\nend\n"),
                    parse_error);
}
