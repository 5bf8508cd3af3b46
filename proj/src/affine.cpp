#include "pcsp/affine.hpp"

#include <algorithm>

namespace pcsp {

namespace {

int mod_p(std::int64_t v, int p) {
    int r = static_cast<int>(v % p);
    return r < 0 ? r + p : r;
}

int mod_inverse(int a, int p) {
    // Fermat: a^(p-2) mod p
    std::int64_t base = a % p, result = 1;
    int e = p - 2;
    while (e > 0) {
        if (e & 1) result = result * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<int>(result);
}

} // namespace

ModMatrix ModMatrix::zero(int p, int rows, int cols) {
    ModMatrix m;
    m.p = p;
    m.rows = rows;
    m.cols = cols;
    m.a.assign(static_cast<size_t>(rows) * static_cast<size_t>(cols), 0);
    return m;
}

void validate_matrix(const ModMatrix& m) {
    if (!is_prime(m.p)) throw precondition_error("matrix: p must be prime");
    if (m.rows < 0 || m.cols < 0) throw precondition_error("matrix: negative dimensions");
    if (m.a.size() != static_cast<size_t>(m.rows) * static_cast<size_t>(m.cols))
        throw precondition_error("matrix: entry count mismatch");
    for (int v : m.a)
        if (v < 0 || v >= m.p) throw precondition_error("matrix: entry not reduced mod p");
}

std::vector<int> mat_vec(const ModMatrix& m, const std::vector<int>& x) {
    if (static_cast<int>(x.size()) != m.cols)
        throw precondition_error("mat_vec: dimension mismatch");
    std::vector<int> out(static_cast<size_t>(m.rows), 0);
    for (int r = 0; r < m.rows; ++r) {
        std::int64_t acc = 0;
        for (int c = 0; c < m.cols; ++c)
            acc += static_cast<std::int64_t>(m.at(r, c)) * x[static_cast<size_t>(c)];
        out[static_cast<size_t>(r)] = mod_p(acc, m.p);
    }
    return out;
}

GaussSolution gauss_solve(const ModMatrix& m, const std::vector<int>& b) {
    validate_matrix(m);
    if (static_cast<int>(b.size()) != m.rows)
        throw precondition_error("gauss_solve: right side dimension mismatch");
    const int p = m.p;
    ModMatrix w = m;
    std::vector<int> rhs = b;
    for (int& v : rhs) v = mod_p(v, p);

    GaussSolution sol;
    int rank = 0;
    for (int col = 0; col < w.cols && rank < w.rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < w.rows; ++r)
            if (w.at(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        if (pivot != rank) {
            for (int c = 0; c < w.cols; ++c) std::swap(w.at(pivot, c), w.at(rank, c));
            std::swap(rhs[static_cast<size_t>(pivot)], rhs[static_cast<size_t>(rank)]);
        }
        const int inv = mod_inverse(w.at(rank, col), p);
        for (int c = 0; c < w.cols; ++c)
            w.at(rank, c) = mod_p(static_cast<std::int64_t>(w.at(rank, c)) * inv, p);
        rhs[static_cast<size_t>(rank)] = mod_p(static_cast<std::int64_t>(rhs[static_cast<size_t>(rank)]) * inv, p);
        for (int r = 0; r < w.rows; ++r) {
            if (r == rank || w.at(r, col) == 0) continue;
            const int factor = w.at(r, col);
            for (int c = 0; c < w.cols; ++c)
                w.at(r, c) = mod_p(w.at(r, c) - static_cast<std::int64_t>(factor) * w.at(rank, c), p);
            rhs[static_cast<size_t>(r)] =
                mod_p(rhs[static_cast<size_t>(r)] - static_cast<std::int64_t>(factor) * rhs[static_cast<size_t>(rank)], p);
        }
        sol.pivot_cols.push_back(col);
        ++rank;
    }
    for (int r = rank; r < w.rows; ++r)
        if (rhs[static_cast<size_t>(r)] != 0) {
            sol.solvable = false;
            return sol;
        }

    sol.solvable = true;
    sol.particular.assign(static_cast<size_t>(w.cols), 0);
    for (int r = 0; r < rank; ++r)
        sol.particular[static_cast<size_t>(sol.pivot_cols[static_cast<size_t>(r)])] =
            rhs[static_cast<size_t>(r)];

    std::vector<char> is_pivot(static_cast<size_t>(w.cols), 0);
    for (int c : sol.pivot_cols) is_pivot[static_cast<size_t>(c)] = 1;
    for (int fc = 0; fc < w.cols; ++fc) {
        if (is_pivot[static_cast<size_t>(fc)]) continue;
        std::vector<int> v(static_cast<size_t>(w.cols), 0);
        v[static_cast<size_t>(fc)] = 1;
        for (int r = 0; r < rank; ++r)
            v[static_cast<size_t>(sol.pivot_cols[static_cast<size_t>(r)])] =
                mod_p(-w.at(r, fc), p);
        sol.nullspace.push_back(std::move(v));
    }
    return sol;
}

bool in_span(const std::vector<std::vector<int>>& basis, const std::vector<int>& v, int p) {
    std::vector<int> residual = v;
    for (int& x : residual) x = mod_p(x, p);
    std::vector<std::vector<int>> rows = echelon_basis(basis, p);
    for (const auto& row : rows) {
        int lead = -1;
        for (size_t c = 0; c < row.size(); ++c)
            if (row[c] != 0) {
                lead = static_cast<int>(c);
                break;
            }
        if (lead < 0) continue;
        const int factor = residual[static_cast<size_t>(lead)];
        if (factor == 0) continue;
        for (size_t c = 0; c < row.size(); ++c)
            residual[c] = mod_p(residual[c] - static_cast<std::int64_t>(factor) * row[c], p);
    }
    return std::all_of(residual.begin(), residual.end(), [](int x) { return x == 0; });
}

std::vector<std::vector<int>> echelon_basis(std::vector<std::vector<int>> rows, int p) {
    if (rows.empty()) return {};
    const int cols = static_cast<int>(rows.front().size());
    ModMatrix m = ModMatrix::zero(p, static_cast<int>(rows.size()), cols);
    for (size_t r = 0; r < rows.size(); ++r) {
        if (static_cast<int>(rows[r].size()) != cols)
            throw precondition_error("echelon_basis: ragged rows");
        for (int c = 0; c < cols; ++c)
            m.at(static_cast<int>(r), c) = mod_p(rows[r][static_cast<size_t>(c)], p);
    }
    int rank = 0;
    for (int col = 0; col < m.cols && rank < m.rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < m.rows; ++r)
            if (m.at(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        if (pivot != rank)
            for (int c = 0; c < m.cols; ++c) std::swap(m.at(pivot, c), m.at(rank, c));
        const int inv = mod_inverse(m.at(rank, col), p);
        for (int c = 0; c < m.cols; ++c)
            m.at(rank, c) = mod_p(static_cast<std::int64_t>(m.at(rank, c)) * inv, p);
        for (int r = 0; r < m.rows; ++r) {
            if (r == rank || m.at(r, col) == 0) continue;
            const int factor = m.at(r, col);
            for (int c = 0; c < m.cols; ++c)
                m.at(r, c) = mod_p(m.at(r, c) - static_cast<std::int64_t>(factor) * m.at(rank, c), p);
        }
        ++rank;
    }
    std::vector<std::vector<int>> out;
    for (int r = 0; r < rank; ++r) {
        std::vector<int> row(static_cast<size_t>(m.cols));
        for (int c = 0; c < m.cols; ++c) row[static_cast<size_t>(c)] = m.at(r, c);
        out.push_back(std::move(row));
    }
    return out;
}

bool AffineRelation::contains(const std::vector<int>& t) const {
    if (static_cast<int>(t.size()) != arity) return false;
    for (int v : t)
        if (v < 0 || v >= p) return false;
    return mat_vec(eqs, t) == rhs;
}

std::int64_t AffineRelation::coset_size() const {
    return ipow(p, static_cast<int>(basis.size()));
}

std::vector<Tuple> AffineRelation::enumerate(std::int64_t cap) const {
    const std::int64_t total = coset_size();
    if (total > cap) throw budget_error("affine relation enumeration exceeds budget");
    std::vector<Tuple> out;
    out.reserve(static_cast<size_t>(total));
    std::vector<int> coeff(basis.size(), 0);
    for (std::int64_t k = 0; k < total; ++k) {
        Tuple t = particular;
        for (size_t i = 0; i < basis.size(); ++i)
            for (int c = 0; c < arity; ++c)
                t[static_cast<size_t>(c)] =
                    mod_p(t[static_cast<size_t>(c)] +
                              static_cast<std::int64_t>(coeff[i]) * basis[i][static_cast<size_t>(c)],
                          p);
        out.push_back(std::move(t));
        for (int i = static_cast<int>(basis.size()) - 1; i >= 0; --i) {
            if (++coeff[static_cast<size_t>(i)] < p) break;
            coeff[static_cast<size_t>(i)] = 0;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

AffineRelation finish_relation(int p, int arity, std::vector<int> particular,
                               std::vector<std::vector<int>> basis) {
    AffineRelation r;
    r.p = p;
    r.arity = arity;
    r.particular = std::move(particular);
    for (int& v : r.particular) v = mod_p(v, p);
    r.basis = echelon_basis(std::move(basis), p);
    auto [eqs, rhs] = [&] {
        // annihilator of the basis span
        ModMatrix rowsm = ModMatrix::zero(p, static_cast<int>(r.basis.size()), arity);
        for (size_t i = 0; i < r.basis.size(); ++i)
            for (int c = 0; c < arity; ++c)
                rowsm.at(static_cast<int>(i), c) = r.basis[i][static_cast<size_t>(c)];
        GaussSolution null = gauss_solve(rowsm, std::vector<int>(r.basis.size(), 0));
        ModMatrix eqs = ModMatrix::zero(p, static_cast<int>(null.nullspace.size()), arity);
        for (size_t i = 0; i < null.nullspace.size(); ++i)
            for (int c = 0; c < arity; ++c)
                eqs.at(static_cast<int>(i), c) = null.nullspace[i][static_cast<size_t>(c)];
        return std::make_pair(eqs, mat_vec(eqs, r.particular));
    }();
    r.eqs = std::move(eqs);
    r.rhs = std::move(rhs);
    return r;
}

} // namespace

AffineRelation affine_closure(const std::vector<Tuple>& tuples, int p) {
    if (tuples.empty()) throw precondition_error("affine_closure: empty input");
    if (!is_prime(p)) throw precondition_error("affine_closure: p must be prime");
    const int arity = static_cast<int>(tuples.front().size());
    for (const auto& t : tuples) {
        if (static_cast<int>(t.size()) != arity)
            throw precondition_error("affine_closure: ragged tuples");
        for (int v : t)
            if (v < 0 || v >= p) throw precondition_error("affine_closure: entry out of [p)");
    }
    std::vector<std::vector<int>> diffs;
    for (size_t i = 1; i < tuples.size(); ++i) {
        std::vector<int> d(static_cast<size_t>(arity));
        for (int c = 0; c < arity; ++c)
            d[static_cast<size_t>(c)] = mod_p(tuples[i][static_cast<size_t>(c)] -
                                                  tuples.front()[static_cast<size_t>(c)],
                                              p);
        diffs.push_back(std::move(d));
    }
    return finish_relation(p, arity, tuples.front(), std::move(diffs));
}

std::pair<ModMatrix, std::vector<int>> relation_to_equations(const AffineRelation& r) {
    return {r.eqs, r.rhs};
}

int AffineStructure::relation_index(const std::string& symbol) const {
    for (size_t i = 0; i < signature.size(); ++i)
        if (signature[i].name == symbol) return static_cast<int>(i);
    return -1;
}

AffineStructure affine_structure_of(const Structure& s, std::int64_t budget) {
    const int p = s.domain_size;
    if (!is_prime(p)) throw precondition_error("affine structure: domain size must be a prime p");
    AffineStructure out;
    out.name = s.name;
    out.p = p;
    out.signature = s.signature;
    for (size_t i = 0; i < s.relations.size(); ++i) {
        const auto& rel = s.relations[i];
        if (rel.kind == RelKind::intensional && rel.tag == IntensionalTag::thm1_c) {
            // linear tables with coefficient sum 1: parameterized by the
            // coefficient vector, which enters the table linearly
            const int n = rel.tag_n, pp = rel.tag_p;
            const std::int64_t arity = ipow(n, pp);
            if (arity > budget) throw budget_error("affine structure: relation arity exceeds budget");
            auto coeff_table = [&](int which) {
                Tuple t(static_cast<size_t>(arity));
                Tuple x(static_cast<size_t>(pp), 0);
                for (std::int64_t idx = 0; idx < arity; ++idx) {
                    t[static_cast<size_t>(idx)] = mod_p(x[static_cast<size_t>(which)], p);
                    for (int j = pp - 1; j >= 0; --j) {
                        if (++x[static_cast<size_t>(j)] < n) break;
                        x[static_cast<size_t>(j)] = 0;
                    }
                }
                return t;
            };
            Tuple particular = coeff_table(0); // coefficient vector e_1
            std::vector<std::vector<int>> basis;
            for (int i2 = 1; i2 < pp; ++i2) {
                Tuple ti = coeff_table(i2);
                std::vector<int> d(static_cast<size_t>(arity));
                for (std::int64_t c = 0; c < arity; ++c)
                    d[static_cast<size_t>(c)] = mod_p(ti[static_cast<size_t>(c)] -
                                                          particular[static_cast<size_t>(c)],
                                                      p);
                basis.push_back(std::move(d));
            }
            out.relations.push_back(
                finish_relation(p, static_cast<int>(arity), std::move(particular), std::move(basis)));
            continue;
        }
        std::vector<Tuple> tuples =
            rel.kind == RelKind::extensional ? rel.tuples : enumerate_intensional(rel, budget);
        if (tuples.empty())
            throw precondition_error("affine structure: relation " + s.signature[i].name +
                                     " is empty, not a coset");
        AffineRelation ar = affine_closure(tuples, p);
        if (ar.coset_size() != static_cast<std::int64_t>(tuples.size()))
            throw precondition_error("affine structure: relation " + s.signature[i].name +
                                     " is not closed under x-y+z");
        out.relations.push_back(std::move(ar));
    }
    return out;
}

AffineSolve solve_affine_csp(const AffineStructure& c, const CspInstance& inst) {
    validate_instance(inst);
    const int p = c.p;
    std::int64_t total_rows = 0;
    std::vector<int> rel_of_constraint;
    for (const auto& con : inst.constraints) {
        int ri = c.relation_index(con.symbol);
        if (ri < 0)
            throw precondition_error("solve_affine_csp: unresolved symbol " + con.symbol);
        const auto& rel = c.relations[static_cast<size_t>(ri)];
        if (rel.p != p) throw precondition_error("solve_affine_csp: mixed primes");
        if (static_cast<int>(con.scope.size()) != rel.arity)
            throw precondition_error("solve_affine_csp: scope arity mismatch for " + con.symbol);
        rel_of_constraint.push_back(ri);
        total_rows += rel.eqs.rows;
    }

    ModMatrix system = ModMatrix::zero(p, static_cast<int>(total_rows), inst.variable_count);
    std::vector<int> rhs(static_cast<size_t>(total_rows), 0);
    int row = 0;
    for (size_t ci = 0; ci < inst.constraints.size(); ++ci) {
        const auto& con = inst.constraints[ci];
        const auto& rel = c.relations[static_cast<size_t>(rel_of_constraint[ci])];
        for (int er = 0; er < rel.eqs.rows; ++er) {
            for (int ec = 0; ec < rel.eqs.cols; ++ec) {
                int var = con.scope[static_cast<size_t>(ec)];
                system.at(row, var) = mod_p(system.at(row, var) + rel.eqs.at(er, ec), p);
            }
            rhs[static_cast<size_t>(row)] = rel.rhs[static_cast<size_t>(er)];
            ++row;
        }
    }

    GaussSolution sol = gauss_solve(system, rhs);
    if (!sol.solvable) return {false, {}};

    AffineSolve out{true, sol.particular};
    for (size_t ci = 0; ci < inst.constraints.size(); ++ci) {
        const auto& con = inst.constraints[ci];
        const auto& rel = c.relations[static_cast<size_t>(rel_of_constraint[ci])];
        Tuple t(con.scope.size());
        for (size_t j = 0; j < con.scope.size(); ++j)
            t[j] = out.assignment[static_cast<size_t>(con.scope[j])];
        if (!rel.contains(t))
            throw precondition_error("internal: affine solution fails a constraint");
    }
    return out;
}

PcspAnswer pcsp_decide_via_sandwich(const Structure& a, const Structure& b,
                                    const AffineStructure& c, const CspInstance& inst,
                                    bool sandwich_verified) {
    if (!sandwich_verified)
        throw precondition_error("pcsp_decide_via_sandwich: sandwich not verified");
    if (!same_signature(a, b))
        throw precondition_error("pcsp_decide_via_sandwich: signature mismatch");
    return solve_affine_csp(c, inst).sat ? PcspAnswer::yes : PcspAnswer::no;
}

} // namespace pcsp
