#include "pcsp/structure.hpp"

#include <algorithm>
#include <limits>

namespace pcsp {

std::int64_t ipow(std::int64_t base, int exp) {
    if (base < 0 || exp < 0) throw precondition_error("ipow: negative argument");
    std::int64_t r = 1;
    const std::int64_t cap = std::int64_t{1} << 62;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && r > cap / base) throw budget_error("ipow: overflow");
        r *= base;
    }
    return r;
}

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; static_cast<std::int64_t>(d) * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::int64_t point_index(const Tuple& x, int n) {
    std::int64_t idx = 0;
    for (int xi : x) {
        if (xi < 0 || xi >= n) throw precondition_error("point_index: coordinate out of range");
        idx = idx * n + xi;
    }
    return idx;
}

Tuple point_of_index(std::int64_t index, int n, int p) {
    if (index < 0 || index >= ipow(n, p))
        throw precondition_error("point_of_index: index out of range");
    Tuple x(static_cast<size_t>(p));
    for (int i = p - 1; i >= 0; --i) {
        x[static_cast<size_t>(i)] = static_cast<int>(index % n);
        index /= n;
    }
    return x;
}

std::int64_t rotation_orbit_count(int n, int p) {
    // (1/p) * sum over d | p of phi(d) * n^(p/d)
    auto phi = [](int d) {
        int r = d;
        for (int q = 2; q * q <= d; ++q) {
            if (d % q == 0) {
                r -= r / q;
                while (d % q == 0) d /= q;
            }
        }
        if (d > 1) r -= r / d;
        return r;
    };
    std::int64_t total = 0;
    for (int d = 1; d <= p; ++d)
        if (p % d == 0) total += phi(d) * ipow(n, p / d);
    return total / p;
}

void validate_table(const FunctionTable& f) {
    if (f.n < 1 || f.p < 1 || f.m < 1) throw precondition_error("function table: bad dimensions");
    if (static_cast<std::int64_t>(f.values.size()) != ipow(f.n, f.p))
        throw precondition_error("function table: wrong value count");
    for (int v : f.values)
        if (v < 0 || v >= f.m) throw precondition_error("function table: value out of range");
}

Tuple encode_function(const FunctionTable& f) {
    validate_table(f);
    return f.values;
}

FunctionTable decode_function(const Tuple& t, int n, int p, int m) {
    FunctionTable f{n, p, m, t};
    validate_table(f);
    return f;
}

bool is_cyclic(const FunctionTable& f) {
    const std::int64_t size = f.table_size();
    Tuple x(static_cast<size_t>(f.p), 0);
    for (std::int64_t idx = 0; idx < size; ++idx) {
        Tuple rot(x.begin() + 1, x.end());
        rot.push_back(x.front());
        if (f.values[static_cast<size_t>(idx)] !=
            f.values[static_cast<size_t>(point_index(rot, f.n))])
            return false;
        // odometer step
        for (int i = f.p - 1; i >= 0; --i) {
            if (++x[static_cast<size_t>(i)] < f.n) break;
            x[static_cast<size_t>(i)] = 0;
        }
    }
    return true;
}

bool thm1a_contains(const Tuple& t, int n, int p) {
    if (static_cast<std::int64_t>(t.size()) != ipow(n, p)) return false;
    for (int v : t)
        if (v < 0 || v >= n) return false;
    for (int i = 0; i < p; ++i) {
        bool is_proj = true;
        Tuple x(static_cast<size_t>(p), 0);
        for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(t.size()) && is_proj; ++idx) {
            if (t[static_cast<size_t>(idx)] != x[static_cast<size_t>(i)]) is_proj = false;
            for (int j = p - 1; j >= 0; --j) {
                if (++x[static_cast<size_t>(j)] < n) break;
                x[static_cast<size_t>(j)] = 0;
            }
        }
        if (is_proj) return true;
    }
    return false;
}

bool thm1b_contains(const Tuple& t, int n, int p) {
    if (static_cast<std::int64_t>(t.size()) != ipow(n, p)) return false;
    for (int v : t)
        if (v < 0 || v >= n) return false;
    return !is_cyclic(FunctionTable{n, p, n, t});
}

bool thm1c_contains(const Tuple& t, int n, int p) {
    if (static_cast<std::int64_t>(t.size()) != ipow(n, p)) return false;
    for (int v : t)
        if (v < 0 || v >= p) return false;
    // read coefficients off the unit points e_i, then verify linearity
    Tuple coeff(static_cast<size_t>(p), 0);
    for (int i = 0; i < p; ++i) {
        Tuple e(static_cast<size_t>(p), 0);
        e[static_cast<size_t>(i)] = 1;
        coeff[static_cast<size_t>(i)] = t[static_cast<size_t>(point_index(e, n))];
    }
    std::int64_t sum = 0;
    for (int a : coeff) sum += a;
    if (sum % p != 1) return false;
    Tuple x(static_cast<size_t>(p), 0);
    std::int64_t dot = 0;
    for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(t.size()); ++idx) {
        if (t[static_cast<size_t>(idx)] != static_cast<int>(dot % p)) return false;
        for (int j = p - 1; j >= 0; --j) {
            auto uj = static_cast<size_t>(j);
            if (++x[uj] < n) {
                dot += coeff[uj];
                break;
            }
            x[uj] = 0;
            dot -= static_cast<std::int64_t>(coeff[uj]) * (n - 1);
        }
    }
    return true;
}

bool Relation::contains(const Tuple& t) const {
    if (static_cast<int>(t.size()) != arity) return false;
    if (kind == RelKind::extensional || materialized)
        return std::binary_search(tuples.begin(), tuples.end(), t);
    switch (tag) {
        case IntensionalTag::thm1_a: return thm1a_contains(t, tag_n, tag_p);
        case IntensionalTag::thm1_b: return thm1b_contains(t, tag_n, tag_p);
        case IntensionalTag::thm1_c: return thm1c_contains(t, tag_n, tag_p);
    }
    return false;
}

std::optional<std::int64_t> Relation::size() const {
    if (kind == RelKind::extensional || materialized)
        return static_cast<std::int64_t>(tuples.size());
    try {
        switch (tag) {
            case IntensionalTag::thm1_a: return tag_p;
            case IntensionalTag::thm1_b:
                return ipow(tag_n, ipow(tag_n, tag_p)) - ipow(tag_n, rotation_orbit_count(tag_n, tag_p));
            case IntensionalTag::thm1_c: return ipow(tag_p, tag_p - 1);
        }
    } catch (const budget_error&) {
        return std::nullopt;
    }
    return std::nullopt;
}

Relation extensional_relation(int arity, std::vector<Tuple> tuples) {
    Relation r;
    r.arity = arity;
    r.kind = RelKind::extensional;
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
    r.tuples = std::move(tuples);
    return r;
}

Relation intensional_relation(IntensionalTag tag, int n, int p) {
    Relation r;
    r.kind = RelKind::intensional;
    r.tag = tag;
    r.tag_n = n;
    r.tag_p = p;
    r.arity = static_cast<int>(ipow(n, p));
    return r;
}

namespace {

std::vector<Tuple> enumerate_thm1a(int n, int p) {
    std::vector<Tuple> out;
    const std::int64_t size = ipow(n, p);
    for (int i = 0; i < p; ++i) {
        Tuple t(static_cast<size_t>(size));
        Tuple x(static_cast<size_t>(p), 0);
        for (std::int64_t idx = 0; idx < size; ++idx) {
            t[static_cast<size_t>(idx)] = x[static_cast<size_t>(i)];
            for (int j = p - 1; j >= 0; --j) {
                if (++x[static_cast<size_t>(j)] < n) break;
                x[static_cast<size_t>(j)] = 0;
            }
        }
        out.push_back(std::move(t));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Tuple> enumerate_thm1b(int n, int p, std::int64_t max_tuples) {
    const std::int64_t size = ipow(n, p);
    std::int64_t total;
    try {
        total = ipow(n, size);
    } catch (const budget_error&) {
        throw budget_error("thm1-b materialization: table space too large");
    }
    if (total > max_tuples) throw budget_error("thm1-b materialization exceeds tuple budget");
    std::vector<Tuple> out;
    Tuple t(static_cast<size_t>(size), 0);
    for (std::int64_t k = 0; k < total; ++k) {
        if (!is_cyclic(FunctionTable{n, p, n, t})) out.push_back(t);
        for (std::int64_t j = size - 1; j >= 0; --j) {
            if (++t[static_cast<size_t>(j)] < n) break;
            t[static_cast<size_t>(j)] = 0;
        }
    }
    return out; // odometer order is lexicographic already
}

std::vector<Tuple> enumerate_thm1c(int n, int p, std::int64_t max_tuples) {
    if (ipow(p, p - 1) > max_tuples)
        throw budget_error("thm1-c materialization exceeds tuple budget");
    const std::int64_t size = ipow(n, p);
    std::vector<Tuple> out;
    Tuple coeff(static_cast<size_t>(p), 0);
    const std::int64_t combos = ipow(p, p);
    for (std::int64_t k = 0; k < combos; ++k) {
        std::int64_t sum = 0;
        for (int a : coeff) sum += a;
        if (sum % p == 1) {
            Tuple t(static_cast<size_t>(size));
            Tuple x(static_cast<size_t>(p), 0);
            for (std::int64_t idx = 0; idx < size; ++idx) {
                std::int64_t dot = 0;
                for (int i = 0; i < p; ++i)
                    dot += static_cast<std::int64_t>(coeff[static_cast<size_t>(i)]) *
                           x[static_cast<size_t>(i)];
                t[static_cast<size_t>(idx)] = static_cast<int>(dot % p);
                for (int j = p - 1; j >= 0; --j) {
                    if (++x[static_cast<size_t>(j)] < n) break;
                    x[static_cast<size_t>(j)] = 0;
                }
            }
            out.push_back(std::move(t));
        }
        for (int j = p - 1; j >= 0; --j) {
            if (++coeff[static_cast<size_t>(j)] < p) break;
            coeff[static_cast<size_t>(j)] = 0;
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace

std::vector<Tuple> enumerate_intensional(const Relation& r, std::int64_t max_tuples) {
    if (r.kind == RelKind::extensional || r.materialized) return r.tuples;
    switch (r.tag) {
        case IntensionalTag::thm1_a: return enumerate_thm1a(r.tag_n, r.tag_p);
        case IntensionalTag::thm1_b: return enumerate_thm1b(r.tag_n, r.tag_p, max_tuples);
        case IntensionalTag::thm1_c: return enumerate_thm1c(r.tag_n, r.tag_p, max_tuples);
    }
    throw precondition_error("enumerate_intensional: unknown tag");
}

void materialize_relation(Relation& r, std::int64_t max_tuples) {
    if (r.kind == RelKind::extensional || r.materialized) return;
    r.tuples = enumerate_intensional(r, max_tuples);
    r.materialized = true;
}

const Relation* Structure::find_relation(const std::string& symbol) const {
    int i = relation_index(symbol);
    return i < 0 ? nullptr : &relations[static_cast<size_t>(i)];
}

int Structure::relation_index(const std::string& symbol) const {
    for (size_t i = 0; i < signature.size(); ++i)
        if (signature[i].name == symbol) return static_cast<int>(i);
    return -1;
}

void validate_structure(const Structure& s) {
    if (s.domain_size < 1) throw parse_error("structure: domain size must be positive");
    if (s.signature.size() != s.relations.size())
        throw parse_error("structure: signature/relation count mismatch");
    for (size_t i = 0; i < s.signature.size(); ++i) {
        const auto& sym = s.signature[i];
        const auto& rel = s.relations[i];
        if (sym.arity < 1) throw parse_error("structure: arity must be >= 1");
        if (sym.name.empty()) throw parse_error("structure: empty relation name");
        for (size_t j = i + 1; j < s.signature.size(); ++j)
            if (s.signature[j].name == sym.name)
                throw parse_error("structure: duplicate relation name " + sym.name);
        if (rel.arity != sym.arity) throw parse_error("structure: relation arity mismatch");
        if (rel.kind == RelKind::extensional) {
            for (const auto& t : rel.tuples) {
                if (static_cast<int>(t.size()) != rel.arity)
                    throw parse_error("structure: tuple arity mismatch");
                for (int v : t)
                    if (v < 0 || v >= s.domain_size)
                        throw parse_error("structure: tuple entry out of domain");
            }
            if (!std::is_sorted(rel.tuples.begin(), rel.tuples.end()))
                throw parse_error("structure: extensional tuples not sorted");
            if (std::adjacent_find(rel.tuples.begin(), rel.tuples.end()) != rel.tuples.end())
                throw parse_error("structure: duplicate tuple");
        } else {
            if (rel.tag_n < 2 || rel.tag_p < 2)
                throw parse_error("structure: intensional parameters must be >= 2");
            int expected_domain =
                (rel.tag == IntensionalTag::thm1_c) ? rel.tag_p : rel.tag_n;
            if (s.domain_size != expected_domain)
                throw parse_error("structure: intensional tag inconsistent with domain size");
            if (static_cast<std::int64_t>(rel.arity) != ipow(rel.tag_n, rel.tag_p))
                throw parse_error("structure: intensional arity must be n^p");
        }
    }
}

bool same_signature(const Structure& a, const Structure& b) {
    if (a.signature.size() != b.signature.size()) return false;
    for (size_t i = 0; i < a.signature.size(); ++i)
        if (a.signature[i].name != b.signature[i].name ||
            a.signature[i].arity != b.signature[i].arity)
            return false;
    return true;
}

Structure materialized_structure(const Structure& s, std::int64_t max_tuples) {
    Structure out = s;
    for (auto& rel : out.relations) {
        if (rel.kind == RelKind::intensional) {
            rel.tuples = enumerate_intensional(rel, max_tuples);
            rel.kind = RelKind::extensional;
            rel.materialized = false;
        }
    }
    return out;
}

Structure power_structure(const Structure& a, int m, std::int64_t budget) {
    if (m < 1) throw precondition_error("power_structure: m must be >= 1");
    for (const auto& rel : a.relations)
        if (rel.kind != RelKind::extensional)
            throw precondition_error("power_structure: relations must be extensional");
    std::int64_t dom = ipow(a.domain_size, m);
    if (dom > budget) throw budget_error("power_structure: domain budget exceeded");

    Structure out;
    out.name = a.name + "^" + std::to_string(m);
    out.domain_size = static_cast<int>(dom);
    out.signature = a.signature;
    for (const auto& rel : a.relations) {
        std::int64_t count = ipow(static_cast<std::int64_t>(rel.tuples.size()), m);
        if (count > budget) throw budget_error("power_structure: tuple budget exceeded");
        std::vector<Tuple> tuples;
        tuples.reserve(static_cast<size_t>(count));
        if (!rel.tuples.empty()) {
            // zip every m-selection of tuples from R componentwise
            std::vector<size_t> sel(static_cast<size_t>(m), 0);
            for (std::int64_t k = 0; k < count; ++k) {
                Tuple t(static_cast<size_t>(rel.arity));
                for (int j = 0; j < rel.arity; ++j) {
                    Tuple elem(static_cast<size_t>(m));
                    for (int i = 0; i < m; ++i)
                        elem[static_cast<size_t>(i)] =
                            rel.tuples[sel[static_cast<size_t>(i)]][static_cast<size_t>(j)];
                    t[static_cast<size_t>(j)] = static_cast<int>(point_index(elem, a.domain_size));
                }
                tuples.push_back(std::move(t));
                for (int i = m - 1; i >= 0; --i) {
                    if (++sel[static_cast<size_t>(i)] < rel.tuples.size()) break;
                    sel[static_cast<size_t>(i)] = 0;
                }
            }
        }
        out.relations.push_back(extensional_relation(rel.arity, std::move(tuples)));
    }
    return out;
}

std::vector<Tuple> max_symmetric_subset(const std::vector<Tuple>& tuples, int arity) {
    if (arity > 8) throw budget_error("max_symmetric_subset: arity budget exceeded (kk <= 8)");
    std::vector<Tuple> sorted = tuples;
    std::sort(sorted.begin(), sorted.end());
    std::vector<Tuple> out;
    std::vector<int> perm(static_cast<size_t>(arity));
    for (const auto& t : sorted) {
        for (int i = 0; i < arity; ++i) perm[static_cast<size_t>(i)] = i;
        bool keep = true;
        do {
            Tuple image(static_cast<size_t>(arity));
            for (int i = 0; i < arity; ++i)
                image[static_cast<size_t>(i)] = t[static_cast<size_t>(perm[static_cast<size_t>(i)])];
            if (!std::binary_search(sorted.begin(), sorted.end(), image)) {
                keep = false;
                break;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (keep) out.push_back(t);
    }
    return out;
}

Relation max_symmetric_subset(const Relation& r) {
    if (r.kind != RelKind::extensional)
        throw precondition_error("max_symmetric_subset: relation must be extensional");
    return extensional_relation(r.arity, max_symmetric_subset(r.tuples, r.arity));
}

} // namespace pcsp
