#include "pcsp/hom.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace pcsp {

std::int64_t default_budget() {
    static const std::int64_t value = [] {
        if (const char* env = std::getenv("PCSP_BUDGET")) {
            char* end = nullptr;
            long long v = std::strtoll(env, &end, 10);
            if (end && *end == '\0' && v > 0) return static_cast<std::int64_t>(v);
        }
        return std::int64_t{10'000'000};
    }();
    return value;
}

void validate_homomorphism(const Homomorphism& h) {
    if (h.source_size < 0 || h.target_size < 1)
        throw parse_error("map: bad domain sizes");
    if (static_cast<int>(h.map.size()) != h.source_size)
        throw parse_error("map: value count must equal source size");
    for (int v : h.map)
        if (v < 0 || v >= h.target_size) throw parse_error("map: value out of target range");
}

void validate_instance(const CspInstance& inst) {
    if (inst.variable_count < 0) throw parse_error("instance: negative variable count");
    for (const auto& c : inst.constraints) {
        if (c.symbol.empty()) throw parse_error("instance: empty constraint symbol");
        if (c.scope.empty()) throw parse_error("instance: empty scope");
        for (int v : c.scope)
            if (v < 0 || v >= inst.variable_count)
                throw parse_error("instance: variable index out of range");
    }
}

CspInstance instance_of_structure(const Structure& s) {
    CspInstance inst;
    inst.name = s.name;
    inst.variable_count = s.domain_size;
    for (size_t i = 0; i < s.relations.size(); ++i) {
        const auto& rel = s.relations[i];
        if (rel.kind == RelKind::intensional && !rel.materialized)
            throw precondition_error("instance_of_structure: relation " + s.signature[i].name +
                                     " is intensional; materialize first");
        for (const auto& t : rel.tuples)
            inst.constraints.push_back({s.signature[i].name, t});
    }
    return inst;
}

namespace {

Structure materialize_for_source(const Structure& s, std::int64_t budget) {
    bool any = false;
    for (const auto& r : s.relations)
        if (r.kind == RelKind::intensional && !r.materialized) any = true;
    if (!any) return s;
    Structure out = s;
    for (auto& r : out.relations) materialize_relation(r, budget);
    return out;
}

// Backtracking homomorphism search with generalized arc consistency over
// extensional relations. Deterministic: variables in index order, values
// ascending, so the first solution is the lexicographic minimum.
class HomSearch {
  public:
    HomSearch(const CspInstance& inst, const Structure& target, std::int64_t budget)
        : inst_(inst), target_(target), budget_(budget) {
        vars_ = inst.variable_count;
        dom_ = target.domain_size;
        rels_.reserve(inst.constraints.size());
        for (const auto& c : inst.constraints) {
            const Relation* r = target.find_relation(c.symbol);
            if (!r) throw precondition_error("find_homomorphism: unknown symbol " + c.symbol);
            if (static_cast<int>(c.scope.size()) != r->arity)
                throw precondition_error("find_homomorphism: scope arity mismatch for " + c.symbol);
            rels_.push_back(r);
        }
        alive_.assign(static_cast<size_t>(vars_), std::vector<char>(static_cast<size_t>(dom_), 1));
        alive_count_.assign(static_cast<size_t>(vars_), dom_);
        cons_of_var_.assign(static_cast<size_t>(vars_), {});
        for (size_t ci = 0; ci < inst.constraints.size(); ++ci)
            for (int v : inst.constraints[ci].scope)
                cons_of_var_[static_cast<size_t>(v)].push_back(static_cast<int>(ci));
    }

    std::optional<Homomorphism> run() {
        if (dom_ < 1) return std::nullopt;
        if (!propagate_all()) return std::nullopt;
        if (dfs(0)) {
            Homomorphism h;
            h.source_size = vars_;
            h.target_size = dom_;
            h.map.resize(static_cast<size_t>(vars_));
            for (int v = 0; v < vars_; ++v) h.map[static_cast<size_t>(v)] = single_value(v);
            return h;
        }
        return std::nullopt;
    }

  private:
    bool extensional_like(const Relation* r) const {
        return r->kind == RelKind::extensional || r->materialized;
    }

    int single_value(int var) const {
        for (int d = 0; d < dom_; ++d)
            if (alive_[static_cast<size_t>(var)][static_cast<size_t>(d)]) return d;
        return -1;
    }

    void remove_value(int var, int val) {
        alive_[static_cast<size_t>(var)][static_cast<size_t>(val)] = 0;
        --alive_count_[static_cast<size_t>(var)];
        trail_.emplace_back(var, val);
    }

    void undo_to(size_t mark) {
        while (trail_.size() > mark) {
            auto [var, val] = trail_.back();
            trail_.pop_back();
            alive_[static_cast<size_t>(var)][static_cast<size_t>(val)] = 1;
            ++alive_count_[static_cast<size_t>(var)];
        }
    }

    // GAC revision of one extensional constraint; returns false on wipeout.
    bool revise(int ci, std::vector<int>& touched) {
        const auto& scope = inst_.constraints[static_cast<size_t>(ci)].scope;
        const Relation* rel = rels_[static_cast<size_t>(ci)];
        const int k = rel->arity;
        support_.assign(static_cast<size_t>(k) * static_cast<size_t>(dom_), 0);
        for (const auto& t : rel->tuples) {
            bool ok = true;
            for (int j = 0; j < k && ok; ++j) {
                int var = scope[static_cast<size_t>(j)];
                if (!alive_[static_cast<size_t>(var)][static_cast<size_t>(t[static_cast<size_t>(j)])])
                    ok = false;
                // repeated variables must take one value
                for (int j2 = 0; j2 < j && ok; ++j2)
                    if (scope[static_cast<size_t>(j2)] == var &&
                        t[static_cast<size_t>(j2)] != t[static_cast<size_t>(j)])
                        ok = false;
            }
            if (!ok) continue;
            for (int j = 0; j < k; ++j)
                support_[static_cast<size_t>(j) * static_cast<size_t>(dom_) +
                         static_cast<size_t>(t[static_cast<size_t>(j)])] = 1;
        }
        for (int j = 0; j < k; ++j) {
            int var = scope[static_cast<size_t>(j)];
            bool changed = false;
            for (int d = 0; d < dom_; ++d) {
                if (alive_[static_cast<size_t>(var)][static_cast<size_t>(d)] &&
                    !support_[static_cast<size_t>(j) * static_cast<size_t>(dom_) +
                              static_cast<size_t>(d)]) {
                    remove_value(var, d);
                    changed = true;
                }
            }
            if (alive_count_[static_cast<size_t>(var)] == 0) return false;
            if (changed) touched.push_back(var);
        }
        return true;
    }

    bool fully_assigned_ok(int ci) {
        const auto& scope = inst_.constraints[static_cast<size_t>(ci)].scope;
        Tuple t(scope.size());
        for (size_t j = 0; j < scope.size(); ++j) {
            int var = scope[j];
            if (alive_count_[static_cast<size_t>(var)] != 1) return true; // not yet decided
            t[j] = single_value(var);
        }
        return rels_[static_cast<size_t>(ci)]->contains(t);
    }

    bool propagate(const std::vector<int>& seed_vars) {
        std::vector<int> queue = seed_vars;
        std::vector<char> queued(inst_.constraints.size(), 0);
        std::vector<int> cqueue;
        for (int v : queue)
            for (int ci : cons_of_var_[static_cast<size_t>(v)])
                if (!queued[static_cast<size_t>(ci)]) {
                    queued[static_cast<size_t>(ci)] = 1;
                    cqueue.push_back(ci);
                }
        for (size_t qi = 0; qi < cqueue.size(); ++qi) {
            int ci = cqueue[qi];
            queued[static_cast<size_t>(ci)] = 0;
            const Relation* rel = rels_[static_cast<size_t>(ci)];
            std::vector<int> touched;
            if (extensional_like(rel)) {
                if (!revise(ci, touched)) return false;
            } else {
                if (!fully_assigned_ok(ci)) return false;
            }
            for (int v : touched)
                for (int ci2 : cons_of_var_[static_cast<size_t>(v)])
                    if (!queued[static_cast<size_t>(ci2)]) {
                        queued[static_cast<size_t>(ci2)] = 1;
                        cqueue.push_back(ci2);
                    }
        }
        return true;
    }

    bool propagate_all() {
        std::vector<int> all(static_cast<size_t>(vars_));
        std::iota(all.begin(), all.end(), 0);
        return propagate(all);
    }

    bool dfs(int var) {
        if (var == vars_) return true;
        if (--budget_ < 0) throw budget_error("find_homomorphism: node budget exhausted");
        if (alive_count_[static_cast<size_t>(var)] == 1)
            return propagate({var}) ? dfs(var + 1) : false;
        for (int val = 0; val < dom_; ++val) {
            if (!alive_[static_cast<size_t>(var)][static_cast<size_t>(val)]) continue;
            size_t mark = trail_.size();
            for (int other = 0; other < dom_; ++other)
                if (other != val && alive_[static_cast<size_t>(var)][static_cast<size_t>(other)])
                    remove_value(var, other);
            if (propagate({var}) && dfs(var + 1)) return true;
            undo_to(mark);
        }
        return false;
    }

    const CspInstance& inst_;
    const Structure& target_;
    std::int64_t budget_;
    int vars_ = 0;
    int dom_ = 0;
    std::vector<const Relation*> rels_;
    std::vector<std::vector<char>> alive_;
    std::vector<int> alive_count_;
    std::vector<std::vector<int>> cons_of_var_;
    std::vector<std::pair<int, int>> trail_;
    std::vector<char> support_;
};

} // namespace

std::optional<Homomorphism> find_homomorphism(const CspInstance& inst, const Structure& target,
                                              std::int64_t budget) {
    validate_instance(inst);
    HomSearch search(inst, target, budget);
    return search.run();
}

std::optional<Homomorphism> find_homomorphism(const Structure& source, const Structure& target,
                                              std::int64_t budget) {
    if (!same_signature(source, target))
        throw precondition_error("find_homomorphism: signature mismatch");
    Structure src = materialize_for_source(source, budget);
    return find_homomorphism(instance_of_structure(src), target, budget);
}

bool is_homomorphism(const Homomorphism& f, const CspInstance& inst, const Structure& target) {
    validate_homomorphism(f);
    validate_instance(inst);
    if (f.source_size != inst.variable_count || f.target_size != target.domain_size)
        throw precondition_error("is_homomorphism: domain mismatch");
    for (const auto& c : inst.constraints) {
        const Relation* rel = target.find_relation(c.symbol);
        if (!rel) throw precondition_error("is_homomorphism: unknown symbol " + c.symbol);
        if (static_cast<int>(c.scope.size()) != rel->arity)
            throw precondition_error("is_homomorphism: arity mismatch for " + c.symbol);
        Tuple img(c.scope.size());
        for (size_t j = 0; j < c.scope.size(); ++j) img[j] = f.at(c.scope[j]);
        if (!rel->contains(img)) return false;
    }
    return true;
}

bool is_homomorphism(const Homomorphism& f, const Structure& source, const Structure& target) {
    Structure src = materialize_for_source(source, default_budget());
    return is_homomorphism(f, instance_of_structure(src), target);
}

int ObstructionWitness::arity() const {
    return columns.empty() ? 0 : static_cast<int>(columns.front().size());
}

std::vector<Tuple> ObstructionWitness::rows() const {
    const int kk = arity();
    std::vector<Tuple> out(static_cast<size_t>(kk), Tuple(columns.size()));
    for (size_t i = 0; i < columns.size(); ++i)
        for (int j = 0; j < kk; ++j)
            out[static_cast<size_t>(j)][i] = columns[i][static_cast<size_t>(j)];
    return out;
}

ObstructionWitness witness_from_rows(int p, WitnessMode mode, const std::vector<Tuple>& rows) {
    ObstructionWitness w;
    w.p = p;
    w.mode = mode;
    if (p < 1) throw parse_error("witness: p must be positive");
    for (const auto& r : rows)
        if (static_cast<int>(r.size()) != p) throw parse_error("witness: row length must equal p");
    w.columns.assign(static_cast<size_t>(p), Tuple(rows.size()));
    for (size_t j = 0; j < rows.size(); ++j)
        for (int i = 0; i < p; ++i) w.columns[static_cast<size_t>(i)][j] = rows[j][static_cast<size_t>(i)];
    return w;
}

namespace {

// Rotation orbits of [n]^p indexed by point_index; orbit ids are assigned in
// ascending order of the least point in the orbit.
struct OrbitTable {
    std::int64_t points = 0;
    int orbit_count = 0;
    std::vector<std::int32_t> id;
};

OrbitTable build_orbits(int n, int p, std::int64_t point_cap) {
    OrbitTable t;
    t.points = ipow(n, p);
    if (t.points > point_cap) throw budget_error("orbit table exceeds point budget");
    t.id.assign(static_cast<size_t>(t.points), -1);
    const std::int64_t high = t.points / n; // n^(p-1)
    for (std::int64_t idx = 0; idx < t.points; ++idx) {
        if (t.id[static_cast<size_t>(idx)] != -1) continue;
        std::int64_t j = idx;
        do {
            t.id[static_cast<size_t>(j)] = t.orbit_count;
            j = (j % high) * n + j / high; // left rotation
        } while (j != idx);
        ++t.orbit_count;
    }
    return t;
}

const Relation& matching_relation(const Structure& s, int arity, const char* who) {
    for (const auto& r : s.relations)
        if (r.arity == arity) return r;
    throw precondition_error(std::string(who) + ": no relation of matching arity");
}

} // namespace

PolymorphismSearch find_cyclic_polymorphism(const Structure& a, const Structure& b, int p,
                                            std::int64_t budget, bool allow_nonprime) {
    if (!same_signature(a, b))
        throw precondition_error("find_cyclic_polymorphism: signature mismatch");
    if (p < 2) throw precondition_error("find_cyclic_polymorphism: p must be >= 2");
    if (!allow_nonprime && !is_prime(p))
        throw precondition_error("find_cyclic_polymorphism: p must be prime "
                                 "(pass allow_nonprime for exploratory runs)");

    PolymorphismSearch result;
    const int na = a.domain_size;
    const int nb = b.domain_size;

    OrbitTable orbits;
    Structure asrc;
    try {
        orbits = build_orbits(na, p, std::min<std::int64_t>(budget, 4'000'000));
        asrc = materialized_structure(a, budget);
    } catch (const budget_error& e) {
        result.outcome = Outcome::unknown;
        result.stats.note = e.what();
        return result;
    }

    std::int64_t candidates = -1;
    try {
        candidates = ipow(nb, orbits.orbit_count);
    } catch (const budget_error&) {
        candidates = -1; // too large to represent; keep -1
    }
    result.stats.candidates = candidates;

    // Selection atoms: one per p-selection of tuples from a relation of A,
    // stored as the orbit ids of its componentwise points, bucketed by the
    // largest orbit id so each is checked as soon as it is fully assigned.
    std::int64_t total_selections = 0;
    bool precompute = true;
    const std::int64_t sel_cap = std::min<std::int64_t>(budget, 2'000'000);
    for (const auto& rel : asrc.relations) {
        if (rel.tuples.empty()) continue;
        try {
            total_selections += ipow(static_cast<std::int64_t>(rel.tuples.size()), p);
        } catch (const budget_error&) {
            precompute = false;
            break;
        }
        if (total_selections > sel_cap) {
            precompute = false;
            break;
        }
    }

    std::vector<int> values(static_cast<size_t>(orbits.orbit_count), -1);
    std::int64_t nodes = 0;

    auto table_from_values = [&]() {
        FunctionTable f{na, p, nb, {}};
        f.values.resize(static_cast<size_t>(orbits.points));
        for (std::int64_t idx = 0; idx < orbits.points; ++idx)
            f.values[static_cast<size_t>(idx)] =
                values[static_cast<size_t>(orbits.id[static_cast<size_t>(idx)])];
        return f;
    };

    if (precompute) {
        struct Bucket {
            std::vector<std::int32_t> flat; // concatenated orbit scopes
            std::vector<std::int32_t> rel;  // relation index per atom
            std::vector<std::int32_t> off;  // start offset per atom
        };
        std::vector<Bucket> buckets(static_cast<size_t>(orbits.orbit_count));
        for (size_t ri = 0; ri < asrc.relations.size(); ++ri) {
            const auto& rel = asrc.relations[ri];
            const int k = rel.arity;
            if (rel.tuples.empty()) continue;
            std::vector<size_t> sel(static_cast<size_t>(p), 0);
            const std::int64_t count = ipow(static_cast<std::int64_t>(rel.tuples.size()), p);
            Tuple point(static_cast<size_t>(p));
            for (std::int64_t s = 0; s < count; ++s) {
                std::int32_t maxo = 0;
                std::vector<std::int32_t> scope(static_cast<size_t>(k));
                for (int j = 0; j < k; ++j) {
                    for (int i = 0; i < p; ++i)
                        point[static_cast<size_t>(i)] =
                            rel.tuples[sel[static_cast<size_t>(i)]][static_cast<size_t>(j)];
                    std::int32_t o = orbits.id[static_cast<size_t>(point_index(point, na))];
                    scope[static_cast<size_t>(j)] = o;
                    maxo = std::max(maxo, o);
                }
                auto& bucket = buckets[static_cast<size_t>(maxo)];
                bucket.rel.push_back(static_cast<std::int32_t>(ri));
                bucket.off.push_back(static_cast<std::int32_t>(bucket.flat.size()));
                bucket.flat.insert(bucket.flat.end(), scope.begin(), scope.end());
                for (int i = p - 1; i >= 0; --i) {
                    if (++sel[static_cast<size_t>(i)] < rel.tuples.size()) break;
                    sel[static_cast<size_t>(i)] = 0;
                }
            }
        }

        Tuple image;
        auto bucket_ok = [&](int depth) {
            const auto& bucket = buckets[static_cast<size_t>(depth)];
            for (size_t ai = 0; ai < bucket.rel.size(); ++ai) {
                const auto& brel = b.relations[static_cast<size_t>(bucket.rel[ai])];
                const int k = brel.arity;
                image.resize(static_cast<size_t>(k));
                const std::int32_t* scope = bucket.flat.data() + bucket.off[ai];
                for (int j = 0; j < k; ++j)
                    image[static_cast<size_t>(j)] = values[static_cast<size_t>(scope[j])];
                if (!brel.contains(image)) return false;
            }
            return true;
        };

        bool exhausted = true;
        std::optional<FunctionTable> found;
        auto dfs = [&](auto&& self, int depth) -> bool {
            if (depth == orbits.orbit_count) {
                found = table_from_values();
                return true;
            }
            if (++nodes > budget) {
                exhausted = false;
                throw budget_error("cyclic polymorphism search: node budget exhausted");
            }
            for (int v = 0; v < nb; ++v) {
                values[static_cast<size_t>(depth)] = v;
                if (bucket_ok(depth) && self(self, depth + 1)) return true;
            }
            values[static_cast<size_t>(depth)] = -1;
            return false;
        };

        try {
            if (dfs(dfs, 0)) {
                result.outcome = Outcome::found;
                result.table = std::move(found);
            } else {
                result.outcome = Outcome::refuted_exhaustively;
            }
        } catch (const budget_error& e) {
            result.outcome = Outcome::unknown;
            result.stats.note = e.what();
        }
        result.stats.nodes = nodes;
        if (result.outcome == Outcome::found) {
            // soundness re-check
            if (!is_cyclic(*result.table))
                throw precondition_error("internal: found table is not cyclic");
        }
        return result;
    }

    // Selections too numerous to enumerate up front: descend to full
    // assignments and sweep selections lazily with early abort.
    Tuple image, point(static_cast<size_t>(p));
    auto leaf_ok = [&]() {
        for (size_t ri = 0; ri < asrc.relations.size(); ++ri) {
            const auto& rel = asrc.relations[ri];
            const auto& brel = b.relations[ri];
            if (rel.tuples.empty()) continue;
            const int k = rel.arity;
            std::vector<size_t> sel(static_cast<size_t>(p), 0);
            image.resize(static_cast<size_t>(k));
            while (true) {
                if (++nodes > budget)
                    throw budget_error("cyclic polymorphism search: selection budget exhausted");
                bool ok = true;
                for (int j = 0; j < k && ok; ++j) {
                    for (int i = 0; i < p; ++i)
                        point[static_cast<size_t>(i)] =
                            rel.tuples[sel[static_cast<size_t>(i)]][static_cast<size_t>(j)];
                    image[static_cast<size_t>(j)] =
                        values[static_cast<size_t>(orbits.id[static_cast<size_t>(point_index(point, na))])];
                }
                if (!brel.contains(image)) return false;
                int i = p - 1;
                for (; i >= 0; --i) {
                    if (++sel[static_cast<size_t>(i)] < rel.tuples.size()) break;
                    sel[static_cast<size_t>(i)] = 0;
                }
                if (i < 0) break;
            }
        }
        return true;
    };

    std::optional<FunctionTable> found;
    auto dfs = [&](auto&& self, int depth) -> bool {
        if (depth == orbits.orbit_count) {
            if (leaf_ok()) {
                found = table_from_values();
                return true;
            }
            return false;
        }
        if (++nodes > budget)
            throw budget_error("cyclic polymorphism search: node budget exhausted");
        for (int v = 0; v < nb; ++v) {
            values[static_cast<size_t>(depth)] = v;
            if (self(self, depth + 1)) return true;
        }
        values[static_cast<size_t>(depth)] = -1;
        return false;
    };

    try {
        if (dfs(dfs, 0)) {
            result.outcome = Outcome::found;
            result.table = std::move(found);
        } else {
            result.outcome = Outcome::refuted_exhaustively;
        }
    } catch (const budget_error& e) {
        result.outcome = Outcome::unknown;
        result.stats.note = e.what();
    }
    result.stats.nodes = nodes;
    return result;
}

WitnessCheck verify_obstruction_witness(const Structure& a, const Structure& b,
                                        const ObstructionWitness& w, std::int64_t budget) {
    if (!same_signature(a, b))
        throw precondition_error("verify_obstruction_witness: signature mismatch");
    if (w.columns.empty()) throw precondition_error("verify_obstruction_witness: empty witness");
    if (static_cast<int>(w.columns.size()) != w.p)
        throw precondition_error("verify_obstruction_witness: column count must equal p");
    const int kk = w.arity();
    for (const auto& col : w.columns)
        if (static_cast<int>(col.size()) != kk)
            throw precondition_error("verify_obstruction_witness: ragged columns");

    const Relation& ra = matching_relation(a, kk, "verify_obstruction_witness");
    const Relation& rb = matching_relation(b, kk, "verify_obstruction_witness");

    for (const auto& col : w.columns) {
        for (int v : col)
            if (v < 0 || v >= a.domain_size)
                return {false, "column entry outside domain of A"};
        if (!ra.contains(col)) return {false, "column not in R^A"};
    }

    const auto rows = w.rows();
    if (w.mode == WitnessMode::constant_forcing) {
        for (int j = 0; j + 1 < kk; ++j) {
            Tuple rot(rows[static_cast<size_t>(j)].begin() + 1, rows[static_cast<size_t>(j)].end());
            rot.push_back(rows[static_cast<size_t>(j)].front());
            if (rot != rows[static_cast<size_t>(j + 1)])
                return {false, "rows are not successive left rotations"};
        }
        for (int c = 0; c < b.domain_size; ++c) {
            Tuple constant(static_cast<size_t>(kk), c);
            if (rb.contains(constant))
                return {false, "constant tuple in R^B (value " + std::to_string(c) + ")"};
        }
        return {true, ""};
    }

    // exhaustive_cyclic: every cyclic p-ary table must map the rows to a
    // tuple outside R^B.
    OrbitTable orbits = build_orbits(a.domain_size, w.p, std::min<std::int64_t>(budget, 4'000'000));
    std::int64_t count = ipow(b.domain_size, orbits.orbit_count);
    if (count > budget)
        throw budget_error("verify_obstruction_witness: cyclic candidate space exceeds budget");
    std::vector<std::int32_t> row_orbit(static_cast<size_t>(kk));
    for (int j = 0; j < kk; ++j)
        row_orbit[static_cast<size_t>(j)] =
            orbits.id[static_cast<size_t>(point_index(rows[static_cast<size_t>(j)], a.domain_size))];
    std::vector<int> values(static_cast<size_t>(orbits.orbit_count), 0);
    Tuple image(static_cast<size_t>(kk));
    for (std::int64_t c = 0; c < count; ++c) {
        for (int j = 0; j < kk; ++j)
            image[static_cast<size_t>(j)] = values[static_cast<size_t>(row_orbit[static_cast<size_t>(j)])];
        if (rb.contains(image))
            return {false, "a cyclic table maps the witness into R^B"};
        for (int i = orbits.orbit_count - 1; i >= 0; --i) {
            if (++values[static_cast<size_t>(i)] < b.domain_size) break;
            values[static_cast<size_t>(i)] = 0;
        }
    }
    return {true, ""};
}

FunctionTable compose_cyclic(const Homomorphism& r, const FunctionTable& t, const Homomorphism& s,
                             std::int64_t budget) {
    validate_homomorphism(r);
    validate_homomorphism(s);
    validate_table(t);
    if (t.m != t.n) throw precondition_error("compose_cyclic: middle table must act on one domain");
    if (r.target_size != t.n || s.source_size != t.n)
        throw precondition_error("compose_cyclic: domain mismatch");
    if (!is_cyclic(t)) throw precondition_error("compose_cyclic: middle table is not cyclic");

    FunctionTable f;
    f.n = r.source_size;
    f.p = t.p;
    f.m = s.target_size;
    const std::int64_t points = ipow(f.n, f.p);
    if (points > budget) throw budget_error("compose_cyclic: output table exceeds budget");
    f.values.resize(static_cast<size_t>(points));
    Tuple x(static_cast<size_t>(f.p), 0), y(static_cast<size_t>(f.p));
    for (std::int64_t idx = 0; idx < points; ++idx) {
        for (int i = 0; i < f.p; ++i)
            y[static_cast<size_t>(i)] = r.at(x[static_cast<size_t>(i)]);
        f.values[static_cast<size_t>(idx)] = s.at(t.at(y));
        for (int i = f.p - 1; i >= 0; --i) {
            if (++x[static_cast<size_t>(i)] < f.n) break;
            x[static_cast<size_t>(i)] = 0;
        }
    }
    return f;
}

PolymorphismSearch find_majority_polymorphism(const Structure& a, std::int64_t budget) {
    PolymorphismSearch result;
    Structure src;
    try {
        src = materialized_structure(a, budget);
    } catch (const budget_error& e) {
        result.outcome = Outcome::unknown;
        result.stats.note = e.what();
        return result;
    }
    const int n = a.domain_size;
    const std::int64_t points = ipow(n, 3);

    std::vector<int> fixed(static_cast<size_t>(points), -1);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            fixed[static_cast<size_t>(point_index({x, x, y}, n))] = x;
            fixed[static_cast<size_t>(point_index({x, y, x}, n))] = x;
            fixed[static_cast<size_t>(point_index({y, x, x}, n))] = x;
        }
    std::vector<std::int32_t> free_order(static_cast<size_t>(points), -1);
    int free_count = 0;
    for (std::int64_t i = 0; i < points; ++i)
        if (fixed[static_cast<size_t>(i)] < 0) free_order[static_cast<size_t>(i)] = free_count++;

    try {
        result.stats.candidates = ipow(n, free_count);
    } catch (const budget_error&) {
        result.stats.candidates = -1;
    }

    // Atoms bucketed by the last free point they mention; atoms with no free
    // point are checked before the search starts.
    struct Atom {
        std::int32_t rel;
        std::vector<std::int32_t> cells; // free id, or -(value+1) when fixed
    };
    std::vector<std::vector<Atom>> buckets(static_cast<size_t>(std::max(free_count, 1)));
    std::vector<Atom> ground;
    const std::int64_t sel_cap = std::min<std::int64_t>(budget, 2'000'000);
    std::int64_t total = 0;
    for (size_t ri = 0; ri < src.relations.size(); ++ri) {
        const auto& rel = src.relations[ri];
        if (rel.tuples.empty()) continue;
        std::int64_t count = static_cast<std::int64_t>(rel.tuples.size());
        count = count * static_cast<std::int64_t>(rel.tuples.size()) *
                static_cast<std::int64_t>(rel.tuples.size());
        total += count;
        if (total > sel_cap) {
            result.outcome = Outcome::unknown;
            result.stats.note = "selection space exceeds budget";
            return result;
        }
        const int k = rel.arity;
        for (size_t s1 = 0; s1 < rel.tuples.size(); ++s1)
            for (size_t s2 = 0; s2 < rel.tuples.size(); ++s2)
                for (size_t s3 = 0; s3 < rel.tuples.size(); ++s3) {
                    Atom atom;
                    atom.rel = static_cast<std::int32_t>(ri);
                    atom.cells.resize(static_cast<size_t>(k));
                    std::int32_t last_free = -1;
                    for (int j = 0; j < k; ++j) {
                        std::int64_t idx = point_index({rel.tuples[s1][static_cast<size_t>(j)],
                                                        rel.tuples[s2][static_cast<size_t>(j)],
                                                        rel.tuples[s3][static_cast<size_t>(j)]},
                                                       n);
                        if (fixed[static_cast<size_t>(idx)] >= 0) {
                            atom.cells[static_cast<size_t>(j)] =
                                -(fixed[static_cast<size_t>(idx)] + 1);
                        } else {
                            std::int32_t fid = free_order[static_cast<size_t>(idx)];
                            atom.cells[static_cast<size_t>(j)] = fid;
                            last_free = std::max(last_free, fid);
                        }
                    }
                    if (last_free < 0)
                        ground.push_back(std::move(atom));
                    else
                        buckets[static_cast<size_t>(last_free)].push_back(std::move(atom));
                }
    }

    std::vector<int> values(static_cast<size_t>(std::max(free_count, 1)), -1);
    Tuple image;
    auto atom_ok = [&](const Atom& atom) {
        const auto& brel = src.relations[static_cast<size_t>(atom.rel)];
        image.resize(atom.cells.size());
        for (size_t j = 0; j < atom.cells.size(); ++j) {
            std::int32_t cell = atom.cells[j];
            image[j] = cell < 0 ? -(cell + 1) : values[static_cast<size_t>(cell)];
        }
        return brel.contains(image);
    };

    for (const auto& atom : ground) {
        if (!atom_ok(atom)) {
            result.outcome = Outcome::refuted_exhaustively;
            result.stats.note = "majority identities alone violate a constraint";
            return result;
        }
    }

    std::int64_t nodes = 0;
    auto dfs = [&](auto&& self, int depth) -> bool {
        if (depth == free_count) return true;
        if (++nodes > budget)
            throw budget_error("majority search: node budget exhausted");
        for (int v = 0; v < n; ++v) {
            values[static_cast<size_t>(depth)] = v;
            bool ok = true;
            for (const auto& atom : buckets[static_cast<size_t>(depth)])
                if (!atom_ok(atom)) {
                    ok = false;
                    break;
                }
            if (ok && self(self, depth + 1)) return true;
        }
        values[static_cast<size_t>(depth)] = -1;
        return false;
    };

    try {
        if (dfs(dfs, 0)) {
            FunctionTable f{n, 3, n, {}};
            f.values.resize(static_cast<size_t>(points));
            for (std::int64_t i = 0; i < points; ++i)
                f.values[static_cast<size_t>(i)] =
                    fixed[static_cast<size_t>(i)] >= 0
                        ? fixed[static_cast<size_t>(i)]
                        : values[static_cast<size_t>(free_order[static_cast<size_t>(i)])];
            result.outcome = Outcome::found;
            result.table = std::move(f);
        } else {
            result.outcome = Outcome::refuted_exhaustively;
        }
    } catch (const budget_error& e) {
        result.outcome = Outcome::unknown;
        result.stats.note = e.what();
    }
    result.stats.nodes = nodes;
    return result;
}

SandwichCheck check_sandwich(const Structure& a, const Structure& c, const Structure& b,
                             std::int64_t budget) {
    if (!same_signature(a, c) || !same_signature(c, b))
        throw precondition_error("check_sandwich: signature mismatch");
    SandwichCheck out;
    out.left = find_homomorphism(a, c, budget);
    if (!out.left) {
        out.failed = SandwichCheck::Side::left;
        return out;
    }
    out.right = find_homomorphism(c, b, budget);
    if (!out.right) {
        out.failed = SandwichCheck::Side::right;
        out.left.reset();
        return out;
    }
    out.ok = true;
    return out;
}

namespace {

Structure induced_substructure(const Structure& s, const std::vector<int>& vertices) {
    std::vector<int> relabel(static_cast<size_t>(s.domain_size), -1);
    for (size_t i = 0; i < vertices.size(); ++i)
        relabel[static_cast<size_t>(vertices[i])] = static_cast<int>(i);
    Structure out;
    out.name = s.name;
    out.domain_size = static_cast<int>(vertices.size());
    out.signature = s.signature;
    for (const auto& rel : s.relations) {
        std::vector<Tuple> kept;
        for (const auto& t : rel.tuples) {
            bool inside = true;
            Tuple img(t.size());
            for (size_t j = 0; j < t.size() && inside; ++j) {
                int v = relabel[static_cast<size_t>(t[j])];
                if (v < 0)
                    inside = false;
                else
                    img[j] = v;
            }
            if (inside) kept.push_back(std::move(img));
        }
        out.relations.push_back(extensional_relation(rel.arity, std::move(kept)));
    }
    return out;
}

bool next_combination(std::vector<int>& c, int n) {
    const int k = static_cast<int>(c.size());
    for (int i = k - 1; i >= 0; --i) {
        if (c[static_cast<size_t>(i)] < n - (k - i)) {
            ++c[static_cast<size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                c[static_cast<size_t>(j)] = c[static_cast<size_t>(j - 1)] + 1;
            return true;
        }
    }
    return false;
}

} // namespace

CoreResult core_of(const Structure& a, std::int64_t budget) {
    CoreResult result;
    Structure work;
    try {
        work = materialized_structure(a, budget);
    } catch (const budget_error& e) {
        result.stats.note = e.what();
        return result;
    }
    if (a.domain_size > 12) {
        result.stats.note = "domain too large for core computation";
        return result;
    }

    try {
        // shrink greedily: drop any vertex the structure retracts away from
        bool changed = true;
        while (changed && work.domain_size > 1) {
            changed = false;
            for (int v = 0; v < work.domain_size; ++v) {
                std::vector<int> rest;
                for (int u = 0; u < work.domain_size; ++u)
                    if (u != v) rest.push_back(u);
                Structure sub = induced_substructure(work, rest);
                if (find_homomorphism(work, sub, budget)) {
                    work = std::move(sub);
                    changed = true;
                    break;
                }
            }
        }
        const int k = work.domain_size;

        // canonical representative: lexicographically least k-subset of the
        // original domain that carries a homomorphic image
        Structure base = materialized_structure(a, budget);
        std::vector<int> subset(static_cast<size_t>(k));
        std::iota(subset.begin(), subset.end(), 0);
        do {
            Structure sub = induced_substructure(base, subset);
            if (find_homomorphism(base, sub, budget)) {
                result.outcome = Outcome::found;
                result.core = std::move(sub);
                result.vertices = subset;
                return result;
            }
        } while (next_combination(subset, base.domain_size));
        throw precondition_error("internal: no core subset found");
    } catch (const budget_error& e) {
        result.outcome = Outcome::unknown;
        result.stats.note = e.what();
        return result;
    }
}

bool is_isomorphic(const Structure& a, const Structure& b) {
    if (!same_signature(a, b)) return false;
    if (a.domain_size != b.domain_size) return false;
    if (a.domain_size > 8) throw budget_error("is_isomorphic: domain too large");
    Structure sa = materialized_structure(a, default_budget());
    Structure sb = materialized_structure(b, default_budget());
    for (size_t i = 0; i < sa.relations.size(); ++i)
        if (sa.relations[i].tuples.size() != sb.relations[i].tuples.size()) return false;
    std::vector<int> perm(static_cast<size_t>(a.domain_size));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (size_t i = 0; i < sa.relations.size() && ok; ++i) {
            std::vector<Tuple> image;
            image.reserve(sa.relations[i].tuples.size());
            for (const auto& t : sa.relations[i].tuples) {
                Tuple m(t.size());
                for (size_t j = 0; j < t.size(); ++j)
                    m[j] = perm[static_cast<size_t>(t[j])];
                image.push_back(std::move(m));
            }
            std::sort(image.begin(), image.end());
            if (image != sb.relations[i].tuples) ok = false;
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

} // namespace pcsp
