#include "pcsp/io.hpp"

#include <fstream>
#include <sstream>

namespace pcsp {

namespace {

std::vector<std::string> significant_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        size_t end = line.find_last_not_of(" \t\r");
        lines.push_back(line.substr(begin, end - begin + 1));
    }
    return lines;
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

int parse_int(const std::string& tok, const char* what) {
    try {
        size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) throw parse_error(std::string(what) + ": bad integer " + tok);
        return v;
    } catch (const parse_error&) {
        throw;
    } catch (...) {
        throw parse_error(std::string(what) + ": bad integer " + tok);
    }
}

// "key=value" -> value
std::string kv_value(const std::string& tok, const std::string& key, const char* what) {
    if (tok.size() <= key.size() + 1 || tok.compare(0, key.size(), key) != 0 ||
        tok[key.size()] != '=')
        throw parse_error(std::string(what) + ": expected " + key + "=..., got " + tok);
    return tok.substr(key.size() + 1);
}

std::string tag_name(IntensionalTag tag) {
    switch (tag) {
        case IntensionalTag::thm1_a: return "Thm1-A";
        case IntensionalTag::thm1_b: return "Thm1-B";
        case IntensionalTag::thm1_c: return "Thm1-C";
    }
    return "?";
}

IntensionalTag tag_of_name(const std::string& name) {
    if (name == "Thm1-A") return IntensionalTag::thm1_a;
    if (name == "Thm1-B") return IntensionalTag::thm1_b;
    if (name == "Thm1-C") return IntensionalTag::thm1_c;
    throw parse_error("structure: unknown intensional tag " + name);
}

void append_tuple(std::string& out, const std::vector<int>& t) {
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(t[i]);
    }
    out += '\n';
}

} // namespace

std::string serialize_structure(const Structure& s) {
    std::string out = "structure " + s.name + "\n";
    out += "domain " + std::to_string(s.domain_size) + "\n";
    for (size_t i = 0; i < s.signature.size(); ++i) {
        const auto& sym = s.signature[i];
        const auto& rel = s.relations[i];
        if (rel.kind == RelKind::extensional) {
            out += "relation " + sym.name + " arity " + std::to_string(sym.arity) + " size " +
                   std::to_string(rel.tuples.size()) + "\n";
            for (const auto& t : rel.tuples) append_tuple(out, t);
        } else {
            out += "relation " + sym.name + " arity " + std::to_string(sym.arity) +
                   " intensional " + tag_name(rel.tag) + " n=" + std::to_string(rel.tag_n) +
                   " p=" + std::to_string(rel.tag_p) + "\n";
        }
    }
    out += "end\n";
    return out;
}

namespace {

// Parses one structure block starting at lines[pos]; advances pos past "end".
Structure parse_structure_block(const std::vector<std::string>& lines, size_t& pos) {
    auto need = [&](const char* what) -> const std::string& {
        if (pos >= lines.size()) throw parse_error(std::string("structure: missing ") + what);
        return lines[pos];
    };
    auto header = tokens_of(need("header"));
    if (header.size() != 2 || header[0] != "structure")
        throw parse_error("structure: expected 'structure NAME'");
    Structure s;
    s.name = header[1];
    ++pos;

    auto domain = tokens_of(need("domain line"));
    if (domain.size() != 2 || domain[0] != "domain")
        throw parse_error("structure: expected 'domain K'");
    s.domain_size = parse_int(domain[1], "structure domain");
    ++pos;

    while (true) {
        auto toks = tokens_of(need("relation or end"));
        if (toks.size() == 1 && toks[0] == "end") {
            ++pos;
            break;
        }
        if (toks.size() < 4 || toks[0] != "relation" || toks[2] != "arity")
            throw parse_error("structure: expected 'relation NAME arity A ...'");
        const std::string name = toks[1];
        const int arity = parse_int(toks[3], "relation arity");
        if (toks.size() == 6 && toks[4] == "size") {
            const int count = parse_int(toks[5], "relation size");
            ++pos;
            std::vector<Tuple> tuples;
            tuples.reserve(static_cast<size_t>(count));
            for (int k = 0; k < count; ++k) {
                auto row = tokens_of(need("tuple line"));
                if (static_cast<int>(row.size()) != arity)
                    throw parse_error("structure: tuple arity mismatch in " + name);
                Tuple t(row.size());
                for (size_t j = 0; j < row.size(); ++j) t[j] = parse_int(row[j], "tuple entry");
                tuples.push_back(std::move(t));
                ++pos;
            }
            s.signature.push_back({name, arity});
            s.relations.push_back(extensional_relation(arity, std::move(tuples)));
        } else if (toks.size() == 8 && toks[4] == "intensional") {
            IntensionalTag tag = tag_of_name(toks[5]);
            int n = parse_int(kv_value(toks[6], "n", "structure"), "intensional n");
            int p = parse_int(kv_value(toks[7], "p", "structure"), "intensional p");
            Relation rel = intensional_relation(tag, n, p);
            if (rel.arity != arity)
                throw parse_error("structure: intensional arity mismatch in " + name);
            s.signature.push_back({name, arity});
            s.relations.push_back(std::move(rel));
            ++pos;
        } else {
            throw parse_error("structure: malformed relation line");
        }
    }
    validate_structure(s);
    return s;
}

} // namespace

Structure parse_structure(const std::string& text) {
    auto lines = significant_lines(text);
    size_t pos = 0;
    Structure s = parse_structure_block(lines, pos);
    if (pos != lines.size()) throw parse_error("structure: trailing content");
    return s;
}

std::string serialize_instance(const CspInstance& inst) {
    std::string out = "instance " + inst.name + "\n";
    out += "variables " + std::to_string(inst.variable_count) + "\n";
    for (const auto& c : inst.constraints) {
        out += "constraint " + c.symbol;
        for (int v : c.scope) out += ' ' + std::to_string(v);
        out += '\n';
    }
    out += "end\n";
    return out;
}

CspInstance parse_instance(const std::string& text) {
    auto lines = significant_lines(text);
    size_t pos = 0;
    auto need = [&](const char* what) -> const std::string& {
        if (pos >= lines.size()) throw parse_error(std::string("instance: missing ") + what);
        return lines[pos];
    };
    auto header = tokens_of(need("header"));
    if (header.size() != 2 || header[0] != "instance")
        throw parse_error("instance: expected 'instance NAME'");
    CspInstance inst;
    inst.name = header[1];
    ++pos;
    auto vars = tokens_of(need("variables line"));
    if (vars.size() != 2 || vars[0] != "variables")
        throw parse_error("instance: expected 'variables V'");
    inst.variable_count = parse_int(vars[1], "instance variables");
    ++pos;
    while (true) {
        auto toks = tokens_of(need("constraint or end"));
        if (toks.size() == 1 && toks[0] == "end") {
            ++pos;
            break;
        }
        if (toks.size() < 3 || toks[0] != "constraint")
            throw parse_error("instance: expected 'constraint R v1 ... vK'");
        CspConstraint c;
        c.symbol = toks[1];
        for (size_t j = 2; j < toks.size(); ++j)
            c.scope.push_back(parse_int(toks[j], "constraint variable"));
        inst.constraints.push_back(std::move(c));
        ++pos;
    }
    if (pos != lines.size()) throw parse_error("instance: trailing content");
    validate_instance(inst);
    return inst;
}

namespace {

std::string witness_mode_name(WitnessMode mode) {
    return mode == WitnessMode::constant_forcing ? "constant-forcing" : "exhaustive-cyclic";
}

WitnessMode witness_mode_of(const std::string& name) {
    if (name == "constant-forcing") return WitnessMode::constant_forcing;
    if (name == "exhaustive-cyclic") return WitnessMode::exhaustive_cyclic;
    throw parse_error("witness: unknown mode " + name);
}

ObstructionWitness parse_witness_block(const std::vector<std::string>& lines, size_t& pos) {
    if (pos >= lines.size()) throw parse_error("witness: missing header");
    auto header = tokens_of(lines[pos]);
    if (header.size() != 4 || header[0] != "witness")
        throw parse_error("witness: expected 'witness p=P arity=K mode=MODE'");
    const int p = parse_int(kv_value(header[1], "p", "witness"), "witness p");
    const int arity = parse_int(kv_value(header[2], "arity", "witness"), "witness arity");
    WitnessMode mode = witness_mode_of(kv_value(header[3], "mode", "witness"));
    if (p < 1 || arity < 1) throw parse_error("witness: p and arity must be positive");
    ++pos;
    std::vector<Tuple> rows;
    for (int r = 0; r < arity; ++r) {
        if (pos >= lines.size()) throw parse_error("witness: missing matrix row");
        auto toks = tokens_of(lines[pos]);
        if (static_cast<int>(toks.size()) != p)
            throw parse_error("witness: row length must equal p");
        Tuple row(toks.size());
        for (size_t j = 0; j < toks.size(); ++j) row[j] = parse_int(toks[j], "witness entry");
        rows.push_back(std::move(row));
        ++pos;
    }
    return witness_from_rows(p, mode, rows);
}

} // namespace

std::string serialize_witness(const ObstructionWitness& w) {
    std::string out = "witness p=" + std::to_string(w.p) +
                      " arity=" + std::to_string(w.arity()) +
                      " mode=" + witness_mode_name(w.mode) + "\n";
    for (const auto& row : w.rows()) append_tuple(out, row);
    return out;
}

ObstructionWitness parse_witness(const std::string& text) {
    auto lines = significant_lines(text);
    size_t pos = 0;
    ObstructionWitness w = parse_witness_block(lines, pos);
    if (pos != lines.size()) throw parse_error("witness: trailing content");
    return w;
}

std::string serialize_map(const Homomorphism& h) {
    std::string out = "map " + h.name + "\n";
    out += "source " + std::to_string(h.source_size) + "\n";
    out += "target " + std::to_string(h.target_size) + "\n";
    out += "values";
    for (int v : h.map) out += ' ' + std::to_string(v);
    out += "\nend\n";
    return out;
}

Homomorphism parse_map(const std::string& text) {
    auto lines = significant_lines(text);
    if (lines.size() != 5) throw parse_error("map: expected 5 lines");
    auto header = tokens_of(lines[0]);
    if (header.size() != 2 || header[0] != "map") throw parse_error("map: expected 'map NAME'");
    Homomorphism h;
    h.name = header[1];
    auto src = tokens_of(lines[1]);
    if (src.size() != 2 || src[0] != "source") throw parse_error("map: expected 'source K'");
    h.source_size = parse_int(src[1], "map source");
    auto dst = tokens_of(lines[2]);
    if (dst.size() != 2 || dst[0] != "target") throw parse_error("map: expected 'target L'");
    h.target_size = parse_int(dst[1], "map target");
    auto vals = tokens_of(lines[3]);
    if (vals.empty() || vals[0] != "values") throw parse_error("map: expected 'values ...'");
    for (size_t j = 1; j < vals.size(); ++j) h.map.push_back(parse_int(vals[j], "map value"));
    if (lines[4] != "end") throw parse_error("map: expected 'end'");
    validate_homomorphism(h);
    return h;
}

std::string serialize_matrix(const ModMatrix& m) {
    std::string out = "matrix p=" + std::to_string(m.p) + " rows=" + std::to_string(m.rows) +
                      " cols=" + std::to_string(m.cols) + "\n";
    for (int r = 0; r < m.rows; ++r) {
        for (int c = 0; c < m.cols; ++c) {
            if (c) out += ' ';
            out += std::to_string(m.at(r, c));
        }
        out += '\n';
    }
    return out;
}

ModMatrix parse_matrix(const std::string& text) {
    auto lines = significant_lines(text);
    if (lines.empty()) throw parse_error("matrix: empty input");
    auto header = tokens_of(lines[0]);
    if (header.size() != 4 || header[0] != "matrix")
        throw parse_error("matrix: expected 'matrix p=P rows=R cols=C'");
    const int p = parse_int(kv_value(header[1], "p", "matrix"), "matrix p");
    const int rows = parse_int(kv_value(header[2], "rows", "matrix"), "matrix rows");
    const int cols = parse_int(kv_value(header[3], "cols", "matrix"), "matrix cols");
    if (static_cast<int>(lines.size()) != rows + 1)
        throw parse_error("matrix: row count mismatch");
    ModMatrix m = ModMatrix::zero(p, rows, cols);
    for (int r = 0; r < rows; ++r) {
        auto toks = tokens_of(lines[static_cast<size_t>(r) + 1]);
        if (static_cast<int>(toks.size()) != cols)
            throw parse_error("matrix: column count mismatch");
        for (int c = 0; c < cols; ++c)
            m.at(r, c) = parse_int(toks[static_cast<size_t>(c)], "matrix entry");
    }
    validate_matrix(m);
    return m;
}

std::string serialize_certificate(const Certificate& cert) {
    std::string out = "certificate no-small-sandwich\n";
    out += "p " + std::to_string(cert.p) + "\n";
    out += "route " + cert.route + "\n";
    if (cert.route == "exhaustive")
        out += "candidates " + std::to_string(cert.candidates) + "\n";
    out += serialize_structure(cert.a);
    out += serialize_structure(cert.b);
    if (cert.witness) out += serialize_witness(*cert.witness);
    out += "claim no-cyclic-polymorphism arity=" + std::to_string(cert.p) + "\n";
    out += "claim no-tractable-sandwich below=" + std::to_string(cert.p) + "\n";
    out += "claim csp-np-complete below=" + std::to_string(cert.p) + "\n";
    out += "end certificate\n";
    return out;
}

Certificate parse_certificate(const std::string& text) {
    auto lines = significant_lines(text);
    size_t pos = 0;
    auto need = [&](const char* what) -> const std::string& {
        if (pos >= lines.size()) throw parse_error(std::string("certificate: missing ") + what);
        return lines[pos];
    };
    if (need("header") != "certificate no-small-sandwich")
        throw parse_error("certificate: bad header");
    ++pos;
    Certificate cert;
    {
        auto toks = tokens_of(need("p line"));
        if (toks.size() != 2 || toks[0] != "p") throw parse_error("certificate: expected 'p N'");
        cert.p = parse_int(toks[1], "certificate p");
        ++pos;
    }
    {
        auto toks = tokens_of(need("route line"));
        if (toks.size() != 2 || toks[0] != "route")
            throw parse_error("certificate: expected 'route ...'");
        cert.route = toks[1];
        ++pos;
    }
    if (cert.route == "exhaustive") {
        auto toks = tokens_of(need("candidates line"));
        if (toks.size() != 2 || toks[0] != "candidates")
            throw parse_error("certificate: expected 'candidates N'");
        cert.candidates = std::stoll(toks[1]);
        ++pos;
    } else if (cert.route != "witness") {
        throw parse_error("certificate: unknown route " + cert.route);
    }
    cert.a = parse_structure_block(lines, pos);
    cert.b = parse_structure_block(lines, pos);
    if (cert.route == "witness") cert.witness = parse_witness_block(lines, pos);
    for (int k = 0; k < 3; ++k) {
        auto toks = tokens_of(need("claim line"));
        if (toks.empty() || toks[0] != "claim")
            throw parse_error("certificate: expected claim line");
        ++pos;
    }
    if (need("trailer") != "end certificate") throw parse_error("certificate: bad trailer");
    ++pos;
    if (pos != lines.size()) throw parse_error("certificate: trailing content");
    return cert;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error("cannot write file: " + path);
    out << text;
}

} // namespace pcsp
