#include "modlie/json_io.hpp"

#include <fstream>
#include <sstream>

#include "modlie/errors.hpp"

namespace modlie {

namespace {

Json sparse_to_json(const SuperAlgebra& g, const SparseVec& v) {
    Json arr = Json::array();
    for (const auto& [k, c] : v) arr.push_back({{"coef", c.str()}, {"k", g.basis(k).name}});
    return arr;
}

Json vec_to_json(const SuperAlgebra& g, const Vec& v) {
    Json arr = Json::array();
    for (size_t k = 0; k < v.size(); ++k)
        if (!v[k].is_zero())
            arr.push_back({{"coef", v[k].str()}, {"k", g.basis(static_cast<int>(k)).name}});
    return arr;
}

SparseVec sparse_from_json(const SuperAlgebra& g, const Json& arr) {
    SparseVec v;
    for (const auto& entry : arr) {
        std::string name = entry.at("k").get<std::string>();
        int k = g.index_of(name);
        if (k < 0) throw ParseError("unknown basis element " + name);
        Scalar c = parse_scalar(g.ring(), entry.at("coef").get<std::string>());
        if (!c.is_zero()) v[k] = c;
    }
    return v;
}

Vec vec_from_json(const SuperAlgebra& g, const Json& arr) {
    Vec v = g.zero_vec();
    for (const auto& [k, c] : sparse_from_json(g, arr)) v[k] = c;
    return v;
}

}  // namespace

Json algebra_to_json(const SuperAlgebra& g) {
    const RingPtr& ring = g.ring();
    Json j;
    j["p"] = g.p();
    if (ring->field()->degree() > 1) j["field"] = {{"p", g.p()}, {"k", ring->field()->degree()}};
    Json params;
    Json even = Json::array(), inv = Json::array(), odd = Json::array();
    for (int i = 0; i < ring->generator_count(); ++i) {
        if (ring->is_odd_gen(i))
            odd.push_back(ring->name(i));
        else if (ring->is_invertible_gen(i))
            inv.push_back(ring->name(i));
        else
            even.push_back(ring->name(i));
    }
    params["even"] = even;
    params["invertible"] = inv;
    params["odd"] = odd;
    j["parameters"] = params;
    Json basis = Json::array();
    for (int i = 0; i < g.dim(); ++i) {
        Json b;
        b["name"] = g.basis(i).name;
        b["parity"] = g.basis(i).parity == Parity::Odd ? "odd" : "even";
        if (g.basis(i).weight) b["weight"] = *g.basis(i).weight;
        if (g.basis(i).degree) b["degree"] = *g.basis(i).degree;
        basis.push_back(std::move(b));
    }
    j["basis"] = basis;
    Json brackets = Json::array();
    for (const auto& [key, value] : g.table()) {
        Json e;
        e["i"] = g.basis(key.first).name;
        e["j"] = g.basis(key.second).name;
        e["value"] = sparse_to_json(g, value);
        brackets.push_back(std::move(e));
    }
    j["brackets"] = brackets;
    return j;
}

SuperAlgebra algebra_from_json(const Json& j) {
    try {
        int p = j.at("p").get<int>();
        int k = 1;
        if (j.contains("field")) k = j.at("field").value("k", 1);
        const GaloisField* f = GaloisField::get(p, k);
        std::vector<std::string> even, inv, odd;
        if (j.contains("parameters")) {
            const Json& params = j.at("parameters");
            for (const auto& n : params.value("even", Json::array())) even.push_back(n);
            for (const auto& n : params.value("invertible", Json::array())) inv.push_back(n);
            for (const auto& n : params.value("odd", Json::array())) odd.push_back(n);
        }
        RingPtr ring = ParameterRing::make(f, even, inv, odd);
        std::vector<BasisElement> basis;
        for (const auto& b : j.at("basis")) {
            BasisElement e;
            e.name = b.at("name").get<std::string>();
            std::string par = b.value("parity", "even");
            if (par != "even" && par != "odd") throw ParseError("bad parity " + par);
            e.parity = par == "odd" ? Parity::Odd : Parity::Even;
            if (b.contains("weight")) e.weight = b.at("weight").get<std::vector<int>>();
            if (b.contains("degree")) e.degree = b.at("degree").get<int>();
            basis.push_back(std::move(e));
        }
        SuperAlgebra g(ring, std::move(basis));
        for (const auto& e : j.value("brackets", Json::array())) {
            std::string in = e.at("i").get<std::string>(), jn = e.at("j").get<std::string>();
            int bi = g.index_of(in), bj = g.index_of(jn);
            if (bi < 0 || bj < 0) throw ParseError("bracket names unknown element " + in + "," + jn);
            g.set_bracket(bi, bj, sparse_from_json(g, e.at("value")));
        }
        g.finalize();
        return g;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("algebra json: ") + e.what());
    }
}

Json pmap_to_json(const SuperAlgebra& g, const PMap& pm) {
    Json j;
    Json even = Json::object(), odd = Json::object();
    for (const auto& [i, v] : pm.even_powers) even[g.basis(i).name] = vec_to_json(g, v);
    for (const auto& [i, v] : pm.odd_powers) odd[g.basis(i).name] = vec_to_json(g, v);
    j["even"] = even;
    j["odd"] = odd;
    Json center = Json::array();
    for (const Vec& z : pm.center) center.push_back(vec_to_json(g, z));
    j["center"] = center;
    return j;
}

PMap pmap_from_json(const SuperAlgebra& g, const Json& j) {
    try {
        PMap pm;
        for (const auto& [name, arr] : j.value("even", Json::object()).items()) {
            int i = g.index_of(name);
            if (i < 0) throw ParseError("unknown element " + name);
            pm.even_powers[i] = vec_from_json(g, arr);
        }
        for (const auto& [name, arr] : j.value("odd", Json::object()).items()) {
            int i = g.index_of(name);
            if (i < 0) throw ParseError("unknown element " + name);
            pm.odd_powers[i] = vec_from_json(g, arr);
        }
        for (const auto& arr : j.value("center", Json::array()))
            pm.center.push_back(vec_from_json(g, arr));
        pm.has_ambiguity = !pm.center.empty();
        return pm;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("pmap json: ") + e.what());
    }
}

Json cocycle_to_json(const SuperAlgebra& g, const Cocycle& c) {
    Json j;
    j["parameter"] = c.parameter;
    j["parameter_parity"] = c.parameter_parity == Parity::Odd ? "odd" : "even";
    j["shift"] = c.shift == Parity::Odd ? "odd" : "even";
    if (c.degree) j["degree"] = *c.degree;
    Json entries = Json::array();
    for (const auto& [key, value] : c.entries) {
        Json e;
        e["i"] = g.basis(key.first).name;
        e["j"] = g.basis(key.second).name;
        e["value"] = sparse_to_json(g, value);
        entries.push_back(std::move(e));
    }
    j["entries"] = entries;
    return j;
}

Cocycle cocycle_from_json(const SuperAlgebra& g, const Json& j) {
    try {
        Cocycle c;
        c.parameter = j.at("parameter").get<std::string>();
        c.parameter_parity = j.value("parameter_parity", "even") == std::string("odd")
                                 ? Parity::Odd
                                 : Parity::Even;
        c.shift = j.value("shift", "even") == std::string("odd") ? Parity::Odd : Parity::Even;
        if (j.contains("degree")) c.degree = j.at("degree").get<int>();
        for (const auto& e : j.value("entries", Json::array())) {
            std::string in = e.at("i").get<std::string>(), jn = e.at("j").get<std::string>();
            int bi = g.index_of(in), bj = g.index_of(jn);
            if (bi < 0 || bj < 0) throw ParseError("cocycle names unknown element");
            SparseVec v = sparse_from_json(g, e.at("value"));
            if (bi > bj) {
                bool both_odd = g.basis(bi).parity == Parity::Odd && g.basis(bj).parity == Parity::Odd;
                std::swap(bi, bj);
                if (!both_odd)
                    for (auto& [k, s] : v) s = -s;
            }
            c.entries[{bi, bj}] = std::move(v);
        }
        return c;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("cocycle json: ") + e.what());
    }
}

LemmaExpectation expectation_from_json(const Json& j) {
    try {
        LemmaExpectation ex;
        ex.algebra_id = j.value("algebra", "");
        ex.torus_identity = j.value("torus_identity", true);
        ex.others_vanish = j.value("others_vanish", true);
        for (const auto& [name, text] : j.value("exceptional", Json::object()).items())
            ex.exceptional[name] = text.get<std::string>();
        for (const auto& zc : j.value("center", Json::array())) {
            std::map<std::string, std::string> z;
            for (const auto& [name, text] : zc.items()) z[name] = text.get<std::string>();
            ex.center.push_back(std::move(z));
        }
        return ex;
    } catch (const Json::exception& e) {
        throw ParseError(std::string("expectation json: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// textual forms

namespace {

// split on a separator at paren depth zero
std::vector<std::string> split_top(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    int depth = 0;
    for (char ch : s) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == sep && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    size_t b = s.find_last_not_of(" \t");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

// terms of a sum, each with its sign folded in
std::vector<std::string> sum_terms(const std::string& s) {
    std::vector<std::string> terms;
    std::string cur;
    int depth = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        char ch = s[i];
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if ((ch == '+' || ch == '-') && depth == 0 && !trim(cur).empty() &&
            !(i > 0 && (s[i - 1] == '^' || s[i - 1] == '*'))) {
            terms.push_back(trim(cur));
            cur = (ch == '-') ? "-" : "";
        } else if ((ch == '+' || ch == '-') && depth == 0 && trim(cur).empty()) {
            cur = (ch == '-') ? "-" : "";
        } else {
            cur += ch;
        }
    }
    if (!trim(cur).empty()) terms.push_back(trim(cur));
    return terms;
}

}  // namespace

Vec parse_vector_combo(const SuperAlgebra& g, const std::string& text) {
    Vec v = g.zero_vec();
    std::string t = trim(text);
    if (t.empty() || t == "0") return v;
    for (const std::string& raw : sum_terms(t)) {
        bool neg = !raw.empty() && raw[0] == '-';
        std::string body = trim(neg ? raw.substr(1) : raw);
        std::vector<std::string> factors = split_top(body, '*');
        if (factors.empty()) throw ParseError("empty term in '" + text + "'");
        std::string last = trim(factors.back());
        int k = g.index_of(last);
        if (k < 0) throw ParseError("term does not end in a basis element: '" + raw + "'");
        std::string coeff;
        for (size_t i = 0; i + 1 < factors.size(); ++i) {
            if (i) coeff += "*";
            coeff += trim(factors[i]);
        }
        if (coeff.empty()) coeff = "1";
        Scalar c = parse_scalar(g.ring(), coeff);
        if (neg) c = -c;
        v[k] = v[k] + c;
    }
    return v;
}

std::string descriptor_header(const DPDescriptor& d) {
    std::ostringstream os;
    os << "O(m=" << d.m << ";N=[";
    for (int i = 0; i < d.m; ++i) os << (i ? "," : "") << d.heights[i];
    os << "]|n=" << d.n_odd << ";p=" << d.p();
    if (!d.even_names.empty()) {
        os << ";vars=[";
        for (int i = 0; i < d.m; ++i) os << (i ? "," : "") << d.even_names[i];
        os << "]";
    }
    os << ")";
    return os.str();
}

DescriptorPtr parse_descriptor_header(const std::string& text, RingPtr ring) {
    std::string t = trim(text);
    if (t.size() < 4 || t.substr(0, 2) != "O(" || t.back() != ')')
        throw ParseError("descriptor header must look like O(m=..;N=[..]|n=..;p=..)");
    std::string body = t.substr(2, t.size() - 3);
    int m = -1, n = -1, p = -1;
    std::vector<int> heights;
    std::vector<std::string> vars;
    for (std::string& part : split_top(body, ';')) {
        for (std::string& piece : split_top(part, '|')) {
            std::string kv = trim(piece);
            size_t eq = kv.find('=');
            if (eq == std::string::npos) throw ParseError("bad descriptor field '" + kv + "'");
            std::string key = trim(kv.substr(0, eq)), value = trim(kv.substr(eq + 1));
            if (key == "m") m = std::stoi(value);
            else if (key == "n") n = std::stoi(value);
            else if (key == "p") p = std::stoi(value);
            else if (key == "N" || key == "vars") {
                if (value.size() < 2 || value.front() != '[' || value.back() != ']')
                    throw ParseError("bad list in descriptor: " + value);
                for (std::string& item : split_top(value.substr(1, value.size() - 2), ',')) {
                    if (key == "N")
                        heights.push_back(std::stoi(trim(item)));
                    else
                        vars.push_back(trim(item));
                }
            } else {
                throw ParseError("unknown descriptor field '" + key + "'");
            }
        }
    }
    if (m < 0 || n < 0 || p < 0 || static_cast<int>(heights.size()) != m)
        throw ParseError("incomplete descriptor header: " + text);
    return make_descriptor(p, heights, n, std::move(ring), std::move(vars));
}

DPElement parse_dp(const DescriptorPtr& d, const std::string& text) {
    DPElement out(d);
    std::string t = trim(text);
    if (t.empty() || t == "0") return out;
    auto var_index = [&](const std::string& name) {
        for (int i = 0; i < d->m + d->n_odd; ++i)
            if (d->var_name(i) == name) return i;
        return -1;
    };
    for (const std::string& raw : sum_terms(t)) {
        bool neg = !raw.empty() && raw[0] == '-';
        std::string body = trim(neg ? raw.substr(1) : raw);
        DPMonomial mono;
        mono.even.assign(d->m, 0);
        Scalar coeff = Scalar::one(d->ring);
        int odd_seen = 0;
        bool odd_sign = false;
        for (std::string& rawf : split_top(body, '*')) {
            std::string f = trim(rawf);
            if (f.empty()) throw ParseError("empty factor in '" + raw + "'");
            std::string name = f;
            int exp = 1;
            size_t caret = f.find('^');
            if (caret != std::string::npos) {
                name = trim(f.substr(0, caret));
                std::string es = trim(f.substr(caret + 1));
                if (es.size() >= 2 && es.front() == '(' && es.back() == ')')
                    es = es.substr(1, es.size() - 2);
                exp = std::stoi(es);
            }
            int vi = var_index(name);
            if (vi < 0) {
                coeff = coeff * parse_scalar(d->ring, f);
                continue;
            }
            if (vi < d->m) {
                if (exp < 0 || mono.even[vi] + exp >= d->bound(vi))
                    throw ParseError("exponent out of range in '" + raw + "'");
                mono.even[vi] = static_cast<uint8_t>(mono.even[vi] + exp);
            } else {
                int bit = vi - d->m;
                if (exp != 1 || (mono.odd & (1u << bit)))
                    throw ParseError("odd factor repeated in '" + raw + "'");
                // sign of sorting this factor past the odd ones already read
                int above = std::popcount(mono.odd >> (bit + 1));
                if (above & 1) odd_sign = !odd_sign;
                mono.odd |= 1u << bit;
                ++odd_seen;
            }
        }
        (void)odd_seen;
        if (neg) coeff = -coeff;
        if (odd_sign) coeff = -coeff;
        out.add_term(mono, coeff);
    }
    return out;
}

// ---------------------------------------------------------------------------

std::string fnv1a_digest(const std::string& bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string file_digest(const std::string& path) { return fnv1a_digest(read_file(path)); }

Json parse_json_file(const std::string& path) {
    try {
        return Json::parse(read_file(path));
    } catch (const Json::exception& e) {
        throw ParseError("malformed JSON in " + path + ": " + e.what());
    }
}

SuperAlgebra load_algebra_file(const std::string& path) {
    return algebra_from_json(parse_json_file(path));
}

FixtureBundle load_fixture(const std::string& dir, const std::string& cocycle_name) {
    std::string apath = dir + "/algebra.json";
    std::string cpath = dir + "/cocycle_" + cocycle_name + ".json";
    std::string epath = dir + "/expect.json";
    SuperAlgebra g = load_algebra_file(apath);
    Cocycle c = cocycle_from_json(g, parse_json_file(cpath));
    LemmaExpectation ex = expectation_from_json(parse_json_file(epath));
    FixtureBundle b{std::move(g), std::move(c), std::move(ex), {}};
    b.digests["algebra.json"] = file_digest(apath);
    b.digests["cocycle_" + cocycle_name + ".json"] = file_digest(cpath);
    b.digests["expect.json"] = file_digest(epath);
    return b;
}

}  // namespace modlie
