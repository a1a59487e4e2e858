#include "atomic/skeleton.hpp"

#include <cctype>
#include <sstream>

namespace atomic {

namespace {

void check_same(int a, int b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": arity mismatch");
}

std::string types_str(const std::vector<int>& k) {
    std::string s = "(";
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(k[i]);
    }
    return s + ")";
}

}  // namespace

std::string SkeletonC::str() const {
    return "C(" + perm.str() + "; " + bit_sign(sem_sign) + "; " + (quant ? "E" : "A") + "; " + types_str(types) +
           "; " + bv_sign_str(tonicity) + ")";
}

std::string SkeletonD::str() const {
    return "perm " + perm.str() + " types " + types_str(types) + " tone " + bv_sign_str(tone) + " s " + bit_sign(s);
}

SkeletonD iota(const SkeletonC& c) {
    SkeletonD d{c.perm, c.types, c.tonicity, static_cast<Bit>(c.sem_sign ^ c.quant)};
    d.tone.push_back(c.sem_sign);
    return d;
}

SkeletonC iota_inv(const SkeletonD& d) {
    BitVec t(d.tone.begin(), d.tone.end() - 1);
    return {d.perm, d.sem_sign(), d.quant(), d.types, t};
}

SkeletonC act_alpha_C(const Perm& r, const SkeletonC& c) {
    check_same(r.size(), c.perm.size(), "act_alpha_C");
    const int m = r.size();
    std::vector<int> k(m);
    for (int i = 1; i <= m; ++i) k[i - 1] = c.types[r(i) - 1];
    SkeletonC out;
    out.perm = r * c.perm;
    out.types = k;
    if (r(m) == m) {
        out.sem_sign = c.sem_sign;
        out.quant = c.quant;
        for (int i = 1; i < m; ++i) out.tonicity.push_back(c.tonicity[r(i) - 1]);
        return out;
    }
    // the output position trades places with argument j = r(n+1)
    const int j = r(m);
    const Bit pj = c.tonicity[j - 1];
    const Perm t = Perm::transposition(m, m, j);
    out.sem_sign = static_cast<Bit>(1 ^ pj ^ c.sem_sign);
    out.quant = static_cast<Bit>(1 ^ pj ^ c.quant);
    for (int i = 1; i < m; ++i) {
        const int idx = t(r(i));
        if (r(i) == m) out.tonicity.push_back(c.tonicity[idx - 1]);
        else out.tonicity.push_back(static_cast<Bit>(1 ^ pj ^ c.tonicity[idx - 1]));
    }
    return out;
}

SkeletonD act_alpha_D(const Perm& r, const SkeletonD& d) {
    check_same(r.size(), d.perm.size(), "act_alpha_D");
    std::vector<int> k(d.types.size());
    for (int i = 1; i <= r.size(); ++i) k[i - 1] = d.types[r(i) - 1];
    return {r * d.perm, k, act_R(r, d.tone), d.s};
}

SkeletonD act_beta(Bit b, const SkeletonD& d) {
    if (!b) return d;
    return act_switch(bv_const(d.m(), 1), d);
}

SkeletonD act_delta(Bit b, const SkeletonD& d) {
    if (!b) return d;
    return act_switch(bv_unit(d.m(), d.m()), d);
}

SkeletonD act_switch(const BitVec& v, const SkeletonD& d) {
    SkeletonD r = d;
    r.tone = bv_add(d.tone, v);
    return r;
}

SkeletonD act_semidirect(const SemiElem& g, const SkeletonD& d) {
    check_same(g.size(), d.m(), "act_semidirect");
    return act_switch(g.vec, act_alpha_D(g.perm, d));
}

SkeletonD act_freeword(const FreeWord& w, const SkeletonD& d) {
    check_same(w.m, d.m(), "act_freeword");
    SkeletonD x = d;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) x = act_beta(it->first, act_alpha_D(it->second, x));
    return x;
}

bool semi_between(const SkeletonD& a, const SkeletonD& b, SemiElem& g) {
    if (a.m() != b.m() || a.s != b.s) return false;
    // perm: ρ·σ_a = σ_b
    Perm r = b.perm * a.perm.inverse();
    SkeletonD mid = act_alpha_D(r, a);
    if (mid.types != b.types) return false;
    g = {bv_add(mid.tone, b.tone), r};
    return true;
}

namespace {

struct Lex {
    std::string_view t;
    std::size_t i = 0;

    void ws() {
        while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
    }
    bool eat(std::string_view w) {
        ws();
        if (t.substr(i, w.size()) == w) {
            i += w.size();
            return true;
        }
        return false;
    }
    void need(std::string_view w) {
        if (!eat(w)) throw ParseError("expected '" + std::string(w) + "'", i);
    }
    std::string_view until_close(char open, char close) {
        ws();
        std::size_t st = i;
        if (i >= t.size() || t[i] != open) throw ParseError(std::string("expected '") + open + "'", i);
        int depth = 0;
        for (; i < t.size(); ++i) {
            if (t[i] == open) ++depth;
            if (t[i] == close && --depth == 0) {
                ++i;
                return t.substr(st, i - st);
            }
        }
        throw ParseError("unbalanced brackets", st);
    }
    std::string_view word() {
        ws();
        std::size_t st = i;
        while (i < t.size() && !std::isspace(static_cast<unsigned char>(t[i])) && t[i] != ';' && t[i] != ')') ++i;
        if (st == i) throw ParseError("expected token", i);
        return t.substr(st, i - st);
    }
};

std::vector<std::string> split_tuple(std::string_view tup, std::size_t base) {
    // tup includes the surrounding parentheses
    if (tup.size() < 2) throw ParseError("bad tuple", base);
    std::vector<std::string> out;
    std::string cur;
    for (std::size_t k = 1; k + 1 < tup.size(); ++k) {
        char ch = tup[k];
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur += ch;
        }
    }
    if (!cur.empty() || !out.empty()) out.push_back(cur);
    return out;
}

std::vector<int> parse_types(std::string_view tup, std::size_t base) {
    std::vector<int> k;
    for (const auto& x : split_tuple(tup, base)) {
        try {
            int v = std::stoi(x);
            if (v < 1) throw ParseError("types must be positive", base);
            k.push_back(v);
        } catch (const std::logic_error&) {
            throw ParseError("bad type entry '" + x + "'", base);
        }
    }
    return k;
}

BitVec parse_signs(std::string_view tup, std::size_t base) {
    BitVec v;
    for (const auto& x : split_tuple(tup, base)) {
        try {
            v.push_back(parse_sign(x));
        } catch (const ParseError&) {
            throw ParseError("bad sign '" + x + "'", base);
        }
    }
    return v;
}

}  // namespace

SkeletonD parse_skeleton_d(std::string_view text) {
    Lex lx{text};
    lx.need("perm");
    std::size_t at = lx.i;
    auto pt = lx.until_close('[', ']');
    Perm p = parse_perm(pt, 0);
    lx.need("types");
    at = lx.i;
    auto k = parse_types(lx.until_close('(', ')'), at);
    lx.need("tone");
    at = lx.i;
    auto v = parse_signs(lx.until_close('(', ')'), at);
    lx.need("s");
    at = lx.i;
    Bit s = parse_sign(lx.word());
    lx.ws();
    if (lx.i != text.size()) throw ParseError("trailing input in skeleton", lx.i);
    if (static_cast<int>(k.size()) != p.size() || static_cast<int>(v.size()) != p.size())
        throw ParseError("skeleton components have inconsistent lengths", at);
    return {p, k, v, s};
}

SkeletonC parse_skeleton_c(std::string_view text) {
    Lex lx{text};
    lx.need("C(");
    Perm p = parse_perm(lx.until_close('[', ']'), 0);
    lx.need(";");
    Bit pm = parse_sign(lx.word());
    lx.need(";");
    Bit q = parse_sign(lx.word());
    lx.need(";");
    std::size_t at = lx.i;
    auto k = parse_types(lx.until_close('(', ')'), at);
    lx.need(";");
    at = lx.i;
    auto t = parse_signs(lx.until_close('(', ')'), at);
    lx.need(")");
    if (static_cast<int>(k.size()) != p.size() || static_cast<int>(t.size()) + 1 != p.size())
        throw ParseError("skeleton components have inconsistent lengths", at);
    return {p, pm, q, k, t};
}

}  // namespace atomic
