#include "atomic/calculus.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace atomic {

CalculusSpec calc_asl() { return {"ASL", CalcKind::ASL, false, false, true, true}; }
CalculusSpec calc_dl() { return {"DL_Lambek", CalcKind::DL, false, false, true, false}; }
CalculusSpec calc_fl() { return {"FL", CalcKind::FL, true, true, true, false}; }
CalculusSpec calc_ggl0() { return {"GGL0", CalcKind::GGL0, false, false, true, false}; }
CalculusSpec calc_ggl_bool() { return {"GGL_Boolean", CalcKind::GGLBool, false, false, true, false}; }

std::vector<CalculusSpec> builtin_calculi() { return {calc_fl(), calc_dl(), calc_asl(), calc_ggl0(), calc_ggl_bool()}; }

CalculusSpec find_calculus(std::string_view name) {
    for (auto c : builtin_calculi()) {
        std::string a = c.name, b(name);
        std::transform(a.begin(), a.end(), a.begin(), ::tolower);
        std::transform(b.begin(), b.end(), b.begin(), ::tolower);
        if (a == b || (b == "dl" && c.kind == CalcKind::DL) || ((b == "ggl_bool" || b == "boolean") && c.kind == CalcKind::GGLBool))
            return c;
    }
    throw std::invalid_argument("unknown calculus '" + std::string(name) + "'");
}

// ---------------------------------------------------------------- rules

std::string rule_str(const Lang& L, const Rule& r) {
    if (r.name == "dsr1") return "dsr1 " + L.full.cells.at(r.cell).name + " " + r.g.str();
    if (r.name == "intro_r" || r.name == "intro_l") return r.name + " " + L.conn(r.conn).name;
    if (r.name == "dr1") return "dr1 " + std::to_string(r.index);
    return r.name;
}

Rule parse_rule(const Lang& L, std::string_view text) {
    std::string t(text);
    auto a = t.find_first_not_of(' ');
    if (a == std::string::npos) throw ParseError("empty rule name", 0);
    auto b = t.find(' ', a);
    Rule r;
    r.name = t.substr(a, b == std::string::npos ? std::string::npos : b - a);
    std::string rest = b == std::string::npos ? "" : t.substr(b + 1);
    auto trim = [](std::string s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
        std::size_t i = 0;
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        return s.substr(i);
    };
    rest = trim(rest);
    static const char* plain[] = {"dsr2", "cut", "id", "hyp", "dp1", "dp2", "L1", "L2", "L3", "L4",
                                  "trans", "dr2", "dr2c", "CI", "K", "WI", "IWI"};
    for (const char* p : plain)
        if (r.name == p) {
            if (!rest.empty()) throw ParseError("rule " + r.name + " takes no parameters", b);
            return r;
        }
    if (r.name == "dsr1") {
        auto sp = rest.find(' ');
        if (sp == std::string::npos) throw ParseError("dsr1 needs a cell and a group element", b);
        std::string cell = rest.substr(0, sp);
        r.cell = L.full.find_cell(cell);
        if (r.cell < 0) throw ParseError("unknown cell '" + cell + "'", b + 1);
        std::string g = trim(rest.substr(sp + 1));
        if (!g.empty() && g[0] == '(' && g.find('[') == std::string::npos) {
            // a free word (bit,[perm])… is also accepted
            r.g = morph_phi(parse_word(g, L.full.cells[r.cell].arity + 1));
        } else if (g.rfind("((", 0) == 0) {
            r.g = parse_semi(g);
        } else {
            r.g = morph_phi(parse_word(g, L.full.cells[r.cell].arity + 1));
        }
        if (r.g.size() != L.full.cells[r.cell].arity + 1) throw ParseError("group element has the wrong degree", b);
        return r;
    }
    if (r.name == "intro_r" || r.name == "intro_l") {
        r.conn = L.find(rest);
        if (r.conn < 0) throw ParseError("unknown connective '" + rest + "'", b + 1);
        return r;
    }
    if (r.name == "dr1") {
        try {
            r.index = std::stoi(rest);
        } catch (const std::logic_error&) {
            throw ParseError("dr1 needs a child index", b);
        }
        return r;
    }
    throw ParseError("unknown rule '" + r.name + "'", a);
}

Derivation hyp(const Sequent& s) { return {s, rl("hyp"), {}}; }

int deriv_size(const Derivation& d) {
    int n = 1;
    for (const auto& p : d.prem) n += deriv_size(p);
    return n;
}

int deriv_height(const Derivation& d) {
    int h = 0;
    for (const auto& p : d.prem) h = std::max(h, deriv_height(p));
    return h + 1;
}

int count_rule(const Derivation& d, std::string_view name) {
    int n = d.rule.name == name;
    for (const auto& p : d.prem) n += count_rule(p, name);
    return n;
}

bool uses_cut(const Derivation& d) { return count_rule(d, "cut") + count_rule(d, "trans") > 0; }

std::vector<Sequent> open_leaves(const Derivation& d) {
    std::vector<Sequent> out;
    std::function<void(const Derivation&)> go = [&](const Derivation& x) {
        if (x.rule.name == "hyp") out.push_back(x.concl);
        for (const auto& p : x.prem) go(p);
    };
    go(d);
    return out;
}

// ---------------------------------------------------------------- s-expressions

namespace {

std::string quote(const std::string& s) {
    std::string o = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') o += '\\';
        o += c;
    }
    return o + "\"";
}

void print_rec(const Lang& L, const Derivation& d, int indent, std::string& out) {
    out += std::string(indent, ' ') + "(infer " + quote(rule_str(L, d.rule)) + " (seq " +
           quote(print_sequent(L, d.concl)) + ")";
    for (const auto& p : d.prem) {
        out += "\n";
        print_rec(L, p, indent + 2, out);
    }
    out += ")";
}

struct SExpr {
    bool atom = false;
    bool str = false;
    std::string text;
    std::vector<SExpr> kids;
    std::size_t pos = 0;
};

struct SReader {
    std::string_view t;
    std::size_t i = 0;
    void ws() {
        while (i < t.size()) {
            if (std::isspace(static_cast<unsigned char>(t[i]))) ++i;
            else if (t[i] == ';') {
                while (i < t.size() && t[i] != '\n') ++i;
            } else break;
        }
    }
    SExpr read() {
        ws();
        if (i >= t.size()) throw ParseError("unexpected end of input", i);
        SExpr e;
        e.pos = i;
        if (t[i] == '(') {
            ++i;
            for (;;) {
                ws();
                if (i >= t.size()) throw ParseError("unbalanced '('", e.pos);
                if (t[i] == ')') {
                    ++i;
                    return e;
                }
                e.kids.push_back(read());
            }
        }
        if (t[i] == ')') throw ParseError("unexpected ')'", i);
        e.atom = true;
        if (t[i] == '"') {
            e.str = true;
            ++i;
            while (i < t.size() && t[i] != '"') {
                if (t[i] == '\\' && i + 1 < t.size()) ++i;
                e.text += t[i++];
            }
            if (i >= t.size()) throw ParseError("unterminated string", e.pos);
            ++i;
            return e;
        }
        while (i < t.size() && !std::isspace(static_cast<unsigned char>(t[i])) && t[i] != '(' && t[i] != ')')
            e.text += t[i++];
        return e;
    }
};

Derivation from_sexpr(const Lang& L, const SExpr& e) {
    if (e.atom || e.kids.size() < 3 || !e.kids[0].atom || e.kids[0].text != "infer" || !e.kids[1].str)
        throw ParseError("expected (infer \"RULE\" (seq \"...\") ...)", e.pos);
    const auto& sq = e.kids[2];
    if (sq.atom || sq.kids.size() != 2 || !sq.kids[0].atom || sq.kids[0].text != "seq" || !sq.kids[1].str)
        throw ParseError("expected (seq \"...\")", sq.pos);
    Derivation d;
    try {
        d.rule = parse_rule(L, e.kids[1].text);
    } catch (const ParseError& x) {
        throw ParseError(std::string("in rule: ") + x.what(), e.kids[1].pos);
    }
    try {
        d.concl = parse_sequent(L, sq.kids[1].text);
    } catch (const ParseError& x) {
        throw ParseError(std::string("in sequent: ") + x.what(), sq.kids[1].pos);
    }
    for (std::size_t k = 3; k < e.kids.size(); ++k) d.prem.push_back(from_sexpr(L, e.kids[k]));
    return d;
}

}  // namespace

std::string print_derivation(const Lang& L, const Derivation& d) {
    std::string out;
    print_rec(L, d, 0, out);
    return out + "\n";
}

Derivation parse_derivation(const Lang& L, std::string_view text) {
    SReader r{text};
    SExpr e = r.read();
    r.ws();
    if (r.i != text.size()) throw ParseError("trailing input after derivation", r.i);
    return from_sexpr(L, e);
}

// ---------------------------------------------------------------- the action on sequents

namespace {

Bit proper_sign(int side) { return side == 0 ? 1 : 0; }

const Term& side_of(const Sequent& s, int side) { return side ? s.rhs : s.lhs; }

bool group_has(const Lang& L, int cell, const SemiElem& g) {
    const auto& c = L.full.cells[cell];
    return g.size() == c.arity + 1 && in_group(c.action, g);
}

}  // namespace

std::vector<int> proper_heads(const Lang& L, const Sequent& s, int cell) {
    std::vector<int> out;
    for (int side = 0; side < 2; ++side) {
        const Term& t = side_of(s, side);
        if (t->kind == Kind::S && (cell < 0 || L.cell(t->conn) == cell) && L.quant(t->conn) == proper_sign(side))
            out.push_back(side);
    }
    return out;
}

Sequent act_on_side(const Lang& L, const SemiElem& g, const Sequent& s, int side) {
    const Term& h = side_of(s, side);
    if (h->kind != Kind::S) throw CalculusError("no structural head on that side");
    const int c = h->conn, cell = L.cell(c), n = L.arity(c);
    if (L.quant(c) != proper_sign(side)) throw CalculusError("head [" + L.conn(c).name + "] is not on its proper side");
    if (!group_has(L, cell, g)) throw CalculusError(g.str() + " is not in the group of cell " + L.full.cells[cell].name);
    const Term& other = side_of(s, 1 - side);
    auto X = [&](int i) -> const Term& { return i <= n ? h->kids[i - 1] : other; };
    const SkeletonD nsk = act_semidirect(g, L.conn(c).sk);
    const int nc = L.with_sk(cell, nsk);
    if (nc < 0) throw CalculusError("no connective with skeleton " + nsk.str());
    const Bit vl = g.vec[n];
    std::vector<Term> kids;
    for (int i = 1; i <= n; ++i) kids.push_back(stars(L, X(g.perm(i)), vl ^ g.vec[i - 1]));
    Term last = stars(L, X(g.perm(n + 1)), vl);
    return S_(L.quant(nc), mk_s(L, nc, std::move(kids)), last);
}

Sequent act_on_sequent(const Lang& L, const SemiElem& g, const Sequent& s, int cell) {
    auto sides = proper_heads(L, s, cell);
    if (sides.empty()) throw CalculusError("sequent has no head of cell " + L.full.cells.at(cell).name + " on its proper side");
    if (sides.size() > 1) throw CalculusError("both sides carry a head of cell " + L.full.cells.at(cell).name);
    return act_on_side(L, g, s, sides[0]);
}

Term comma(const Lang& L, Bit sign, Term x, Term y) { return mk_s(L, sign ? L.and_ : L.or_, {std::move(x), std::move(y)}); }
Term unit_i(const Lang& L, Bit sign) { return mk_s(L, sign ? L.top : L.bot, {}); }

// ---------------------------------------------------------------- checking

namespace {

using Err = std::optional<std::string>;

bool qualifies_dsr2(const Lang& L, const Term& t) {
    return t->kind == Kind::F || t->kind == Kind::Var || (t->kind == Kind::S && !L.beta_compat[L.cell(t->conn)]);
}

Sequent flip(const Lang& L, const Sequent& p) { return {star(L, p.rhs), star(L, p.lhs)}; }

Err need_prem(const std::vector<Sequent>& prem, std::size_t n) {
    if (prem.size() != n) return "expects " + std::to_string(n) + " premise(s), got " + std::to_string(prem.size());
    return std::nullopt;
}

Err check_intro_r(const Lang& L, int c, const std::vector<Sequent>& prem, const Sequent& concl) {
    if (c < 0) return "missing connective";
    const int n = L.arity(c);
    if (auto e = need_prem(prem, n)) return e;
    const Bit q = L.quant(c);
    const Term& st = q ? concl.lhs : concl.rhs;
    const Term& fm = q ? concl.rhs : concl.lhs;
    if (st->kind != Kind::S || st->conn != c) return "conclusion lacks [" + L.conn(c).name + "] on the " + (q ? "left" : "right");
    if (fm->kind != Kind::F || fm->conn != c) return "conclusion lacks the formula " + L.conn(c).name + "(…)";
    for (int i = 0; i < n; ++i) {
        Sequent want = S_(q ^ L.tone(c, i), st->kids[i], fm->kids[i]);
        if (!(prem[i] == want)) return "premise " + std::to_string(i + 1) + " does not match the schema";
    }
    return std::nullopt;
}

Err check_intro_l(const Lang& L, int c, const std::vector<Sequent>& prem, const Sequent& concl) {
    if (c < 0) return "missing connective";
    if (auto e = need_prem(prem, 1)) return e;
    const Bit q = L.quant(c);
    const Term& fm = q ? concl.lhs : concl.rhs;
    const Term& u = q ? concl.rhs : concl.lhs;
    if (fm->kind != Kind::F || fm->conn != c) return "conclusion lacks the formula " + L.conn(c).name + "(…) on its side";
    Sequent want = S_(q, mk_s(L, c, fm->kids), u);
    if (!(prem[0] == want)) return "premise does not match the schema";
    return std::nullopt;
}

Err check_dsr1(const Lang& L, const Rule& r, const std::vector<Sequent>& prem, const Sequent& concl) {
    if (auto e = need_prem(prem, 1)) return e;
    if (r.cell < 0 || r.cell >= static_cast<int>(L.full.cells.size())) return "bad cell";
    if (!group_has(L, r.cell, r.g)) return r.g.str() + " is not in the group of cell " + L.full.cells[r.cell].name;
    auto sides = proper_heads(L, prem[0], r.cell);
    if (sides.empty()) return "premise has no head of cell " + L.full.cells[r.cell].name + " on its proper side";
    for (int side : sides)
        if (act_on_side(L, r.g, prem[0], side) == concl) return std::nullopt;
    return "conclusion differs from the action of " + r.g.str() + " on the premise";
}

Err check_dsr2(const Lang& L, const std::vector<Sequent>& prem, const Sequent& concl) {
    if (auto e = need_prem(prem, 1)) return e;
    if (!qualifies_dsr2(L, prem[0].lhs) && !qualifies_dsr2(L, prem[0].rhs))
        return "dsr2 needs a side headed by a β-incompatible structural connective or a formula";
    if (!(flip(L, prem[0]) == concl)) return "conclusion is not the starred, swapped premise";
    return std::nullopt;
}

Err check_cut(const std::vector<Sequent>& prem, const Sequent& concl) {
    if (auto e = need_prem(prem, 2)) return e;
    if (!is_formula(prem[0].rhs) || !term_eq(prem[0].rhs, prem[1].lhs)) return "cut formula mismatch";
    if (!term_eq(prem[0].lhs, concl.lhs) || !term_eq(prem[1].rhs, concl.rhs)) return "cut conclusion mismatch";
    return std::nullopt;
}

bool is_letter(const Lang& L, const Term& t) { return t->kind == Kind::F && L.arity(t->conn) == 0; }

Err check_id(const Lang& L, const CalculusSpec& spec, const std::vector<Sequent>& prem, const Sequent& concl) {
    if (auto e = need_prem(prem, 0)) return e;
    if (!is_formula(concl.lhs) || !term_eq(concl.lhs, concl.rhs)) return "Id needs A ⊢ A";
    bool any = spec.id || spec.kind == CalcKind::FL;
    if (!any && !(spec.kind == CalcKind::DL && is_letter(L, concl.lhs))) return "Id is not enabled for this formula";
    return std::nullopt;
}

int named(const Lang& L, const char* n) { return L.find(n); }

bool dl_term_ok(const Lang& L, const Term& t) {
    if (t->kind == Kind::Star) return false;
    if (t->kind == Kind::S) {
        const auto& n = L.conn(t->conn).name;
        if (n != "otimes" && n != "rres" && n != "lres") return false;
    }
    if (t->kind == Kind::F) return true;
    for (const auto& k : t->kids)
        if (!dl_term_ok(L, k)) return false;
    return true;
}

Err check_dp(const Lang& L, bool first, const std::vector<Sequent>& prem, const Sequent& concl) {
    if (auto e = need_prem(prem, 1)) return e;
    const int ot = named(L, "otimes"), rr = named(L, "rres"), lr = named(L, "lres");
    if (ot < 0 || rr < 0 || lr < 0) return "DL needs otimes, rres and lres";
    // the product side determines the other one
    auto other_of = [&](const Sequent& a) -> std::optional<Sequent> {
        if (a.lhs->kind != Kind::S || a.lhs->conn != ot) return std::nullopt;
        const Term &X = a.lhs->kids[0], &Y = a.lhs->kids[1], &Z = a.rhs;
        if (first) return Sequent{X, mk_s(L, lr, {Z, Y})};
        return Sequent{Y, mk_s(L, rr, {X, Z})};
    };
    auto a = other_of(prem[0]);
    if (a && *a == concl) return std::nullopt;
    auto b = other_of(concl);
    if (b && *b == prem[0]) return std::nullopt;
    return std::string(first ? "dp1" : "dp2") + " does not relate premise and conclusion";
}

Err check_fl(const Lang& L, const Rule& r, const std::vector<Sequent>& prem, const Sequent& concl) {
    const int ot = named(L, "otimes"), rr = named(L, "rres"), lr = named(L, "lres");
    if (ot < 0 || rr < 0 || lr < 0) return "FL needs otimes, rres and lres";
    auto F = [&](int c, Term a, Term b) { return mk_f(L, c, {std::move(a), std::move(b)}); };
    auto is = [](const Term& t, int c) { return t->kind == Kind::F && t->conn == c; };
    if (auto e = need_prem(prem, 1)) return e;
    const Sequent& p = prem[0];
    if (r.name == "L1" || r.name == "L3") {
        if (!is(concl.lhs, ot)) return "conclusion must be A⊗B ⊢ C";
        const Term &A = concl.lhs->kids[0], &B = concl.lhs->kids[1], &C = concl.rhs;
        Sequent want = r.name == "L1" ? Sequent{B, F(rr, A, C)} : Sequent{A, F(lr, C, B)};
        if (!(p == want)) return r.name + " premise mismatch";
        return std::nullopt;
    }
    if (!is(p.lhs, ot)) return "premise must be A⊗B ⊢ C";
    const Term &A = p.lhs->kids[0], &B = p.lhs->kids[1], &C = p.rhs;
    Sequent want = r.name == "L2" ? Sequent{B, F(rr, A, C)} : Sequent{A, F(lr, C, B)};
    if (!(concl == want)) return r.name + " conclusion mismatch";
    return std::nullopt;
}

Err check_dr1(const Lang& L, const Rule& r, const std::vector<Sequent>& prem, const Sequent& concl) {
    if (auto e = need_prem(prem, 1)) return e;
    for (int side : proper_heads(L, prem[0], -1)) {
        const Term& h = side_of(prem[0], side);
        const int n = L.arity(h->conn);
        if (r.index < 1 || r.index > n) continue;
        SemiElem g{BitVec(n + 1, 0), Perm::transposition(n + 1, r.index, n + 1)};
        if (!group_has(L, L.cell(h->conn), g)) continue;
        if (act_on_side(L, g, prem[0], side) == concl) return std::nullopt;
    }
    return "no head admits dr1 " + std::to_string(r.index) + " to this conclusion";
}

bool is_conn(const Term& t, int c) { return t->kind == Kind::S && t->conn == c; }

Err check_boolean_structural(const Lang& L, const Rule& r, const std::vector<Sequent>& prem, const Sequent& concl) {
    if (!L.boolean()) return "structural rules need a Boolean family";
    if (auto e = need_prem(prem, 1)) return e;
    const Sequent& p = prem[0];
    const int a = L.and_;
    if (r.name == "CI") {
        if (!is_conn(p.lhs, a) || !term_eq(p.rhs, concl.rhs)) return "CI needs (X,Y) ⊢ U";
        if (!term_eq(concl.lhs, mk_s(L, a, {p.lhs->kids[1], p.lhs->kids[0]}))) return "CI conclusion mismatch";
        return std::nullopt;
    }
    if (r.name == "K") {
        if (!is_conn(concl.lhs, a) || !term_eq(p.rhs, concl.rhs) || !term_eq(concl.lhs->kids[0], p.lhs))
            return "K needs X ⊢ U over (X,Y) ⊢ U";
        return std::nullopt;
    }
    if (r.name == "WI") {
        if (!is_conn(p.lhs, a) || !term_eq(p.lhs->kids[0], p.lhs->kids[1]) || !term_eq(p.lhs->kids[0], concl.lhs) ||
            !term_eq(p.rhs, concl.rhs))
            return "WI needs (X,X) ⊢ U over X ⊢ U";
        return std::nullopt;
    }
    if (r.name == "IWI") {
        if (!is_conn(p.lhs, a) || !is_conn(p.lhs->kids[1], L.top) || !term_eq(p.lhs->kids[0], concl.lhs) ||
            !term_eq(p.rhs, concl.rhs))
            return "IWI needs (X,I) ⊢ U over X ⊢ U";
        return std::nullopt;
    }
    if (r.name == "dr2") {
        auto down = [&](const Sequent& x) -> std::optional<Sequent> {
            if (!is_conn(x.lhs, a)) return std::nullopt;
            return Sequent{x.lhs->kids[0], comma(L, 0, x.rhs, star(L, x.lhs->kids[1]))};
        };
        auto d1 = down(p);
        if (d1 && *d1 == concl) return std::nullopt;
        auto d2 = down(concl);
        if (d2 && *d2 == p) return std::nullopt;
        return "dr2 needs (X,Y) ⊢ Z over X ⊢ (Z,*Y), in either direction";
    }
    if (r.name == "dr2c") {
        if (!is_conn(p.lhs, a)) return "dr2c needs (X,Y) ⊢ Z";
        Sequent want{comma(L, 1, p.lhs->kids[0], star(L, p.rhs)), star(L, p.lhs->kids[1])};
        if (!(want == concl)) return "dr2c conclusion must be (X,*Z) ⊢ *Y";
        return std::nullopt;
    }
    return "unknown structural rule";
}

bool allowed(const CalculusSpec& spec, const std::string& n) {
    if (n == "hyp") return spec.open;
    if (n == "cut") return spec.cut && spec.kind != CalcKind::FL;
    if (n == "trans") return spec.cut && spec.kind == CalcKind::FL;
    if (n == "id") return true;  // refined in check_id
    switch (spec.kind) {
        case CalcKind::ASL: return n == "dsr1" || (n == "dsr2" && spec.dsr2) || n == "intro_r" || n == "intro_l";
        case CalcKind::DL: return n == "dp1" || n == "dp2" || n == "intro_r" || n == "intro_l";
        case CalcKind::FL: return n == "L1" || n == "L2" || n == "L3" || n == "L4";
        case CalcKind::GGL0: return n == "dr1" || n == "dr2" || n == "intro_r" || n == "intro_l";
        case CalcKind::GGLBool:
            return n == "dr1" || n == "dr2" || n == "dr2c" || n == "CI" || n == "K" || n == "WI" || n == "IWI" ||
                   n == "intro_r" || n == "intro_l" || (n == "dsr2" && spec.dsr2);
    }
    return false;
}

}  // namespace

std::optional<std::string> check_step(const Lang& L, const CalculusSpec& spec, const Rule& r,
                                      const std::vector<Sequent>& prem, const Sequent& concl) {
    if (!allowed(spec, r.name)) return "rule " + r.name + " is not part of " + spec.name;
    if (concl.lhs->type != concl.rhs->type) return "sides have different types";
    if (spec.kind == CalcKind::FL && (!is_formula(concl.lhs) || !is_formula(concl.rhs)))
        return "FL sequents relate formulas";
    if (spec.kind == CalcKind::DL && (!dl_term_ok(L, concl.lhs) || !dl_term_ok(L, concl.rhs)))
        return "DL structures use [otimes], [rres], [lres] only";
    const auto& n = r.name;
    try {
        if (n == "hyp") return need_prem(prem, 0);
        if (n == "id") return check_id(L, spec, prem, concl);
        if (n == "cut" || n == "trans") return check_cut(prem, concl);
        if (n == "intro_r" || n == "intro_l") {
            if (r.conn < 0 || r.conn >= static_cast<int>(L.full.conns.size())) return "bad connective";
            if (spec.kind == CalcKind::DL) {
                const auto& cn = L.conn(r.conn).name;
                if (cn != "otimes" && cn != "rres" && cn != "lres") return "DL introduces otimes, rres, lres only";
            }
            return n == "intro_r" ? check_intro_r(L, r.conn, prem, concl) : check_intro_l(L, r.conn, prem, concl);
        }
        if (n == "dsr1") return check_dsr1(L, r, prem, concl);
        if (n == "dsr2") return check_dsr2(L, prem, concl);
        if (n == "dp1" || n == "dp2") return check_dp(L, n == "dp1", prem, concl);
        if (n[0] == 'L') return check_fl(L, r, prem, concl);
        if (n == "dr1") return check_dr1(L, r, prem, concl);
        if (n == "dr2" && spec.kind == CalcKind::GGL0) {
            if (auto e = need_prem(prem, 1)) return e;
            if (!(flip(L, prem[0]) == concl)) return "dr2 conclusion is not the starred, swapped premise";
            return std::nullopt;
        }
        return check_boolean_structural(L, r, prem, concl);
    } catch (const std::invalid_argument& e) {
        return std::string("ill-formed instance: ") + e.what();
    }
}

CheckResult check_derivation(const Lang& L, const Derivation& d, const CalculusSpec& spec) {
    std::function<CheckResult(const Derivation&, const std::string&)> go = [&](const Derivation& x,
                                                                                const std::string& path) -> CheckResult {
        std::vector<Sequent> prem;
        for (const auto& p : x.prem) prem.push_back(p.concl);
        if (auto e = check_step(L, spec, x.rule, prem, x.concl)) return {false, path, rule_str(L, x.rule) + ": " + *e};
        for (std::size_t i = 0; i < x.prem.size(); ++i) {
            auto r = go(x.prem[i], path + "." + std::to_string(i + 1));
            if (!r.ok) return r;
        }
        return {};
    };
    return go(d, "root");
}

// ---------------------------------------------------------------- identity, display, inversion

namespace {

Derivation intro_r_node(const Lang& L, int c, std::vector<Derivation> prem, const std::vector<Term>& X,
                        const std::vector<Term>& phi) {
    Sequent concl = S_(L.quant(c), mk_s(L, c, X), mk_f(L, c, phi));
    return {concl, rl("intro_r", c), std::move(prem)};
}

Derivation intro_l_node(const Lang& L, int c, Derivation prem) {
    const Bit q = L.quant(c);
    const Term& st = q ? prem.concl.lhs : prem.concl.rhs;
    const Term& u = q ? prem.concl.rhs : prem.concl.lhs;
    Sequent concl = S_(q, mk_f(L, c, st->kids), u);
    return {concl, rl("intro_l", c), {std::move(prem)}};
}

std::size_t psi_len(const SemiElem& g) { return word_reduce(func_psi(g)).letters.size(); }

}  // namespace

Derivation derive_identity(const Lang& L, const Term& phi) {
    if (phi->kind != Kind::F) throw CalculusError("derive_identity needs a formula");
    const int c = phi->conn;
    std::vector<Derivation> prem;
    for (const auto& k : phi->kids) prem.push_back(derive_identity(L, k));
    Derivation r = intro_r_node(L, c, std::move(prem), phi->kids, phi->kids);
    return intro_l_node(L, c, std::move(r));
}

namespace {

Derivation step(Sequent concl, Rule r, Derivation prem) { return {std::move(concl), std::move(r), {std::move(prem)}}; }

// side where the last argument lands when g acts on a head labelled c
int last_side(const Lang& L, const SemiElem& g, int c) {
    return act_semidirect(g, L.conn(c).sk).quant() ? 1 : 0;
}

}  // namespace

Derivation display(const Lang& L, const Sequent& s, const OccPath& p) {
    if (!resolve(s, p)) throw CalculusError("path does not resolve: " + path_str(s, p));
    Derivation d = hyp(s);
    OccPath cur = p;
    for (int guard = 0; !cur.steps.empty(); ++guard) {
        if (guard > 256) throw CalculusError("display did not terminate");
        const Sequent& sq = d.concl;
        const Term& root = side_of(sq, cur.side);
        if (root->kind == Kind::S) {
            const int c = root->conn, cell = L.cell(c), n = L.arity(c);
            if (L.quant(c) != proper_sign(cur.side))
                throw CalculusError("[" + L.conn(c).name + "] sits on its improper side; it cannot be opened by dsr1");
            const int i = cur.steps[0];
            const Term& child = root->kids[i];
            std::vector<int> rest(cur.steps.begin() + 1, cur.steps.end());
            const bool through_star = child->kind == Kind::Star && !rest.empty();
            std::optional<SemiElem> best;
            bool stripped = false;
            for (int want : {through_star ? 1 : 0, 0}) {
                for (const auto& g : L.groups[cell]) {
                    if (g.perm(n + 1) != i + 1 || g.vec[n] != want) continue;
                    if (!best || std::make_pair(psi_len(g), g) < std::make_pair(psi_len(*best), *best)) best = g;
                }
                if (best) {
                    stripped = want == 1;
                    break;
                }
            }
            if (!best)
                throw CalculusError("cell " + L.full.cells[cell].name + " has no structural connective displaying position " +
                                    std::to_string(i + 1));
            Sequent next = act_on_side(L, *best, sq, cur.side);
            cur.side = last_side(L, *best, c);
            cur.steps = stripped ? std::vector<int>(rest.begin() + 1, rest.end()) : rest;
            d = step(next, rl_dsr1(cell, *best), std::move(d));
            continue;
        }
        if (root->kind == Kind::Star) {
            const int o = 1 - cur.side;
            const Term& other = side_of(sq, o);
            std::vector<int> rest(cur.steps.begin() + 1, cur.steps.end());
            if (other->kind == Kind::S && L.quant(other->conn) == proper_sign(o)) {
                const int cell = L.cell(other->conn), m = L.arity(other->conn) + 1;
                SemiElem b{bv_const(m, 1), Perm::identity(m)};
                if (group_has(L, cell, b)) {
                    Sequent next = act_on_side(L, b, sq, o);
                    cur.side = last_side(L, b, other->conn);
                    cur.steps = rest;
                    d = step(next, rl_dsr1(cell, b), std::move(d));
                    continue;
                }
            }
            if (qualifies_dsr2(L, other) || qualifies_dsr2(L, root)) {
                Sequent next = flip(L, sq);
                cur.side = 1 - cur.side;
                cur.steps = rest;
                d = step(next, rl("dsr2"), std::move(d));
                continue;
            }
            throw CalculusError("cannot remove the star around " + print_term(L, root));
        }
        throw CalculusError("occurrence lies inside a formula or variable and cannot be displayed");
    }
    return d;
}

Derivation invert_intro(const Lang& L, const Sequent& s) {
    int side = -1;
    if (s.lhs->kind == Kind::F && L.quant(s.lhs->conn) == 1) side = 0;
    else if (s.rhs->kind == Kind::F && L.quant(s.rhs->conn) == 0) side = 1;
    if (side < 0) throw CalculusError("sequent does not have the shape of a ⋆⊢ conclusion");
    const Term& f = side_of(s, side);
    const int c = f->conn;
    std::vector<Derivation> ids;
    for (const auto& k : f->kids) ids.push_back(derive_identity(L, k));
    Derivation r = intro_r_node(L, c, std::move(ids), f->kids, f->kids);
    const Term& u = side_of(s, 1 - side);
    Sequent goal = S_(L.quant(c), mk_s(L, c, f->kids), u);
    std::vector<Derivation> prem;
    if (side == 0) prem = {std::move(r), hyp(s)};
    else prem = {hyp(s), std::move(r)};
    return {goal, rl("cut"), std::move(prem)};
}

std::set<std::string> v_a(const Lang& L, const Term& phi) {
    std::set<std::string> out;
    std::vector<int> cs;
    collect_connectives(phi, cs);
    for (int c : cs) {
        const int orb = L.conn(c).orbit;
        std::string name = L.conn(c).name;
        for (const auto& x : L.full.conns)
            if (x.orbit == orb && x.primitive) {
                name = x.name;
                break;
            }
        out.insert(name);
    }
    return out;
}

std::set<int> base_labels(const Lang& L) {
    std::set<int> out;
    for (const auto& c : L.base.conns) out.insert(L.find(c.name));
    return out;
}

}  // namespace atomic

// ---------------------------------------------------------------- schemas

namespace atomic {

namespace {

Term V(const std::string& name, int type = 1) { return mk_var(var_id(name), type); }

std::vector<Term> metas(const Lang& L, int c, const std::string& stem) {
    std::vector<Term> out;
    for (int i = 0; i < L.arity(c); ++i) out.push_back(V(stem + std::to_string(i + 1), L.conn(c).sk.types[i]));
    return out;
}

std::string formula_text(const Lang& L, int c) {
    std::string s = L.conn(c).name;
    if (L.arity(c) == 0) return s;
    s += "(";
    for (int i = 0; i < L.arity(c); ++i) s += (i ? ", A" : "A") + std::to_string(i + 1);
    return s + ")";
}

// the sequent with the placeholder variable Φ printed as `formula`
std::string with_formula(const Lang& L, const Sequent& s, const std::string& formula) {
    std::string out = print_sequent(L, s);
    const std::string ph = "Φ";
    auto at = out.find(ph);
    if (at != std::string::npos) out.replace(at, ph.size(), formula);
    return out;
}

std::string line(const std::string& name, const std::vector<std::string>& prem, const std::string& concl) {
    std::string s = name + ": ";
    for (std::size_t i = 0; i < prem.size(); ++i) s += (i ? " ; " : "") + prem[i];
    return s + (prem.empty() ? "=> " : " => ") + concl;
}

bool is_letter(const Lang& L, int c) { return L.full.cells[L.cell(c)].action == ActionKind::Trivial; }

void intro_schemas(const Lang& L, int c, std::vector<std::string>& out) {
    const Bit q = L.quant(c);
    const int type = L.conn(c).sk.out_type();
    const Term phi = V("Φ", type), U = V("U", type);
    auto X = metas(L, c, "X"), A = metas(L, c, "A");
    std::vector<std::string> prem;
    for (int i = 0; i < L.arity(c); ++i) prem.push_back(print_sequent(L, S_(q ^ L.tone(c, i), X[i], A[i])));
    out.push_back(line("intro_r " + L.conn(c).name, prem, with_formula(L, S_(q, mk_s(L, c, X), phi), formula_text(L, c))));
    out.push_back(line("intro_l " + L.conn(c).name, {print_sequent(L, S_(q, mk_s(L, c, A), U))},
                       with_formula(L, S_(q, phi, U), formula_text(L, c))));
}

}  // namespace

std::vector<std::string> rule_schemas(const Lang& L, const CalculusSpec& spec) {
    std::vector<std::string> out;
    if (spec.kind == CalcKind::FL) {
        out = {"Id: => A |- A",
               "L1: B |- rres(A, C) => otimes(A, B) |- C",
               "L2: otimes(A, B) |- C => B |- rres(A, C)",
               "L3: A |- lres(C, B) => otimes(A, B) |- C",
               "L4: otimes(A, B) |- C => A |- lres(C, B)"};
        if (spec.cut) out.push_back("trans: A |- B ; B |- C => A |- C");
        return out;
    }
    if (spec.cut) out.push_back("cut: X |- A ; A |- Y => X |- Y");
    if (spec.id) out.push_back("id: => A |- A");
    else if (spec.kind == CalcKind::DL) out.push_back("id: => p |- p, p a letter");
    const Term X = V("X"), Y = V("Y"), Z = V("Z"), U = V("U");
    if (spec.kind == CalcKind::DL) {
        const int ot = L.find("otimes"), rr = L.find("rres"), lr = L.find("lres");
        if (ot < 0 || rr < 0 || lr < 0) throw std::invalid_argument("DL needs otimes, rres and lres");
        out.push_back(line("dp1", {print_sequent(L, {mk_s(L, ot, {X, Y}), Z})}, print_sequent(L, {X, mk_s(L, lr, {Z, Y})})));
        out.push_back(line("dp2", {print_sequent(L, {mk_s(L, ot, {X, Y}), Z})}, print_sequent(L, {Y, mk_s(L, rr, {X, Z})})));
        for (int c : {ot, rr, lr}) intro_schemas(L, c, out);
        return out;
    }
    for (std::size_t c = 0; c < L.full.conns.size(); ++c)
        if (!is_letter(L, static_cast<int>(c)) || spec.kind == CalcKind::ASL) intro_schemas(L, static_cast<int>(c), out);
    if (spec.kind == CalcKind::ASL) {
        for (std::size_t cell = 0; cell < L.full.cells.size(); ++cell) {
            const auto& cl = L.full.cells[cell];
            if (cl.action == ActionKind::Trivial || cl.members.empty()) continue;
            const int h = cl.members.front();
            Term head = mk_s(L, h, metas(L, h, "X"));
            const Term u = V("U", L.conn(h).sk.out_type());
            Sequent s = S_(L.quant(h), head, u);
            for (const auto& g : L.groups[cell])
                out.push_back(line("dsr1 " + cl.name + " " + g.str(), {print_sequent(L, s)},
                                   print_sequent(L, act_on_sequent(L, g, s, static_cast<int>(cell)))));
        }
        if (spec.dsr2) out.push_back("dsr2: X |- Y => *Y |- *X");
        return out;
    }
    // GGL0 and GGL_Boolean
    for (std::size_t c = 0; c < L.base.conns.size(); ++c) {
        const int fc = L.base_index(static_cast<int>(c));
        if (fc < 0 || is_letter(L, fc)) continue;
        Term head = mk_s(L, fc, metas(L, fc, "X"));
        Sequent s = S_(L.quant(fc), head, V("U", L.conn(fc).sk.out_type()));
        const int n = L.arity(fc);
        for (int i = 1; i <= n; ++i) {
            SemiElem g{BitVec(n + 1, 0), Perm::transposition(n + 1, i, n + 1)};
            const auto& grp = L.groups[L.cell(fc)];
            if (std::find(grp.begin(), grp.end(), g) == grp.end()) continue;
            out.push_back(line("dr1 " + std::to_string(i), {print_sequent(L, s)}, print_sequent(L, act_on_sequent(L, g, s, L.cell(fc)))));
        }
    }
    if (spec.kind == CalcKind::GGL0) {
        out.push_back("dr2: X |- Y => *Y |- *X");
        return out;
    }
    const int a = L.and_;
    auto pair = [&](Term x, Term y) { return mk_s(L, a, {std::move(x), std::move(y)}); };
    out.push_back(line("dr2", {print_sequent(L, {pair(X, Y), Z})}, print_sequent(L, {X, comma(L, 0, Z, star(L, Y))})));
    out.push_back(line("dr2c", {print_sequent(L, {pair(X, Y), Z})}, print_sequent(L, {pair(X, star(L, Z)), star(L, Y)})));
    out.push_back(line("CI", {print_sequent(L, {pair(X, Y), U})}, print_sequent(L, {pair(Y, X), U})));
    out.push_back(line("K", {print_sequent(L, {X, U})}, print_sequent(L, {pair(X, Y), U})));
    out.push_back(line("WI", {print_sequent(L, {pair(X, X), U})}, print_sequent(L, {X, U})));
    out.push_back(line("IWI", {print_sequent(L, {pair(X, unit_i(L, 1)), U})}, print_sequent(L, {X, U})));
    if (spec.dsr2) out.push_back("dsr2: X |- Y => *Y |- *X");
    return out;
}

}  // namespace atomic
