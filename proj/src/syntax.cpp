#include "atomic/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <stdexcept>

namespace atomic {

Lang::Lang(const ConnectiveFamily& f) : base(f), full(full_family(f)) {
    for (std::size_t c = 0; c < full.cells.size(); ++c) {
        beta_compat.push_back(is_beta_compatible(full, static_cast<int>(c)));
        groups.push_back(full.group(static_cast<int>(c)));
    }
    beta_partner.assign(full.conns.size(), -1);
    for (std::size_t i = 0; i < full.conns.size(); ++i) {
        const auto& c = full.conns[i];
        if (beta_compat[c.cell]) beta_partner[i] = full.find_sk(c.cell, act_beta(1, c.sk));
    }
    auto find_named = [&](const char* n, int ar) {
        int i = full.find(n);
        return (i >= 0 && full.conns[i].arity() == ar) ? i : -1;
    };
    and_ = find_named("and", 2);
    or_ = find_named("or", 2);
    imp = find_named("imp", 2);
    top = find_named("top", 0);
    bot = find_named("bot", 0);
    neg = find_named("neg", 1);
}

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

Term make(Kind k, int conn, int type, std::vector<Term> kids) {
    std::size_t h = mix(static_cast<std::size_t>(k) * 31 + 7, static_cast<std::size_t>(conn + 1000));
    int size = 1;
    for (const auto& x : kids) {
        h = mix(h, x->hash);
        size += x->size;
    }
    return std::make_shared<const Node>(Node{k, conn, type, std::move(kids), h, size});
}

void check_kids(const Lang& L, int conn, const std::vector<Term>& kids) {
    const auto& c = L.conn(conn);
    if (static_cast<int>(kids.size()) != c.arity())
        throw std::invalid_argument(c.name + " expects " + std::to_string(c.arity()) + " arguments");
    for (int i = 0; i < c.arity(); ++i)
        if (kids[i]->type != c.sk.types[i])
            throw std::invalid_argument("type mismatch in argument " + std::to_string(i + 1) + " of " + c.name);
}

struct VarTable {
    std::mutex mu;
    std::map<std::string, int> ids;
    std::vector<std::string> names;
    int fresh = 0;
};

VarTable& vars() {
    static VarTable t;
    return t;
}

}  // namespace

Term mk_f(const Lang& L, int conn, std::vector<Term> kids) {
    check_kids(L, conn, kids);
    for (const auto& k : kids)
        if (k->kind != Kind::F) throw std::invalid_argument("formula arguments must be formulas");
    return make(Kind::F, conn, L.conn(conn).sk.out_type(), std::move(kids));
}

Term mk_s(const Lang& L, int conn, std::vector<Term> kids) {
    check_kids(L, conn, kids);
    return make(Kind::S, conn, L.conn(conn).sk.out_type(), std::move(kids));
}

Term mk_star_node(Term x) {
    int t = x->type;
    return make(Kind::Star, -1, t, {std::move(x)});
}

Term mk_var(int id, int type) { return make(Kind::Var, id, type, {}); }

Term mk_letter(const Lang& L, std::string_view name) {
    int c = L.find(name);
    if (c < 0 || L.arity(c) != 0) throw std::invalid_argument("no letter named " + std::string(name));
    return mk_f(L, c, {});
}

int var_id(const std::string& name) {
    auto& t = vars();
    std::lock_guard lk(t.mu);
    auto it = t.ids.find(name);
    if (it != t.ids.end()) return it->second;
    int id = static_cast<int>(t.names.size());
    t.ids[name] = id;
    t.names.push_back(name);
    return id;
}

std::string var_name(int id) {
    auto& t = vars();
    std::lock_guard lk(t.mu);
    return t.names.at(id);
}

int fresh_var() {
    int n;
    {
        auto& t = vars();
        std::lock_guard lk(t.mu);
        n = t.fresh++;
    }
    return var_id("_v" + std::to_string(n));
}

bool term_eq(const Term& a, const Term& b) {
    if (a.get() == b.get()) return true;
    if (a->hash != b->hash || a->kind != b->kind || a->conn != b->conn || a->kids.size() != b->kids.size() ||
        a->size != b->size)
        return false;
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (!term_eq(a->kids[i], b->kids[i])) return false;
    return true;
}

bool term_less(const Term& a, const Term& b) {
    if (a.get() == b.get()) return false;
    if (a->size != b->size) return a->size < b->size;
    if (a->kind != b->kind) return a->kind < b->kind;
    if (a->conn != b->conn) return a->conn < b->conn;
    for (std::size_t i = 0; i < a->kids.size(); ++i) {
        if (term_less(a->kids[i], b->kids[i])) return true;
        if (term_less(b->kids[i], a->kids[i])) return false;
    }
    return false;
}

bool is_formula(const Term& t) { return t->kind == Kind::F; }

int formula_depth(const Term& t) {
    int d = 0;
    for (const auto& k : t->kids) d = std::max(d, formula_depth(k));
    return t->kids.empty() ? 0 : d + 1;
}

int connective_count(const Term& t) {
    int c = t->kind == Kind::F ? 1 : 0;
    for (const auto& k : t->kids) c += connective_count(k);
    return c;
}

Term star(const Lang& L, const Term& x) {
    if (x->kind == Kind::Star) return x->kids[0];
    if (x->kind == Kind::S) {
        int p = L.beta_partner[x->conn];
        if (p >= 0) return make(Kind::S, p, x->type, x->kids);
    }
    return mk_star_node(x);
}

Term stars(const Lang& L, const Term& x, int k) { return (k & 1) ? star(L, x) : x; }

std::optional<Term> resolve(const Sequent& s, const OccPath& p) {
    Term cur = p.side ? s.rhs : s.lhs;
    for (int st : p.steps) {
        if (st < 0 || st >= static_cast<int>(cur->kids.size())) return std::nullopt;
        cur = cur->kids[st];
    }
    return cur;
}

Term at(const Sequent& s, const OccPath& p) {
    auto r = resolve(s, p);
    if (!r) throw std::invalid_argument("path does not resolve: " + path_str(s, p));
    return *r;
}

namespace {

Term replace_rec(const Term& cur, const std::vector<int>& steps, std::size_t k, const Term& t) {
    if (k == steps.size()) return t;
    auto kids = cur->kids;
    kids.at(steps[k]) = replace_rec(cur->kids.at(steps[k]), steps, k + 1, t);
    return make(cur->kind, cur->conn, cur->type, std::move(kids));
}

void occ_rec(const Term& t, OccPath& p, std::vector<OccPath>& out, bool into) {
    out.push_back(p);
    if (t->kind == Kind::F && !into) return;
    for (std::size_t i = 0; i < t->kids.size(); ++i) {
        p.steps.push_back(static_cast<int>(i));
        occ_rec(t->kids[i], p, out, into);
        p.steps.pop_back();
    }
}

}  // namespace

Sequent replace_at(const Sequent& s, const OccPath& p, const Term& t) {
    Sequent r = s;
    (p.side ? r.rhs : r.lhs) = replace_rec(p.side ? s.rhs : s.lhs, p.steps, 0, t);
    return r;
}

std::vector<OccPath> occurrences(const Sequent& s, bool into) {
    std::vector<OccPath> out;
    OccPath p;
    p.side = 0;
    occ_rec(s.lhs, p, out, into);
    p.side = 1;
    occ_rec(s.rhs, p, out, into);
    return out;
}

Bit sign_of(const Lang& L, const Sequent& s, const OccPath& p) {
    Bit sg = p.side ? 0 : 1;
    Term cur = p.side ? s.rhs : s.lhs;
    for (int st : p.steps) {
        if (st < 0 || st >= static_cast<int>(cur->kids.size())) throw std::invalid_argument("invalid path");
        if (cur->kind == Kind::Star) sg ^= 1;
        else sg ^= L.tone(cur->conn, st);
        cur = cur->kids[st];
    }
    return sg;
}

std::string path_str(const Sequent& s, const OccPath& p) {
    std::string r = p.side ? "R" : "L";
    Term cur = p.side ? s.rhs : s.lhs;
    for (int st : p.steps) {
        if (cur && cur->kind == Kind::Star) r += ".*";
        else r += "." + std::to_string(st + 1);
        cur = (cur && st >= 0 && st < static_cast<int>(cur->kids.size())) ? cur->kids[st] : nullptr;
    }
    return r;
}

OccPath parse_path(std::string_view t) {
    OccPath p;
    std::size_t i = 0;
    while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
    if (i >= t.size() || (t[i] != 'L' && t[i] != 'R')) throw ParseError("path must start with L or R", i);
    p.side = t[i] == 'R';
    ++i;
    while (i < t.size()) {
        if (std::isspace(static_cast<unsigned char>(t[i]))) {
            ++i;
            continue;
        }
        if (t[i] != '.') throw ParseError("expected '.' in path", i);
        ++i;
        if (i < t.size() && t[i] == '*') {
            p.steps.push_back(0);
            ++i;
            continue;
        }
        std::size_t st = i;
        while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
        if (st == i) throw ParseError("expected child index in path", i);
        int k = std::stoi(std::string(t.substr(st, i - st)));
        if (k < 1) throw ParseError("child indices are 1-based", st);
        p.steps.push_back(k - 1);
    }
    return p;
}

// ---------------------------------------------------------------- printing

namespace {

bool needs_parens(const Term& t) {
    return t->kind == Kind::S && t->kids.size() == 2;  // printed infix
}

void print_rec(const Lang& L, const Term& t, std::string& out, int sign, bool sugar) {
    switch (t->kind) {
        case Kind::Var: out += var_name(t->conn); return;
        case Kind::Star: {
            out += '*';
            const auto& k = t->kids[0];
            bool par = needs_parens(k);
            if (par) out += '(';
            print_rec(L, k, out, sign < 0 ? -1 : sign ^ 1, sugar);
            if (par) out += ')';
            return;
        }
        case Kind::F: {
            out += L.conn(t->conn).name;
            if (t->kids.empty()) return;
            out += '(';
            for (std::size_t i = 0; i < t->kids.size(); ++i) {
                if (i) out += ", ";
                print_rec(L, t->kids[i], out, -1, sugar);
            }
            out += ')';
            return;
        }
        case Kind::S: {
            const int c = t->conn;
            auto child_sign = [&](std::size_t i) { return sign < 0 ? -1 : sign ^ L.tone(c, static_cast<int>(i)); };
            if (sugar && sign >= 0) {
                if ((c == L.and_ && sign == 1) || (c == L.or_ && sign == 0)) {
                    out += '(';
                    print_rec(L, t->kids[0], out, child_sign(0), sugar);
                    out += ", ";
                    print_rec(L, t->kids[1], out, child_sign(1), sugar);
                    out += ')';
                    return;
                }
                if ((c == L.top && sign == 1) || (c == L.bot && sign == 0)) {
                    out += 'I';
                    return;
                }
            }
            const std::string name = "[" + L.conn(c).name + "]";
            if (t->kids.size() == 2) {
                for (int i = 0; i < 2; ++i) {
                    bool par = needs_parens(t->kids[i]);
                    if (par) out += '(';
                    print_rec(L, t->kids[i], out, child_sign(i), sugar);
                    if (par) out += ')';
                    if (i == 0) out += name;
                }
                return;
            }
            out += name;
            if (t->kids.empty()) return;
            out += '(';
            for (std::size_t i = 0; i < t->kids.size(); ++i) {
                if (i) out += ", ";
                print_rec(L, t->kids[i], out, child_sign(i), sugar);
            }
            out += ')';
            return;
        }
    }
}

}  // namespace

std::string print_term(const Lang& L, const Term& t) {
    std::string s;
    print_rec(L, t, s, -1, false);
    return s;
}

std::string print_sequent(const Lang& L, const Sequent& s) {
    std::string out;
    bool sugar = L.boolean();
    print_rec(L, s.lhs, out, 1, sugar);
    out += " |- ";
    print_rec(L, s.rhs, out, 0, sugar);
    return out;
}

// ---------------------------------------------------------------- parsing

namespace {

struct PNode {
    enum K { App, SApp, Star, Var, Comma, Unit } k;
    std::string name;
    std::vector<PNode> kids;
    std::size_t pos;
};

struct Parser {
    const Lang& L;
    std::string_view t;
    std::size_t i = 0;

    void ws() {
        while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
    }
    bool peek(std::string_view w) {
        ws();
        return t.substr(i, w.size()) == w;
    }
    bool eat(std::string_view w) {
        if (!peek(w)) return false;
        i += w.size();
        return true;
    }
    void need(std::string_view w) {
        if (!eat(w)) throw ParseError("expected '" + std::string(w) + "'", i);
    }
    static bool idch(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

    std::string ident() {
        ws();
        std::size_t st = i;
        while (i < t.size() && idch(t[i])) ++i;
        if (st == i) throw ParseError("expected a name", i);
        std::string name(t.substr(st, i - st));
        // generated closure names: base.((bits),[perm])
        if (i + 1 < t.size() && t[i] == '.' && t[i + 1] == '(') {
            ++i;
            std::size_t gs = i;
            int depth = 0;
            for (; i < t.size(); ++i) {
                if (t[i] == '(' || t[i] == '[') ++depth;
                if ((t[i] == ')' || t[i] == ']') && --depth == 0) {
                    ++i;
                    break;
                }
            }
            try {
                name += "." + parse_semi(t.substr(gs, i - gs)).str();
            } catch (const ParseError& e) {
                throw ParseError(std::string("bad group element in name: ") + e.what(), gs);
            }
        }
        return name;
    }

    int lookup(const std::string& name, std::size_t pos) {
        int c = L.find(name);
        if (c < 0) throw ParseError("unknown connective '" + name + "'", pos);
        return c;
    }

    static bool var_like(const std::string& n) {
        return !n.empty() && (std::isupper(static_cast<unsigned char>(n[0])) || n[0] == '_') &&
               n.find('.') == std::string::npos;
    }

    std::vector<PNode> args(std::size_t n) {
        std::vector<PNode> out;
        need("(");
        for (std::size_t k = 0; k < n; ++k) {
            if (k) need(",");
            out.push_back(structure());
        }
        need(")");
        return out;
    }

    PNode primary() {
        ws();
        std::size_t pos = i;
        if (eat("*")) {
            PNode p{PNode::Star, "", {}, pos};
            p.kids.push_back(primary());
            return p;
        }
        if (eat("(")) {
            PNode a = structure();
            if (eat(",")) {
                PNode b = structure();
                need(")");
                return PNode{PNode::Comma, "", {a, b}, pos};
            }
            need(")");
            return a;
        }
        if (eat("[")) {
            std::string name = ident();
            need("]");
            int c = lookup(name, pos);
            PNode p{PNode::SApp, name, {}, pos};
            if (L.arity(c) > 0) p.kids = args(L.arity(c));
            return p;
        }
        std::string name = ident();
        int c = L.find(name);
        if (c < 0) {
            if (name == "I" && L.boolean()) return PNode{PNode::Unit, name, {}, pos};
            if (var_like(name)) return PNode{PNode::Var, name, {}, pos};
            throw ParseError("unknown connective '" + name + "'", pos);
        }
        PNode p{PNode::App, name, {}, pos};
        if (L.arity(c) > 0) p.kids = args(L.arity(c));
        return p;
    }

    PNode structure() {
        PNode a = primary();
        ws();
        std::size_t pos = i;
        if (peek("[")) {
            need("[");
            std::string name = ident();
            need("]");
            int c = lookup(name, pos);
            if (L.arity(c) != 2) throw ParseError("infix use of non-binary [" + name + "]", pos);
            PNode b = primary();
            return PNode{PNode::SApp, name, {a, b}, pos};
        }
        return a;
    }

    Term build(const PNode& p, int sign, int type, bool formula_only) {
        auto type_check = [&](const Term& x) {
            if (type > 0 && x->type != type)
                throw ParseError("type mismatch: expected " + std::to_string(type) + ", got " + std::to_string(x->type), p.pos);
            return x;
        };
        if (formula_only && p.k != PNode::App) throw ParseError("expected a formula", p.pos);
        switch (p.k) {
            case PNode::Var: return mk_var(var_id(p.name), type > 0 ? type : 1);
            case PNode::Star: return type_check(star(L, build(p.kids[0], sign < 0 ? -1 : sign ^ 1, type, false)));
            case PNode::App:
            case PNode::SApp:
            case PNode::Comma:
            case PNode::Unit: {
                int c;
                if (p.k == PNode::Comma || p.k == PNode::Unit) {
                    if (sign < 0) throw ParseError("',' and 'I' need a sequent context", p.pos);
                    if (p.k == PNode::Comma) c = sign ? L.and_ : L.or_;
                    else c = sign ? L.top : L.bot;
                } else {
                    c = lookup(p.name, p.pos);
                }
                const auto& con = L.conn(c);
                std::vector<Term> kids;
                for (std::size_t k = 0; k < p.kids.size(); ++k) {
                    int cs = sign < 0 ? -1 : sign ^ con.sk.tone[k];
                    kids.push_back(build(p.kids[k], cs, con.sk.types[k], p.k == PNode::App));
                }
                try {
                    return type_check(p.k == PNode::App ? mk_f(L, c, kids) : mk_s(L, c, kids));
                } catch (const std::invalid_argument& e) {
                    throw ParseError(e.what(), p.pos);
                }
            }
        }
        throw ParseError("unreachable", p.pos);
    }

    int natural_type(const PNode& p) {
        switch (p.k) {
            case PNode::App:
            case PNode::SApp: return L.conn(L.find(p.name)).sk.out_type();
            case PNode::Star: return natural_type(p.kids[0]);
            case PNode::Comma:
            case PNode::Unit: return L.and_ >= 0 ? L.conn(L.and_).sk.out_type() : -1;
            case PNode::Var: return -1;
        }
        return -1;
    }

    void end() {
        ws();
        if (i != t.size()) throw ParseError("unexpected trailing input", i);
    }
};

}  // namespace

Term parse_formula(const Lang& L, std::string_view text) {
    Parser p{L, text};
    PNode n = p.structure();
    p.end();
    return p.build(n, -1, -1, true);
}

Term parse_structure(const Lang& L, std::string_view text) {
    Parser p{L, text};
    PNode n = p.structure();
    p.end();
    return p.build(n, -1, p.natural_type(n), false);
}

Sequent parse_sequent(const Lang& L, std::string_view text) {
    Parser p{L, text};
    PNode a = p.structure();
    std::size_t tpos = p.i;
    if (!p.eat("|-") && !p.eat("⊢")) throw ParseError("expected '|-'", tpos);
    PNode b = p.structure();
    p.end();
    int ta = p.natural_type(a), tb = p.natural_type(b);
    if (ta > 0 && tb > 0 && ta != tb) throw ParseError("the two sides have different types", tpos);
    int ty = ta > 0 ? ta : (tb > 0 ? tb : 1);
    return {p.build(a, 1, ty, false), p.build(b, 0, ty, false)};
}

// ---------------------------------------------------------------- τ

Term tau(const Lang& L, const Term& x, Bit s) {
    switch (x->kind) {
        case Kind::F: return x;
        case Kind::Var: throw std::invalid_argument("τ is undefined on structure variables");
        case Kind::Star:
            if (L.neg < 0) throw std::invalid_argument("τ of a starred structure needs a Boolean negation");
            return mk_f(L, L.neg, {tau(L, x->kids[0], s ^ 1)});
        case Kind::S: {
            const int c = x->conn;
            if (L.arity(c) > 0 && L.quant(c) != s)
                throw std::invalid_argument("structural " + L.conn(c).name + " sits on its improper side");
            std::vector<Term> kids;
            for (std::size_t i = 0; i < x->kids.size(); ++i) kids.push_back(tau(L, x->kids[i], s ^ L.tone(c, static_cast<int>(i))));
            return mk_f(L, c, kids);
        }
    }
    throw std::invalid_argument("unreachable");
}

Term tau(const Lang& L, const Term& x) {
    std::function<Bit(const Term&)> nat = [&](const Term& t) -> Bit {
        if (t->kind == Kind::S) return L.quant(t->conn);
        if (t->kind == Kind::Star) return nat(t->kids[0]) ^ 1;
        return 1;
    };
    return tau(L, x, nat(x));
}

Term subst_var(const Lang& L, const Term& t, int v, const Term& by) {
    if (t->kind == Kind::Var) return t->conn == v ? by : t;
    if (t->kids.empty()) return t;
    std::vector<Term> kids;
    bool changed = false;
    for (const auto& k : t->kids) {
        kids.push_back(subst_var(L, k, v, by));
        changed |= kids.back().get() != k.get();
    }
    if (!changed) return t;
    if (t->kind == Kind::Star) return star(L, kids[0]);
    return make(t->kind, t->conn, t->type, std::move(kids));
}

void collect_vars(const Term& t, std::vector<int>& out) {
    if (t->kind == Kind::Var) out.push_back(t->conn);
    for (const auto& k : t->kids) collect_vars(k, out);
}

void collect_connectives(const Term& t, std::vector<int>& out) {
    if (t->kind == Kind::F) out.push_back(t->conn);
    for (const auto& k : t->kids) collect_connectives(k, out);
}

}  // namespace atomic
