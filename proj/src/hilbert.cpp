#include "atomic/hilbert.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>

namespace atomic {

namespace {

// schema patterns over the Boolean connectives; meta 0,1,2 stand for φ, ψ, ρ
struct Pat {
    int conn = -1;
    int meta = -1;
    std::vector<Pat> kids;
};

Pat M(int i) { return Pat{-1, i, {}}; }
Pat C(int conn, std::vector<Pat> kids = {}) { return Pat{conn, -1, std::move(kids)}; }

using Sub = std::array<Term, 3>;

bool match(const Pat& p, const Term& t, Sub& sub) {
    if (p.meta >= 0) {
        if (!is_formula(t)) return false;
        if (!sub[p.meta]) {
            sub[p.meta] = t;
            return true;
        }
        return term_eq(sub[p.meta], t);
    }
    if (t->kind != Kind::F || t->conn != p.conn || t->kids.size() != p.kids.size()) return false;
    for (std::size_t i = 0; i < p.kids.size(); ++i)
        if (!match(p.kids[i], t->kids[i], sub)) return false;
    return true;
}

Term build(const Lang& L, const Pat& p, const Sub& sub) {
    if (p.meta >= 0) {
        if (!sub[p.meta]) throw std::invalid_argument("unbound metavariable");
        return sub[p.meta];
    }
    std::vector<Term> kids;
    for (const auto& k : p.kids) kids.push_back(build(L, k, sub));
    return mk_f(L, p.conn, std::move(kids));
}

struct Schema {
    std::vector<Pat> premises;
    Pat conclusion;
};

void need_boolean(const Lang& L) {
    if (!L.boolean()) throw std::invalid_argument("the Hilbert calculus needs a Boolean family");
}

std::map<std::string, Schema> schemas(const Lang& L) {
    need_boolean(L);
    const int an = L.and_, o = L.or_, im = L.imp, ng = L.neg, t = L.top, b = L.bot;
    auto imp = [&](Pat x, Pat y) { return C(im, {std::move(x), std::move(y)}); };
    auto conj = [&](Pat x, Pat y) { return C(an, {std::move(x), std::move(y)}); };
    auto disj = [&](Pat x, Pat y) { return C(o, {std::move(x), std::move(y)}); };
    auto neg = [&](Pat x) { return C(ng, {std::move(x)}); };
    const Pat phi = M(0), psi = M(1), rho = M(2);
    std::map<std::string, Schema> s;
    s["A0"] = {{}, C(t)};
    s["A0'"] = {{}, neg(C(b))};
    s["A1"] = {{}, imp(phi, conj(phi, phi))};
    s["A2"] = {{}, imp(conj(phi, psi), phi)};
    s["A3"] = {{}, imp(imp(phi, psi), imp(neg(conj(psi, rho)), neg(conj(rho, phi))))};
    s["PL_ID"] = {{}, imp(phi, phi)};
    s["PL_TOP"] = {{}, imp(phi, C(t))};
    s["PL_BOT"] = {{}, imp(C(b), phi)};
    s["PL_KTOP"] = {{phi}, imp(C(t), phi)};
    s["PL_NBOT"] = {{neg(phi)}, imp(phi, C(b))};
    s["PL_TRANS"] = {{imp(phi, psi), imp(psi, rho)}, imp(phi, rho)};
    s["PL_ORI1"] = {{}, imp(phi, disj(phi, psi))};
    s["PL_ORI2"] = {{}, imp(psi, disj(phi, psi))};
    s["PL_ORE"] = {{imp(phi, rho), imp(psi, rho)}, imp(disj(phi, psi), rho)};
    s["PL_ANDI"] = {{imp(rho, phi), imp(rho, psi)}, imp(rho, conj(phi, psi))};
    return s;
}

int meta_slot(const std::string& k) {
    if (k == "φ" || k == "phi") return 0;
    if (k == "ψ" || k == "psi") return 1;
    if (k == "ρ" || k == "rho") return 2;
    return -1;
}

bool is_imp(const Lang& L, const Term& t) { return t->kind == Kind::F && t->conn == L.imp; }

struct ConnBindings {
    int conn = -1;
    int j = 0;
};

std::optional<std::string> read_conn_bindings(const Lang& L, const HilbertLine& line, ConnBindings& out) {
    for (const auto& [k, v] : line.bindings) {
        if (k == "⋆" || k == "star") {
            out.conn = L.find(v);
            if (out.conn < 0) return "unknown connective " + v + " in binding";
        } else if (k == "j") {
            try {
                out.j = std::stoi(v);
            } catch (const std::logic_error&) {
                return "j must be a position";
            }
        } else {
            return "unexpected binding " + k + " for " + line.rule;
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_schema(const Lang& L, const Schema& s, const HilbertLine& line,
                                        const std::vector<Term>& cited) {
    if (cited.size() != s.premises.size())
        return line.rule + " cites " + std::to_string(s.premises.size()) + " line(s), got " + std::to_string(cited.size());
    Sub sub;
    for (const auto& [k, v] : line.bindings) {
        int slot = meta_slot(k);
        if (slot < 0) return "unexpected binding " + k + " for " + line.rule;
        Term t;
        try {
            t = parse_formula(L, v);
        } catch (const std::exception& e) {
            return "binding " + k + ": " + e.what();
        }
        if (sub[slot] && !term_eq(sub[slot], t)) return "binding " + k + " given twice";
        sub[slot] = t;
    }
    for (std::size_t i = 0; i < cited.size(); ++i)
        if (!match(s.premises[i], cited[i], sub))
            return "cited line " + std::to_string(line.refs[i]) + " does not have the shape " + line.rule + " expects";
    if (!match(s.conclusion, line.formula, sub)) return "formula is not an instance of " + line.rule;
    return std::nullopt;
}

std::optional<std::string> check_a4(const Lang& L, const HilbertLine& line) {
    ConnBindings cb;
    if (auto e = read_conn_bindings(L, line, cb)) return e;
    const Term& f = line.formula;
    // ↔ is written as a conjunction of both implications
    auto shape = "A4 is ¬⋆(φ…) ↔ −⋆(φ…), written and(imp(neg(⋆(…)), −⋆(…)), imp(−⋆(…), neg(⋆(…))))";
    if (f->kind != Kind::F || f->conn != L.and_) return shape;
    const Term &a = f->kids[0], &b = f->kids[1];
    if (!is_imp(L, a) || !is_imp(L, b)) return shape;
    if (!term_eq(a->kids[0], b->kids[1]) || !term_eq(a->kids[1], b->kids[0])) return shape;
    const Term& nx = a->kids[0];
    const Term& y = a->kids[1];
    if (nx->kind != Kind::F || nx->conn != L.neg) return shape;
    const Term& x = nx->kids[0];
    if (x->kind != Kind::F || y->kind != Kind::F) return shape;
    if (cb.conn >= 0 && x->conn != cb.conn) return "⋆ binding does not match the formula";
    const int partner = L.beta_partner[x->conn];
    if (partner < 0) return L.conn(x->conn).name + " has no complement connective in its cell";
    if (y->conn != partner) return "right-hand side must be −" + L.conn(x->conn).name + " = " + L.conn(partner).name;
    if (x->kids.size() != y->kids.size()) return shape;
    for (std::size_t i = 0; i < x->kids.size(); ++i)
        if (!term_eq(x->kids[i], y->kids[i])) return "both sides must apply to the same arguments";
    return std::nullopt;
}

// A7: ⋆(…, (j n+1)⋆(φ…), …) → φ_j with Æ(⋆) = ∃; A8 mirrors it for ∀
std::optional<std::string> check_a78(const Lang& L, const HilbertLine& line, bool a7) {
    ConnBindings cb;
    if (auto e = read_conn_bindings(L, line, cb)) return e;
    const Term& f = line.formula;
    if (!is_imp(L, f)) return line.rule + " must be an implication";
    const Term& big = a7 ? f->kids[0] : f->kids[1];
    const Term& phi = a7 ? f->kids[1] : f->kids[0];
    if (big->kind != Kind::F || big->kids.empty()) return line.rule + " needs a connective of positive arity";
    const int c = big->conn;
    if (cb.conn >= 0 && cb.conn != c) return "⋆ binding does not match the formula";
    if (L.quant(c) != (a7 ? 1 : 0)) return line.rule + " needs Æ(" + L.conn(c).name + ") = " + (a7 ? "∃" : "∀");
    const int n = L.arity(c);
    for (int j = 1; j <= n; ++j) {
        if (cb.j && cb.j != j) continue;
        const int r = residual_at(L, c, j);
        if (r < 0) continue;
        const Term& inner = big->kids[j - 1];
        if (inner->kind != Kind::F || inner->conn != r) continue;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            const Term& want = i == j - 1 ? phi : big->kids[i];
            ok = term_eq(inner->kids[i], want);
        }
        if (ok) return std::nullopt;
    }
    return "formula is not an instance of " + line.rule + (cb.j ? " at j = " + std::to_string(cb.j) : "");
}

// R3 (±_j = +): φ_j → ψ_j gives ⋆(…φ_j…) → ⋆(…ψ_j…); R4 (±_j = −) takes ψ_j → φ_j
std::optional<std::string> check_r34(const Lang& L, const HilbertLine& line, const std::vector<Term>& cited, bool r3) {
    ConnBindings cb;
    if (auto e = read_conn_bindings(L, line, cb)) return e;
    if (cited.size() != 1) return line.rule + " cites exactly one line";
    const Term& f = line.formula;
    if (!is_imp(L, f)) return line.rule + " concludes an implication";
    const Term &a = f->kids[0], &b = f->kids[1];
    if (a->kind != Kind::F || b->kind != Kind::F || a->conn != b->conn || a->kids.empty())
        return line.rule + " needs the same connective on both sides";
    const int c = a->conn;
    if (cb.conn >= 0 && cb.conn != c) return "⋆ binding does not match the formula";
    const int n = L.arity(c);
    std::vector<int> diff;
    for (int i = 0; i < n; ++i)
        if (!term_eq(a->kids[i], b->kids[i])) diff.push_back(i + 1);
    if (diff.size() > 1) return "the two sides differ in more than one argument";
    if (!is_imp(L, cited[0])) return "cited line " + std::to_string(line.refs[0]) + " is not an implication";
    std::string why = "no argument position fits " + line.rule;
    for (int j = 1; j <= n; ++j) {
        if (!diff.empty() && diff[0] != j) continue;
        if (cb.j && cb.j != j) continue;
        const Bit tone = L.tone(c, j - 1);
        if (tone != (r3 ? 0 : 1)) {
            why = line.rule + " needs ±_" + std::to_string(j) + "(" + L.conn(c).name + ") = " + (r3 ? "+" : "-");
            continue;
        }
        const Term& x = a->kids[j - 1];
        const Term& y = b->kids[j - 1];
        const Term& lo = r3 ? x : y;
        const Term& hi = r3 ? y : x;
        if (term_eq(cited[0]->kids[0], lo) && term_eq(cited[0]->kids[1], hi)) return std::nullopt;
        why = "cited implication does not match position " + std::to_string(j);
    }
    return why;
}

std::vector<std::string> split_top(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char ch : s) {
        if (ch == '(' || ch == '[') ++depth;
        if (ch == ')' || ch == ']') --depth;
        if (depth == 0 && (ch == ' ' || ch == '\t')) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

bool is_number(const std::string& t) {
    return !t.empty() && t.find_first_not_of("0123456789") == std::string::npos;
}

}  // namespace

int residual_at(const Lang& L, int conn, int j) {
    const auto& sk = L.conn(conn).sk;
    const int m = sk.m();
    if (j < 1 || j >= m) return -1;
    SemiElem g{BitVec(m, 0), Perm::transposition(m, j, m)};
    const auto& grp = L.groups[L.cell(conn)];
    if (std::find(grp.begin(), grp.end(), g) == grp.end()) return -1;
    return L.with_sk(L.cell(conn), act_semidirect(g, sk));
}

std::optional<std::string> check_hilbert_line(const Lang& L, const HilbertLine& line, const std::vector<Term>& cited) {
    if (!L.boolean()) return "the Hilbert calculus needs a Boolean family";
    if (!is_formula(line.formula)) return "lines hold formulas";
    const auto& r = line.rule;
    try {
        if (r == "HYP") {
            if (!cited.empty()) return "HYP cites nothing";
            return std::nullopt;
        }
        if (r == "MP") {
            if (cited.size() != 2) return "MP cites two lines";
            for (int k = 0; k < 2; ++k) {
                const Term& maj = cited[1 - k];
                if (is_imp(L, maj) && term_eq(maj->kids[0], cited[k]) && term_eq(maj->kids[1], line.formula))
                    return std::nullopt;
            }
            if (!is_imp(L, cited[0]) && !is_imp(L, cited[1])) return "MP cites no implication";
            return "MP premises do not yield this formula";
        }
        if (r == "A4") {
            if (!cited.empty()) return "axioms cite nothing";
            return check_a4(L, line);
        }
        if (r == "A7" || r == "A8") {
            if (!cited.empty()) return "axioms cite nothing";
            return check_a78(L, line, r == "A7");
        }
        if (r == "R3" || r == "R4") return check_r34(L, line, cited, r == "R3");
        auto s = schemas(L);
        auto it = s.find(r);
        if (it == s.end()) return "unknown justification " + r;
        return check_schema(L, it->second, line, cited);
    } catch (const std::invalid_argument& e) {
        return std::string("ill-formed instance: ") + e.what();
    }
}

HilbertResult check_hilbert(const Lang& L, const HilbertProof& p) {
    HilbertResult res;
    std::map<int, Term> seen;
    int last = 0;
    for (const auto& line : p.lines) {
        auto fail = [&](const std::string& m) {
            res.ok = false;
            res.line = line.number;
            res.message = m;
            return res;
        };
        if (line.number <= last) return fail("line numbers must increase");
        std::vector<Term> cited;
        for (int ref : line.refs) {
            auto it = seen.find(ref);
            if (ref >= line.number || it == seen.end()) return fail("reference " + std::to_string(ref) + " does not point to an earlier line");
            cited.push_back(it->second);
        }
        if (auto e = check_hilbert_line(L, line, cited)) return fail(*e);
        if (line.rule == "HYP") ++res.hypotheses;
        seen[line.number] = line.formula;
        last = line.number;
    }
    if (p.lines.empty()) {
        res.ok = false;
        res.message = "empty proof";
    }
    return res;
}

HilbertProof parse_hilbert(const Lang& L, std::string_view text) {
    HilbertProof p;
    std::istringstream in{std::string(text)};
    std::string raw;
    int ln = 0;
    std::size_t offset = 0;
    while (std::getline(in, raw)) {
        ++ln;
        const std::size_t line_start = offset;
        offset += raw.size() + 1;
        auto hash = raw.find('#');
        std::string l = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (l.empty()) continue;
        auto where = [&](const std::string& m) { return ParseError("line " + std::to_string(ln) + ": " + m, line_start); };
        auto colon = l.find(':');
        auto semi = l.rfind(';');
        if (colon == std::string::npos || semi == std::string::npos || semi < colon)
            throw where("expected 'N: formula ; JUSTIFICATION'");
        HilbertLine h;
        h.source_line = ln;
        std::string num = trim(l.substr(0, colon));
        if (!is_number(num)) throw where("line number expected");
        h.number = std::stoi(num);
        try {
            h.formula = parse_formula(L, trim(l.substr(colon + 1, semi - colon - 1)));
        } catch (const ParseError& e) {
            throw where(std::string("formula: ") + e.what());
        } catch (const std::invalid_argument& e) {
            throw where(std::string("formula: ") + e.what());
        }
        auto toks = split_top(l.substr(semi + 1));
        if (toks.empty()) throw where("missing justification");
        h.rule = toks[0];
        for (std::size_t i = 1; i < toks.size(); ++i) {
            const auto& t = toks[i];
            auto eq = t.find(":=");
            if (eq != std::string::npos) {
                h.bindings.emplace_back(t.substr(0, eq), t.substr(eq + 2));
            } else if (is_number(t)) {
                h.refs.push_back(std::stoi(t));
            } else {
                throw where("unexpected token '" + t + "' in justification");
            }
        }
        p.lines.push_back(std::move(h));
    }
    return p;
}

std::string print_hilbert(const Lang& L, const HilbertProof& p) {
    std::string s;
    for (const auto& h : p.lines) {
        s += std::to_string(h.number) + ": " + print_term(L, h.formula) + " ; " + h.rule;
        for (int r : h.refs) s += " " + std::to_string(r);
        for (const auto& [k, v] : h.bindings) s += " " + k + ":=" + v;
        s += "\n";
    }
    return s;
}

Term tau_sequent(const Lang& L, const Sequent& s) {
    if (L.imp < 0) throw std::invalid_argument("τ of a sequent needs an implication connective");
    return mk_f(L, L.imp, {tau(L, s.lhs, 1), tau(L, s.rhs, 0)});
}

std::vector<std::string> pl_lemma_names() {
    return {"PL_ID", "PL_TOP", "PL_BOT", "PL_KTOP", "PL_NBOT", "PL_TRANS", "PL_ORI1", "PL_ORI2", "PL_ORE", "PL_ANDI"};
}

LemmaInstance pl_lemma(const Lang& L, const std::string& name, const std::vector<Term>& metas) {
    auto s = schemas(L);
    auto it = s.find(name);
    if (it == s.end() || name.rfind("PL_", 0) != 0) throw std::invalid_argument("unknown lemma " + name);
    Sub sub;
    for (std::size_t i = 0; i < metas.size() && i < 3; ++i) sub[i] = metas[i];
    LemmaInstance out;
    for (const auto& p : it->second.premises) out.premises.push_back(build(L, p, sub));
    out.conclusion = build(L, it->second.conclusion, sub);
    return out;
}

}  // namespace atomic
