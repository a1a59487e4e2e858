#include "atomic/family.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace atomic {

std::string action_name(ActionKind a) {
    switch (a) {
        case ActionKind::Trivial: return "trivial";
        case ActionKind::Alpha: return "alpha";
        case ActionKind::Beta: return "beta";
        case ActionKind::Delta: return "delta";
        case ActionKind::Varsigma: return "varsigma";
        case ActionKind::AlphaVarsigma: return "alpha_varsigma";
        case ActionKind::AlphaDelta: return "alpha_delta";
        case ActionKind::AlphaBetaFree: return "alpha_beta_free";
    }
    return "?";
}

ActionKind parse_action(std::string_view s) {
    for (auto a : {ActionKind::Trivial, ActionKind::Alpha, ActionKind::Beta, ActionKind::Delta, ActionKind::Varsigma,
                   ActionKind::AlphaVarsigma, ActionKind::AlphaDelta, ActionKind::AlphaBetaFree})
        if (action_name(a) == s) return a;
    throw ParseError("unknown action '" + std::string(s) + "'", 0);
}

bool in_group(ActionKind a, const SemiElem& g) {
    const int m = g.size();
    const bool zero = std::all_of(g.vec.begin(), g.vec.end(), [](Bit b) { return b == 0; });
    const bool id = g.perm.is_identity();
    switch (a) {
        case ActionKind::Trivial: return zero && id;
        case ActionKind::Alpha: return zero;
        case ActionKind::Beta: return id && (zero || g.vec == bv_const(m, 1));
        case ActionKind::Delta: return id && (zero || g.vec == bv_unit(m, m));
        case ActionKind::Varsigma: return id;
        case ActionKind::AlphaDelta: return zero || g.vec == bv_unit(m, m);
        case ActionKind::AlphaVarsigma:
        case ActionKind::AlphaBetaFree: return true;
    }
    return false;
}

std::vector<SemiElem> group_elements(ActionKind a, int m) {
    std::vector<SemiElem> out;
    for (auto& g : all_semi(m))
        if (in_group(a, g)) out.push_back(g);
    // identity first, then by ψ-word length is not needed: ordering is by (perm, vec) except identity
    std::stable_partition(out.begin(), out.end(), [](const SemiElem& g) { return g.is_identity(); });
    return out;
}

std::vector<SkeletonD> orbit_under(ActionKind a, const SkeletonD& d) {
    std::set<SkeletonD> s;
    for (const auto& g : group_elements(a, d.m())) s.insert(act_semidirect(g, d));
    return {s.begin(), s.end()};
}

int ConnectiveFamily::find(std::string_view n) const {
    for (std::size_t i = 0; i < conns.size(); ++i)
        if (conns[i].name == n) return static_cast<int>(i);
    return -1;
}

int ConnectiveFamily::find_cell(std::string_view n) const {
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i].name == n) return static_cast<int>(i);
    return -1;
}

int ConnectiveFamily::find_sk(int cell, const SkeletonD& sk) const {
    for (int i : cells[cell].members)
        if (conns[i].sk == sk) return i;
    return -1;
}

std::vector<SemiElem> ConnectiveFamily::group(int cell) const {
    return group_elements(cells[cell].action, cells[cell].arity + 1);
}

std::vector<std::string> validate_family(const ConnectiveFamily& f) {
    std::vector<std::string> diags;
    std::vector<int> seen(f.conns.size(), 0);
    for (const auto& c : f.cells) {
        for (int i : c.members) {
            if (i < 0 || i >= static_cast<int>(f.conns.size())) {
                diags.push_back("cell " + c.name + ": dangling member");
                continue;
            }
            ++seen[i];
        }
    }
    for (std::size_t i = 0; i < f.conns.size(); ++i) {
        if (seen[i] != 1) diags.push_back("connective " + f.conns[i].name + " is in " + std::to_string(seen[i]) + " cells");
        if (f.conns[i].cell >= 0 && f.conns[i].cell < static_cast<int>(f.cells.size())) {
            const auto& mem = f.cells[f.conns[i].cell].members;
            if (std::find(mem.begin(), mem.end(), static_cast<int>(i)) == mem.end())
                diags.push_back("connective " + f.conns[i].name + " points at a cell that does not list it");
        }
    }
    std::set<std::string> names;
    for (const auto& c : f.conns)
        if (!names.insert(c.name).second) diags.push_back("duplicate connective name " + c.name);
    for (const auto& c : f.cells) {
        for (std::size_t a = 0; a < c.members.size(); ++a) {
            const auto& x = f.conns[c.members[a]];
            if (x.arity() != c.arity)
                diags.push_back("cell " + c.name + ": " + x.name + " has arity " + std::to_string(x.arity()) +
                                ", cell arity is " + std::to_string(c.arity));
            for (std::size_t b = a + 1; b < c.members.size(); ++b) {
                const auto& y = f.conns[c.members[b]];
                if (x.sk == y.sk) diags.push_back("cell " + c.name + ": " + x.name + " and " + y.name + " share a skeleton");
                if (x.arity() != y.arity()) continue;
                // P(σ'σ⁻¹) k = k'
                Perm r = y.sk.perm * x.sk.perm.inverse();
                bool ok = true;
                for (int i = 1; i <= r.size(); ++i)
                    if (x.sk.types[r(i) - 1] != y.sk.types[i - 1]) ok = false;
                if (!ok) diags.push_back("cell " + c.name + ": type tuples of " + x.name + " and " + y.name + " are not related by their permutations");
            }
        }
    }
    return diags;
}

bool is_plain(const ConnectiveFamily& f) {
    std::set<int> letter_types, input_types;
    for (const auto& c : f.conns) {
        if (c.arity() == 0) letter_types.insert(c.sk.out_type());
        for (int i = 0; i < c.arity(); ++i) input_types.insert(c.sk.types[i]);
    }
    for (int t : input_types)
        if (!letter_types.count(t)) return false;
    return !letter_types.empty();
}

std::vector<SkeletonD> orbit(const ConnectiveFamily& f, int conn) {
    return orbit_under(f.cell_of(conn).action, f.conns[conn].sk);
}

ConnectiveFamily full_family(const ConnectiveFamily& f) {
    ConnectiveFamily out;
    out.name = f.name;
    out.cells = f.cells;
    for (auto& c : out.cells) c.members.clear();
    std::map<std::pair<int, SkeletonD>, int> index;
    int orbit_id = 0;
    for (std::size_t ci = 0; ci < f.cells.size(); ++ci) {
        const auto& cell = f.cells[ci];
        for (int m : cell.members) {
            const auto& base = f.conns[m];
            if (index.count({static_cast<int>(ci), base.sk})) continue;
            auto orb = orbit_under(cell.action, base.sk);
            const SkeletonD& least = orb.front();
            int this_orbit = orbit_id++;
            // named members of the cell that land in this orbit keep their names
            for (const auto& sk : orb) {
                int named = f.find_sk(static_cast<int>(ci), sk);
                Connective c;
                if (named >= 0) {
                    c = f.conns[named];
                } else {
                    SemiElem g;
                    semi_between(base.sk, sk, g);
                    c.name = base.name + "." + g.str();
                    c.sk = sk;
                    c.primitive = false;
                }
                c.cell = static_cast<int>(ci);
                c.orbit = this_orbit;
                semi_between(least, sk, c.label);
                int idx = static_cast<int>(out.conns.size());
                out.conns.push_back(c);
                out.cells[ci].members.push_back(idx);
                index[{static_cast<int>(ci), sk}] = idx;
            }
        }
    }
    out.orbit_count = orbit_id;
    return out;
}

std::vector<StructuralConnective> structural_family(const ConnectiveFamily& f) {
    ConnectiveFamily full = full_family(f);
    std::vector<StructuralConnective> out;
    for (std::size_t i = 0; i < full.conns.size(); ++i) {
        const auto& c = full.conns[i];
        out.push_back({c.cell, c.orbit, c.label, c.sk, static_cast<int>(i)});
    }
    return out;
}

bool is_beta_compatible(const ConnectiveFamily& f, int cell) {
    const auto& c = f.cells[cell];
    switch (c.action) {
        case ActionKind::AlphaVarsigma:
        case ActionKind::AlphaBetaFree:
        case ActionKind::Beta:
        case ActionKind::Varsigma: return true;
        default: break;
    }
    std::set<SkeletonD> closure;
    for (int m : c.members)
        for (const auto& sk : orbit_under(c.action, f.conns[m].sk)) closure.insert(sk);
    for (const auto& sk : closure)
        if (!closure.count(act_beta(1, sk))) return false;
    return true;
}

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ParseError("line " + std::to_string(line) + ": " + msg, 0);
}

}  // namespace

ConnectiveFamily parse_family(std::string_view text) {
    ConnectiveFamily f;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    int cur = -1;
    std::vector<int> decl_line;
    while (std::getline(in, raw)) {
        ++line;
        auto hash = raw.find('#');
        std::string l = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (l.empty()) continue;
        std::istringstream ls(l);
        std::string kw;
        ls >> kw;
        if (kw == "family") {
            ls >> f.name;
            if (f.name.empty()) fail(line, "family needs a name");
        } else if (kw == "cell") {
            std::string name, act_kw, act;
            ls >> name >> act_kw >> act;
            if (name.empty() || act_kw != "action" || act.empty()) fail(line, "expected 'cell NAME action ACTION'");
            if (f.find_cell(name) >= 0) fail(line, "duplicate cell " + name);
            Cell c;
            c.name = name;
            try {
                c.action = parse_action(act);
            } catch (const ParseError& e) {
                fail(line, e.what());
            }
            c.arity = -1;
            f.cells.push_back(c);
            cur = static_cast<int>(f.cells.size()) - 1;
        } else if (kw == "conn") {
            if (cur < 0) fail(line, "conn outside of a cell");
            std::string name, sk_kw;
            ls >> name >> sk_kw;
            if (name.empty() || sk_kw != "skeleton") fail(line, "expected 'conn NAME skeleton ...'");
            if (f.find(name) >= 0) fail(line, "duplicate connective " + name);
            for (char ch : name)
                if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'))
                    fail(line, "connective names are alphanumeric: " + name);
            std::string rest;
            std::getline(ls, rest);
            rest = trim(rest);
            Connective c;
            c.name = name;
            try {
                c.sk = rest.rfind("C(", 0) == 0 ? iota(parse_skeleton_c(rest)) : parse_skeleton_d(rest);
            } catch (const std::exception& e) {
                fail(line, e.what());
            }
            c.cell = cur;
            auto& cell = f.cells[cur];
            if (cell.arity < 0) cell.arity = c.arity();
            cell.members.push_back(static_cast<int>(f.conns.size()));
            f.conns.push_back(c);
            decl_line.push_back(line);
        } else {
            fail(line, "unknown keyword '" + kw + "'");
        }
    }
    if (f.name.empty()) fail(line, "missing 'family' line");
    for (const auto& c : f.cells)
        if (c.members.empty()) fail(line, "cell " + c.name + " is empty");

    // letters under the trivial action each get their own cell (and so their own valuation)
    ConnectiveFamily g;
    g.name = f.name;
    for (const auto& c : f.cells) {
        bool split = c.action == ActionKind::Trivial && c.arity == 0 && c.members.size() > 1;
        if (!split) {
            Cell nc = c;
            nc.members.clear();
            g.cells.push_back(nc);
            for (int m : c.members) {
                Connective x = f.conns[m];
                x.cell = static_cast<int>(g.cells.size()) - 1;
                g.cells.back().members.push_back(static_cast<int>(g.conns.size()));
                g.conns.push_back(x);
            }
        } else {
            for (int m : c.members) {
                Connective x = f.conns[m];
                Cell nc{x.name, ActionKind::Trivial, 0, {static_cast<int>(g.conns.size())}};
                if (g.find_cell(nc.name) >= 0) nc.name = c.name + "." + x.name;
                g.cells.push_back(nc);
                x.cell = static_cast<int>(g.cells.size()) - 1;
                g.conns.push_back(x);
            }
        }
    }
    auto diags = validate_family(g);
    if (!diags.empty()) {
        std::string msg = "invalid family:";
        for (const auto& d : diags) msg += "\n  " + d;
        throw ParseError(msg, 0);
    }
    return g;
}

std::string print_family(const ConnectiveFamily& f, bool c_syntax) {
    std::string s = "family " + f.name + "\n";
    for (const auto& c : f.cells) {
        s += "cell " + c.name + " action " + action_name(c.action) + "\n";
        for (int m : c.members) {
            const auto& x = f.conns[m];
            s += "  conn " + x.name + " skeleton " + (c_syntax ? iota_inv(x.sk).str() : x.sk.str()) + "\n";
        }
    }
    return s;
}

namespace {

const char* kLambek = R"(family lambek
cell prod action alpha_varsigma
  conn otimes skeleton perm [1,2,3] types (1,1,1) tone (+,+,+) s -
  conn rres   skeleton perm [1,3,2] types (1,1,1) tone (-,+,-) s -
  conn lres   skeleton perm [3,2,1] types (1,1,1) tone (+,-,-) s -
cell letters action trivial
  conn p skeleton perm [1] types (1) tone (+) s +
  conn q skeleton perm [1] types (1) tone (-) s -
)";

// the product cell with syntactic categories as letters
const char* kGrammar = R"(family grammar
cell prod action alpha_varsigma
  conn otimes skeleton perm [1,2,3] types (1,1,1) tone (+,+,+) s -
  conn rres   skeleton perm [1,3,2] types (1,1,1) tone (-,+,-) s -
  conn lres   skeleton perm [3,2,1] types (1,1,1) tone (+,-,-) s -
cell cats action trivial
  conn S  skeleton perm [1] types (1) tone (+) s +
  conn N  skeleton perm [1] types (1) tone (+) s +
  conn NP skeleton perm [1] types (1) tone (+) s +
)";

const char* kBiLambek = R"(family bilambek
cell prod action alpha_varsigma
  conn otimes skeleton perm [1,2,3] types (1,1,1) tone (+,+,+) s -
  conn rres   skeleton perm [1,3,2] types (1,1,1) tone (-,+,-) s -
  conn lres   skeleton perm [3,2,1] types (1,1,1) tone (+,-,-) s -
  conn oplus  skeleton perm [1,2,3] types (1,1,1) tone (+,+,-) s -
  conn succ   skeleton perm [1,3,2] types (1,1,1) tone (-,+,+) s -
  conn prec   skeleton perm [3,2,1] types (1,1,1) tone (+,-,+) s -
cell letters action trivial
  conn p skeleton perm [1] types (1) tone (+) s +
  conn q skeleton perm [1] types (1) tone (-) s -
)";

std::string boolean_text(int k) {
    std::string t = "(" + std::to_string(k);
    std::string t1 = t + ")", t2 = t + "," + std::to_string(k) + ")", t3 = t + "," + std::to_string(k) + "," + std::to_string(k) + ")";
    std::string s = "family boolean\n";
    s += "cell consts action alpha_varsigma\n";
    s += "  conn bot skeleton perm [1] types " + t1 + " tone (+) s -\n";
    s += "  conn top skeleton perm [1] types " + t1 + " tone (-) s -\n";
    s += "cell neg action alpha_varsigma\n";
    s += "  conn neg skeleton perm [1,2] types " + t2 + " tone (-,+) s -\n";
    s += "cell conj action alpha_varsigma\n";
    s += "  conn and skeleton perm [1,2,3] types " + t3 + " tone (+,+,+) s -\n";
    s += "  conn or  skeleton perm [1,2,3] types " + t3 + " tone (+,+,-) s -\n";
    s += "  conn imp skeleton perm [1,3,2] types " + t3 + " tone (-,+,-) s -\n";
    s += "cell letters action trivial\n";
    for (const char* v : {"p", "q", "r"}) s += std::string("  conn ") + v + " skeleton perm [1] types " + t1 + " tone (+) s +\n";
    return s;
}

}  // namespace

ConnectiveFamily builtin_family(std::string_view name) {
    if (name == "lambek") return parse_family(kLambek);
    if (name == "bilambek") return parse_family(kBiLambek);
    if (name == "grammar") return parse_family(kGrammar);
    if (name == "boolean") return parse_family(boolean_text(1));
    if (name.rfind("boolean(", 0) == 0 && name.back() == ')') {
        int k = 0;
        try {
            k = std::stoi(std::string(name.substr(8, name.size() - 9)));
        } catch (const std::logic_error&) {
        }
        if (k < 1) throw ParseError("boolean(k) needs a positive k", 8);
        return parse_family(boolean_text(k));
    }
    throw ParseError("unknown built-in family '" + std::string(name) + "'", 0);
}

ConnectiveFamily load_family(const std::string& spec) {
    if (spec == "lambek" || spec == "bilambek" || spec == "grammar" || spec.rfind("boolean", 0) == 0) return builtin_family(spec);
    std::ifstream in(spec);
    if (!in) throw ParseError("cannot open family file " + spec, 0);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_family(ss.str());
}

}  // namespace atomic
