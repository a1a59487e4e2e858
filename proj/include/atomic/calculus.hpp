#pragma once

#include "atomic/syntax.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace atomic {

enum class CalcKind { ASL, DL, FL, GGL0, GGLBool };

struct CalculusSpec {
    std::string name;
    CalcKind kind = CalcKind::ASL;
    bool cut = false;   // cut (trans in FL)
    bool id = false;    // Id on arbitrary formulas; letter Id is always part of DL and FL
    bool open = true;   // hypotheses allowed as leaves
    bool dsr2 = true;   // ASL: dsr2; GGL_Boolean: the star flip that the rewrite removes
};

CalculusSpec calc_asl();
CalculusSpec calc_dl();
CalculusSpec calc_fl();
CalculusSpec calc_ggl0();
CalculusSpec calc_ggl_bool();
std::vector<CalculusSpec> builtin_calculi();
CalculusSpec find_calculus(std::string_view name);  // throws std::invalid_argument

struct Rule {
    std::string name;  // dsr1 dsr2 intro_r intro_l cut id hyp dp1 dp2 L1..L4 trans dr1 dr2 dr2c CI K WI IWI
    int conn = -1;     // intro rules
    int cell = -1;     // dsr1
    SemiElem g;        // dsr1
    int index = 0;     // dr1: 1-based child index

    bool operator==(const Rule&) const = default;
};

inline Rule rl(std::string name, int conn = -1) { return Rule{std::move(name), conn, -1, SemiElem{}, 0}; }
inline Rule rl_dsr1(int cell, SemiElem g) { return Rule{"dsr1", -1, cell, std::move(g), 0}; }
inline Rule rl_dr1(int i) { return Rule{"dr1", -1, -1, SemiElem{}, i}; }

std::string rule_str(const Lang& L, const Rule& r);
Rule parse_rule(const Lang& L, std::string_view text);

struct Derivation {
    Sequent concl;
    Rule rule;
    std::vector<Derivation> prem;
};

Derivation hyp(const Sequent& s);
int deriv_size(const Derivation& d);
int deriv_height(const Derivation& d);
int count_rule(const Derivation& d, std::string_view name);
bool uses_cut(const Derivation& d);
std::vector<Sequent> open_leaves(const Derivation& d);

std::string print_derivation(const Lang& L, const Derivation& d);
Derivation parse_derivation(const Lang& L, std::string_view text);

struct CheckResult {
    bool ok = true;
    std::string path;  // "root", "root.2.1", ...
    std::string message;
    explicit operator bool() const { return ok; }
};

CheckResult check_derivation(const Lang& L, const Derivation& d, const CalculusSpec& spec);
// single node, premises taken from the children's conclusions
std::optional<std::string> check_step(const Lang& L, const CalculusSpec& spec, const Rule& r,
                                      const std::vector<Sequent>& prem, const Sequent& concl);

struct CalculusError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// side (0 lhs, 1 rhs) whose head is a structural connective of the cell sitting on its proper side
std::vector<int> proper_heads(const Lang& L, const Sequent& s, int cell);
Sequent act_on_side(const Lang& L, const SemiElem& g, const Sequent& s, int side);
// the unique proper head of the cell; throws on shape or cell mismatch and on ambiguity
Sequent act_on_sequent(const Lang& L, const SemiElem& g, const Sequent& s, int cell);

// Boolean sugar helpers
Term comma(const Lang& L, Bit sign, Term x, Term y);
Term unit_i(const Lang& L, Bit sign);

Derivation derive_identity(const Lang& L, const Term& phi);
// derivation from the open premise s to a sequent where the occurrence is a whole side (dsr1/dsr2 only)
Derivation display(const Lang& L, const Sequent& s, const OccPath& p);
// ⋆(φ) ⊢ U shape (or its ∀ mirror) to the premise shape, with one cut and an open premise
Derivation invert_intro(const Lang& L, const Sequent& s);

// orbit identifiers of the non-letter connectives plus letter names, as strings
std::set<std::string> v_a(const Lang& L, const Term& phi);

struct Interpolant {
    Term chi;
    Derivation left, right;
};
Interpolant compute_interpolant(const Lang& L, const Derivation& d);

Derivation eliminate_cuts(const Lang& L, const Derivation& d, long budget);
Derivation eliminate_structural(const Lang& L, const Derivation& d, const std::set<int>& allowed);
// replaces each dsr2 step of a GGL_Boolean derivation by structural rules
Derivation eliminate_dsr2(const Lang& L, const Derivation& d);

// one line per generated rule: "name: premise ; premise => conclusion", metavariables X1.., U, A1..
std::vector<std::string> rule_schemas(const Lang& L, const CalculusSpec& spec);

// structural labels of the base family's connectives (letters included)
std::set<int> base_labels(const Lang& L);

struct EquivalencePair {
    int a, b;  // full-family connective indices, b = α(σ)a with σ fixing n+1
    Perm sigma;
    Derivation ab, ba;
};
// the n! classes at n = 2 are pairs; one pair per class with both derivations
std::vector<EquivalencePair> factorial_orbit_pairs(const Lang& L, int cell);

struct AuditReport {
    int rules = 0;
    std::vector<std::string> violations;
};
// C1–C7 style checks on schematic instances of the generated ASL rules of one cell
AuditReport audit_rules(const Lang& L, int cell);

}  // namespace atomic
