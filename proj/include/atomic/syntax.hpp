#pragma once

#include "atomic/family.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace atomic {

// The family together with its closure; formulas and structures index the closure.
struct Lang {
    ConnectiveFamily base;
    ConnectiveFamily full;
    std::vector<bool> beta_compat;  // per cell
    std::vector<int> beta_partner;  // per connective: same cell, skeleton β(−)sk, or -1
    std::vector<std::vector<SemiElem>> groups;  // per cell, identity first
    int neg = -1;                   // Boolean negation, when the family has one
    int and_ = -1, or_ = -1, top = -1, bot = -1, imp = -1;

    explicit Lang(const ConnectiveFamily& f);
    const Connective& conn(int i) const { return full.conns[i]; }
    int find(std::string_view name) const { return full.find(name); }
    // primitive name -> full index
    int base_index(int base_conn) const { return full.find(base.conns[base_conn].name); }
    int arity(int c) const { return full.conns[c].arity(); }
    Bit quant(int c) const { return full.conns[c].sk.quant(); }
    Bit tone(int c, int i) const { return full.conns[c].sk.tone[i]; }
    int cell(int c) const { return full.conns[c].cell; }
    bool boolean() const { return neg >= 0 && and_ >= 0 && or_ >= 0 && top >= 0 && bot >= 0 && imp >= 0; }
    // connective of the given cell with the given skeleton, -1 if none
    int with_sk(int cell, const SkeletonD& sk) const { return full.find_sk(cell, sk); }
};

enum class Kind : std::uint8_t { F, S, Star, Var };

struct Node;
using Term = std::shared_ptr<const Node>;

struct Node {
    Kind kind;
    int conn;  // connective index for F/S, variable id for Var
    int type;
    std::vector<Term> kids;
    std::size_t hash;
    int size;  // node count
};

Term mk_f(const Lang& L, int conn, std::vector<Term> kids);
Term mk_s(const Lang& L, int conn, std::vector<Term> kids);
Term mk_star_node(Term x);  // explicit star constructor, no folding
Term mk_var(int id, int type = 1);
Term mk_letter(const Lang& L, std::string_view name);

int var_id(const std::string& name);
std::string var_name(int id);
int fresh_var();

bool term_eq(const Term& a, const Term& b);
bool term_less(const Term& a, const Term& b);
bool is_formula(const Term& t);
int formula_depth(const Term& t);
int connective_count(const Term& t);  // F nodes

struct TermHash {
    std::size_t operator()(const Term& t) const { return t->hash; }
};
struct TermEq {
    bool operator()(const Term& a, const Term& b) const { return term_eq(a, b); }
};

struct Sequent {
    Term lhs, rhs;
    bool operator==(const Sequent& o) const { return term_eq(lhs, o.lhs) && term_eq(rhs, o.rhs); }
};

struct SequentHash {
    std::size_t operator()(const Sequent& s) const { return s.lhs->hash * 1000003u ^ s.rhs->hash; }
};

// S_s(X, Y): X ⊢ Y when s = − (1), Y ⊢ X when s = + (0)
inline Sequent S_(Bit s, Term x, Term y) { return s ? Sequent{x, y} : Sequent{y, x}; }

// star with folding: double stars cancel, β-compatible heads absorb it into their label
Term star(const Lang& L, const Term& x);
Term stars(const Lang& L, const Term& x, int k);

struct OccPath {
    int side = 0;  // 0 lhs, 1 rhs
    std::vector<int> steps;  // 0-based child index; star nodes use 0
    bool operator==(const OccPath&) const = default;
};

std::optional<Term> resolve(const Sequent& s, const OccPath& p);
Term at(const Sequent& s, const OccPath& p);  // throws on a bad path
Sequent replace_at(const Sequent& s, const OccPath& p, const Term& t);
std::vector<OccPath> occurrences(const Sequent& s, bool into_formulas = false);
Bit sign_of(const Lang& L, const Sequent& s, const OccPath& p);
std::string path_str(const Sequent& s, const OccPath& p);
OccPath parse_path(std::string_view text);

std::string print_term(const Lang& L, const Term& t);
std::string print_sequent(const Lang& L, const Sequent& s);

Term parse_formula(const Lang& L, std::string_view text);
Term parse_structure(const Lang& L, std::string_view text);
Sequent parse_sequent(const Lang& L, std::string_view text);

// τ_s; s = 1 for antecedent position. Throws std::invalid_argument on untranslatable input.
Term tau(const Lang& L, const Term& x, Bit s);
// τ_{−s(X)} convention for a standalone strict structure
Term tau(const Lang& L, const Term& x);

// substitute every Var with id v
Term subst_var(const Lang& L, const Term& t, int v, const Term& by);
void collect_vars(const Term& t, std::vector<int>& out);
// connective indices used as F nodes; letters included
void collect_connectives(const Term& t, std::vector<int>& out);

}  // namespace atomic
