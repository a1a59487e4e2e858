#pragma once

#include "atomic/syntax.hpp"

#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace atomic {

using Tuple = std::vector<int>;  // world indices
using TupleSet = std::set<Tuple>;

// One relation per cell, keyed by the cell name (letters under the trivial action have their own cells).
struct Model {
    std::string name = "M";
    std::vector<std::string> worlds;
    std::map<std::string, TupleSet> rel;

    int size() const { return static_cast<int>(worlds.size()); }
    int world(std::string_view name) const;  // -1 if absent
};

Model parse_model(std::string_view text);
std::string print_model(const Model& m);

// Σ k_i over the cell's type tuple
int relation_arity(const Lang& L, int cell);
// empty when the model fits the family
std::vector<std::string> validate_model(const Lang& L, const Model& m);

// ⟦t⟧ as a set of k-tuples; structural nodes read as their connective, * as complement
TupleSet interpret(const Lang& L, const Model& m, const Term& t);
// ⟦lhs⟧ ⊆ ⟦rhs⟧
bool check_sequent(const Lang& L, const Model& m, const Sequent& s);
bool holds_at(const Lang& L, const Model& m, const Term& t, int world);

// every k-tuple over the worlds
std::vector<Tuple> all_tuples(int worlds, int k);

// the Boolean cells get their fixed relations: conj diagonal, neg identity, consts empty
void standard_boolean(const Lang& L, Model& m);
// random relations of the given density for every cell (Boolean cells fixed when the family has them)
Model random_model(const Lang& L, int worlds, double density, std::mt19937& rng);

// ψ_{1,t}: formulas over a connective's ς-orbit into ⋆, its dual δ(−,⋆) and dual letters.
// `to` is the target language (same cell names); it defaults to the source.
Term translate_dual(const Lang& from, const Term& phi, Bit t, const Lang* to = nullptr);
// φ₁: a δ-family formula into the α×ς family, connective by skeleton within the same cell name
Term translate_to_full(const Lang& from, const Lang& to, const Term& phi);

struct CounterexamplePair {
    std::shared_ptr<const Lang> lang;
    Model M, N;
    Term star, neg_star;  // ⋆(p1..pn) and −⋆(p1..pn)
    int m_world = 0, n_world = 0;  // w_n in M, w_n' in N
    std::vector<std::pair<int, int>> pairs;  // the listed relation between M and N
};
CounterexamplePair counterexample_pair(int n);

// back-and-forth conditions on letter valuations and on every relation position; lists the failures
std::vector<std::string> bisimulation_failures(const Lang& L, const Model& a, const Model& b,
                                               const std::vector<std::pair<int, int>>& z);

}  // namespace atomic
