#pragma once

#include "atomic/calculus.hpp"

#include <optional>
#include <set>

namespace atomic {

// Bounded proof search, used as a test oracle. Depth counts logical rule applications on a branch
// (letters excluded); display moves are free because each display class is finite.
struct SearchOptions {
    int max_depth = 8;
    std::set<int> labels;  // ASL: structural labels the display moves may use; empty means all
    bool dsr2 = true;
    long budget = 5'000'000;  // explored sequents, across classes
};

struct SearchStats {
    long explored = 0;
    long classes = 0;
    bool out_of_budget = false;
};

std::optional<Derivation> prove_asl(const Lang& L, const Sequent& s, const SearchOptions& o = {}, SearchStats* st = nullptr);
std::optional<Derivation> prove_dl(const Lang& L, const Sequent& s, const SearchOptions& o = {}, SearchStats* st = nullptr);
// FL theorems through a cut-free Gentzen system for NL; the result is an FL derivation (Id, L1–L4, trans)
std::optional<Derivation> prove_fl(const Lang& L, const Sequent& s, const SearchOptions& o = {}, SearchStats* st = nullptr);

// shortest chain of dsr1/dsr2 steps from the conclusion of `from` to `to`, stacked on `from`;
// structural labels restricted as in SearchOptions
std::optional<Derivation> display_path(const Lang& L, Derivation from, const Sequent& to, const std::set<int>& labels,
                                       bool dsr2 = true, long budget = 500'000);

// FL lemma: from X ⊢ A and Y ⊢ B derive X⊗Y ⊢ A⊗B
Derivation fl_monotone(const Lang& L, Derivation xa, Derivation yb);

}  // namespace atomic
