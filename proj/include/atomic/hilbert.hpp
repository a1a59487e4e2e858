#pragma once

#include "atomic/syntax.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace atomic {

struct HilbertLine {
    int number = 0;
    Term formula;
    std::string rule;  // A0 A0' A1 A2 A3 A4 A7 A8 R3 R4 MP HYP, or a PL_ lemma name
    std::vector<int> refs;
    std::vector<std::pair<std::string, std::string>> bindings;  // metavariable := text
    int source_line = 0;
};

struct HilbertProof {
    std::vector<HilbertLine> lines;
};

// "3: imp(and(p,q), p) ; A2 φ:=p ψ:=q", one line per step, '#' comments
HilbertProof parse_hilbert(const Lang& L, std::string_view text);
std::string print_hilbert(const Lang& L, const HilbertProof& p);

struct HilbertResult {
    bool ok = true;
    int line = 0;  // proof line number of the first failure
    std::string message;
    int hypotheses = 0;
    explicit operator bool() const { return ok; }
};

HilbertResult check_hilbert(const Lang& L, const HilbertProof& p);
// the reason the line fails its justification, given the formulas of the cited lines
std::optional<std::string> check_hilbert_line(const Lang& L, const HilbertLine& line, const std::vector<Term>& cited);

// τ(X ⊢ Y) = τ_−(X) → τ_+(Y)
Term tau_sequent(const Lang& L, const Sequent& s);

// (j n+1)⋆ inside ⋆'s cell, -1 when the cell's group lacks it
int residual_at(const Lang& L, int conn, int j);

// named propositional lemmas; metas are substituted for φ, ψ, ρ in that order
struct LemmaInstance {
    std::vector<Term> premises;
    Term conclusion;
};
std::vector<std::string> pl_lemma_names();
LemmaInstance pl_lemma(const Lang& L, const std::string& name, const std::vector<Term>& metas);

}  // namespace atomic
