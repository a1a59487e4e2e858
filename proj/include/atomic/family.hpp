#pragma once

#include "atomic/skeleton.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace atomic {

enum class ActionKind { Trivial, Alpha, Beta, Delta, Varsigma, AlphaVarsigma, AlphaDelta, AlphaBetaFree };

std::string action_name(ActionKind a);
ActionKind parse_action(std::string_view s);

// Every implemented action is the restriction of α×ς to a subgroup of (Z/2)^{n+1} ⋊ Sym(n+1).
bool in_group(ActionKind a, const SemiElem& g);
std::vector<SemiElem> group_elements(ActionKind a, int m);
std::vector<SkeletonD> orbit_under(ActionKind a, const SkeletonD& d);

struct Connective {
    std::string name;
    SkeletonD sk;
    int cell = -1;
    bool primitive = true;  // belongs to the family itself, not only to its closure
    int orbit = -1;         // filled by full_family
    SemiElem label;         // position inside the orbit, relative to its minimal skeleton

    int arity() const { return sk.arity(); }
};

struct Cell {
    std::string name;
    ActionKind action = ActionKind::Trivial;
    int arity = 0;
    std::vector<int> members;
};

struct ConnectiveFamily {
    std::string name;
    std::vector<Connective> conns;
    std::vector<Cell> cells;
    int orbit_count = 0;

    int find(std::string_view name) const;
    int find_cell(std::string_view name) const;
    int find_sk(int cell, const SkeletonD& sk) const;
    const Cell& cell_of(int conn) const { return cells[conns[conn].cell]; }
    std::vector<SemiElem> group(int cell) const;
};

struct StructuralConnective {
    int cell;
    int orbit;
    SemiElem label;
    SkeletonD sk;
    int conn;  // index in the full family
};

std::vector<std::string> validate_family(const ConnectiveFamily& f);
bool is_plain(const ConnectiveFamily& f);
std::vector<SkeletonD> orbit(const ConnectiveFamily& f, int conn);
// Closure: every orbit skeleton becomes a connective. Names of new members are base.((bits),[perm]).
ConnectiveFamily full_family(const ConnectiveFamily& f);
std::vector<StructuralConnective> structural_family(const ConnectiveFamily& f);
bool is_beta_compatible(const ConnectiveFamily& f, int cell);

ConnectiveFamily parse_family(std::string_view text);
std::string print_family(const ConnectiveFamily& f, bool c_syntax = false);
ConnectiveFamily builtin_family(std::string_view name);
// built-in name, or a path to a family file
ConnectiveFamily load_family(const std::string& spec);

}  // namespace atomic
