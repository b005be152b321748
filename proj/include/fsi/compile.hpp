#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "fsi/automaton.hpp"
#include "fsi/formula.hpp"

namespace fsi {

/// WMSO to automata over the canonical codings of Δ1 (words) or Δ2 (trees).
/// The result has one track per free variable; element variables are set
/// tracks constrained to singletons.
Automaton compile(const Formula& fm, Theory th);
Automaton compile(std::string_view text, Theory th);

/// Atom automaton over the atom's argument names, element arguments
/// constrained to singletons. Throws TheoryMismatch for atoms of the other
/// theory.
Automaton atom_automaton(Op op, const std::vector<std::string>& args, Theory th);
Automaton singleton_automaton(Theory th, const std::string& var);

/// The compilation scheme shared by WMSO formulas and first-order queries
/// over presentations.
struct CompileEnv {
    Theory theory = Theory::Delta1;
    /// Automaton of an atom node (including guards of its element variables).
    std::function<Automaton(const FormulaNode&)> atom;
    /// Constraint on the values of an element variable.
    std::function<Automaton(const std::string&)> guard;
    /// Whether element quantifiers range over a nonempty domain.
    bool domain_nonempty = true;
};

/// Compiles a formula already in the desugared core.
Automaton compile_core(const Formula& core, const CompileEnv& env);

} // namespace fsi
