#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fsi/automaton.hpp"
#include "fsi/formula.hpp"

namespace fsi {

/// Set variable names X1..Xn used for relation arguments.
std::vector<std::string> arg_vars(std::size_t n, const std::string& base = "X");

struct RelationDef {
    std::string name;
    std::size_t arity = 0;
    /// Free variables among arg_vars(arity) (X1..Xn, or x1..xn for
    /// first-order interpretations).
    Formula formula;
};

/// Finite sets interpretation of Δ1 or Δ2: elements are the finite sets X
/// with δ(X); relation i holds of (X1..Xn) iff its formula does.
struct Interpretation {
    Theory theory = Theory::Delta1;
    /// Free variable: X.
    Formula universe;
    std::vector<RelationDef> relations;

    const RelationDef* find(const std::string& name) const;
};

/// First-order interpretation over a relational signature: universe formula
/// in x, relation formulas in x1..xn.
struct FOInterpretation {
    Formula universe;
    std::vector<RelationDef> relations;
};

/// Element-valued WMSO interpretation of a base theory into itself: the
/// domain formula has free element variable x, atom definitions have x, y.
struct WmsoInterpretation {
    Theory theory = Theory::Delta1;
    Formula domain;
    std::map<std::string, Formula> atoms;
};

/// Checks free variables and arities; throws InvalidInput.
void validate(const Interpretation& i);
void validate(const FOInterpretation& i);
void validate(const WmsoInterpretation& w);

struct RelationAutomaton {
    std::string name;
    std::size_t arity;
    /// Tracks X1..Xn.
    Automaton automaton;
};

/// Automatic (Δ1) or tree-automatic (Δ2) presentation.
struct Presentation {
    Theory theory = Theory::Delta1;
    /// Track X.
    Automaton universe = Automaton::empty(Theory::Delta1, {"X"});
    std::vector<RelationAutomaton> relations;

    const RelationAutomaton* find(const std::string& name) const;
};

Presentation apply_interpretation(const Interpretation& i);

/// δ = true, pre = sub, base relations lifted to singletons.
Interpretation powerset_interpretation(Theory th);
Presentation powerset_presentation(Theory th);
/// Names of the base relations of a theory: succ, or s0, s1, prefix.
std::vector<std::string> base_relation_names(Theory th);

/// Automaton over the query's free variables (one track each) accepting the
/// satisfying element tuples. Throws SignatureMismatch.
Automaton fo_query(const Presentation& p, const Formula& q);
/// Truth of a sentence.
bool fo_sentence(const Presentation& p, const Formula& q);

/// Elements are decoded sets; the bound limits the coding domain size.
std::vector<std::vector<NodeAddr>> enumerate_elements(const Presentation& p, std::size_t bound);

/// Presentation of fo applied to the structure presented by p.
Presentation apply_fo_interpretation(const FOInterpretation& fo, const Presentation& p);

/// fo ∘ i as a finite sets interpretation.
Interpretation compose_fo_after(const FOInterpretation& fo, const Interpretation& i);
/// i ∘ w: the atoms of i's formulas are read through w.
Interpretation compose_wmso_before(const Interpretation& i, const WmsoInterpretation& w);
/// J with J(P^W(base)) ≅ i(base).
FOInterpretation factor_through_powerset(const Interpretation& i);
/// FO formula defining the atoms of a pre-order written `pre`.
Formula atom_formula(const std::string& x, const std::string& pre = "pre");

/// Induced finite substructure: element i is elements[i].
struct FiniteStructure {
    std::vector<std::vector<NodeAddr>> elements;
    std::map<std::string, std::pair<std::size_t, std::set<std::vector<int>>>> relations;
};

FiniteStructure fragment(const Presentation& p, std::size_t bound);
FiniteStructure fragment_on(const Presentation& p, std::vector<std::vector<NodeAddr>> elements);

/// Bijection (structure a index -> structure b index) preserving every
/// relation both ways, found by backtracking with degree pruning.
std::optional<std::vector<int>> find_isomorphism(const FiniteStructure& a, const FiniteStructure& b);

struct QuotientResult {
    Presentation presentation;
    /// The congruence on the new universe coincides with equality.
    bool injective = false;
    /// Every enumerated element has a representative in the new universe.
    bool surjective = false;
    std::size_t checked_elements = 0;
};

/// Δ1 only. Keeps the length-lex least member of every class.
QuotientResult quotient_word_presentation(const Presentation& p, const std::string& congruence,
                                          std::size_t bound);

/// Words: Y strictly before X in length-lex order of their codes (tracks X, Y).
Automaton llex_less(const std::string& x, const std::string& y);

} // namespace fsi
