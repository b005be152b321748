#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace fsi {

enum class Op {
    True,
    False,
    Ex1,
    All1,
    Ex2,
    All2,
    And,
    Or,
    Not,
    Implies,
    Iff,
    In,
    Sub,
    Eq1,
    Eq2,
    Empty,
    Sing,
    Succ,
    S0,
    S1,
    Prefix,
    /// Relation symbol of a first-order signature, applied to element variables.
    Rel,
};

enum class Sort { Element, Set };

/// Lower-case initial: first-order variable. Upper-case initial: set variable.
Sort sort_of(std::string_view var);

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
    Op op;
    /// Bound variable for quantifiers, symbol name for Rel.
    std::string name;
    /// Variable arguments of atoms.
    std::vector<std::string> args;
    std::vector<Formula> kids;
};

std::string_view op_name(Op op);
bool is_quantifier(Op op);
bool is_atom(Op op);

namespace f {

Formula tru();
Formula fls();
Formula ex1(std::string v, Formula body);
Formula all1(std::string v, Formula body);
Formula ex2(std::string v, Formula body);
Formula all2(std::string v, Formula body);
Formula quant(Op op, std::string v, Formula body);
Formula conj(Formula a, Formula b);
Formula conj(std::vector<Formula> parts);
Formula disj(Formula a, Formula b);
Formula disj(std::vector<Formula> parts);
Formula neg(Formula a);
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula atom(Op op, std::vector<std::string> args);
Formula rel(std::string name, std::vector<std::string> args);

} // namespace f

enum class FormulaMode {
    /// WMSO over Δ1/Δ2 with first-order and set variables.
    Wmso,
    /// First-order over a relational signature; unknown heads are relations
    /// on element variables and eq1 is equality.
    FirstOrder,
};

/// S-expression parser. Errors carry the byte offset.
Formula parse_formula(std::string_view text, FormulaMode mode = FormulaMode::Wmso);

std::string to_string(const Formula& fm);

std::set<std::string> free_vars(const Formula& fm);
/// All variable names occurring in fm, bound or free.
std::set<std::string> all_vars(const Formula& fm);

/// A name not in `used`, of the form base_N (or base if unused).
std::string fresh_name(const std::string& base, const std::set<std::string>& used);

/// Capture-avoiding renaming of free variables.
Formula rename_free(const Formula& fm, const std::map<std::string, std::string>& names);

/// Rewrites to the core {true, false, ex1, ex2, and, not, atoms}.
Formula desugar(const Formula& fm);

/// Every quantifier is restricted to `dom`: ex1 x φ becomes
/// ex1 x (x ∈ dom ∧ φ) and ex2 X φ becomes ex2 X (X ⊆ dom ∧ φ).
Formula relativize(const Formula& fm, const std::string& dom);

bool contains_rel(const Formula& fm);

/// Structural equality.
bool same_formula(const Formula& a, const Formula& b);

} // namespace fsi
