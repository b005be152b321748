#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fsi/interp.hpp"
#include "fsi/parking.hpp"

namespace fsi {

/// A finite sets interpretation evaluated on one finite tree. The order is
/// the relation named "pre", or the first binary relation.
struct LatticeInstance {
    FiniteTree t;
    Interpretation interp;
    std::optional<int> kim;
};

inline constexpr std::size_t kLabTreeCap = 16;

struct LatticeReport {
    /// Elements as node masks, ascending.
    std::vector<NodeMask> universe;
    std::size_t bottom = 0;
    /// Universe indices of the atoms, ascending.
    std::vector<std::size_t> atoms;
    /// iso[e]: bit k set iff atoms[k] lies below element e. Bit k stands for
    /// the k-th element of the base set E.
    std::vector<std::uint32_t> iso;

    std::vector<NodeMask> atom_sets() const;
};

/// Throws NotALattice naming the violated axiom, TreeTooLarge.
LatticeReport check_powerset_lattice(const LatticeInstance& inst);

/// Pairs (atom, element) with the atom below the element.
std::set<std::pair<NodeMask, NodeMask>> mem_relation(const LatticeReport& report);

struct Constants {
    std::size_t q_atoms = 0, q_mem = 0;
    long k_c = 0, k_im = 0, m = 0, k_s = 0;
    bool overridden = false;
};

Constants constants_from_sizes(std::size_t q_atoms, std::size_t q_mem);
/// Atoms and Mem relativized to a set track T, compiled over Δ2 and
/// minimized. An explicit inst.kim overrides K_im (other constants keep the
/// derived values).
Constants derive_constants(const LatticeInstance& inst);
/// The two formulas behind derive_constants; free variables T, X (and Y).
Formula atoms_formula(const Interpretation& i);
Formula mem_formula(const Interpretation& i);

/// I(X): nodes x with more than K_im sets Y ⊆ subtree(x) such that
/// (X - subtree(x)) ∪ Y is an atom. Throws NotAnAtom, SubtreeTooLarge.
std::vector<NodeAddr> important_nodes(const FiniteTree& t, const LatticeReport& report, NodeMask atom, long kim);

struct SIndex {
    NodeAddr node;
    /// I(X) was empty.
    bool degenerate = false;
};

/// Deepest member of I(X) comparable to all of I(X); ε when I(X) is empty.
SIndex sindex(const std::vector<NodeAddr>& important);

struct AtomIndex {
    NodeMask atom;
    std::vector<NodeAddr> important;
    SIndex index;
};

std::vector<AtomIndex> index_atoms(const FiniteTree& t, const LatticeReport& report, long kim);
Distribution index_distribution(const FiniteTree& t, const std::vector<AtomIndex>& indices);

struct LemmaReport {
    /// Outside-subtree traces of atoms important at x stay below K_im.
    bool bound_a = true;
    /// Index distribution is K_s-sparse (checked by zone enumeration).
    bool bound_b = true;
    bool overridden = false;
    std::string detail;
    bool passed() const { return bound_a && bound_b; }
};

LemmaReport check_lemma_bounds(const FiniteTree& t, const LatticeReport& report, const Constants& c);

struct CodeInjection {
    Distribution distribution;
    int k_star = 0;
    std::vector<AtomIndex> indices;
    ParkingResult parking;
    /// Atom to node.
    std::map<NodeMask, NodeAddr> code;
};

/// Throws TooManyAtoms, NotPurelyBinary.
CodeInjection build_code_injection(const FiniteTree& t, const LatticeReport& report, long kim);
/// Atom order at a shared index: X first iff min(X Δ Y) ∈ X.
bool atom_before(NodeMask x, NodeMask y);
bool verify_code_injective(const LatticeReport& report, const std::map<NodeMask, NodeAddr>& code);

/// Families of random verified instances.
enum class LabFamily { Leaves, Inner, RootAndLeaves, ReversedLeaves };
Interpretation lab_interpretation(LabFamily family);
LatticeInstance random_lab_instance(std::mt19937_64& rng, std::size_t max_nodes = 12);

/// Full pipeline used by the CLI and the acceptance binary.
struct LabRun {
    LatticeReport lattice;
    Constants constants;
    CodeInjection injection;
    LemmaReport lemmas;
    bool injective = false;
    bool prefix_closed = true;
};

LabRun run_lab(const LatticeInstance& inst);
LabRun run_lab(const LatticeInstance& inst, const Constants& constants);

} // namespace fsi
