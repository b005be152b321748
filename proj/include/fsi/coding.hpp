#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fsi/trees.hpp"

namespace fsi {

/// The two base structures: Δ1 = (N, succ), the unary tree 0*, and Δ2, the
/// infinite binary tree {0,1}*.
enum class Theory { Delta1, Delta2 };

std::string_view theory_name(Theory th);
Theory parse_theory(std::string_view name);

/// Letters over k tracks are k-bit masks; bit i is track i. The padding
/// symbol is read as 0 by the automata.
using Letter = std::uint32_t;

/// A tuple of finite node sets, one per track. Each set is kept sorted in
/// length-lex order without duplicates.
using SetTuple = std::vector<std::vector<NodeAddr>>;

enum class Sym : std::uint8_t { Zero, One, Pad };

/// Convolution of a tuple of node sets: a labeled finite word (Δ1) or a
/// labeled finite tree (Δ2) over {0,1,⋄}^k.
///
/// The canonical coding uses the least valid domain containing ε and every
/// member of every set. A position outside a track's own least domain
/// carries ⋄ on that track.
struct Coding {
    Theory kind = Theory::Delta1;
    std::size_t tracks = 0;
    /// Sorted length-lex. For words: ε, 0, 00, ... (positions 0..n-1).
    std::vector<NodeAddr> domain;
    /// labels[node][track]
    std::vector<std::vector<Sym>> labels;

    std::size_t size() const noexcept { return domain.size(); }
    Letter letter(std::size_t node) const;
    SetTuple decode() const;
    /// Words: "101" for one track, "(1,1)(⋄,1)" otherwise. Trees: the nodes in
    /// length-lex order as "addr:labels" separated by spaces.
    std::string serialize() const;

    friend bool operator==(const Coding&, const Coding&) = default;
};

/// Length-lex order on codings: domain size first, then node by node.
bool coding_less(const Coding& a, const Coding& b);

/// The least valid tree domain containing ε and the given nodes.
std::vector<NodeAddr> minimal_domain(const std::vector<NodeAddr>& nodes);

/// Canonical convolution. Throws TheoryMismatch for a Δ2 address under Δ1.
Coding encode_tuple(const SetTuple& sets, Theory th);

/// Normalizes each set (sort, dedupe).
SetTuple normalize(SetTuple sets);

/// Δ1 helpers: naturals to addresses and back.
std::vector<NodeAddr> naturals(std::initializer_list<std::size_t> values);
std::vector<NodeAddr> naturals(const std::vector<std::size_t>& values);
std::vector<std::size_t> as_naturals(const std::vector<NodeAddr>& set);

/// "{0,3}" for Δ1 sets, "{e,01}" for Δ2 sets.
std::string set_str(const std::vector<NodeAddr>& set, Theory th);

} // namespace fsi
