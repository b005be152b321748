#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "fsi/coding.hpp"
#include "fsi/tree_automaton.hpp"
#include "fsi/word_automaton.hpp"

namespace fsi {

/// A word automaton for Δ1 or a tree automaton for Δ2, with named tracks.
/// Binary operations align tracks by name and cylindrify missing ones.
class Automaton {
public:
    Automaton(WordAutomaton w) : impl_(std::move(w)) {}
    Automaton(TreeAutomaton t) : impl_(std::move(t)) {}

    static Automaton universal(Theory th, Tracks tracks = {});
    static Automaton empty(Theory th, Tracks tracks = {});

    Theory theory() const noexcept { return is_word() ? Theory::Delta1 : Theory::Delta2; }
    bool is_word() const noexcept { return std::holds_alternative<WordAutomaton>(impl_); }
    const WordAutomaton& word() const { return std::get<WordAutomaton>(impl_); }
    const TreeAutomaton& tree() const { return std::get<TreeAutomaton>(impl_); }

    const Tracks& tracks() const;
    std::size_t num_states() const;

    /// Text dump; see the README for the format.
    std::string dump() const;
    std::string dot() const;

    friend bool operator==(const Automaton&, const Automaton&) = default;

private:
    std::variant<WordAutomaton, TreeAutomaton> impl_;
};

Tracks make_tracks(std::vector<std::string> names);
Tracks merge_tracks(const Tracks& a, const Tracks& b);

/// Adds indifferent tracks; `tracks` must contain every track of a.
Automaton cylindrify(const Automaton& a, const Tracks& tracks);
/// Renames tracks; several old tracks may map to one new name (the result
/// then reads that track for each of them).
Automaton rename_tracks(const Automaton& a, const std::map<std::string, std::string>& names);

Automaton intersect(const Automaton& a, const Automaton& b);
Automaton unite(const Automaton& a, const Automaton& b);
Automaton complement(const Automaton& a);
Automaton project_track(const Automaton& a, const std::string& var);
Automaton pad_saturate(const Automaton& a);
Automaton minimize(const Automaton& a);

/// Accepts canonical or padded codings. Tracks of c are a's tracks in order.
bool accepts(const Automaton& a, const Coding& c);
bool accepts(const Automaton& a, const SetTuple& sets);
bool is_empty(const Automaton& a);
bool is_universal(const Automaton& a);
bool language_equal(const Automaton& a, const Automaton& b);

/// All accepted canonical codings with at most `bound` domain nodes, in
/// coding_less order.
std::vector<Coding> enumerate_accepted(const Automaton& a, std::size_t bound);

/// All valid finite tree domains with at most `bound` nodes (Δ1: the paths).
std::vector<FiniteTree> tree_domains(Theory th, std::size_t bound);

} // namespace fsi
