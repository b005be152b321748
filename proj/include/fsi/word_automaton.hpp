#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fsi/coding.hpp"
#include "fsi/error.hpp"

namespace fsi {

using State = std::uint32_t;
/// Track names, sorted and unique. Track i is bit i of a Letter.
using Tracks = std::vector<std::string>;

inline constexpr std::size_t kMaxTracks = 12;
inline constexpr std::size_t kMaxStates = 200000;

inline std::size_t letter_count(const Tracks& tracks) { return std::size_t{1} << tracks.size(); }
void check_tracks(const Tracks& tracks);

/// Complete deterministic automaton over finite words; position 0 is read
/// first.
class WordAutomaton {
public:
    WordAutomaton(Tracks tracks, std::size_t states, State initial, std::vector<State> delta,
                  std::vector<bool> accepting);

    static WordAutomaton universal(Tracks tracks);
    static WordAutomaton empty(Tracks tracks);

    const Tracks& tracks() const noexcept { return tracks_; }
    std::size_t num_letters() const noexcept { return std::size_t{1} << tracks_.size(); }
    std::size_t num_states() const noexcept { return accepting_.size(); }
    State initial() const noexcept { return initial_; }
    bool accepting(State q) const { return accepting_[q]; }
    State step(State q, Letter a) const { return delta_[q * num_letters() + a]; }

    bool run(const std::vector<Letter>& word) const;

    friend bool operator==(const WordAutomaton&, const WordAutomaton&) = default;

private:
    Tracks tracks_;
    State initial_;
    std::vector<State> delta_;
    std::vector<bool> accepting_;
};

/// Breadth-first exploration of a semantic state space. States are numbered
/// in discovery order, letters in increasing order.
template <class S, class Hash = std::hash<S>, class Step, class Accept>
WordAutomaton build_word_automaton(Tracks tracks, S init, Step step, Accept accept)
{
    check_tracks(tracks);
    const std::size_t L = letter_count(tracks);
    std::vector<S> states;
    std::unordered_map<S, State, Hash> ids;
    auto id_of = [&](S s) -> State {
        auto it = ids.find(s);
        if (it != ids.end())
            return it->second;
        if (states.size() >= kMaxStates)
            fail(Errc::CompileError, "automaton exceeds the state limit");
        State id = static_cast<State>(states.size());
        ids.emplace(s, id);
        states.push_back(std::move(s));
        return id;
    };
    State q0 = id_of(std::move(init));
    std::vector<State> delta;
    for (std::size_t i = 0; i < states.size(); ++i)
        for (Letter a = 0; a < L; ++a) {
            S next = step(states[i], a);
            delta.push_back(id_of(std::move(next)));
        }
    std::vector<bool> acc(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
        acc[i] = accept(states[i]);
    return WordAutomaton(std::move(tracks), states.size(), q0, std::move(delta), std::move(acc));
}

struct PairHash {
    std::size_t operator()(const std::pair<State, State>& p) const noexcept
    {
        return std::hash<std::uint64_t>{}((std::uint64_t{p.first} << 32) | p.second);
    }
};

struct VectorHash {
    std::size_t operator()(const std::vector<State>& v) const noexcept
    {
        std::size_t h = v.size();
        for (State s : v)
            h ^= s + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

namespace word {

WordAutomaton minimize(const WordAutomaton& a);
WordAutomaton complement(const WordAutomaton& a);
/// Product with a boolean combiner; tracks must already agree.
WordAutomaton product(const WordAutomaton& a, const WordAutomaton& b, bool (*combine)(bool, bool));
/// Letters over `tracks` are translated: old track i reads new track where[i].
WordAutomaton remap(const WordAutomaton& a, Tracks tracks, const std::vector<std::size_t>& where);
/// Existential projection of one track (subset construction).
WordAutomaton project(const WordAutomaton& a, std::size_t track);
WordAutomaton pad_saturate(const WordAutomaton& a);
bool is_empty(const WordAutomaton& a);
/// Some accepted word, shortest first, as a letter sequence.
std::optional<std::vector<Letter>> shortest_accepted(const WordAutomaton& a);

} // namespace word

} // namespace fsi
