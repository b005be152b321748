#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "fsi/word_automaton.hpp"

namespace fsi {

inline constexpr std::size_t kMaxTreeTable = std::size_t{1} << 26;

/// Complete deterministic bottom-up automaton over finite labeled trees in
/// which a node has no children, only a left child, or both children.
class TreeAutomaton {
public:
    TreeAutomaton(Tracks tracks, std::size_t states, std::vector<State> leaf, std::vector<State> unary,
                  std::vector<State> binary, std::vector<bool> accepting);

    static TreeAutomaton universal(Tracks tracks);
    static TreeAutomaton empty(Tracks tracks);

    const Tracks& tracks() const noexcept { return tracks_; }
    std::size_t num_letters() const noexcept { return std::size_t{1} << tracks_.size(); }
    std::size_t num_states() const noexcept { return accepting_.size(); }
    bool accepting(State q) const { return accepting_[q]; }

    State leaf(Letter a) const { return leaf_[a]; }
    State unary(State left, Letter a) const { return unary_[left * num_letters() + a]; }
    State binary(State left, State right, Letter a) const
    {
        return binary_[(static_cast<std::size_t>(left) * num_states() + right) * num_letters() + a];
    }

    /// State reached at the root of a letter-labeled tree domain.
    State evaluate(const FiniteTree& t, const std::vector<Letter>& labels) const;

    friend bool operator==(const TreeAutomaton&, const TreeAutomaton&) = default;

private:
    Tracks tracks_;
    std::vector<State> leaf_, unary_, binary_;
    std::vector<bool> accepting_;
};

/// Canonical exploration: leaf letters first; then for the i-th discovered
/// state all unary transitions, followed by binary pairs (i,j) and (j,i) for
/// every j ≤ i.
template <class S, class Hash = std::hash<S>, class Leaf, class Unary, class Binary, class Accept>
TreeAutomaton build_tree_automaton(Tracks tracks, Leaf leaf, Unary unary, Binary binary, Accept accept)
{
    check_tracks(tracks);
    const std::size_t L = letter_count(tracks);
    std::vector<S> states;
    std::unordered_map<S, State, Hash> ids;
    auto id_of = [&](S s) -> State {
        auto it = ids.find(s);
        if (it != ids.end())
            return it->second;
        if ((states.size() + 1) * (states.size() + 1) * L > kMaxTreeTable)
            fail(Errc::CompileError, "tree automaton exceeds the transition table limit");
        State id = static_cast<State>(states.size());
        ids.emplace(s, id);
        states.push_back(std::move(s));
        return id;
    };
    std::vector<State> leaf_tab(L);
    for (Letter a = 0; a < L; ++a)
        leaf_tab[a] = id_of(leaf(a));
    std::vector<std::vector<State>> un, row, col;
    for (std::size_t i = 0; i < states.size(); ++i) {
        un.emplace_back(L);
        for (Letter a = 0; a < L; ++a) {
            S next = unary(states[i], a);
            un[i][a] = id_of(std::move(next));
        }
        row.emplace_back((i + 1) * L);
        col.emplace_back((i + 1) * L);
        for (std::size_t j = 0; j <= i; ++j)
            for (Letter a = 0; a < L; ++a) {
                S s1 = binary(states[i], states[j], a);
                row[i][j * L + a] = id_of(std::move(s1));
                if (j != i) {
                    S s2 = binary(states[j], states[i], a);
                    col[i][j * L + a] = id_of(std::move(s2));
                }
            }
    }
    const std::size_t n = states.size();
    std::vector<State> un_tab(n * L), bin_tab(n * n * L);
    for (std::size_t p = 0; p < n; ++p) {
        std::copy(un[p].begin(), un[p].end(), un_tab.begin() + static_cast<std::ptrdiff_t>(p * L));
        for (std::size_t r = 0; r < n; ++r)
            for (Letter a = 0; a < L; ++a)
                bin_tab[(p * n + r) * L + a] = p >= r ? row[p][r * L + a] : col[r][p * L + a];
    }
    std::vector<bool> acc(n);
    for (std::size_t i = 0; i < n; ++i)
        acc[i] = accept(states[i]);
    return TreeAutomaton(std::move(tracks), n, std::move(leaf_tab), std::move(un_tab), std::move(bin_tab),
                         std::move(acc));
}

namespace tree {

TreeAutomaton minimize(const TreeAutomaton& a);
TreeAutomaton complement(const TreeAutomaton& a);
TreeAutomaton product(const TreeAutomaton& a, const TreeAutomaton& b, bool (*combine)(bool, bool));
TreeAutomaton remap(const TreeAutomaton& a, Tracks tracks, const std::vector<std::size_t>& where);
TreeAutomaton project(const TreeAutomaton& a, std::size_t track);
TreeAutomaton pad_saturate(const TreeAutomaton& a);
bool is_empty(const TreeAutomaton& a);

} // namespace tree

} // namespace fsi
