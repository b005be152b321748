#include "fsi/word_automaton.hpp"

#include <algorithm>
#include <map>
#include <queue>

namespace fsi {

void check_tracks(const Tracks& tracks)
{
    if (tracks.size() > kMaxTracks)
        fail(Errc::TooManyTracks, "at most " + std::to_string(kMaxTracks) + " tracks are supported, got " +
                                      std::to_string(tracks.size()));
    for (std::size_t i = 1; i < tracks.size(); ++i)
        if (!(tracks[i - 1] < tracks[i]))
            fail(Errc::Internal, "track list is not sorted and unique");
}

WordAutomaton::WordAutomaton(Tracks tracks, std::size_t states, State initial, std::vector<State> delta,
                             std::vector<bool> accepting)
    : tracks_(std::move(tracks)), initial_(initial), delta_(std::move(delta)), accepting_(std::move(accepting))
{
    check_tracks(tracks_);
    if (states == 0 || accepting_.size() != states || delta_.size() != states * num_letters() || initial_ >= states)
        fail(Errc::Internal, "inconsistent word automaton tables");
    for (State q : delta_)
        if (q >= states)
            fail(Errc::Internal, "word automaton transition out of range");
}

WordAutomaton WordAutomaton::universal(Tracks tracks)
{
    std::size_t L = letter_count(tracks);
    return WordAutomaton(std::move(tracks), 1, 0, std::vector<State>(L, 0), {true});
}

WordAutomaton WordAutomaton::empty(Tracks tracks)
{
    std::size_t L = letter_count(tracks);
    return WordAutomaton(std::move(tracks), 1, 0, std::vector<State>(L, 0), {false});
}

bool WordAutomaton::run(const std::vector<Letter>& word) const
{
    State q = initial_;
    for (Letter a : word)
        q = step(q, a);
    return accepting(q);
}

namespace word {

WordAutomaton minimize(const WordAutomaton& a)
{
    const std::size_t n = a.num_states(), L = a.num_letters();
    std::vector<State> cls(n);
    for (std::size_t q = 0; q < n; ++q)
        cls[q] = a.accepting(static_cast<State>(q)) ? 1 : 0;
    std::size_t classes = 0;
    while (true) {
        std::map<std::vector<State>, State> sig_ids;
        std::vector<State> next(n);
        std::vector<State> sig(L + 1);
        for (std::size_t q = 0; q < n; ++q) {
            sig[0] = cls[q];
            for (Letter l = 0; l < L; ++l)
                sig[l + 1] = cls[a.step(static_cast<State>(q), l)];
            auto [it, _] = sig_ids.emplace(sig, static_cast<State>(sig_ids.size()));
            next[q] = it->second;
        }
        cls.swap(next);
        if (sig_ids.size() == classes)
            break;
        classes = sig_ids.size();
    }
    std::vector<State> rep(classes, 0);
    std::vector<bool> seen(classes, false);
    for (std::size_t q = 0; q < n; ++q)
        if (!seen[cls[q]]) {
            seen[cls[q]] = true;
            rep[cls[q]] = static_cast<State>(q);
        }
    return build_word_automaton<State>(
        a.tracks(), cls[a.initial()], [&](State c, Letter l) { return cls[a.step(rep[c], l)]; },
        [&](State c) { return a.accepting(rep[c]); });
}

WordAutomaton complement(const WordAutomaton& a)
{
    return build_word_automaton<State>(
        a.tracks(), a.initial(), [&](State q, Letter l) { return a.step(q, l); },
        [&](State q) { return !a.accepting(q); });
}

WordAutomaton product(const WordAutomaton& a, const WordAutomaton& b, bool (*combine)(bool, bool))
{
    if (a.tracks() != b.tracks())
        fail(Errc::Internal, "product of automata over different tracks");
    using P = std::pair<State, State>;
    return build_word_automaton<P, PairHash>(
        a.tracks(), P{a.initial(), b.initial()},
        [&](const P& p, Letter l) { return P{a.step(p.first, l), b.step(p.second, l)}; },
        [&](const P& p) { return combine(a.accepting(p.first), b.accepting(p.second)); });
}

namespace {

std::vector<Letter> letter_translation(std::size_t old_tracks, std::size_t new_tracks,
                                       const std::vector<std::size_t>& where)
{
    std::vector<Letter> tr(std::size_t{1} << new_tracks);
    for (Letter l = 0; l < tr.size(); ++l) {
        Letter old = 0;
        for (std::size_t i = 0; i < old_tracks; ++i)
            if (l >> where[i] & 1)
                old |= Letter{1} << i;
        tr[l] = old;
    }
    return tr;
}

} // namespace

WordAutomaton remap(const WordAutomaton& a, Tracks tracks, const std::vector<std::size_t>& where)
{
    check_tracks(tracks);
    auto tr = letter_translation(a.tracks().size(), tracks.size(), where);
    return build_word_automaton<State>(
        std::move(tracks), a.initial(), [&](State q, Letter l) { return a.step(q, tr[l]); },
        [&](State q) { return a.accepting(q); });
}

WordAutomaton project(const WordAutomaton& a, std::size_t track)
{
    if (track >= a.tracks().size())
        fail(Errc::UnknownTrack, "projection track index out of range");
    Tracks rest = a.tracks();
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(track));
    auto widen = [track](Letter l, Letter bit) {
        Letter low = l & ((Letter{1} << track) - 1);
        Letter high = (l >> track) << (track + 1);
        return low | high | (bit << track);
    };
    using Set = std::vector<State>;
    auto det = build_word_automaton<Set, VectorHash>(
        rest, Set{a.initial()},
        [&](const Set& s, Letter l) {
            Set out;
            for (State q : s)
                for (Letter bit = 0; bit < 2; ++bit)
                    out.push_back(a.step(q, widen(l, bit)));
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
            return out;
        },
        [&](const Set& s) { return std::any_of(s.begin(), s.end(), [&](State q) { return a.accepting(q); }); });
    return minimize(pad_saturate(det));
}

WordAutomaton pad_saturate(const WordAutomaton& a)
{
    const std::size_t n = a.num_states();
    std::vector<bool> good(n);
    for (std::size_t q = 0; q < n; ++q)
        good[q] = a.accepting(static_cast<State>(q));
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t q = 0; q < n; ++q)
            if (!good[q] && good[a.step(static_cast<State>(q), 0)]) {
                good[q] = true;
                changed = true;
            }
    }
    // (current state, state after the last nonzero letter). Codings have at
    // least one position, so before any letter the anchor is unset.
    using P = std::pair<State, State>;
    constexpr State unset = ~State{0};
    const State first_zero = a.step(a.initial(), 0);
    return build_word_automaton<P, PairHash>(
        a.tracks(), P{a.initial(), unset},
        [&](const P& p, Letter l) {
            State q = a.step(p.first, l);
            return l == 0 && p.second != unset ? P{q, p.second} : P{q, q};
        },
        [&](const P& p) { return static_cast<bool>(good[p.second == unset ? first_zero : p.second]); });
}

bool is_empty(const WordAutomaton& a)
{
    return !shortest_accepted(a).has_value();
}

std::optional<std::vector<Letter>> shortest_accepted(const WordAutomaton& a)
{
    const std::size_t n = a.num_states();
    std::vector<long> parent(n, -2);
    std::vector<Letter> via(n, 0);
    std::queue<State> todo;
    parent[a.initial()] = -1;
    todo.push(a.initial());
    while (!todo.empty()) {
        State q = todo.front();
        todo.pop();
        if (a.accepting(q)) {
            std::vector<Letter> word;
            for (State r = q; parent[r] >= 0; r = static_cast<State>(parent[r]))
                word.push_back(via[r]);
            std::reverse(word.begin(), word.end());
            return word;
        }
        for (Letter l = 0; l < a.num_letters(); ++l) {
            State r = a.step(q, l);
            if (parent[r] == -2) {
                parent[r] = q;
                via[r] = l;
                todo.push(r);
            }
        }
    }
    return std::nullopt;
}

} // namespace word

} // namespace fsi
