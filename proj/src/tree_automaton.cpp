#include "fsi/tree_automaton.hpp"

#include <algorithm>
#include <map>

namespace fsi {

TreeAutomaton::TreeAutomaton(Tracks tracks, std::size_t states, std::vector<State> leaf, std::vector<State> unary,
                             std::vector<State> binary, std::vector<bool> accepting)
    : tracks_(std::move(tracks)), leaf_(std::move(leaf)), unary_(std::move(unary)), binary_(std::move(binary)),
      accepting_(std::move(accepting))
{
    check_tracks(tracks_);
    const std::size_t L = num_letters();
    if (states == 0 || accepting_.size() != states || leaf_.size() != L || unary_.size() != states * L ||
        binary_.size() != states * states * L)
        fail(Errc::Internal, "inconsistent tree automaton tables");
    auto in_range = [states](const std::vector<State>& v) {
        return std::all_of(v.begin(), v.end(), [states](State q) { return q < states; });
    };
    if (!in_range(leaf_) || !in_range(unary_) || !in_range(binary_))
        fail(Errc::Internal, "tree automaton transition out of range");
}

TreeAutomaton TreeAutomaton::universal(Tracks tracks)
{
    std::size_t L = letter_count(tracks);
    return TreeAutomaton(std::move(tracks), 1, std::vector<State>(L, 0), std::vector<State>(L, 0),
                         std::vector<State>(L, 0), {true});
}

TreeAutomaton TreeAutomaton::empty(Tracks tracks)
{
    std::size_t L = letter_count(tracks);
    return TreeAutomaton(std::move(tracks), 1, std::vector<State>(L, 0), std::vector<State>(L, 0),
                         std::vector<State>(L, 0), {false});
}

State TreeAutomaton::evaluate(const FiniteTree& t, const std::vector<Letter>& labels) const
{
    std::vector<State> at(t.size());
    for (int i = static_cast<int>(t.size()) - 1; i >= 0; --i) {
        Letter a = labels[static_cast<std::size_t>(i)];
        if (t.left(i) < 0)
            at[static_cast<std::size_t>(i)] = leaf(a);
        else if (t.right(i) < 0)
            at[static_cast<std::size_t>(i)] = unary(at[static_cast<std::size_t>(t.left(i))], a);
        else
            at[static_cast<std::size_t>(i)] =
                binary(at[static_cast<std::size_t>(t.left(i))], at[static_cast<std::size_t>(t.right(i))], a);
    }
    return at[0];
}

namespace tree {

TreeAutomaton minimize(const TreeAutomaton& a)
{
    const std::size_t n = a.num_states(), L = a.num_letters();
    std::vector<State> cls(n);
    for (std::size_t q = 0; q < n; ++q)
        cls[q] = a.accepting(static_cast<State>(q)) ? 1 : 0;
    std::size_t classes = 0;
    std::vector<State> sig;
    while (true) {
        std::map<std::vector<State>, State> sig_ids;
        std::vector<State> next(n);
        for (std::size_t q = 0; q < n; ++q) {
            State s = static_cast<State>(q);
            sig.clear();
            sig.push_back(cls[q]);
            for (Letter l = 0; l < L; ++l)
                sig.push_back(cls[a.unary(s, l)]);
            for (std::size_t r = 0; r < n; ++r)
                for (Letter l = 0; l < L; ++l) {
                    sig.push_back(cls[a.binary(s, static_cast<State>(r), l)]);
                    sig.push_back(cls[a.binary(static_cast<State>(r), s, l)]);
                }
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
    return build_tree_automaton<State>(
        a.tracks(), [&](Letter l) { return cls[a.leaf(l)]; },
        [&](State c, Letter l) { return cls[a.unary(rep[c], l)]; },
        [&](State c, State d, Letter l) { return cls[a.binary(rep[c], rep[d], l)]; },
        [&](State c) { return a.accepting(rep[c]); });
}

TreeAutomaton complement(const TreeAutomaton& a)
{
    return build_tree_automaton<State>(
        a.tracks(), [&](Letter l) { return a.leaf(l); }, [&](State q, Letter l) { return a.unary(q, l); },
        [&](State p, State q, Letter l) { return a.binary(p, q, l); }, [&](State q) { return !a.accepting(q); });
}

TreeAutomaton product(const TreeAutomaton& a, const TreeAutomaton& b, bool (*combine)(bool, bool))
{
    if (a.tracks() != b.tracks())
        fail(Errc::Internal, "product of automata over different tracks");
    using P = std::pair<State, State>;
    return build_tree_automaton<P, PairHash>(
        a.tracks(), [&](Letter l) { return P{a.leaf(l), b.leaf(l)}; },
        [&](const P& p, Letter l) { return P{a.unary(p.first, l), b.unary(p.second, l)}; },
        [&](const P& p, const P& q, Letter l) {
            return P{a.binary(p.first, q.first, l), b.binary(p.second, q.second, l)};
        },
        [&](const P& p) { return combine(a.accepting(p.first), b.accepting(p.second)); });
}

TreeAutomaton remap(const TreeAutomaton& a, Tracks tracks, const std::vector<std::size_t>& where)
{
    check_tracks(tracks);
    std::vector<Letter> tr(letter_count(tracks));
    for (Letter l = 0; l < tr.size(); ++l)
        for (std::size_t i = 0; i < a.tracks().size(); ++i)
            if (l >> where[i] & 1)
                tr[l] |= Letter{1} << i;
    return build_tree_automaton<State>(
        std::move(tracks), [&](Letter l) { return a.leaf(tr[l]); },
        [&](State q, Letter l) { return a.unary(q, tr[l]); },
        [&](State p, State q, Letter l) { return a.binary(p, q, tr[l]); },
        [&](State q) { return a.accepting(q); });
}

namespace {

using Set = std::vector<State>;

void normalize_set(Set& s)
{
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

bool any_accepting(const TreeAutomaton& a, const Set& s)
{
    return std::any_of(s.begin(), s.end(), [&](State q) { return a.accepting(q); });
}

} // namespace

TreeAutomaton project(const TreeAutomaton& a, std::size_t track)
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
    auto det = build_tree_automaton<Set, VectorHash>(
        rest,
        [&](Letter l) {
            Set out{a.leaf(widen(l, 0)), a.leaf(widen(l, 1))};
            normalize_set(out);
            return out;
        },
        [&](const Set& s, Letter l) {
            Set out;
            for (State q : s)
                for (Letter bit = 0; bit < 2; ++bit)
                    out.push_back(a.unary(q, widen(l, bit)));
            normalize_set(out);
            return out;
        },
        [&](const Set& s, const Set& t, Letter l) {
            Set out;
            for (State p : s)
                for (State q : t)
                    for (Letter bit = 0; bit < 2; ++bit)
                        out.push_back(a.binary(p, q, widen(l, bit)));
            normalize_set(out);
            return out;
        },
        [&](const Set& s) { return any_accepting(a, s); });
    return minimize(pad_saturate(det));
}

namespace {

struct Graft {
    bool zero;
    Set states;
    friend bool operator==(const Graft&, const Graft&) = default;
};

struct GraftHash {
    std::size_t operator()(const Graft& g) const noexcept { return VectorHash{}(g.states) * 2 + g.zero; }
};

} // namespace

TreeAutomaton pad_saturate(const TreeAutomaton& a)
{
    const std::size_t n = a.num_states();
    // States of the all-zero trees.
    std::vector<bool> in_zero(n, false);
    Set zero{a.leaf(0)};
    in_zero[a.leaf(0)] = true;
    for (std::size_t k = 0; k < zero.size(); ++k) {
        std::vector<State> fresh{a.unary(zero[k], 0)};
        for (std::size_t j = 0; j <= k; ++j) {
            fresh.push_back(a.binary(zero[k], zero[j], 0));
            fresh.push_back(a.binary(zero[j], zero[k], 0));
        }
        for (State q : fresh)
            if (!in_zero[q]) {
                in_zero[q] = true;
                zero.push_back(q);
            }
    }
    std::sort(zero.begin(), zero.end());

    // A node of the canonical tree may carry zero grafts in a padded variant:
    // a missing left child, a missing right child, or both.
    auto graft_leaf = [&](Letter l) {
        Set out{a.leaf(l)};
        for (State z : zero) {
            out.push_back(a.unary(z, l));
            for (State z2 : zero)
                out.push_back(a.binary(z, z2, l));
        }
        normalize_set(out);
        return out;
    };
    auto graft_unary = [&](const Set& s, Letter l) {
        Set out;
        for (State p : s) {
            out.push_back(a.unary(p, l));
            for (State z : zero)
                out.push_back(a.binary(p, z, l));
        }
        normalize_set(out);
        return out;
    };
    auto graft_binary = [&](const Set& s, const Set& t, Letter l) {
        Set out;
        for (State p : s)
            for (State q : t)
                out.push_back(a.binary(p, q, l));
        normalize_set(out);
        return out;
    };
    // Reading an arbitrary tree, all-zero subtrees are trimmed on the fly:
    // the stored set describes the canonical (trimmed) subtree.
    return build_tree_automaton<Graft, GraftHash>(
        a.tracks(), [&](Letter l) { return Graft{l == 0, graft_leaf(l)}; },
        [&](const Graft& c, Letter l) {
            if (c.zero)
                return Graft{l == 0, graft_leaf(l)};
            return Graft{false, graft_unary(c.states, l)};
        },
        [&](const Graft& c0, const Graft& c1, Letter l) {
            if (!c1.zero)
                return Graft{false, graft_binary(c0.states, c1.states, l)};
            if (!c0.zero)
                return Graft{false, graft_unary(c0.states, l)};
            return Graft{l == 0, graft_leaf(l)};
        },
        [&](const Graft& g) { return any_accepting(a, g.states); });
}

bool is_empty(const TreeAutomaton& a)
{
    const std::size_t n = a.num_states(), L = a.num_letters();
    std::vector<bool> seen(n, false);
    Set reached;
    auto add = [&](State q) {
        if (!seen[q]) {
            seen[q] = true;
            reached.push_back(q);
        }
    };
    for (Letter l = 0; l < L; ++l)
        add(a.leaf(l));
    for (std::size_t k = 0; k < reached.size(); ++k) {
        State q = reached[k];
        for (Letter l = 0; l < L; ++l) {
            add(a.unary(q, l));
            for (std::size_t j = 0; j <= k; ++j) {
                add(a.binary(q, reached[j], l));
                add(a.binary(reached[j], q, l));
            }
        }
    }
    return std::none_of(reached.begin(), reached.end(), [&](State q) { return a.accepting(q); });
}

} // namespace tree

} // namespace fsi
