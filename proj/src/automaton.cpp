#include "fsi/automaton.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace fsi {

Automaton Automaton::universal(Theory th, Tracks tracks)
{
    if (th == Theory::Delta1)
        return WordAutomaton::universal(std::move(tracks));
    return TreeAutomaton::universal(std::move(tracks));
}

Automaton Automaton::empty(Theory th, Tracks tracks)
{
    if (th == Theory::Delta1)
        return WordAutomaton::empty(std::move(tracks));
    return TreeAutomaton::empty(std::move(tracks));
}

const Tracks& Automaton::tracks() const
{
    return is_word() ? word().tracks() : tree().tracks();
}

std::size_t Automaton::num_states() const
{
    return is_word() ? word().num_states() : tree().num_states();
}

namespace {

std::string letter_bits(Letter l, std::size_t k)
{
    if (k == 0)
        return "-";
    std::string s;
    for (std::size_t i = 0; i < k; ++i)
        s += (l >> i & 1) ? '1' : '0';
    return s;
}

template <class A>
std::string accepting_line(const A& a)
{
    std::string s = "accepting";
    for (State q = 0; q < a.num_states(); ++q)
        if (a.accepting(q))
            s += " " + std::to_string(q);
    return s + "\n";
}

std::string tracks_line(const Tracks& t)
{
    std::string s = "tracks";
    for (const auto& n : t)
        s += " " + n;
    return s + "\n";
}

} // namespace

std::string Automaton::dump() const
{
    std::ostringstream out;
    const std::size_t k = tracks().size();
    if (is_word()) {
        const auto& a = word();
        out << "kind word\n" << tracks_line(a.tracks()) << "states " << a.num_states() << "\n"
            << "initial " << a.initial() << "\n" << accepting_line(a) << "transitions\n";
        for (State q = 0; q < a.num_states(); ++q)
            for (Letter l = 0; l < a.num_letters(); ++l)
                out << q << " " << letter_bits(l, k) << " -> " << a.step(q, l) << "\n";
        return out.str();
    }
    const auto& a = tree();
    out << "kind tree\n" << tracks_line(a.tracks()) << "states " << a.num_states() << "\n" << accepting_line(a);
    out << "leaf\n";
    for (Letter l = 0; l < a.num_letters(); ++l)
        out << letter_bits(l, k) << " -> " << a.leaf(l) << "\n";
    out << "unary\n";
    for (State q = 0; q < a.num_states(); ++q)
        for (Letter l = 0; l < a.num_letters(); ++l)
            out << q << " " << letter_bits(l, k) << " -> " << a.unary(q, l) << "\n";
    out << "binary\n";
    for (State p = 0; p < a.num_states(); ++p)
        for (State q = 0; q < a.num_states(); ++q)
            for (Letter l = 0; l < a.num_letters(); ++l)
                out << p << " " << q << " " << letter_bits(l, k) << " -> " << a.binary(p, q, l) << "\n";
    return out.str();
}

std::string Automaton::dot() const
{
    std::ostringstream out;
    const std::size_t k = tracks().size();
    out << "digraph automaton {\n  rankdir=LR;\n";
    auto state_nodes = [&](std::size_t n, auto accepting) {
        for (State q = 0; q < n; ++q)
            out << "  q" << q << " [shape=" << (accepting(q) ? "doublecircle" : "circle") << ",label=\"" << q
                << "\"];\n";
    };
    auto edges = [&](const std::map<std::pair<std::string, std::string>, std::vector<std::string>>& groups) {
        for (const auto& [ends, labels] : groups) {
            std::string text;
            for (const auto& l : labels)
                text += (text.empty() ? "" : ",") + l;
            out << "  " << ends.first << " -> " << ends.second << " [label=\"" << text << "\"];\n";
        }
    };
    std::map<std::pair<std::string, std::string>, std::vector<std::string>> groups;
    if (is_word()) {
        const auto& a = word();
        state_nodes(a.num_states(), [&](State q) { return a.accepting(q); });
        out << "  start [shape=point];\n  start -> q" << a.initial() << ";\n";
        for (State q = 0; q < a.num_states(); ++q)
            for (Letter l = 0; l < a.num_letters(); ++l)
                groups[{"q" + std::to_string(q), "q" + std::to_string(a.step(q, l))}].push_back(letter_bits(l, k));
        edges(groups);
    } else {
        const auto& a = tree();
        state_nodes(a.num_states(), [&](State q) { return a.accepting(q); });
        out << "  leaf [shape=point];\n";
        for (Letter l = 0; l < a.num_letters(); ++l)
            groups[{"leaf", "q" + std::to_string(a.leaf(l))}].push_back(letter_bits(l, k));
        for (State q = 0; q < a.num_states(); ++q)
            for (Letter l = 0; l < a.num_letters(); ++l)
                groups[{"q" + std::to_string(q), "q" + std::to_string(a.unary(q, l))}].push_back(
                    "u:" + letter_bits(l, k));
        edges(groups);
        for (State p = 0; p < a.num_states(); ++p)
            for (State q = 0; q < a.num_states(); ++q) {
                std::string id = "b" + std::to_string(p) + "_" + std::to_string(q);
                out << "  " << id << " [shape=point];\n  q" << p << " -> " << id << " [label=\"0\"];\n  q" << q
                    << " -> " << id << " [label=\"1\"];\n";
                std::map<State, std::vector<std::string>> targets;
                for (Letter l = 0; l < a.num_letters(); ++l)
                    targets[a.binary(p, q, l)].push_back(letter_bits(l, k));
                for (const auto& [r, labels] : targets) {
                    std::string text;
                    for (const auto& l : labels)
                        text += (text.empty() ? "" : ",") + l;
                    out << "  " << id << " -> q" << r << " [label=\"" << text << "\"];\n";
                }
            }
    }
    out << "}\n";
    return out.str();
}

Tracks make_tracks(std::vector<std::string> names)
{
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    return names;
}

Tracks merge_tracks(const Tracks& a, const Tracks& b)
{
    Tracks out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

namespace {

std::size_t track_index(const Tracks& tracks, const std::string& name)
{
    auto it = std::lower_bound(tracks.begin(), tracks.end(), name);
    if (it == tracks.end() || *it != name)
        fail(Errc::UnknownTrack, "unknown track '" + name + "'");
    return static_cast<std::size_t>(it - tracks.begin());
}

Automaton remap(const Automaton& a, Tracks tracks, const std::vector<std::size_t>& where)
{
    if (a.is_word())
        return word::remap(a.word(), std::move(tracks), where);
    return tree::remap(a.tree(), std::move(tracks), where);
}

void check_kind(const Automaton& a, const Automaton& b)
{
    if (a.theory() != b.theory())
        fail(Errc::KindMismatch, "cannot combine a word automaton with a tree automaton");
}

Automaton combine(const Automaton& a, const Automaton& b, bool (*op)(bool, bool))
{
    check_kind(a, b);
    Tracks all = merge_tracks(a.tracks(), b.tracks());
    Automaton ca = a.tracks() == all ? a : cylindrify(a, all);
    Automaton cb = b.tracks() == all ? b : cylindrify(b, all);
    if (ca.is_word())
        return word::minimize(word::product(ca.word(), cb.word(), op));
    return tree::minimize(tree::product(ca.tree(), cb.tree(), op));
}

} // namespace

Automaton cylindrify(const Automaton& a, const Tracks& tracks)
{
    std::vector<std::size_t> where;
    for (const auto& name : a.tracks())
        where.push_back(track_index(tracks, name));
    return remap(a, tracks, where);
}

Automaton rename_tracks(const Automaton& a, const std::map<std::string, std::string>& names)
{
    std::vector<std::string> renamed;
    for (const auto& t : a.tracks()) {
        auto it = names.find(t);
        renamed.push_back(it == names.end() ? t : it->second);
    }
    Tracks tracks = make_tracks(renamed);
    std::vector<std::size_t> where;
    for (const auto& n : renamed)
        where.push_back(track_index(tracks, n));
    Automaton out = remap(a, tracks, where);
    return minimize(out);
}

Automaton intersect(const Automaton& a, const Automaton& b)
{
    return combine(a, b, [](bool x, bool y) { return x && y; });
}

Automaton unite(const Automaton& a, const Automaton& b)
{
    return combine(a, b, [](bool x, bool y) { return x || y; });
}

Automaton complement(const Automaton& a)
{
    if (a.is_word())
        return word::minimize(word::complement(a.word()));
    return tree::minimize(tree::complement(a.tree()));
}

Automaton project_track(const Automaton& a, const std::string& var)
{
    std::size_t i = track_index(a.tracks(), var);
    if (a.is_word())
        return word::project(a.word(), i);
    return tree::project(a.tree(), i);
}

Automaton pad_saturate(const Automaton& a)
{
    if (a.is_word())
        return word::minimize(word::pad_saturate(a.word()));
    return tree::minimize(tree::pad_saturate(a.tree()));
}

Automaton minimize(const Automaton& a)
{
    if (a.is_word())
        return word::minimize(a.word());
    return tree::minimize(a.tree());
}

bool accepts(const Automaton& a, const Coding& c)
{
    if (c.kind != a.theory())
        fail(Errc::KindMismatch, "coding kind does not match the automaton");
    if (c.tracks != a.tracks().size())
        fail(Errc::TrackMismatch, "coding has " + std::to_string(c.tracks) + " tracks, automaton has " +
                                      std::to_string(a.tracks().size()));
    std::vector<Letter> letters(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        letters[i] = c.letter(i);
    if (a.is_word())
        return a.word().run(letters);
    auto t = FiniteTree::from_nodes(c.domain, FiniteTree::Validation::Strict);
    if (t.size() != c.size())
        fail(Errc::InvalidInput, "coding domain contains duplicate nodes");
    std::vector<Letter> ordered(t.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        ordered[static_cast<std::size_t>(*t.index_of(c.domain[i]))] = letters[i];
    return a.tree().accepting(a.tree().evaluate(t, ordered));
}

bool accepts(const Automaton& a, const SetTuple& sets)
{
    return accepts(a, encode_tuple(sets, a.theory()));
}

bool is_empty(const Automaton& a)
{
    return a.is_word() ? word::is_empty(a.word()) : tree::is_empty(a.tree());
}

bool is_universal(const Automaton& a)
{
    return is_empty(complement(a));
}

bool language_equal(const Automaton& a, const Automaton& b)
{
    check_kind(a, b);
    if (a.tracks() != b.tracks())
        fail(Errc::TrackMismatch, "language comparison needs identical tracks");
    return minimize(a) == minimize(b);
}

namespace {

void shapes(std::size_t n, const NodeAddr& root, std::vector<std::vector<NodeAddr>>& out)
{
    if (n == 1) {
        out.push_back({root});
        return;
    }
    std::vector<std::vector<NodeAddr>> lefts;
    shapes(n - 1, root.child(0), lefts);
    for (auto& l : lefts) {
        l.push_back(root);
        out.push_back(std::move(l));
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        std::vector<std::vector<NodeAddr>> ls, rs;
        shapes(i, root.child(0), ls);
        shapes(n - 1 - i, root.child(1), rs);
        for (const auto& l : ls)
            for (const auto& r : rs) {
                std::vector<NodeAddr> v(l);
                v.insert(v.end(), r.begin(), r.end());
                v.push_back(root);
                out.push_back(std::move(v));
            }
    }
}

} // namespace

std::vector<FiniteTree> tree_domains(Theory th, std::size_t bound)
{
    std::vector<FiniteTree> out;
    for (std::size_t n = 1; n <= bound; ++n) {
        if (th == Theory::Delta1) {
            out.push_back(FiniteTree::path(n));
            continue;
        }
        std::vector<std::vector<NodeAddr>> raw;
        shapes(n, NodeAddr(), raw);
        for (auto& nodes : raw)
            out.push_back(FiniteTree::from_nodes(std::move(nodes), FiniteTree::Validation::Strict));
    }
    return out;
}

std::vector<Coding> enumerate_accepted(const Automaton& a, std::size_t bound)
{
    const std::size_t k = a.tracks().size();
    std::vector<Coding> out;
    for (const auto& t : tree_domains(a.theory(), bound)) {
        const std::size_t n = t.size();
        if (n * k > 24)
            fail(Errc::TreeTooLarge, "enumeration bound too large for the number of tracks");
        // A domain is minimal for a labeling iff every node is the root, has a
        // marked node below it, or is a left child whose sibling subtree does.
        std::vector<NodeMask> below(n);
        for (std::size_t i = 0; i < n; ++i)
            below[i] = t.subtree_mask(static_cast<int>(i));
        const std::uint64_t total = std::uint64_t{1} << (n * k);
        std::vector<Letter> labels(n);
        for (std::uint64_t code = 0; code < total; ++code) {
            NodeMask marked = 0;
            for (std::size_t i = 0; i < n; ++i) {
                labels[i] = static_cast<Letter>((code >> (i * k)) & ((std::uint64_t{1} << k) - 1));
                if (labels[i])
                    marked |= NodeMask{1} << i;
            }
            bool minimal = true;
            for (std::size_t i = 1; i < n && minimal; ++i) {
                if (below[i] & marked)
                    continue;
                int p = t.parent(static_cast<int>(i));
                int sib = t.right(p);
                bool needed = t.left(p) == static_cast<int>(i) && sib >= 0 &&
                              (below[static_cast<std::size_t>(sib)] & marked);
                minimal = needed;
            }
            if (!minimal)
                continue;
            bool ok = a.is_word() ? a.word().run(labels) : a.tree().accepting(a.tree().evaluate(t, labels));
            if (!ok)
                continue;
            SetTuple sets(k);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < k; ++j)
                    if (labels[i] >> j & 1)
                        sets[j].push_back(t.node(static_cast<int>(i)));
            out.push_back(encode_tuple(sets, a.theory()));
        }
    }
    std::sort(out.begin(), out.end(), coding_less);
    return out;
}

} // namespace fsi
