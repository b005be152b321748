#include "fsi/coding.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "fsi/error.hpp"

namespace fsi {

std::string_view theory_name(Theory th)
{
    return th == Theory::Delta1 ? "delta1" : "delta2";
}

Theory parse_theory(std::string_view name)
{
    if (name == "delta1" || name == "d1" || name == "Delta1")
        return Theory::Delta1;
    if (name == "delta2" || name == "d2" || name == "Delta2")
        return Theory::Delta2;
    fail(Errc::InvalidInput, "unknown theory '" + std::string(name) + "' (expected delta1 or delta2)");
}

Letter Coding::letter(std::size_t node) const
{
    Letter l = 0;
    for (std::size_t k = 0; k < tracks; ++k)
        if (labels[node][k] == Sym::One)
            l |= Letter{1} << k;
    return l;
}

SetTuple Coding::decode() const
{
    SetTuple out(tracks);
    for (std::size_t i = 0; i < domain.size(); ++i)
        for (std::size_t k = 0; k < tracks; ++k)
            if (labels[i][k] == Sym::One)
                out[k].push_back(domain[i]);
    return out;
}

namespace {

const char* sym_text(Sym s)
{
    switch (s) {
    case Sym::Zero: return "0";
    case Sym::One: return "1";
    case Sym::Pad: return "\xE2\x8B\x84"; // ⋄
    }
    return "?";
}

std::string letter_text(const std::vector<Sym>& syms, bool parenthesize)
{
    std::string out = parenthesize ? "(" : "";
    for (std::size_t k = 0; k < syms.size(); ++k) {
        if (k)
            out += ",";
        out += sym_text(syms[k]);
    }
    if (parenthesize)
        out += ")";
    return out;
}

} // namespace

std::string Coding::serialize() const
{
    std::string out;
    if (kind == Theory::Delta1) {
        for (const auto& l : labels)
            out += letter_text(l, tracks != 1);
        return out;
    }
    for (std::size_t i = 0; i < domain.size(); ++i) {
        if (i)
            out += " ";
        out += domain[i].str() + ":" + letter_text(labels[i], tracks != 1);
    }
    return out;
}

bool coding_less(const Coding& a, const Coding& b)
{
    if (a.domain.size() != b.domain.size())
        return a.domain.size() < b.domain.size();
    for (std::size_t i = 0; i < a.domain.size(); ++i) {
        if (a.domain[i] != b.domain[i])
            return a.domain[i] < b.domain[i];
        if (a.labels[i] != b.labels[i])
            return a.labels[i] < b.labels[i];
    }
    return false;
}

std::vector<NodeAddr> minimal_domain(const std::vector<NodeAddr>& nodes)
{
    std::vector<NodeAddr> seed(nodes);
    seed.push_back(NodeAddr());
    auto t = FiniteTree::from_nodes(std::move(seed), FiniteTree::Validation::Close);
    return {t.nodes().begin(), t.nodes().end()};
}

SetTuple normalize(SetTuple sets)
{
    for (auto& s : sets) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    return sets;
}

Coding encode_tuple(const SetTuple& raw, Theory th)
{
    SetTuple sets = normalize(raw);
    std::vector<NodeAddr> all;
    for (const auto& s : sets)
        for (const auto& u : s) {
            if (th == Theory::Delta1 && !u.is_delta1())
                fail(Errc::TheoryMismatch, "address " + u.str() + " is not a node of the unary tree");
            all.push_back(u);
        }
    Coding c;
    c.kind = th;
    c.tracks = sets.size();
    c.domain = minimal_domain(all);
    c.labels.assign(c.domain.size(), std::vector<Sym>(sets.size(), Sym::Pad));
    std::map<NodeAddr, std::size_t> pos;
    for (std::size_t i = 0; i < c.domain.size(); ++i)
        pos.emplace(c.domain[i], i);
    for (std::size_t k = 0; k < sets.size(); ++k) {
        for (const auto& u : minimal_domain(sets[k]))
            c.labels[pos.at(u)][k] = Sym::Zero;
        for (const auto& u : sets[k])
            c.labels[pos.at(u)][k] = Sym::One;
    }
    return c;
}

std::vector<NodeAddr> naturals(std::initializer_list<std::size_t> values)
{
    return naturals(std::vector<std::size_t>(values));
}

std::vector<NodeAddr> naturals(const std::vector<std::size_t>& values)
{
    std::vector<NodeAddr> out;
    for (auto v : values)
        out.push_back(NodeAddr::natural(v));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::size_t> as_naturals(const std::vector<NodeAddr>& set)
{
    std::vector<std::size_t> out;
    for (const auto& u : set)
        out.push_back(u.as_natural());
    std::sort(out.begin(), out.end());
    return out;
}

std::string set_str(const std::vector<NodeAddr>& set, Theory th)
{
    std::string out = "{";
    bool first = true;
    for (const auto& u : set) {
        if (!first)
            out += ",";
        first = false;
        out += th == Theory::Delta1 && u.is_delta1() ? std::to_string(u.length()) : u.str();
    }
    return out + "}";
}

} // namespace fsi
