#include "fsi/parking.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>

#include "fsi/error.hpp"

namespace fsi {

long total(const Distribution& d)
{
    return std::accumulate(d.begin(), d.end(), 0L);
}

namespace {

void check_distribution(const FiniteTree& t, const Distribution& d)
{
    if (d.size() != t.size())
        fail(Errc::InvalidInput, "distribution size does not match the tree");
    for (int c : d)
        if (c < 0)
            fail(Errc::InvalidInput, "negative car count");
}

std::vector<int> children(const FiniteTree& t, int x)
{
    std::vector<int> out;
    if (t.left(x) >= 0)
        out.push_back(t.left(x));
    if (t.right(x) >= 0)
        out.push_back(t.right(x));
    return out;
}

/// h(x) = min over zones rooted at x of |Z| + K(|F|-1) - D(Z) (without |Z|
/// when strong).
std::vector<long> zone_minima(const FiniteTree& t, const Distribution& d, int k, bool strong)
{
    std::vector<long> h(t.size());
    for (int x = static_cast<int>(t.size()) - 1; x >= 0; --x) {
        long v = (strong ? 0 : 1) - d[static_cast<std::size_t>(x)];
        for (int c : children(t, x))
            v += std::min<long>(k, h[static_cast<std::size_t>(c)]);
        h[static_cast<std::size_t>(x)] = v;
    }
    return h;
}

/// The zone at x realizing h(x): a child is absorbed iff its value is below K.
Zone minimizing_zone(const FiniteTree& t, const std::vector<long>& h, int x, int k)
{
    Zone z{t.node(x), {}};
    std::vector<int> todo{x};
    while (!todo.empty()) {
        int y = todo.back();
        todo.pop_back();
        for (int c : children(t, y)) {
            if (h[static_cast<std::size_t>(c)] < k)
                todo.push_back(c);
            else
                z.excluded.push_back(t.node(c));
        }
    }
    std::sort(z.excluded.begin(), z.excluded.end());
    return z;
}

} // namespace

SparsityResult is_k_sparse(const FiniteTree& t, const Distribution& d, int k, bool strong)
{
    check_distribution(t, d);
    auto h = zone_minima(t, d, k, strong);
    SparsityResult r;
    int worst = -1;
    for (std::size_t x = 0; x < t.size(); ++x) {
        long slack = h[x] + k;
        if (worst < 0 || slack < r.slack) {
            r.slack = slack;
            worst = static_cast<int>(x);
        }
    }
    r.sparse = r.slack >= 0;
    if (!r.sparse)
        r.witness = minimizing_zone(t, h, worst, k);
    return r;
}

bool brute_force_sparse(const FiniteTree& t, const Distribution& d, int k, bool strong)
{
    check_distribution(t, d);
    bool ok = true;
    for_each_zone(t, [&](int, std::span<const int> excluded, NodeMask members) {
        long cars = 0;
        for (std::size_t i = 0; i < t.size(); ++i)
            if (members >> i & 1)
                cars += d[i];
        long frontier = static_cast<long>(excluded.size()) + 1;
        long bound = (strong ? 0 : std::popcount(members)) + k * frontier;
        if (cars > bound)
            ok = false;
    });
    return ok;
}

FlowResult compute_flow_finite(const FiniteTree& t, const Distribution& d, int k)
{
    if (!t.is_purely_binary())
        fail(Errc::NotPurelyBinary, "flows are defined on trees where every node has zero or two children");
    auto sparse = is_k_sparse(t, d, k);
    if (!sparse.sparse)
        fail(Errc::NotSparse, "distribution is not " + std::to_string(k) + "-sparse (witness zone " +
                                  sparse.witness->str() + ")");
    FlowResult r;
    std::vector<long> h = zone_minima(t, d, k, false);
    r.flow.assign(h.begin(), h.end());
    for (std::size_t x = 0; x < t.size(); ++x)
        r.certificate.zones.push_back(minimizing_zone(t, h, static_cast<int>(x), k));
    return r;
}

bool check_flow_compatible(const FiniteTree& t, const Distribution& d, const Flow& f)
{
    if (f.size() != t.size() || d.size() != t.size())
        return false;
    for (std::size_t x = 0; x < t.size(); ++x) {
        long in = static_cast<long>(d[x]) + f[x];
        long out = 1;
        for (int c : children(t, static_cast<int>(x)))
            out += f[static_cast<std::size_t>(c)];
        if (in > out)
            return false;
    }
    return true;
}

Routing route_cars(const FiniteTree& t, const Distribution& d, const Flow& f)
{
    check_distribution(t, d);
    if (!check_flow_compatible(t, d, f))
        fail(Errc::IncompatibleFlow, "flow is not compatible with the distribution");
    const std::size_t n = t.size();
    auto down = [&](int x) -> long {
        if (x < 0)
            return 0;
        return x == 0 ? 0 : std::max(f[static_cast<std::size_t>(x)], 0);
    };
    auto up = [&](int x) -> long { return x < 0 ? 0 : std::max(-f[static_cast<std::size_t>(x)], 0); };

    Routing r;
    for (std::size_t xs = 0; xs < n; ++xs) {
        const int start = static_cast<int>(xs);
        for (int k = 1; k <= d[xs]; ++k) {
            CarTrace trace{{start, k}, {start}, false};
            int x = start;
            long pos = down(x) + up(t.left(x)) + up(t.right(x)) + k;
            std::vector<bool> seen(n, false);
            seen[static_cast<std::size_t>(x)] = true;
            while (true) {
                const long c1 = 1 + up(x), c2 = c1 + down(t.left(x)), c3 = c2 + down(t.right(x));
                int next;
                long npos;
                if (pos == 1) {
                    r.placement[trace.car] = x;
                    break;
                }
                if (pos <= c1) {
                    int y = t.parent(x);
                    if (y < 0) {
                        trace.stuck = true;
                        r.stuck.push_back(trace.car);
                        break;
                    }
                    npos = pos - 1 + down(y) + (t.right(y) == x ? up(t.left(y)) : 0);
                    next = y;
                } else if (pos <= c2) {
                    next = t.left(x);
                    npos = pos - c1;
                } else if (pos <= c3) {
                    next = t.right(x);
                    npos = pos - c2;
                } else {
                    fail(Errc::IncompatibleFlow, "car position exceeds the dispatch capacity at node " +
                                                     t.node(x).str());
                }
                if (seen[static_cast<std::size_t>(next)])
                    fail(Errc::Internal, "car revisits node " + t.node(next).str());
                seen[static_cast<std::size_t>(next)] = true;
                trace.path.push_back(next);
                x = next;
                pos = npos;
            }
            r.traces.push_back(std::move(trace));
        }
    }
    return r;
}

ParkingResult compute_placement(const FiniteTree& t, const Distribution& d, int k)
{
    check_distribution(t, d);
    if (total(d) > static_cast<long>(t.size()))
        fail(Errc::TooManyCars, std::to_string(total(d)) + " cars exceed " + std::to_string(t.size()) + " nodes");
    ParkingResult out;
    out.flow = compute_flow_finite(t, d, k).flow;
    if (out.flow[0] > 0)
        out.flow[0] = 0;
    out.routing = route_cars(t, d, out.flow);
    out.placement = out.routing.placement;
    std::vector<bool> used(t.size(), false);
    for (const auto& [car, node] : out.placement)
        used[static_cast<std::size_t>(node)] = true;
    std::size_t next = 0;
    for (const Car& car : out.routing.stuck) {
        while (next < t.size() && used[next])
            ++next;
        if (next == t.size())
            fail(Errc::Internal, "no free node left for a stuck car");
        used[next] = true;
        out.placement[car] = static_cast<int>(next);
    }
    return out;
}

bool verify_placement(const FiniteTree& t, const Distribution& d, const Placement& p)
{
    if (d.size() != t.size())
        return false;
    std::vector<bool> used(t.size(), false);
    std::size_t expected = 0;
    for (std::size_t x = 0; x < t.size(); ++x)
        expected += static_cast<std::size_t>(std::max(d[x], 0));
    if (p.size() != expected)
        return false;
    for (const auto& [car, node] : p) {
        if (car.node < 0 || static_cast<std::size_t>(car.node) >= t.size() || car.slot < 1 ||
            car.slot > d[static_cast<std::size_t>(car.node)])
            return false;
        if (node < 0 || static_cast<std::size_t>(node) >= t.size() || used[static_cast<std::size_t>(node)])
            return false;
        used[static_cast<std::size_t>(node)] = true;
    }
    return true;
}

Distribution gen_sparse(const FiniteTree& t, int k, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    Distribution d(t.size(), 0);
    std::uniform_int_distribution<std::size_t> pick(0, t.size() - 1);
    const long capacity = static_cast<long>(t.size());
    std::size_t failures = 0;
    while (total(d) < capacity && failures < 4 * t.size()) {
        std::size_t x = pick(rng);
        ++d[x];
        if (is_k_sparse(t, d, k).sparse) {
            // Occasionally stop early so that light loads are also covered.
            if (rng() % (4 * t.size() + 1) == 0)
                break;
            continue;
        }
        --d[x];
        ++failures;
    }
    return d;
}

std::optional<int> minimal_sparse_k(const FiniteTree& t, const Distribution& d, bool strong)
{
    for (int k = 0; k <= static_cast<int>(t.size()); ++k)
        if (is_k_sparse(t, d, k, strong).sparse)
            return k;
    return std::nullopt;
}

} // namespace fsi
