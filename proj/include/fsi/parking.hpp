#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "fsi/trees.hpp"

namespace fsi {

/// Node-indexed car counts and edge flows over a FiniteTree. f(x) > 0 means
/// f(x) cars cross the edge from the father down into x; f(x) < 0 means
/// |f(x)| cars cross it upwards.
using Distribution = std::vector<int>;
using Flow = std::vector<int>;

/// The i-th car (1-based) starting at a node.
struct Car {
    int node;
    int slot;
    friend auto operator<=>(const Car&, const Car&) = default;
};

/// Car to parking node.
using Placement = std::map<Car, int>;

long total(const Distribution& d);

struct SparsityResult {
    bool sparse = true;
    /// A zone minimizing |Z| + K|F| - D(Z) (strong: K|F| - D(Z)) when not sparse.
    std::optional<Zone> witness;
    long slack = 0;
};

/// Bottom-up dynamic program over zones rooted at each node.
SparsityResult is_k_sparse(const FiniteTree& t, const Distribution& d, int k, bool strong = false);
/// Oracle by explicit zone enumeration (|t| ≤ 16).
bool brute_force_sparse(const FiniteTree& t, const Distribution& d, int k, bool strong = false);

struct FlowCertificate {
    /// Z_x for every node x.
    std::vector<Zone> zones;
};

struct FlowResult {
    Flow flow;
    FlowCertificate certificate;
};

/// Requires a purely binary tree and a K-sparse distribution.
FlowResult compute_flow_finite(const FiniteTree& t, const Distribution& d, int k);
bool check_flow_compatible(const FiniteTree& t, const Distribution& d, const Flow& f);

struct CarTrace {
    Car car;
    std::vector<int> path;
    bool stuck = false;
};

struct Routing {
    Placement placement;
    std::vector<CarTrace> traces;
    /// Cars that would have to leave the root, in car order.
    std::vector<Car> stuck;
};

/// Simulates the distribution-order routing; f(ε) > 0 counts as 0.
Routing route_cars(const FiniteTree& t, const Distribution& d, const Flow& f);

struct ParkingResult {
    Flow flow;
    Routing routing;
    Placement placement;
};

/// Flow, routing and re-parking of stuck cars at the length-lex first free
/// nodes.
ParkingResult compute_placement(const FiniteTree& t, const Distribution& d, int k);
bool verify_placement(const FiniteTree& t, const Distribution& d, const Placement& p);

/// Random K-sparse distribution with at most |t| cars, grown one car at a
/// time while the sparsity test passes.
Distribution gen_sparse(const FiniteTree& t, int k, std::uint64_t seed);

/// Smallest K ≤ |t| with d K-sparse, if any.
std::optional<int> minimal_sparse_k(const FiniteTree& t, const Distribution& d, bool strong = false);

} // namespace fsi
