#pragma once
// Reachability and chain analytics over consolidation edges.
//
// Direction convention: recorded edges point child -> parent. A traversal
// can follow them (to_parents) or run against them (to_children); chains are
// reported in consolidation direction, child first.

#include <cstddef>
#include <limits>
#include <map>
#include <vector>

#include "taxgraph/graph_store.hpp"

namespace taxgraph {

enum class Direction { to_parents, to_children };

// Dirty registry data can contain cycles; the default depth cap is safely
// above the deepest chain observed in practice (six companies) while
// bounding traversal cost.
inline constexpr int kDefaultMaxDepth = 10;
inline constexpr int kUnboundedDepth = std::numeric_limits<int>::max();

struct ClosureResult {
    Lei root;
    std::vector<Lei> members;  // sorted; excludes root unless a cycle returns to it
    bool truncated = false;    // frontier was nonempty when the depth cap hit
    bool cyclic = false;       // a cycle exists among the explored edges
};

// BFS from `root` along `kind` edges in `direction`, visited-set protected.
// Throws UnknownEntityError for an unknown root; max_depth must be >= 1.
ClosureResult closure(const GraphStore& store, const Lei& root, RelKind kind,
                      Direction direction, int max_depth = kDefaultMaxDepth);

// Exactly the Direct-edge children, sorted. Throws UnknownEntityError.
std::vector<Lei> direct_children(const GraphStore& store, const Lei& lei);

struct ChildStats {
    // Averages over companies with >= 1 child of that kind; absent when no
    // such company exists. Ultimate counts recorded edges only, without
    // closure expansion.
    std::optional<double> avg_direct;
    std::optional<double> avg_ultimate;
    std::map<std::size_t, std::size_t> histogram_direct;    // child count -> companies
    std::map<std::size_t, std::size_t> histogram_ultimate;
};

ChildStats child_stats(const GraphStore& store);

// A maximum-length simple path along `kind` edges, child first; ties broken
// by lexicographic LEI sequence. Empty store or no edges -> empty path.
// Exact; on cyclic graphs falls back to exhaustive search, which is only
// practical while cycles are small (they are, in registry data).
std::vector<Lei> longest_chain(const GraphStore& store, RelKind kind);

struct UltimateDiscrepancy {
    Lei child;
    Lei ultimate_parent;
    bool reachable_via_direct = false;
};

// For every recorded Ultimate edge: is the parent reachable from the child
// via Direct edges at any depth? Sorted by (child, parent).
std::vector<UltimateDiscrepancy> ultimate_discrepancies(const GraphStore& store);

// Hops -> number of maximal simple chains (extendable on neither end).
std::map<std::size_t, std::size_t> chain_histogram(const GraphStore& store, RelKind kind);

}  // namespace taxgraph
