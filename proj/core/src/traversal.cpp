#include "taxgraph/traversal.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "taxgraph/errors.hpp"

namespace taxgraph {

namespace {

std::span<const std::uint32_t> neighbors(const GraphStore& store, std::uint32_t node,
                                         RelKind kind, Direction direction) {
    return direction == Direction::to_parents ? store.parents_of(node, kind)
                                              : store.children_of(node, kind);
}

// Kahn over an explicit edge list; true when a cycle exists among `nodes`.
bool has_cycle(const std::vector<std::uint32_t>& nodes,
               const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    std::unordered_map<std::uint32_t, std::uint32_t> indegree;
    std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> adjacency;
    for (std::uint32_t n : nodes) indegree.emplace(n, 0);
    for (const auto& [u, v] : edges) {
        adjacency[u].push_back(v);
        ++indegree[v];
    }
    std::vector<std::uint32_t> ready;
    for (const auto& [n, d] : indegree) {
        if (d == 0) ready.push_back(n);
    }
    std::size_t processed = 0;
    while (!ready.empty()) {
        std::uint32_t n = ready.back();
        ready.pop_back();
        ++processed;
        auto it = adjacency.find(n);
        if (it == adjacency.end()) continue;
        for (std::uint32_t v : it->second) {
            if (--indegree[v] == 0) ready.push_back(v);
        }
    }
    return processed != indegree.size();
}

// Topological order of the kind-subgraph in consolidation direction
// (child -> parent); empty when cyclic.
std::vector<std::uint32_t> topological_order(const GraphStore& store, RelKind kind) {
    std::size_t n = store.company_count();
    std::vector<std::uint32_t> indegree(n, 0);
    for (std::uint32_t v = 0; v < n; ++v) {
        indegree[v] = static_cast<std::uint32_t>(store.children_of(v, kind).size());
    }
    std::vector<std::uint32_t> order;
    order.reserve(n);
    std::vector<std::uint32_t> ready;
    for (std::uint32_t v = 0; v < n; ++v) {
        if (indegree[v] == 0) ready.push_back(v);
    }
    while (!ready.empty()) {
        std::uint32_t v = ready.back();
        ready.pop_back();
        order.push_back(v);
        for (std::uint32_t p : store.parents_of(v, kind)) {
            if (--indegree[p] == 0) ready.push_back(p);
        }
    }
    if (order.size() != n) order.clear();
    return order;
}

// Nodes that belong to a nontrivial strongly connected component of the
// kind-subgraph (iterative Tarjan).
std::vector<bool> in_nontrivial_scc(const GraphStore& store, RelKind kind) {
    std::size_t n = store.company_count();
    constexpr std::uint32_t kUnset = 0xFFFFFFFF;
    std::vector<std::uint32_t> index(n, kUnset), lowlink(n, 0);
    std::vector<bool> on_stack(n, false), result(n, false);
    std::vector<std::uint32_t> stack;
    std::uint32_t next_index = 0;

    struct Frame {
        std::uint32_t node;
        std::size_t edge_pos;
    };
    std::vector<Frame> frames;

    for (std::uint32_t root = 0; root < n; ++root) {
        if (index[root] != kUnset) continue;
        frames.push_back({root, 0});
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& frame = frames.back();
            auto succ = store.parents_of(frame.node, kind);
            if (frame.edge_pos < succ.size()) {
                std::uint32_t w = succ[frame.edge_pos++];
                if (index[w] == kUnset) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    lowlink[frame.node] = std::min(lowlink[frame.node], index[w]);
                }
            } else {
                std::uint32_t v = frame.node;
                frames.pop_back();
                if (!frames.empty()) {
                    lowlink[frames.back().node] = std::min(lowlink[frames.back().node], lowlink[v]);
                }
                if (lowlink[v] == index[v]) {
                    std::size_t component_size = 0;
                    std::size_t mark = stack.size();
                    while (true) {
                        --mark;
                        ++component_size;
                        if (stack[mark] == v) break;
                    }
                    bool nontrivial = component_size > 1;
                    while (stack.size() > mark) {
                        std::uint32_t w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        if (nontrivial) result[w] = true;
                    }
                }
            }
        }
    }
    return result;
}

}  // namespace

ClosureResult closure(const GraphStore& store, const Lei& root, RelKind kind,
                      Direction direction, int max_depth) {
    if (max_depth < 1) throw std::invalid_argument("closure: max_depth must be >= 1");
    auto root_index = store.index_of(root);
    if (!root_index) throw UnknownEntityError("unknown entity " + root.str());

    ClosureResult result;
    result.root = root;

    std::vector<bool> visited(store.company_count(), false);
    visited[*root_index] = true;
    std::vector<std::uint32_t> frontier{*root_index};
    std::vector<std::uint32_t> member_indices;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> explored;
    bool root_reached = false;

    for (long long depth = 1; depth <= static_cast<long long>(max_depth) && !frontier.empty();
         ++depth) {
        std::vector<std::uint32_t> next;
        for (std::uint32_t u : frontier) {
            for (std::uint32_t v : neighbors(store, u, kind, direction)) {
                explored.emplace_back(u, v);
                if (v == *root_index) root_reached = true;
                if (!visited[v]) {
                    visited[v] = true;
                    next.push_back(v);
                    member_indices.push_back(v);
                }
            }
        }
        frontier = std::move(next);
    }
    result.truncated = !frontier.empty();

    if (root_reached) member_indices.push_back(*root_index);
    std::sort(member_indices.begin(), member_indices.end());
    result.members.reserve(member_indices.size());
    for (std::uint32_t i : member_indices) result.members.push_back(store.company_at(i).lei);

    if (root_reached) {
        result.cyclic = true;
    } else if (!explored.empty()) {
        std::vector<std::uint32_t> explored_nodes = member_indices;
        explored_nodes.push_back(*root_index);
        for (std::uint32_t u : frontier) explored_nodes.push_back(u);
        std::sort(explored_nodes.begin(), explored_nodes.end());
        explored_nodes.erase(std::unique(explored_nodes.begin(), explored_nodes.end()),
                             explored_nodes.end());
        result.cyclic = has_cycle(explored_nodes, explored);
    }
    return result;
}

std::vector<Lei> direct_children(const GraphStore& store, const Lei& lei) {
    auto index = store.index_of(lei);
    if (!index) throw UnknownEntityError("unknown entity " + lei.str());
    std::vector<Lei> children;
    for (std::uint32_t c : store.children_of(*index, RelKind::direct)) {
        children.push_back(store.company_at(c).lei);
    }
    return children;
}

ChildStats child_stats(const GraphStore& store) {
    ChildStats stats;
    std::size_t direct_parents = 0, direct_total = 0;
    std::size_t ultimate_parents = 0, ultimate_total = 0;
    for (std::uint32_t v = 0; v < store.company_count(); ++v) {
        std::size_t d = store.children_of(v, RelKind::direct).size();
        if (d > 0) {
            ++direct_parents;
            direct_total += d;
            ++stats.histogram_direct[d];
        }
        std::size_t u = store.children_of(v, RelKind::ultimate).size();
        if (u > 0) {
            ++ultimate_parents;
            ultimate_total += u;
            ++stats.histogram_ultimate[u];
        }
    }
    if (direct_parents > 0) {
        stats.avg_direct = static_cast<double>(direct_total) / static_cast<double>(direct_parents);
    }
    if (ultimate_parents > 0) {
        stats.avg_ultimate =
            static_cast<double>(ultimate_total) / static_cast<double>(ultimate_parents);
    }
    return stats;
}

std::vector<Lei> longest_chain(const GraphStore& store, RelKind kind) {
    std::size_t n = store.company_count();
    if (n == 0 || store.edge_count(kind) == 0) return {};

    std::vector<std::uint32_t> best_path;
    std::vector<std::uint32_t> topo = topological_order(store, kind);
    if (!topo.empty()) {
        // DAG: longest path by DP over reverse topological order; ties pick
        // the smallest successor, which yields the lexicographically
        // smallest LEI sequence.
        std::vector<std::uint32_t> length(n, 1);
        for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
            std::uint32_t v = *it;
            for (std::uint32_t p : store.parents_of(v, kind)) {
                length[v] = std::max(length[v], length[p] + 1);
            }
        }
        std::uint32_t best_len = 0, start = 0;
        for (std::uint32_t v = 0; v < n; ++v) {
            if (length[v] > best_len) {
                best_len = length[v];
                start = v;
            }
        }
        std::uint32_t v = start;
        best_path.push_back(v);
        while (length[v] > 1) {
            for (std::uint32_t p : store.parents_of(v, kind)) {  // sorted ascending
                if (length[p] == length[v] - 1) {
                    best_path.push_back(p);
                    v = p;
                    break;
                }
            }
        }
    } else {
        // Cyclic registry data: exact search over simple paths. A longest
        // path starts at an in-degree-0 node or inside a cycle; exponential
        // only when cycles are large, which dirty data's are not.
        std::vector<bool> cyclic_node = in_nontrivial_scc(store, kind);
        std::vector<std::uint32_t> starts;
        for (std::uint32_t v = 0; v < n; ++v) {
            if (store.children_of(v, kind).empty() || cyclic_node[v]) starts.push_back(v);
        }
        std::vector<bool> on_path(n, false);
        std::vector<std::uint32_t> path;
        auto dfs = [&](auto&& self, std::uint32_t u) -> void {
            path.push_back(u);
            on_path[u] = true;
            if (path.size() > best_path.size()) best_path = path;
            if (best_path.size() < n) {
                for (std::uint32_t p : store.parents_of(u, kind)) {
                    if (!on_path[p]) self(self, p);
                }
            }
            on_path[u] = false;
            path.pop_back();
        };
        for (std::uint32_t s : starts) {
            if (best_path.size() == n) break;
            dfs(dfs, s);
        }
    }

    std::vector<Lei> chain;
    chain.reserve(best_path.size());
    for (std::uint32_t v : best_path) chain.push_back(store.company_at(v).lei);
    return chain;
}

std::vector<UltimateDiscrepancy> ultimate_discrepancies(const GraphStore& store) {
    std::vector<UltimateDiscrepancy> result;
    std::vector<std::uint32_t> visited_mark(store.company_count(), 0xFFFFFFFF);
    std::uint32_t run = 0;
    for (const IndexEdge& e : store.edges(RelKind::ultimate)) {
        // BFS child -> parents over Direct edges, any depth.
        bool reachable = false;
        std::vector<std::uint32_t> frontier{e.child};
        visited_mark[e.child] = run;
        while (!frontier.empty() && !reachable) {
            std::vector<std::uint32_t> next;
            for (std::uint32_t u : frontier) {
                for (std::uint32_t p : store.parents_of(u, RelKind::direct)) {
                    if (p == e.parent) {
                        reachable = true;
                        break;
                    }
                    if (visited_mark[p] != run) {
                        visited_mark[p] = run;
                        next.push_back(p);
                    }
                }
                if (reachable) break;
            }
            frontier = std::move(next);
        }
        result.push_back({store.company_at(e.child).lei, store.company_at(e.parent).lei,
                          reachable});
        ++run;
    }
    return result;
}

std::map<std::size_t, std::size_t> chain_histogram(const GraphStore& store, RelKind kind) {
    std::map<std::size_t, std::size_t> histogram;
    std::size_t n = store.company_count();
    if (n == 0 || store.edge_count(kind) == 0) return histogram;

    std::vector<std::uint32_t> topo = topological_order(store, kind);
    if (!topo.empty()) {
        // DAG: maximal chains are exactly source-to-sink paths. Count path
        // suffixes per node by hop count in reverse topological order.
        std::vector<std::map<std::size_t, std::size_t>> suffix_counts(n);
        for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
            std::uint32_t v = *it;
            auto succ = store.parents_of(v, kind);
            if (succ.empty()) {
                suffix_counts[v][0] = 1;
                continue;
            }
            for (std::uint32_t p : succ) {
                for (const auto& [hops, count] : suffix_counts[p]) {
                    suffix_counts[v][hops + 1] += count;
                }
            }
        }
        for (std::uint32_t v = 0; v < n; ++v) {
            if (!store.children_of(v, kind).empty()) continue;  // not a source
            for (const auto& [hops, count] : suffix_counts[v]) {
                if (hops > 0) histogram[hops] += count;
            }
        }
        return histogram;
    }

    // Cyclic: enumerate simple paths from every node and keep the maximal
    // ones (head not prependable, tail not extendable). Small-cycle data
    // only; exact.
    std::vector<bool> on_path(n, false);
    std::vector<std::uint32_t> path;
    auto maximal = [&](const std::vector<std::uint32_t>& p) {
        for (std::uint32_t pred : store.children_of(p.front(), kind)) {
            if (!on_path[pred]) return false;
        }
        for (std::uint32_t succ : store.parents_of(p.back(), kind)) {
            if (!on_path[succ]) return false;
        }
        return true;
    };
    auto dfs = [&](auto&& self, std::uint32_t u) -> void {
        path.push_back(u);
        on_path[u] = true;
        if (path.size() >= 2 && maximal(path)) ++histogram[path.size() - 1];
        for (std::uint32_t p : store.parents_of(u, kind)) {
            if (!on_path[p]) self(self, p);
        }
        on_path[u] = false;
        path.pop_back();
    };
    for (std::uint32_t v = 0; v < n; ++v) dfs(dfs, v);
    return histogram;
}

}  // namespace taxgraph
