#include <algorithm>
#include <map>
#include <stdexcept>

#include "taxgraph/patterns.hpp"

namespace taxgraph {

namespace {

bool satisfies(const Company& company, const PatternVar& var) {
    for (const NodeConstraint& c : var.constraints) {
        switch (c.field) {
            case ConstraintField::hq_country:
                if (company.hq_country != c.value) return false;
                break;
            case ConstraintField::legal_country:
                if (company.legal_country != c.value) return false;
                break;
            case ConstraintField::legal_form:
                if (company.legal_form_code != c.value) return false;
                break;
            case ConstraintField::region:
                if (company.legal_region != c.value) return false;
                break;
        }
    }
    return true;
}

// Reachability engine with per-query memoization. "Forward" follows the
// recorded child -> parent direction; a node reaches itself only through a
// cycle. Shortest witnesses are simple by construction.
class ReachCache {
public:
    ReachCache(const GraphStore& store, int max_path_len)
        : store_(store), max_path_len_(max_path_len) {}

    // Sorted set of nodes with a path of 1..max_path_len edges from start.
    const std::vector<std::uint32_t>& forward(std::uint32_t start, RelKind kind) {
        return reach(forward_memo_, start, kind, false);
    }

    // Sorted set of nodes with a path of 1..max_path_len edges INTO start.
    const std::vector<std::uint32_t>& backward(std::uint32_t start, RelKind kind) {
        return reach(backward_memo_, start, kind, true);
    }

    bool forward_reaches(std::uint32_t from, std::uint32_t to, RelKind kind) {
        const auto& set = forward(from, kind);
        return std::binary_search(set.begin(), set.end(), to);
    }

    // Shortest path from -> to (endpoints included); BFS over sorted
    // adjacency, so deterministic. Empty when unreachable. from == to yields
    // the shortest cycle through the node.
    std::vector<std::uint32_t> witness(std::uint32_t from, std::uint32_t to, RelKind kind) const {
        std::vector<std::uint32_t> parent(store_.company_count(), kNoParent);
        std::vector<std::uint32_t> frontier{from};
        std::vector<bool> visited(store_.company_count(), false);
        visited[from] = true;
        for (int depth = 1; depth <= max_path_len_ && !frontier.empty(); ++depth) {
            std::vector<std::uint32_t> next;
            for (std::uint32_t u : frontier) {
                for (std::uint32_t v : store_.parents_of(u, kind)) {
                    if (v == to) {
                        std::vector<std::uint32_t> path{v};
                        for (std::uint32_t w = u; w != kNoParent; w = parent[w]) path.push_back(w);
                        std::reverse(path.begin(), path.end());
                        return path;
                    }
                    if (!visited[v]) {
                        visited[v] = true;
                        parent[v] = u;
                        next.push_back(v);
                    }
                }
            }
            frontier = std::move(next);
        }
        return {};
    }

private:
    static constexpr std::uint32_t kNoParent = 0xFFFFFFFF;

    const std::vector<std::uint32_t>& reach(
        std::map<std::pair<std::uint32_t, RelKind>, std::vector<std::uint32_t>>& memo,
        std::uint32_t start, RelKind kind, bool backward) {
        auto key = std::make_pair(start, kind);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;

        std::vector<std::uint32_t> members;
        std::vector<bool> visited(store_.company_count(), false);
        visited[start] = true;
        bool start_reached = false;
        std::vector<std::uint32_t> frontier{start};
        for (int depth = 1; depth <= max_path_len_ && !frontier.empty(); ++depth) {
            std::vector<std::uint32_t> next;
            for (std::uint32_t u : frontier) {
                auto adjacent = backward ? store_.children_of(u, kind) : store_.parents_of(u, kind);
                for (std::uint32_t v : adjacent) {
                    if (v == start) start_reached = true;
                    if (!visited[v]) {
                        visited[v] = true;
                        members.push_back(v);
                        next.push_back(v);
                    }
                }
            }
            frontier = std::move(next);
        }
        if (start_reached) members.push_back(start);
        std::sort(members.begin(), members.end());
        return memo.emplace(key, std::move(members)).first->second;
    }

    const GraphStore& store_;
    int max_path_len_;
    std::map<std::pair<std::uint32_t, RelKind>, std::vector<std::uint32_t>> forward_memo_;
    std::map<std::pair<std::uint32_t, RelKind>, std::vector<std::uint32_t>> backward_memo_;
};

void validate_ast(const PatternAst& ast) {
    if (ast.edges.empty()) throw Error("pattern has no edge clause");
    for (const EdgeClause& e : ast.edges) {
        if (e.from >= ast.vars.size() || e.to >= ast.vars.size()) {
            throw Error("edge clause references an undeclared variable");
        }
    }
}

std::vector<std::uint32_t> intersect_sorted(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

std::vector<Binding> match_pattern(const GraphStore& store, const PatternAst& ast,
                                   const MatchLimits& limits) {
    validate_ast(ast);
    if (limits.max_path_len < 1) throw std::invalid_argument("max_path_len must be >= 1");
    if (store.company_count() == 0) return {};

    const std::size_t var_count = ast.vars.size();
    std::vector<std::vector<std::uint32_t>> candidates(var_count);
    for (std::size_t v = 0; v < var_count; ++v) {
        for (std::uint32_t c = 0; c < store.company_count(); ++c) {
            if (satisfies(store.company_at(c), ast.vars[v])) candidates[v].push_back(c);
        }
        if (candidates[v].empty()) return {};
    }

    // Assignment order: most selective variable first, then greedily pull in
    // variables connected to the assigned set so their pools shrink via
    // reachability.
    std::vector<std::size_t> order;
    {
        std::vector<bool> placed(var_count, false);
        auto pick = [&](bool require_adjacent) -> std::optional<std::size_t> {
            std::optional<std::size_t> best;
            for (std::size_t v = 0; v < var_count; ++v) {
                if (placed[v]) continue;
                if (require_adjacent) {
                    bool adjacent = false;
                    for (const EdgeClause& e : ast.edges) {
                        if ((e.from == v && placed[e.to]) || (e.to == v && placed[e.from])) {
                            adjacent = true;
                            break;
                        }
                    }
                    if (!adjacent) continue;
                }
                if (!best || candidates[v].size() < candidates[*best].size()) best = v;
            }
            return best;
        };
        while (order.size() < var_count) {
            auto next = order.empty() ? pick(false) : pick(true);
            if (!next) next = pick(false);
            placed[*next] = true;
            order.push_back(*next);
        }
    }

    ReachCache reach(store, limits.max_path_len);
    std::vector<std::optional<std::uint32_t>> bound(var_count);
    std::vector<std::vector<std::uint32_t>> raw_results;

    auto clause_holds = [&](const EdgeClause& e) {
        std::uint32_t a = *bound[e.from];
        std::uint32_t b = *bound[e.to];
        if (e.transitive) return reach.forward_reaches(a, b, e.kind);
        auto parents = store.parents_of(a, e.kind);
        return std::binary_search(parents.begin(), parents.end(), b);
    };

    auto recurse = [&](auto&& self, std::size_t k) -> void {
        if (k == order.size()) {
            for (const EdgeClause& e : ast.edges) {
                if (!clause_holds(e)) return;
            }
            std::vector<std::uint32_t> assignment(var_count);
            for (std::size_t v = 0; v < var_count; ++v) assignment[v] = *bound[v];
            raw_results.push_back(std::move(assignment));
            return;
        }
        std::size_t v = order[k];
        std::vector<std::uint32_t> pool = candidates[v];
        for (const EdgeClause& e : ast.edges) {
            if (pool.empty()) break;
            if (e.from == e.to) continue;  // cycle clauses verified at the leaf
            if (e.from == v && bound[e.to]) {
                // path v -> bound(to): v must reach it backwards
                pool = e.transitive
                           ? intersect_sorted(pool, reach.backward(*bound[e.to], e.kind))
                           : intersect_sorted(pool, std::vector<std::uint32_t>(
                                                        store.children_of(*bound[e.to], e.kind)
                                                            .begin(),
                                                        store.children_of(*bound[e.to], e.kind)
                                                            .end()));
            } else if (e.to == v && bound[e.from]) {
                pool = e.transitive
                           ? intersect_sorted(pool, reach.forward(*bound[e.from], e.kind))
                           : intersect_sorted(pool, std::vector<std::uint32_t>(
                                                        store.parents_of(*bound[e.from], e.kind)
                                                            .begin(),
                                                        store.parents_of(*bound[e.from], e.kind)
                                                            .end()));
            }
        }
        for (std::uint32_t c : pool) {
            bound[v] = c;
            self(self, k + 1);
        }
        bound[v].reset();
    };
    recurse(recurse, 0);

    // Deterministic order: tuple of LEIs in variable-name order.
    std::vector<std::size_t> name_order(var_count);
    for (std::size_t v = 0; v < var_count; ++v) name_order[v] = v;
    std::sort(name_order.begin(), name_order.end(), [&](std::size_t a, std::size_t b) {
        return ast.vars[a].name < ast.vars[b].name;
    });
    std::sort(raw_results.begin(), raw_results.end(),
              [&](const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
                  for (std::size_t v : name_order) {
                      const Lei& la = store.company_at(a[v]).lei;
                      const Lei& lb = store.company_at(b[v]).lei;
                      if (la != lb) return la < lb;
                  }
                  return false;
              });
    if (raw_results.size() > limits.max_results) raw_results.resize(limits.max_results);

    std::vector<Binding> bindings;
    bindings.reserve(raw_results.size());
    for (const auto& assignment : raw_results) {
        Binding binding;
        for (std::size_t v = 0; v < var_count; ++v) {
            binding.vars.emplace(ast.vars[v].name, store.company_at(assignment[v]).lei);
        }
        for (std::uint32_t e = 0; e < ast.edges.size(); ++e) {
            const EdgeClause& clause = ast.edges[e];
            if (!clause.transitive) continue;
            WitnessPath path;
            path.clause = e;
            for (std::uint32_t node :
                 reach.witness(assignment[clause.from], assignment[clause.to], clause.kind)) {
                path.nodes.push_back(store.company_at(node).lei);
            }
            binding.witness_paths.push_back(std::move(path));
        }
        bindings.push_back(std::move(binding));
    }
    return bindings;
}

std::string double_irish_pattern_text(const DoubleIrishParams& params) {
    std::string text;
    text += "a.hq=" + params.country_a + ";\n";
    text += "b.hq=" + params.country_b + ";\n";
    if (params.country_c) text += "c.hq=" + *params.country_c + ";\n";
    text += "a -[direct+]-> b;\n";
    text += "b -[direct+]-> c;\n";
    return text;
}

std::vector<Binding> detect_double_irish(const GraphStore& store,
                                         const DoubleIrishParams& params) {
    MatchLimits limits;
    limits.max_path_len = params.max_path_len;
    return match_pattern(store, parse_pattern(double_irish_pattern_text(params)), limits);
}

std::string duck_rabbit_pattern_text(const DuckRabbitParams& params, const std::string& haven) {
    std::string text;
    text += "b.hq=" + haven + ";\n";
    text += std::string("c.") + (params.child_country_is_legal ? "legal" : "hq") + "=" +
            params.child_country + ";\n";
    text += "c.form=" + params.child_legal_form + ";\n";
    text += "b -[ultimate]-> a;\n";
    text += "c -[direct]-> b;\n";
    return text;
}

std::vector<Binding> detect_duck_rabbit(const GraphStore& store, const DuckRabbitParams& params) {
    std::vector<Binding> all;
    for (const std::string& haven : params.havens) {
        std::vector<Binding> found =
            match_pattern(store, parse_pattern(duck_rabbit_pattern_text(params, haven)));
        all.insert(all.end(), std::make_move_iterator(found.begin()),
                   std::make_move_iterator(found.end()));
    }
    std::sort(all.begin(), all.end(), [](const Binding& x, const Binding& y) {
        return x.vars < y.vars;  // same key set (a, b, c); map order is name order
    });
    return all;
}

}  // namespace taxgraph
