#include "obsv/graph.hpp"

#include "obsv/error.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace obsv {

bool InferenceGraph::has_edge(std::size_t from, std::size_t to) const
{
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(from, to));
}

std::vector<std::vector<std::size_t>> InferenceGraph::successors() const
{
    std::vector<std::vector<std::size_t>> out(nodes.size());
    for (auto [a, b] : edges)
        out[a].push_back(b);
    return out;
}

InferenceGraph make_graph(std::vector<std::string> nodes, std::vector<std::pair<std::size_t, std::size_t>> edges)
{
    for (auto [a, b] : edges)
        if (a >= nodes.size() || b >= nodes.size())
            throw Error(ErrorKind::InvalidArgument, "edge endpoint out of range");
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return {std::move(nodes), std::move(edges)};
}

InferenceGraph build_graph(const OdeSystem& sys)
{
    std::vector<std::string> nodes;
    for (const auto& s : sys.states)
        nodes.push_back(s.name);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < sys.size(); ++i)
        for (std::size_t j = 0; j < sys.size(); ++j)
            if (depends_on(sys.rhs[i], nodes[j]) && !is_zero(diff(sys.rhs[i], sys.states[j])).zero())
                edges.emplace_back(i, j);
    return make_graph(std::move(nodes), std::move(edges));
}

Condensation scc_condensation(const InferenceGraph& g)
{
    const std::size_t n = g.nodes.size();
    const auto succ = g.successors();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> found;
    std::size_t counter = 0;

    // Iterative Tarjan: frames hold (node, next successor position).
    for (std::size_t start = 0; start < n; ++start) {
        if (index[start] != unvisited)
            continue;
        std::vector<std::pair<std::size_t, std::size_t>> frames{{start, 0}};
        index[start] = low[start] = counter++;
        stack.push_back(start);
        on_stack[start] = true;
        while (!frames.empty()) {
            auto& [v, pos] = frames.back();
            if (pos < succ[v].size()) {
                std::size_t w = succ[v][pos++];
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::vector<std::size_t> comp;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                } while (w != v);
                std::sort(comp.begin(), comp.end());
                found.push_back(std::move(comp));
            }
            std::size_t done = v;
            frames.pop_back();
            if (!frames.empty())
                low[frames.back().first] = std::min(low[frames.back().first], low[done]);
        }
    }

    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    Condensation c;
    c.sccs = std::move(found);
    c.component_of.assign(n, 0);
    for (std::size_t k = 0; k < c.sccs.size(); ++k)
        for (auto v : c.sccs[k])
            c.component_of[v] = k;
    for (auto [a, b] : g.edges)
        if (c.component_of[a] != c.component_of[b])
            c.dag_edges.emplace_back(c.component_of[a], c.component_of[b]);
    std::sort(c.dag_edges.begin(), c.dag_edges.end());
    c.dag_edges.erase(std::unique(c.dag_edges.begin(), c.dag_edges.end()), c.dag_edges.end());
    std::vector<bool> has_incoming(c.sccs.size(), false);
    for (auto [a, b] : c.dag_edges)
        has_incoming[b] = true;
    for (std::size_t k = 0; k < c.sccs.size(); ++k)
        if (!has_incoming[k])
            c.roots.push_back(k);
    return c;
}

SensorMenu minimal_sensor_sets(const InferenceGraph& g, const Condensation& c, std::size_t cap)
{
    SensorMenu menu;
    if (c.roots.empty())
        return menu;
    std::vector<std::size_t> choice(c.roots.size(), 0);
    for (;;) {
        if (menu.sets.size() == cap) {
            menu.truncated = true;
            break;
        }
        SensorSet s;
        for (std::size_t r = 0; r < c.roots.size(); ++r)
            s.variables.push_back(g.nodes[c.sccs[c.roots[r]][choice[r]]]);
        menu.sets.push_back(std::move(s));
        // Odometer increment, last root fastest.
        std::size_t r = c.roots.size();
        while (r > 0) {
            --r;
            if (++choice[r] < c.sccs[c.roots[r]].size())
                break;
            choice[r] = 0;
            if (r == 0)
                return menu;
        }
    }
    return menu;
}

GraphVerdict graphical_observable(const InferenceGraph& g, const Condensation& c,
                                  const std::set<std::string>& observed)
{
    for (const auto& name : observed)
        if (std::find(g.nodes.begin(), g.nodes.end(), name) == g.nodes.end())
            throw Error(ErrorKind::InvalidArgument, "'" + name + "' is not a state");
    GraphVerdict v;
    for (auto r : c.roots) {
        bool hit = std::any_of(c.sccs[r].begin(), c.sccs[r].end(),
                               [&](std::size_t i) { return observed.count(g.nodes[i]) > 0; });
        if (!hit) {
            std::vector<std::string> names;
            for (auto i : c.sccs[r])
                names.push_back(g.nodes[i]);
            v.missing_roots.push_back(std::move(names));
        }
    }
    v.sufficient = v.missing_roots.empty();
    return v;
}

std::vector<bool> reachable_from(const InferenceGraph& g, const std::set<std::string>& from)
{
    const auto succ = g.successors();
    std::vector<bool> seen(g.nodes.size(), false);
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        if (from.count(g.nodes[i])) {
            seen[i] = true;
            todo.push_back(i);
        }
    while (!todo.empty()) {
        std::size_t v = todo.back();
        todo.pop_back();
        for (auto w : succ[v])
            if (!seen[w]) {
                seen[w] = true;
                todo.push_back(w);
            }
    }
    return seen;
}

namespace {
std::string quoted(const std::string& s) { return "\"" + s + "\""; }
}  // namespace

std::string export_dot(const InferenceGraph& g, const Condensation& c)
{
    if (g.nodes.empty())
        return "digraph { }\n";
    std::vector<bool> is_root(c.sccs.size(), false);
    for (auto r : c.roots)
        is_root[r] = true;
    std::ostringstream out;
    out << "digraph {\n";
    for (std::size_t k = 0; k < c.sccs.size(); ++k) {
        out << "  subgraph cluster_" << k << " {\n";
        out << "    label=\"scc " << k << (is_root[k] ? " (root)" : "") << "\";\n";
        for (auto v : c.sccs[k]) {
            out << "    " << quoted(g.nodes[v]);
            if (is_root[k])
                out << " [root=true, shape=doublecircle]";
            out << ";\n";
        }
        out << "  }\n";
    }
    for (auto [a, b] : g.edges)
        out << "  " << quoted(g.nodes[a]) << " -> " << quoted(g.nodes[b]) << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace obsv
