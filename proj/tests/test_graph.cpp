#include "obsv/error.hpp"
#include "obsv/graph.hpp"
#include "obsv/random.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>

using namespace obsv;

namespace {

std::string fixture(const std::string& name) { return std::string(OBSV_MODELS_DIR) + "/" + name; }

using Names = std::vector<std::vector<std::string>>;

Names root_names(const InferenceGraph& g, const Condensation& c)
{
    Names out;
    for (auto r : c.roots) {
        std::vector<std::string> names;
        for (auto v : c.sccs[r])
            names.push_back(g.nodes[v]);
        out.push_back(names);
    }
    return out;
}

Names menu_names(const SensorMenu& m)
{
    Names out;
    for (const auto& s : m.sets)
        out.push_back(s.variables);
    return out;
}

Names roots_of(const OdeSystem& sys)
{
    auto g = build_graph(sys);
    return root_names(g, scc_condensation(g));
}

OdeSystem reduced(const std::string& model, std::vector<std::pair<std::string, std::string>> steps)
{
    OdeSystem sys = load_model(fixture(model));
    OdeSystem out = sys;
    for (auto& [level, var] : steps)
        out = reduce_by_conserved(out, *sys.find_conserved(level), var);
    return out;
}

InferenceGraph random_graph(Sampler& rng, std::size_t n)
{
    std::vector<std::string> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; ++i)
        nodes.push_back("x" + std::to_string(i));
    long density = rng.uniform(0, 4);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (rng.uniform(0, 9) < density)
                edges.emplace_back(i, j);
    return make_graph(nodes, edges);
}

}  // namespace

TEST(BuildGraph, SirEdges)
{
    auto g = build_graph(load_model(fixture("sir.model")));
    // S=0, I=1, R=2
    std::vector<std::pair<std::size_t, std::size_t>> expected{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 1}};
    EXPECT_EQ(g.edges, expected);
    for (std::size_t i = 0; i < 3; ++i)
        EXPECT_FALSE(g.has_edge(i, 2));
}

TEST(BuildGraph, CancelledVariableCreatesNoEdge)
{
    OdeSystem sys = parse_model("model: m\nparams: k\nstates: x, y\ndx/dt = k*y + x - x\ndy/dt = (x*y - x*y) + y\n");
    auto g = build_graph(sys);
    std::vector<std::pair<std::size_t, std::size_t>> expected{{0, 1}, {1, 1}};
    EXPECT_EQ(g.edges, expected);
}

TEST(BuildGraph, ScalingRhsKeepsGraph)
{
    for (const char* name : {"sir.model", "mm.model", "toy.model", "lv.model"}) {
        OdeSystem sys = load_model(fixture(name));
        OdeSystem scaled = sys;
        for (std::size_t i = 0; i < sys.size(); ++i)
            scaled.rhs[i] = Expr::constant(make_rational(-3, static_cast<long>(i) + 2)) * sys.rhs[i];
        EXPECT_EQ(build_graph(sys).edges, build_graph(scaled).edges) << name;
    }
}

TEST(Sources, FixtureSystems)
{
    EXPECT_EQ(roots_of(load_model(fixture("sir.model"))), (Names{{"R"}}));
    EXPECT_EQ(roots_of(reduced("sir.model", {{"N", "I"}})), (Names{{"I"}}));
    EXPECT_EQ(roots_of(reduced("sir.model", {{"N", "S"}})), (Names{{"S"}}));
    EXPECT_EQ(roots_of(load_model(fixture("mm.model"))), (Names{{"p"}}));
    EXPECT_EQ(roots_of(reduced("mm.model", {{"E0", "e"}})), (Names{{"e"}, {"p"}}));
    EXPECT_EQ(roots_of(reduced("mm.model", {{"E0", "c"}})), (Names{{"c"}, {"p"}}));
    EXPECT_EQ(roots_of(reduced("mm.model", {{"S0", "c"}})), (Names{{"c"}}));
    EXPECT_EQ(roots_of(reduced("mm.model", {{"S0", "s"}})), (Names{{"s"}}));
    EXPECT_EQ(roots_of(reduced("mm.model", {{"S0", "c"}, {"E0", "e"}})), (Names{{"e"}, {"c"}}));
    EXPECT_EQ(roots_of(load_model(fixture("toy.model"))), (Names{{"S"}}));
    EXPECT_EQ(roots_of(reduced("toy.model", {{"Q0", "R"}})), (Names{{"R"}}));
    EXPECT_EQ(roots_of(load_model(fixture("lv.model"))), (Names{{"r", "m"}}));
}

TEST(Condensation, ToyShape)
{
    auto g = build_graph(load_model(fixture("toy.model")));
    auto c = scc_condensation(g);
    // R has a self loop, S feeds R: two components, edge S -> R.
    EXPECT_TRUE(g.has_edge(0, 0));
    EXPECT_TRUE(g.has_edge(1, 0));
    EXPECT_EQ(c.sccs.size(), 2u);
    EXPECT_EQ(c.dag_edges, (std::vector<std::pair<std::size_t, std::size_t>>{{1, 0}}));
}

TEST(Condensation, NoEdges)
{
    auto g = make_graph({"a", "b", "c", "d"}, {});
    auto c = scc_condensation(g);
    EXPECT_EQ(c.roots.size(), 4u);
    EXPECT_EQ(minimal_sensor_sets(g, c).sets.size(), 1u);
    EXPECT_EQ(minimal_sensor_sets(g, c).sets[0].variables.size(), 4u);
}

TEST(Condensation, Empty)
{
    auto g = make_graph({}, {});
    auto c = scc_condensation(g);
    EXPECT_TRUE(c.sccs.empty());
    EXPECT_TRUE(minimal_sensor_sets(g, c).sets.empty());
    EXPECT_EQ(export_dot(g, c), "digraph { }\n");
}

TEST(SensorSets, FixtureMenus)
{
    auto menu = [](const OdeSystem& sys) {
        auto g = build_graph(sys);
        return menu_names(minimal_sensor_sets(g, scc_condensation(g)));
    };
    EXPECT_EQ(menu(load_model(fixture("sir.model"))), (Names{{"R"}}));
    EXPECT_EQ(menu(load_model(fixture("lv.model"))), (Names{{"r"}, {"m"}}));
    EXPECT_EQ(menu(reduced("mm.model", {{"S0", "c"}, {"E0", "e"}})), (Names{{"e", "c"}}));
    for (const auto& s : minimal_sensor_sets(build_graph(load_model(fixture("lv.model"))),
                                             scc_condensation(build_graph(load_model(fixture("lv.model")))))
                             .sets)
        EXPECT_TRUE(s.minimal);
}

TEST(SensorSets, CapSetsTruncationFlag)
{
    std::vector<std::string> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    // Five isolated 2-cycles: 32 combinations.
    for (std::size_t k = 0; k < 5; ++k) {
        nodes.push_back("a" + std::to_string(k));
        nodes.push_back("b" + std::to_string(k));
        edges.emplace_back(2 * k, 2 * k + 1);
        edges.emplace_back(2 * k + 1, 2 * k);
    }
    auto g = make_graph(nodes, edges);
    auto c = scc_condensation(g);
    auto full = minimal_sensor_sets(g, c);
    EXPECT_EQ(full.sets.size(), 32u);
    EXPECT_FALSE(full.truncated);
    auto capped = minimal_sensor_sets(g, c, 10);
    EXPECT_EQ(capped.sets.size(), 10u);
    EXPECT_TRUE(capped.truncated);
}

TEST(GraphicalObservable, Sir)
{
    OdeSystem sys = load_model(fixture("sir.model"));
    auto g = build_graph(sys);
    auto c = scc_condensation(g);
    auto v = graphical_observable(g, c, {"I"});
    EXPECT_FALSE(v.sufficient);
    EXPECT_EQ(v.missing_roots, (Names{{"R"}}));
    EXPECT_TRUE(graphical_observable(g, c, {"R"}).sufficient);
    EXPECT_THROW(graphical_observable(g, c, {"beta"}), Error);
}

TEST(GraphicalObservable, EnzymeReduction)
{
    auto sys = reduced("mm.model", {{"E0", "e"}});
    auto g = build_graph(sys);
    auto c = scc_condensation(g);
    EXPECT_TRUE(graphical_observable(g, c, {"e", "p"}).sufficient);
    EXPECT_FALSE(graphical_observable(g, c, {"p"}).sufficient);
}

TEST(Dot, Sir)
{
    auto g = build_graph(load_model(fixture("sir.model")));
    auto c = scc_condensation(g);
    std::string dot = export_dot(g, c);
    EXPECT_EQ(dot.rfind("digraph {", 0), 0u);
    auto count = [&](const std::string& needle) {
        std::size_t n = 0;
        for (auto pos = dot.find(needle); pos != std::string::npos; pos = dot.find(needle, pos + 1))
            ++n;
        return n;
    };
    EXPECT_EQ(count(" -> "), 5u);
    EXPECT_EQ(count("root=true"), 1u);
    EXPECT_NE(dot.find("\"R\" [root=true"), std::string::npos);
    EXPECT_EQ(count("subgraph cluster_"), 2u);
    EXPECT_EQ(dot, export_dot(g, c));
}

TEST(Dot, MichaelisMenten)
{
    auto g = build_graph(load_model(fixture("mm.model")));
    std::string dot = export_dot(g, scc_condensation(g));
    for (const char* n : {"\"e\"", "\"s\"", "\"c\"", "\"p\""})
        EXPECT_NE(dot.find(n), std::string::npos);
    EXPECT_NE(dot.find("\"p\" [root=true"), std::string::npos);
}

TEST(GraphProperties, CondensationIsAcyclic)
{
    Sampler rng(3);
    for (int t = 0; t < 300; ++t) {
        auto g = random_graph(rng, static_cast<std::size_t>(rng.uniform(1, 8)));
        auto c = scc_condensation(g);
        // Kahn's algorithm must consume every component.
        std::vector<int> indeg(c.sccs.size(), 0);
        for (auto [a, b] : c.dag_edges) {
            ASSERT_NE(a, b);
            ++indeg[b];
        }
        std::vector<std::size_t> ready;
        for (std::size_t k = 0; k < indeg.size(); ++k)
            if (indeg[k] == 0)
                ready.push_back(k);
        std::size_t seen = 0;
        while (!ready.empty()) {
            auto k = ready.back();
            ready.pop_back();
            ++seen;
            for (auto [a, b] : c.dag_edges)
                if (a == k && --indeg[b] == 0)
                    ready.push_back(b);
        }
        EXPECT_EQ(seen, c.sccs.size());
        EXPECT_FALSE(c.roots.empty());
        // Components partition the nodes and are strongly connected.
        std::vector<int> hits(g.nodes.size(), 0);
        for (const auto& comp : c.sccs)
            for (auto v : comp) {
                ++hits[v];
                auto r = reachable_from(g, {g.nodes[v]});
                for (auto w : comp)
                    EXPECT_TRUE(r[w]);
            }
        for (int h : hits)
            EXPECT_EQ(h, 1);
    }
}

TEST(GraphProperties, SufficiencyMatchesReachability)
{
    Sampler rng(5);
    for (int t = 0; t < 500; ++t) {
        std::size_t n = static_cast<std::size_t>(rng.uniform(1, 8));
        auto g = random_graph(rng, n);
        auto c = scc_condensation(g);
        std::set<std::string> observed;
        for (std::size_t i = 0; i < n; ++i)
            if (rng.uniform(0, 3) == 0)
                observed.insert(g.nodes[i]);
        auto r = reachable_from(g, observed);
        bool all = std::all_of(r.begin(), r.end(), [](bool b) { return b; });
        EXPECT_EQ(graphical_observable(g, c, observed).sufficient, all);
    }
}

TEST(GraphProperties, MenuSizeIsProductOfRootSizes)
{
    Sampler rng(8);
    for (int t = 0; t < 200; ++t) {
        auto g = random_graph(rng, static_cast<std::size_t>(rng.uniform(1, 8)));
        auto c = scc_condensation(g);
        std::size_t product = 1;
        for (auto r : c.roots)
            product *= c.sccs[r].size();
        auto menu = minimal_sensor_sets(g, c);
        EXPECT_EQ(menu.sets.size(), product);
        for (const auto& s : menu.sets) {
            EXPECT_EQ(s.variables.size(), c.roots.size());
            std::set<std::string> obs(s.variables.begin(), s.variables.end());
            EXPECT_TRUE(graphical_observable(g, c, obs).sufficient);
        }
    }
}
