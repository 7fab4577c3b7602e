#include "obsv/error.hpp"
#include "obsv/random.hpp"
#include "obsv/transform.hpp"

#include <gtest/gtest.h>

using namespace obsv;

namespace {

std::string fixture(const std::string& name) { return std::string(OBSV_MODELS_DIR) + "/" + name; }

bool same(const Expr& a, const Expr& b) { return is_zero(a - b).verdict == ZeroVerdict::Zero; }

Expr E(const SymbolTable& t, const std::string& text) { return parse_expr(text, t); }

SymbolTable with_levels(const OdeSystem& sys)
{
    SymbolTable t = sys.symbols();
    for (const auto& h : sys.conserved)
        if (!t.find(h.level))
            t.add({h.level, SymbolKind::Parameter});
    return t;
}

std::vector<std::string> levels_of(const std::vector<ConservedQuantity>& G)
{
    std::vector<std::string> out;
    for (const auto& h : G)
        out.push_back(h.level);
    return out;
}

std::vector<std::vector<Rational>> eval_matrix(const ExprMatrix& m, const ExactPoint& p)
{
    std::vector<std::vector<Rational>> out(m.rows, std::vector<Rational>(m.cols));
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            out[i][j] = eval_exact(m.at(i, j), p);
    return out;
}

// Solves a X = b by Gauss-Jordan; nullopt when a is singular.
std::optional<std::vector<std::vector<Rational>>> solve(std::vector<std::vector<Rational>> a,
                                                        std::vector<std::vector<Rational>> b)
{
    const std::size_t n = a.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0)
            ++p;
        if (p == n)
            return std::nullopt;
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a[i][c] == 0)
                continue;
            Rational f = a[i][c] / a[c][c];
            for (std::size_t j = 0; j < n; ++j)
                a[i][j] -= f * a[c][j];
            for (auto j = 0u; j < b[i].size(); ++j)
                b[i][j] -= f * b[c][j];
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (auto& v : b[i])
            v /= a[i][i];
    return b;
}

const AlternativeSensorResult& only(const AlternativeReport& r)
{
    EXPECT_EQ(r.results.size(), 1u);
    return r.results.front();
}

}  // namespace

TEST(Partition, Make)
{
    OdeSystem sys = load_model(fixture("mm.model"));
    auto p = make_partition(sys, {"c", "e"});
    EXPECT_EQ(p.s_vars, (std::vector<std::string>{"e", "c"}));
    EXPECT_EQ(p.r_vars, (std::vector<std::string>{"s", "p"}));
    EXPECT_THROW(make_partition(sys, {"x"}), Error);
    EXPECT_THROW(make_partition(sys, {"e", "e"}), Error);
}

TEST(PartitionJacobians, Sir)
{
    OdeSystem sys = load_model(fixture("sir.model"));
    auto pj = partition_jacobians(sys.conserved, make_partition(sys, {"I"}));
    ASSERT_EQ(pj.dG_ds.rows, 1u);
    ASSERT_EQ(pj.dG_ds.cols, 1u);
    ASSERT_EQ(pj.dG_dr.cols, 2u);
    EXPECT_TRUE(pj.dG_ds.at(0, 0).is_const(1));
    EXPECT_TRUE(pj.dG_dr.at(0, 0).is_const(1));
    EXPECT_TRUE(pj.dG_dr.at(0, 1).is_const(1));
    auto c = transform_conditions(pj, sys.symbols());
    EXPECT_TRUE(c.both());
    EXPECT_EQ(c.ds_invertible.confidence, Confidence::Exact);
}

TEST(PartitionJacobians, MmBothQuantities)
{
    OdeSystem sys = load_model(fixture("mm.model"));
    auto pj = partition_jacobians(sys.conserved, make_partition(sys, {"e", "c"}));
    const int ds[2][2] = {{1, 1}, {0, 1}};
    const int dr[2][2] = {{0, 0}, {1, 1}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            EXPECT_TRUE(pj.dG_ds.at(i, j).is_const(ds[i][j]));
            EXPECT_TRUE(pj.dG_dr.at(i, j).is_const(dr[i][j]));
        }
    auto c = transform_conditions(pj, sys.symbols());
    EXPECT_TRUE(c.ds_invertible.holds);
    EXPECT_FALSE(c.dr_full_rank.holds);
    EXPECT_EQ(c.dr_full_rank.rank, 1u);
    EXPECT_EQ(c.dr_full_rank.required, 2u);
    EXPECT_FALSE(c.both());
}

TEST(PartitionJacobians, NotSquare)
{
    OdeSystem sys = load_model(fixture("mm.model"));
    auto pj = partition_jacobians(sys.conserved, make_partition(sys, {"p"}));
    try {
        transform_conditions(pj, sys.symbols());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotSquare);
    }
}

TEST(PartitionJacobians, EmptyGIsTrivial)
{
    OdeSystem sys = load_model(fixture("sir.model"));
    auto pj = partition_jacobians({}, make_partition(sys, {}));
    EXPECT_EQ(pj.dG_ds.rows, 0u);
    EXPECT_EQ(pj.dG_dr.cols, 3u);
    EXPECT_TRUE(transform_conditions(pj, sys.symbols()).both());
}

TEST(PartitionJacobians, LotkaVolterra)
{
    OdeSystem sys = load_model(fixture("lv.model"));
    auto pj = partition_jacobians(sys.conserved, make_partition(sys, {"r"}));
    auto c = transform_conditions(pj, sys.symbols());
    EXPECT_TRUE(c.both());
    EXPECT_EQ(c.ds_invertible.confidence, Confidence::Exact);
    EXPECT_FALSE(is_affine_in(sys.conserved, {"r"}, sys));
}

TEST(SolvePsi, Examples)
{
    struct Case {
        const char* file;
        const char* level;
        const char* var;
        const char* expected;
    };
    const Case cases[] = {
        {"sir.model", "N", "I", "N - S - R"},
        {"mm.model", "S0", "c", "S0 - s - p"},
        {"mm.model", "E0", "e", "E0 - c"},
        {"toy.model", "Q0", "S", "Q0 - R"},
    };
    for (const auto& c : cases) {
        OdeSystem sys = load_model(fixture(c.file));
        std::vector<ConservedQuantity> G{*sys.find_conserved(c.level)};
        auto psi = solve_affine_psi(G, {c.level}, sys, make_partition(sys, {c.var}));
        ASSERT_EQ(psi.size(), 1u);
        EXPECT_EQ(psi[0].first, c.var);
        EXPECT_TRUE(same(psi[0].second, E(with_levels(sys), c.expected))) << to_string(psi[0].second);
    }
}

TEST(SolvePsi, PrintsAsDifference)
{
    OdeSystem sys = load_model(fixture("sir.model"));
    auto psi = solve_affine_psi(sys.conserved, {"N"}, sys, make_partition(sys, {"I"}));
    EXPECT_EQ(to_string(psi[0].second), "N - S - R");
}

TEST(SolvePsi, TwoQuantities)
{
    OdeSystem sys = load_model(fixture("mm.model"));
    auto psi = solve_affine_psi(sys.conserved, {"E0", "S0"}, sys, make_partition(sys, {"e", "c"}));
    ASSERT_EQ(psi.size(), 2u);
    auto t = with_levels(sys);
    EXPECT_EQ(psi[0].first, "e");
    EXPECT_TRUE(same(psi[0].second, E(t, "E0 - S0 + s + p")));
    EXPECT_TRUE(same(psi[1].second, E(t, "S0 - s - p")));
}

TEST(SolvePsi, ParameterCoefficient)
{
    OdeSystem sys = parse_model("model: m\nparams: k\nstates: x, y\n"
                                "dx/dt = k*y\ndy/dt = -k^2*y\nconserved H: k*x + y\n");
    auto psi = solve_affine_psi(sys.conserved, {"H"}, sys, make_partition(sys, {"x"}));
    EXPECT_TRUE(same(psi[0].second, E(with_levels(sys), "(H - y)/k")));
}

TEST(SolvePsi, Errors)
{
    OdeSystem lv = load_model(fixture("lv.model"));
    try {
        solve_affine_psi(lv.conserved, {"C"}, lv, make_partition(lv, {"r"}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotAffine);
    }
    OdeSystem sys = parse_model("model: m\nparams:\nstates: x, y, z\n"
                                "dx/dt = 0\ndy/dt = 0\ndz/dt = 0\n"
                                "conserved A: x + y + z\nconserved B: 2*x + 2*y - z\n");
    try {
        solve_affine_psi(sys.conserved, {"A", "B"}, sys, make_partition(sys, {"x", "y"}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingularSystem);
    }
    EXPECT_THROW(solve_affine_psi(sys.conserved, {"A"}, sys, make_partition(sys, {"x", "y"})), Error);
}

// Random G = A s + f(r) with f polynomial; psi must satisfy G(r, psi(r)) = L
// and d psi/dr = -(dG/ds)^-1 dG/dr.
TEST(SolvePsiProperty, LevelSetAndJacobian)
{
    Sampler rng(77);
    int solved = 0;
    for (int iter = 0; iter < 60; ++iter) {
        const std::size_t n = rng.uniform(2, 5);
        const std::size_t l = rng.uniform(1, static_cast<long>(n) - 1);
        std::string text = "model: rnd\nparams: k\nstates: ";
        std::vector<std::string> names;
        for (std::size_t i = 0; i < n; ++i) {
            names.push_back("x" + std::to_string(i));
            text += (i ? ", " : "") + names.back();
        }
        text += "\n";
        for (const auto& v : names)
            text += "d" + v + "/dt = 0\n";
        std::vector<std::string> s_vars(names.end() - l, names.end());
        std::vector<std::string> r_vars(names.begin(), names.end() - l);
        for (std::size_t i = 0; i < l; ++i) {
            std::string h = "0";
            for (const auto& v : s_vars)
                h += " + (" + std::to_string(rng.uniform(-3, 3)) + ")*" + v;
            for (const auto& v : r_vars)
                h += " + (" + std::to_string(rng.uniform(-3, 3)) + ")*" + v + "^" + std::to_string(rng.uniform(1, 3));
            h += " + k*" + r_vars[rng.uniform(0, static_cast<long>(r_vars.size()) - 1)] + "*" + r_vars[0];
            text += "conserved L" + std::to_string(i) + ":" + h + "\n";
        }
        OdeSystem sys = parse_model(text);
        const auto levels = levels_of(sys.conserved);
        const auto p = make_partition(sys, s_vars);
        Substitution psi;
        try {
            psi = solve_affine_psi(sys.conserved, levels, sys, p);
        } catch (const Error& e) {
            ASSERT_EQ(e.kind(), ErrorKind::SingularSystem);
            continue;
        }
        ++solved;
        Bindings b(psi.begin(), psi.end());
        for (const auto& H : sys.conserved)
            EXPECT_TRUE(same(substitute(H.expr, b), Expr::symbol({H.level, SymbolKind::Parameter})));

        const auto pj = partition_jacobians(sys.conserved, p);
        std::vector<Expr> psi_exprs;
        for (const auto& [v, e] : psi)
            psi_exprs.push_back(e);
        ExprMatrix dpsi = jacobian_of(psi_exprs, std::vector<Symbol>(sys.states.begin(), sys.states.end() - l));
        for (int t = 0; t < 3; ++t) {
            ExactPoint pt;
            pt["k"] = Rational(rng.uniform(-50, 50));
            for (const auto& v : names)
                pt[v] = Rational(rng.uniform(-50, 50));
            for (const auto& lv : levels)
                pt[lv] = Rational(rng.uniform(-50, 50));
            auto ds = eval_matrix(pj.dG_ds, pt);
            auto dr = eval_matrix(pj.dG_dr, pt);
            auto x = solve(ds, dr);
            ASSERT_TRUE(x);
            auto got = eval_matrix(dpsi, pt);
            for (std::size_t i = 0; i < l; ++i)
                for (std::size_t j = 0; j < n - l; ++j)
                    EXPECT_EQ(got[i][j], -(*x)[i][j]);
        }
    }
    EXPECT_GT(solved, 30);
}

TEST(Alternatives, SirFromR)
{
    OdeSystem sys = load_model(fixture("sir.model"));
    auto rep = alternative_observables(sys, sys.conserved, {"R"});
    const auto& r = only(rep);
    EXPECT_EQ(r.status, AlternativeStatus::Ok);
    EXPECT_EQ(r.partition.s_vars, std::vector<std::string>{"R"});
    ASSERT_TRUE(r.psi);
    EXPECT_TRUE(same(r.psi->at(0).second, E(with_levels(sys), "N - S - I")));
    ASSERT_EQ(r.candidates.size(), 2u);
    for (const auto& c : r.candidates) {
        EXPECT_TRUE(c.sufficient) << c.observe[0];
        EXPECT_EQ(c.rank->rank.generic_rank, 3u);
        EXPECT_TRUE(c.graph->sufficient);
    }
    EXPECT_EQ(rep.sufficient_sets(), (std::vector<std::vector<std::string>>{{"S"}, {"I"}}));
    EXPECT_FALSE(rep.truncated);
}

TEST(Alternatives, MmSubstrateQuantityFromP)
{
    OdeSystem sys = load_model(fixture("mm.model"));
    std::vector<ConservedQuantity> G{*sys.find_conserved("S0")};
    auto rep = alternative_observables(sys, G, {"p"});
    const auto& r = only(rep);
    EXPECT_EQ(r.status, AlternativeStatus::Ok);
    EXPECT_EQ(rep.sufficient_sets(), (std::vector<std::vector<std::string>>{{"s"}, {"c"}}));
    for (const auto& c : r.candidates)
        EXPECT_EQ(c.rank->rank.generic_rank, 4u);
}

TEST(Alternatives, MmEnzymeQuantityNeedsSharedVariable)
{
    OdeSystem sys = load_model(fixture("mm.model"));
    std::vector<ConservedQuantity> G{*sys.find_conserved("E0")};
    auto rep = alternative_observables(sys, G, {"p"});
    EXPECT_EQ(only(rep).status, AlternativeStatus::NoSharedVariable);
    EXPECT_TRUE(rep.sufficient_sets().empty());
}

TEST(Alternatives, MmBothQuantitiesNegativeControl)
{
    OdeSystem sys = load_model(fixture("mm.model"));
    auto rep = alternative_observables(sys, sys.conserved, {"e", "c"});
    const auto& r = only(rep);
    EXPECT_EQ(r.status, AlternativeStatus::ConditionsFail);
    EXPECT_FALSE(r.conditions->dr_full_rank.holds);
    EXPECT_TRUE(rep.sufficient_sets().empty());

    auto mismatch = alternative_observables(sys, sys.conserved, {"p"});
    EXPECT_EQ(only(mismatch).status, AlternativeStatus::DimensionMismatch);
}

TEST(Alternatives, ToyFromS)
{
    OdeSystem sys = load_model(fixture("toy.model"));
    auto rep = alternative_observables(sys, sys.conserved, {"S"});
    EXPECT_EQ(rep.sufficient_sets(), (std::vector<std::vector<std::string>>{{"R"}}));
}

TEST(Alternatives, LotkaVolterraGivesNothingNew)
{
    OdeSystem sys = load_model(fixture("lv.model"));
    auto rep = alternative_observables(sys, sys.conserved, {"r", "m"});
    ASSERT_EQ(rep.results.size(), 2u);
    for (const auto& r : rep.results) {
        EXPECT_EQ(r.status, AlternativeStatus::NotAffine);
        EXPECT_TRUE(r.conditions->both());
        EXPECT_TRUE(r.candidates.empty());
    }
    EXPECT_TRUE(rep.sufficient_sets().empty());
}

TEST(Alternatives, KeepsUnsharedKnownVariables)
{
    OdeSystem sys = load_model(fixture("mm.model"));
    std::vector<ConservedQuantity> G{*sys.find_conserved("E0")};
    auto rep = alternative_observables(sys, G, {"e", "p"});
    const auto& r = only(rep);
    EXPECT_EQ(r.partition.s_vars, std::vector<std::string>{"e"});
    ASSERT_EQ(r.candidates.size(), 1u);
    EXPECT_EQ(r.candidates[0].observe, (std::vector<std::string>{"c", "p"}));
    EXPECT_TRUE(r.candidates[0].transformed->is_eliminated("c"));
}

TEST(Alternatives, InputErrors)
{
    OdeSystem sys = load_model(fixture("sir.model"));
    EXPECT_THROW(alternative_observables(sys, sys.conserved, {"beta"}), Error);
    EXPECT_THROW(alternative_observables(sys, {}, {"R"}), Error);
}

TEST(Alternatives, PartitionCap)
{
    OdeSystem sys = load_model(fixture("sir.model"));
    AlternativeOptions opt;
    opt.partition_cap = 1;
    auto rep = alternative_observables(sys, sys.conserved, {"S", "R"}, opt);
    EXPECT_TRUE(rep.truncated);
    EXPECT_EQ(rep.results.size(), 1u);
}

TEST(Alternatives, Deterministic)
{
    OdeSystem sys = load_model(fixture("sir.model"));
    auto a = alternative_observables(sys, sys.conserved, {"S", "R"});
    auto b = alternative_observables(sys, sys.conserved, {"S", "R"});
    ASSERT_EQ(a.results.size(), b.results.size());
    for (std::size_t i = 0; i < a.results.size(); ++i) {
        EXPECT_EQ(a.results[i].partition.s_vars, b.results[i].partition.s_vars);
        ASSERT_EQ(a.results[i].candidates.size(), b.results[i].candidates.size());
        for (std::size_t j = 0; j < a.results[i].candidates.size(); ++j)
            EXPECT_EQ(a.results[i].candidates[j].rank->rank.point_ranks,
                      b.results[i].candidates[j].rank->rank.point_ranks);
    }
}

// Every positive verdict must hold up under an independent rank check with
// a different seed.
TEST(AlternativesProperty, PositiveVerdictsAreSound)
{
    for (const char* f : {"sir.model", "mm.model", "toy.model"}) {
        OdeSystem sys = load_model(fixture(f));
        for (const auto& H : sys.conserved) {
            for (const auto& s : sys.states) {
                auto rep = alternative_observables(sys, {H}, {s.name});
                for (const auto& r : rep.results)
                    for (const auto& c : r.candidates) {
                        if (!c.sufficient)
                            continue;
                        auto v = observability_verdict(*c.transformed, observe_states(c.observe), kAutoOrder,
                                                       {.seed = 991, .trials = 4});
                        EXPECT_EQ(v.rank.generic_rank, sys.size()) << f << " " << H.level << " " << s.name;
                    }
            }
        }
    }
}
