// Acceptance checks 1-12. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.
#include "obsv/embedding.hpp"
#include "obsv/error.hpp"
#include "obsv/graph.hpp"
#include "obsv/numeric.hpp"
#include "obsv/random.hpp"
#include "obsv/transform.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <cmath>
#include <unistd.h>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace obsv;

namespace {

// Tolerances.
constexpr double kDriftLimit = 1e-6;
constexpr double kOrderRatio = 12.0;
constexpr double kWitnessDistance = 1e-12;
constexpr int kLinearCases = 150;

const std::string kModels = OBSV_MODELS_DIR;
const std::string kCli = OBSV_CLI_PATH;

OdeSystem fixture(const std::string& name) { return load_model(kModels + "/" + name); }

std::size_t rank_of(const OdeSystem& sys, const std::vector<std::string>& obs, int k = kAutoOrder)
{
    auto J = jacobian(build_embedding(sys, observe_states(obs), k), sys);
    return generic_rank(J.entries, sys.symbols()).generic_rank;
}

ExprMatrix jac(const OdeSystem& sys, const std::vector<std::string>& obs, int k = kAutoOrder)
{
    return jacobian(build_embedding(sys, observe_states(obs), k), sys).entries;
}

using Sets = std::vector<std::vector<std::string>>;

Sets menu(const OdeSystem& sys)
{
    auto g = build_graph(sys);
    Sets out;
    for (const auto& s : minimal_sensor_sets(g, scc_condensation(g)).sets)
        out.push_back(s.variables);
    return out;
}

Sets roots(const OdeSystem& sys)
{
    auto g = build_graph(sys);
    auto c = scc_condensation(g);
    Sets out;
    for (auto r : c.roots) {
        std::vector<std::string> m;
        for (auto v : c.sccs[r])
            m.push_back(g.nodes[v]);
        out.push_back(m);
    }
    return out;
}

std::string show(const Sets& s)
{
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += i ? " {" : "{";
        for (std::size_t j = 0; j < s[i].size(); ++j)
            out += (j ? "," : "") + s[i][j];
        out += "}";
    }
    return out + "]";
}

OdeSystem reduce(const OdeSystem& sys, const std::vector<std::pair<std::string, std::string>>& steps)
{
    OdeSystem out = sys;
    for (const auto& [l, v] : steps)
        out = reduce_by_conserved(out, *sys.find_conserved(l), v);
    return out;
}

struct Outcome {
    bool pass;
    std::string detail;
};

Outcome c1()
{
    OdeSystem sys = fixture("sir.model");
    auto g = build_graph(sys);
    auto c = scc_condensation(g);
    Sets m = menu(sys);
    bool i_ok = !graphical_observable(g, c, {"I"}).sufficient;
    return {m == Sets{{"R"}} && i_ok, "sensor sets " + show(m) + ", {I} " + (i_ok ? "insufficient" : "sufficient")};
}

Outcome c2()
{
    OdeSystem sys = fixture("sir.model");
    auto J = jac(sys, {"R"}, 2);
    std::size_t r = generic_rank(J, sys.symbols()).generic_rank;
    ExactPoint p{{"beta", Rational(3)}, {"lambda", Rational(7)}, {"S", Rational(11)}, {"I", Rational(0)},
                 {"R", Rational(5)}};
    std::size_t r0 = rank_at_point(J, p);
    return {r == 3 && r0 <= 2, "generic rank " + std::to_string(r) + ", rank at I=0 " + std::to_string(r0)};
}

Outcome c3()
{
    std::size_t r = rank_of(fixture("sir.model"), {"I"}, 2);
    return {r == 2, "obs {I} generic rank " + std::to_string(r)};
}

Outcome c4()
{
    OdeSystem sys = fixture("sir.model");
    auto rep = alternative_observables(sys, sys.conserved, {"R"});
    bool s = false, i = false;
    std::string d;
    for (const auto& r : rep.results)
        for (const auto& c : r.candidates) {
            bool ok = c.sufficient && c.rank && c.rank->rank.generic_rank == 3;
            if (c.observe == std::vector<std::string>{"S"})
                s = ok;
            if (c.observe == std::vector<std::string>{"I"})
                i = ok;
            d += "{" + c.observe[0] + "} rank " + std::to_string(c.rank ? c.rank->rank.generic_rank : 0) + " ";
        }
    return {s && i, d};
}

Outcome c5()
{
    OdeSystem sys = fixture("mm.model");
    Sets full = menu(sys);
    Sets e_red = menu(reduce(sys, {{"E0", "e"}}));
    Sets c_red = menu(reduce(sys, {{"E0", "c"}}));
    Sets s_c = menu(reduce(sys, {{"S0", "c"}}));
    Sets s_s = menu(reduce(sys, {{"S0", "s"}}));
    OdeSystem dbl = reduce(sys, {{"S0", "c"}, {"E0", "e"}});
    Sets d_roots = roots(dbl);
    Sets d_menu = menu(dbl);
    bool ok = full == Sets{{"p"}} && e_red == Sets{{"e", "p"}} && c_red == Sets{{"c", "p"}} &&
              s_c == Sets{{"c"}} && s_s == Sets{{"s"}} && d_roots == Sets{{"e"}, {"c"}} && d_menu == Sets{{"e", "c"}};
    return {ok, "full " + show(full) + ", E0:e " + show(e_red) + ", E0:c " + show(c_red) + ", S0:c " + show(s_c) +
                    ", S0:s " + show(s_s) + ", S0:c+E0:e roots " + show(d_roots)};
}

Outcome c6()
{
    OdeSystem sys = fixture("mm.model");
    auto pj = partition_jacobians(sys.conserved, make_partition(sys, {"e", "c"}));
    auto cond = transform_conditions(pj, sys.symbols());
    bool ok = cond.ds_invertible.holds && !cond.dr_full_rank.holds && cond.dr_full_rank.rank == 1 && !cond.both();
    return {ok, "dG/dr rank " + std::to_string(cond.dr_full_rank.rank) + " of required " +
                    std::to_string(cond.dr_full_rank.required) + ", full-rank condition " +
                    (cond.dr_full_rank.holds ? "holds" : "fails")};
}

Outcome c7()
{
    OdeSystem sys = fixture("toy.model");
    std::size_t rr = rank_of(sys, {"R"}), rs = rank_of(sys, {"S"});
    Sets alt = alternative_observables(sys, sys.conserved, {"S"}).sufficient_sets();
    return {rr == 1 && rs == 2 && alt == Sets{{"R"}},
            "rank {R} " + std::to_string(rr) + ", {S} " + std::to_string(rs) + ", alternatives " + show(alt)};
}

Outcome c8()
{
    OdeSystem sys = fixture("lv.model");
    std::size_t rr = rank_of(sys, {"r"}), rm = rank_of(sys, {"m"});
    ExactPoint base{{"R", Rational(2)}, {"D", Rational(3)}, {"B", Rational(5)}, {"M", Rational(7)},
                    {"r", Rational(11)}, {"m", Rational(13)}};
    ExactPoint r0 = base, m0 = base;
    r0["r"] = Rational(0);
    m0["m"] = Rational(0);
    std::size_t dr = rank_at_point(jac(sys, {"r"}), r0), dm = rank_at_point(jac(sys, {"m"}), m0);
    auto check = verify_conserved(sys, sys.conserved[0]);
    Sets alt;
    for (const auto& k : std::vector<std::string>{"r", "m"})
        for (const auto& s : alternative_observables(sys, sys.conserved, {k}).sufficient_sets())
            alt.push_back(s);
    bool ok = rr == 2 && rm == 2 && dr < 2 && dm < 2 && check.verdict == ConservedVerdict::Exact && alt.empty();
    return {ok, "ranks " + std::to_string(rr) + "," + std::to_string(rm) + "; at r=0 " + std::to_string(dr) +
                    ", at m=0 " + std::to_string(dm) + "; C " + to_string(check.verdict) + "; new sets " + show(alt)};
}

Outcome c9()
{
    std::string d;
    bool ok = true;
    for (const char* f : {"sir.model", "mm.model", "toy.model", "lv.model"}) {
        OdeSystem sys = fixture(f);
        for (const auto& H : sys.conserved) {
            auto v = verify_conserved(sys, H).verdict;
            ok = ok && v == ConservedVerdict::Exact;
            d += H.level + " " + to_string(v) + ", ";
        }
    }
    OdeSystem sir = fixture("sir.model");
    auto si = verify_conserved(sir, {"P", parse_expr("S + I", sir.symbols())});
    ok = ok && si.verdict == ConservedVerdict::Refuted && si.witness;
    return {ok, d + "S+I " + to_string(si.verdict) + (si.witness ? " with witness" : "")};
}

// Rank of (C; CA; ...; CA^(n-1)) by plain Gauss-Jordan.
std::size_t kalman_rank(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& C)
{
    const std::size_t n = A.size();
    std::vector<std::vector<Rational>> K{C};
    for (std::size_t i = 1; i < n; ++i) {
        std::vector<Rational> row(n, Rational(0));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < n; ++l)
                row[j] += K.back()[l] * A[l][j];
        K.push_back(row);
    }
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < n; ++c) {
        std::size_t p = r;
        while (p < n && K[p][c] == 0)
            ++p;
        if (p == n)
            continue;
        std::swap(K[p], K[r]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r || K[i][c] == 0)
                continue;
            Rational f = K[i][c] / K[r][c];
            for (std::size_t j = 0; j < n; ++j)
                K[i][j] -= f * K[r][j];
        }
        ++r;
    }
    return r;
}

Outcome c10()
{
    Sampler rng(2024);
    int agree = 0;
    auto draw = [&] {
        long den = rng.uniform(1, 3);
        return make_rational(rng.uniform(-5 * den, 5 * den), den);
    };
    for (int t = 0; t < kLinearCases; ++t) {
        const std::size_t n = rng.uniform(1, 4);
        std::vector<std::vector<Rational>> A(n, std::vector<Rational>(n));
        std::vector<Rational> C(n);
        std::ostringstream text;
        text << "model: lin\nparams:\nstates: ";
        for (std::size_t i = 0; i < n; ++i)
            text << (i ? ", " : "") << "x" << i;
        text << "\n";
        for (std::size_t i = 0; i < n; ++i) {
            text << "dx" << i << "/dt = 0";
            for (std::size_t j = 0; j < n; ++j) {
                A[i][j] = rng.uniform(0, 3) == 0 ? Rational(0) : draw();
                text << " + (" << to_string(A[i][j]) << ")*x" << j;
            }
            text << "\n";
        }
        OdeSystem sys = parse_model(text.str());
        std::string out = "0";
        for (std::size_t j = 0; j < n; ++j) {
            C[j] = rng.uniform(0, 2) == 0 ? Rational(0) : draw();
            out += " + (" + to_string(C[j]) + ")*x" + std::to_string(j);
        }
        ObservationSet obs{"y", {parse_expr(out, sys.symbols())}};
        auto J = jacobian(build_embedding(sys, obs), sys);
        std::size_t got = generic_rank(J.entries, sys.symbols(), {.seed = static_cast<std::uint64_t>(t)}).generic_rank;
        if (got == kalman_rank(A, C))
            ++agree;
    }
    return {agree == kLinearCases, std::to_string(agree) + "/" + std::to_string(kLinearCases) + " agree"};
}

Outcome c11()
{
    OdeSystem sys = fixture("sir.model");
    const FloatPoint p{{"beta", 0.0004}, {"lambda", 0.04}};
    const std::vector<double> x0{997, 3, 0};
    const Expr& H = sys.conserved[0].expr;
    double d1 = conserved_drift(integrate_rk4(sys, x0, p, 0.01, 100), H);
    double d2 = conserved_drift(integrate_rk4(sys, x0, p, 0.005, 100), H);
    double ratio = d2 > 0 ? d1 / d2 : INFINITY;
    auto wi = unobservability_witness(sys, observe_states({"I"}), x0, p, 0.01, 100, 1.0);
    auto wr = unobservability_witness(sys, observe_states({"R"}), x0, p, 0.01, 100, 1.0);
    bool drift_ok = d1 < kDriftLimit;
    bool order_ok = ratio >= kOrderRatio;
    bool wi_ok = wi && wi->direction == "R" && wi->output_distance < kWitnessDistance;
    bool wr_ok = !wr;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "drift %.3e (%s), halving ratio %.3g (%s), {I} witness %s, {R} witness %s", d1,
                  drift_ok ? "ok" : "too large", ratio, order_ok ? "ok" : "below 12", wi_ok ? "along R" : "missing",
                  wr_ok ? "none" : "found");
    return {drift_ok && order_ok && wi_ok && wr_ok, buf};
}

Outcome c12()
{
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("obsv_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    bool ok = true;
    std::string d;
    for (const char* f : {"sir", "mm", "toy", "lv"}) {
        std::string bytes[2];
        for (int i = 0; i < 2; ++i) {
            fs::path out = dir / (std::string(f) + std::to_string(i) + ".json");
            std::string cmd = "\"" + kCli + "\" --seed 0 analyze \"" + kModels + "/" + f + ".model\" --json \"" +
                              out.string() + "\" > /dev/null";
            if (std::system(cmd.c_str()) != 0) {
                ok = false;
                continue;
            }
            std::ifstream in(out, std::ios::binary);
            bytes[i].assign(std::istreambuf_iterator<char>(in), {});
        }
        bool same = !bytes[0].empty() && bytes[0] == bytes[1];
        ok = ok && same;
        d += std::string(f) + (same ? " identical, " : " DIFFERENT, ");
    }
    fs::remove_all(dir);
    return {ok, d.substr(0, d.size() - 2)};
}

}  // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"SIR graphical sensor sets", c1},
        {"SIR rank with R observed", c2},
        {"SIR rank with I observed", c3},
        {"SIR alternative single sensors", c4},
        {"Michaelis-Menten sensor menus", c5},
        {"Jacobian condition failure", c6},
        {"toy system ranks and alternative", c7},
        {"Lotka-Volterra", c8},
        {"conserved verification suite", c9},
        {"linear oracle", c10},
        {"numeric cross-checks", c11},
        {"determinism", c12},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%-4s %2zu  %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed ? 1 : 0;
}
