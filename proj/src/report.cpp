#include "obsv/report.hpp"

#include "obsv/error.hpp"
#include "obsv/graph.hpp"
#include "obsv/random.hpp"
#include "obsv/transform.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <set>
#include <sstream>

namespace obsv {

using nlohmann::json;

ReduceStep parse_reduce_step(const std::string& text)
{
    auto colon = text.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == text.size())
        throw Error(ErrorKind::InvalidArgument, "expected LEVEL:var, got '" + text + "'");
    return {text.substr(0, colon), text.substr(colon + 1)};
}

namespace {

double parse_double(std::string_view t)
{
    while (!t.empty() && t.front() == ' ')
        t.remove_prefix(1);
    while (!t.empty() && t.back() == ' ')
        t.remove_suffix(1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw Error(ErrorKind::InvalidArgument, "not a number: '" + std::string(t) + "'");
    return v;
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep))
        out.push_back(cur);
    return out;
}

}  // namespace

FloatPoint parse_params(const std::string& text)
{
    FloatPoint out;
    for (const auto& item : split(text, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::InvalidArgument, "expected name=value, got '" + item + "'");
        std::string name = item.substr(0, eq);
        name.erase(0, name.find_first_not_of(' '));
        name.erase(name.find_last_not_of(' ') + 1);
        if (!is_valid_identifier(name))
            throw Error(ErrorKind::InvalidArgument, "bad parameter name '" + name + "'");
        out[name] = parse_double(std::string_view(item).substr(eq + 1));
    }
    return out;
}

std::vector<double> parse_numbers(const std::string& text)
{
    std::vector<double> out;
    for (const auto& item : split(text, ','))
        out.push_back(parse_double(item));
    if (out.empty())
        throw Error(ErrorKind::InvalidArgument, "empty number list");
    return out;
}

OdeSystem apply_reductions(const OdeSystem& sys, const std::vector<ReduceStep>& steps)
{
    OdeSystem out = sys;
    for (const auto& [level, var] : steps) {
        const ConservedQuantity* H = sys.find_conserved(level);
        if (!H)
            throw Error(ErrorKind::InvalidArgument, "no conserved quantity '" + level + "'");
        out = reduce_by_conserved(out, *H, var);
    }
    return out;
}

namespace {

json names(const std::vector<Symbol>& syms)
{
    json a = json::array();
    for (const auto& s : syms)
        a.push_back(s.name);
    return a;
}

json point_json(const ExactPoint& p)
{
    json o = json::object();
    for (const auto& [k, v] : p)
        o[k] = to_string(v);
    return o;
}

json model_json(const OdeSystem& sys)
{
    json m;
    m["name"] = sys.name;
    m["states"] = names(sys.states);
    m["params"] = names(sys.params);
    m["equations"] = sys.equations();
    json el = json::array();
    for (const auto& e : sys.eliminations)
        el.push_back({{"var", e.var}, {"level", e.level}, {"value", to_string(e.value)}});
    m["eliminations"] = el;
    return m;
}

json header(const char* command, const OdeSystem& sys)
{
    json r;
    r["schema"] = kReportSchema;
    r["command"] = command;
    r["tool"] = {{"name", "obsv"}, {"version", kToolVersion}};
    r["model"] = model_json(sys);
    return r;
}

json conserved_json(const OdeSystem& sys, const std::vector<ConservedCheck>& checks)
{
    json a = json::array();
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const auto& c = checks[i];
        a.push_back({{"level", sys.conserved[i].level},
                     {"expr", to_string(sys.conserved[i].expr)},
                     {"verdict", to_string(c.verdict)},
                     {"derivative", to_string(canonical(c.derivative, sys.symbols()))},
                     {"trials", c.trials},
                     {"witness", c.witness ? point_json(*c.witness) : json(nullptr)}});
    }
    return a;
}

json sets_json(const std::vector<std::vector<std::string>>& sets)
{
    json a = json::array();
    for (const auto& s : sets)
        a.push_back(s);
    return a;
}

json menu_json(const SensorMenu& menu)
{
    std::vector<std::vector<std::string>> sets;
    for (const auto& s : menu.sets)
        sets.push_back(s.variables);
    return {{"sets", sets_json(sets)}, {"truncated", menu.truncated}};
}

std::vector<std::vector<std::string>> root_names(const InferenceGraph& g, const Condensation& c)
{
    std::vector<std::vector<std::string>> out;
    for (auto r : c.roots) {
        std::vector<std::string> members;
        for (auto v : c.sccs[r])
            members.push_back(g.nodes[v]);
        out.push_back(members);
    }
    return out;
}

json graph_json(const InferenceGraph& g, const Condensation& c, const SensorMenu& menu)
{
    json edges = json::array();
    for (const auto& [a, b] : g.edges)
        edges.push_back({g.nodes[a], g.nodes[b]});
    json sccs = json::array();
    for (std::size_t i = 0; i < c.sccs.size(); ++i) {
        std::vector<std::string> members;
        for (auto v : c.sccs[i])
            members.push_back(g.nodes[v]);
        bool root = std::find(c.roots.begin(), c.roots.end(), i) != c.roots.end();
        sccs.push_back({{"members", members}, {"root", root}});
    }
    return {{"nodes", g.nodes},
            {"edges", edges},
            {"sccs", sccs},
            {"roots", sets_json(root_names(g, c))},
            {"sensor_menu", menu_json(menu)}};
}

json graph_verdict_json(const GraphVerdict& v)
{
    return {{"sufficient", v.sufficient}, {"missing_roots", sets_json(v.missing_roots)}};
}

json rank_json(const ObservabilityResult& r, std::size_t n)
{
    json pts = json::array();
    for (const auto& p : r.rank.sample_points)
        pts.push_back(point_json(p));
    json probes = json::array();
    for (const auto& p : r.probes)
        probes.push_back({{"fixed", point_json(p.fixed)},
                          {"rank", p.rank ? json(*p.rank) : json(nullptr)},
                          {"completions", p.completions}});
    return {{"k", r.embedding.k},
            {"seed", r.rank.seed},
            {"trials", r.rank.trials},
            {"generic_rank", r.rank.generic_rank},
            {"rows", r.rank.rows},
            {"cols", r.rank.cols},
            {"states", n},
            {"observable", r.observable},
            {"confidence", to_string(r.rank.confidence)},
            {"sample_ranks", r.rank.point_ranks},
            {"sample_points", pts},
            {"rejected_draws", r.rank.rejected_draws},
            {"rank_still_growing", r.rank_still_growing},
            {"probes", probes}};
}

json condition_json(const RankCondition& c)
{
    return {{"holds", c.holds}, {"rank", c.rank}, {"required", c.required}, {"confidence", to_string(c.confidence)}};
}

json alternative_json(const AlternativeReport& rep)
{
    json results = json::array();
    for (const auto& r : rep.results) {
        json jr;
        jr["s_vars"] = r.partition.s_vars;
        jr["r_vars"] = r.partition.r_vars;
        jr["status"] = to_string(r.status);
        jr["conditions"] = r.conditions ? json{{"ds_invertible", condition_json(r.conditions->ds_invertible)},
                                               {"dr_full_rank", condition_json(r.conditions->dr_full_rank)}}
                                        : json(nullptr);
        if (r.psi) {
            json psi = json::array();
            for (const auto& [v, e] : *r.psi)
                psi.push_back({{"var", v}, {"expr", to_string(e)}});
            jr["psi"] = psi;
        } else {
            jr["psi"] = nullptr;
        }
        json cands = json::array();
        for (const auto& c : r.candidates) {
            json jc;
            jc["solved_for"] = c.solved_for;
            jc["observe"] = c.observe;
            jc["sufficient"] = c.sufficient;
            jc["note"] = c.note;
            jc["equations"] = c.transformed ? json(c.transformed->equations()) : json(nullptr);
            jc["graphical"] = c.graph ? graph_verdict_json(*c.graph) : json(nullptr);
            jc["rank"] = c.rank ? rank_json(*c.rank, c.transformed->size()) : json(nullptr);
            cands.push_back(jc);
        }
        jr["candidates"] = cands;
        results.push_back(jr);
    }
    return {{"results", results}, {"truncated", rep.truncated}};
}

struct NumericContext {
    std::vector<double> x0;
    FloatPoint params;
    double dt, T, delta;
};

NumericContext numeric_context(const OdeSystem& sys, const NumericSetup& setup, std::uint64_t seed)
{
    NumericContext ctx{{}, {}, setup.dt, setup.T, setup.delta};
    Sampler rng(seed);
    std::set<std::string> levels;
    for (const auto& e : sys.eliminations)
        levels.insert(e.level);
    for (const auto& p : sys.params) {
        double v = rng.uniform_real(0.5, 1.5);
        if (levels.count(p.name))
            continue;
        if (setup.params) {
            auto it = setup.params->find(p.name);
            if (it == setup.params->end())
                throw Error(ErrorKind::InvalidArgument, "no value for parameter '" + p.name + "'");
            v = it->second;
        }
        ctx.params[p.name] = v;
    }
    for (std::size_t i = 0; i < sys.size(); ++i)
        ctx.x0.push_back(rng.uniform_real(0.5, 2.0));
    if (setup.x0) {
        if (setup.x0->size() != sys.size())
            throw Error(ErrorKind::InvalidArgument, "x0 needs " + std::to_string(sys.size()) + " values");
        ctx.x0 = *setup.x0;
    }
    FloatPoint at = ctx.params;
    for (std::size_t i = 0; i < sys.size(); ++i)
        at[sys.states[i].name] = ctx.x0[i];
    for (const auto& lv : levels) {
        if (setup.params && setup.params->count(lv)) {
            ctx.params[lv] = setup.params->at(lv);
            continue;
        }
        ctx.params[lv] = eval_float(sys.find_conserved(lv)->expr, at);
    }
    return ctx;
}

json numeric_json(const OdeSystem& sys, const NumericContext& ctx)
{
    json n;
    n["x0"] = ctx.x0;
    n["params"] = ctx.params;
    n["dt"] = ctx.dt;
    n["T"] = ctx.T;
    n["delta"] = ctx.delta;
    n["threshold"] = kWitnessThreshold;
    json drift = json::array();
    try {
        Trajectory t = integrate_rk4(sys, ctx.x0, ctx.params, ctx.dt, ctx.T);
        n["diverged"] = t.diverged;
        n["steps"] = t.times.size() - 1;
        for (const auto& H : sys.conserved)
            drift.push_back({{"level", H.level}, {"drift", conserved_drift(t, H.expr)}});
        n["error"] = nullptr;
    } catch (const Error& e) {
        n["diverged"] = false;
        n["steps"] = 0;
        n["error"] = e.what();
    }
    n["drift"] = drift;
    return n;
}

json witness_json(const OdeSystem& sys, const ObservationSet& obs, const NumericContext& ctx)
{
    try {
        auto w = unobservability_witness(sys, obs, ctx.x0, ctx.params, ctx.dt, ctx.T, ctx.delta);
        if (!w)
            return {{"found", false}, {"note", "no witness found"}};
        return {{"found", true},
                {"direction", w->direction},
                {"x0_a", w->x0_a},
                {"x0_b", w->x0_b},
                {"output_distance", w->output_distance},
                {"horizon", w->horizon}};
    } catch (const Error& e) {
        return {{"found", false}, {"note", std::string("search failed: ") + e.what()}};
    }
}

std::vector<std::string> state_outputs(const OdeSystem& sys, const ObservationSet& obs)
{
    std::vector<std::string> out;
    for (const auto& s : sys.states)
        for (const auto& g : obs.outputs)
            if (depends_on(g, s.name)) {
                out.push_back(s.name);
                break;
            }
    return out;
}

struct Variant {
    OdeSystem sys;
    std::vector<ReduceStep> steps;
};

std::vector<Variant> reduction_variants(const OdeSystem& sys, const std::vector<const ConservedQuantity*>& usable,
                                        std::size_t cap, bool* truncated)
{
    std::vector<Variant> out;
    std::set<std::pair<std::set<std::string>, std::set<std::string>>> seen;
    std::deque<Variant> queue{{sys, {}}};
    while (!queue.empty()) {
        Variant cur = std::move(queue.front());
        queue.pop_front();
        for (const ConservedQuantity* H : usable) {
            bool used = std::any_of(cur.sys.eliminations.begin(), cur.sys.eliminations.end(),
                                    [&](const Elimination& e) { return e.level == H->level; });
            if (used)
                continue;
            for (const auto& s : sys.states) {
                if (cur.sys.is_eliminated(s.name))
                    continue;
                OdeSystem next;
                try {
                    next = reduce_by_conserved(cur.sys, *H, s.name);
                } catch (const Error& e) {
                    if (e.kind() == ErrorKind::NotAffineIn || e.kind() == ErrorKind::ZeroCoefficient)
                        continue;
                    throw;
                }
                std::set<std::string> qs, vs;
                for (const auto& e : next.eliminations) {
                    qs.insert(e.level);
                    vs.insert(e.var);
                }
                if (!seen.insert({qs, vs}).second)
                    continue;
                if (out.size() == cap) {
                    *truncated = true;
                    return out;
                }
                Variant v{std::move(next), cur.steps};
                v.steps.emplace_back(H->level, s.name);
                out.push_back(v);
                queue.push_back(std::move(v));
            }
        }
    }
    return out;
}

}  // namespace

json analyze_report(const OdeSystem& sys_in, const AnalyzeOptions& options, const std::vector<ReduceStep>& applied)
{
    const RankOptions ropt{options.seed, options.trials};
    std::vector<ConservedCheck> checks;
    const OdeSystem sys = verify_all(sys_in, &checks, options.seed);

    json r = header("analyze", sys);
    json reduce = json::array();
    for (const auto& [l, v] : applied)
        reduce.push_back(l + ":" + v);
    r["settings"] = {{"seed", options.seed},
                     {"k", options.k == kAutoOrder ? json("auto") : json(options.k)},
                     {"trials", options.trials},
                     {"reduce", reduce}};
    r["conserved"] = conserved_json(sys, checks);

    const InferenceGraph g = build_graph(sys);
    const Condensation cond = scc_condensation(g);
    const SensorMenu menu = minimal_sensor_sets(g, cond);
    r["graph"] = graph_json(g, cond, menu);

    std::vector<ExactPoint> probes = options.probes;
    if (probes.empty())
        for (const auto& s : sys.states)
            probes.push_back({{s.name, Rational(0)}});

    const NumericContext ctx = numeric_context(sys, options.numeric, options.seed);
    r["numeric"] = numeric_json(sys, ctx);

    // Declared observation sets, then graph menu sets not already declared.
    std::vector<std::pair<ObservationSet, std::string>> sets;
    std::set<std::vector<std::string>> covered;
    for (const auto& o : sys.observations) {
        sets.emplace_back(o, "declared");
        covered.insert(state_outputs(sys, o));
    }
    for (const auto& s : menu.sets)
        if (covered.insert(s.variables).second)
            sets.emplace_back(observe_states(s.variables), "graph_menu");

    json observations = json::array();
    std::vector<std::vector<std::string>> known, sufficient, insufficient;
    for (const auto& [obs, source] : sets) {
        const auto vars = state_outputs(sys, obs);
        const auto gv = graphical_observable(g, cond, {vars.begin(), vars.end()});
        const auto rv = observability_verdict(sys, obs, options.k, ropt, probes);
        json outputs = json::array();
        for (const auto& e : obs.outputs)
            outputs.push_back(to_string(e));
        observations.push_back({{"label", obs.label},
                                {"source", source},
                                {"outputs", outputs},
                                {"states", vars},
                                {"graphical", graph_verdict_json(gv)},
                                {"rank", rank_json(rv, sys.size())},
                                {"witness", witness_json(sys, obs, ctx)}});
        (rv.observable ? sufficient : insufficient).push_back(vars);
        if (rv.observable && std::find(known.begin(), known.end(), vars) == known.end())
            known.push_back(vars);
    }
    r["observations"] = observations;

    std::vector<const ConservedQuantity*> usable;
    for (std::size_t i = 0; i < sys.conserved.size(); ++i) {
        const auto& H = sys.conserved[i];
        bool used = std::any_of(sys.eliminations.begin(), sys.eliminations.end(),
                                [&](const Elimination& e) { return e.level == H.level; });
        if (checks[i].verdict != ConservedVerdict::Refuted && !used)
            usable.push_back(&H);
    }

    json alternatives = json::array();
    std::vector<std::vector<std::string>> alt_sets;
    const std::size_t q = usable.size();
    AlternativeOptions aopt;
    aopt.rank = ropt;
    aopt.k = options.k;
    for (std::size_t mask = 1; q < 16 && mask < (std::size_t{1} << q); ++mask) {
        std::vector<ConservedQuantity> G;
        std::vector<std::string> levels;
        for (std::size_t i = 0; i < q; ++i)
            if (mask & (std::size_t{1} << i)) {
                G.push_back(*usable[i]);
                levels.push_back(usable[i]->level);
            }
        for (const auto& k : known) {
            AlternativeReport rep = alternative_observables(sys, G, k, aopt);
            json a = alternative_json(rep);
            a["quantities"] = levels;
            a["known"] = k;
            alternatives.push_back(a);
            for (const auto& s : rep.sufficient_sets())
                if (std::find(alt_sets.begin(), alt_sets.end(), s) == alt_sets.end())
                    alt_sets.push_back(s);
        }
    }
    r["alternatives"] = alternatives;

    bool truncated = false;
    json variants = json::array();
    for (const auto& v : reduction_variants(sys, usable, options.variant_cap, &truncated)) {
        const InferenceGraph vg = build_graph(v.sys);
        const Condensation vc = scc_condensation(vg);
        const SensorMenu vm = minimal_sensor_sets(vg, vc);
        json steps = json::array();
        for (const auto& [l, var] : v.steps)
            steps.push_back(l + ":" + var);
        json ranks = json::array();
        for (const auto& s : vm.sets) {
            auto rv = observability_verdict(v.sys, observe_states(s.variables), options.k, ropt);
            ranks.push_back({{"observe", s.variables},
                             {"generic_rank", rv.rank.generic_rank},
                             {"observable", rv.observable}});
        }
        variants.push_back({{"steps", steps},
                            {"equations", v.sys.equations()},
                            {"roots", sets_json(root_names(vg, vc))},
                            {"sensor_menu", menu_json(vm)},
                            {"menu_ranks", ranks}});
    }
    r["reductions"] = {{"variants", variants}, {"truncated", truncated}};

    std::vector<std::vector<std::string>> menu_sets;
    for (const auto& s : menu.sets)
        menu_sets.push_back(s.variables);
    r["summary"] = {{"minimal_sensor_sets", sets_json(menu_sets)},
                    {"sufficient_sets", sets_json(sufficient)},
                    {"insufficient_sets", sets_json(insufficient)},
                    {"alternative_sets", sets_json(alt_sets)}};
    return r;
}

json verify_report(const OdeSystem& sys, std::uint64_t seed)
{
    std::vector<ConservedCheck> checks;
    verify_all(sys, &checks, seed);
    json r = header("verify", sys);
    r["settings"] = {{"seed", seed}};
    r["conserved"] = conserved_json(sys, checks);
    return r;
}

bool any_refuted(const json& report)
{
    if (!report.contains("conserved"))
        return false;
    for (const auto& c : report["conserved"])
        if (c["verdict"] == "refuted")
            return true;
    return false;
}

SimulateResult simulate(const OdeSystem& sys, const std::vector<double>& x0, const FloatPoint& params, double dt,
                        double T)
{
    SimulateResult out{integrate_rk4(sys, x0, params, dt, T), header("simulate", sys)};
    json drift = json::array();
    for (const auto& H : sys.conserved)
        drift.push_back({{"level", H.level}, {"drift", conserved_drift(out.trajectory, H.expr)}});
    out.report["settings"] = {{"x0", x0}, {"params", params}, {"dt", dt}, {"T", T}};
    out.report["simulation"] = {{"steps", out.trajectory.times.size() - 1},
                                {"t_end", out.trajectory.times.back()},
                                {"diverged", out.trajectory.diverged},
                                {"final", out.trajectory.values.back()},
                                {"drift", drift}};
    return out;
}

namespace {

std::string braces(const json& set)
{
    std::string s = "{";
    for (std::size_t i = 0; i < set.size(); ++i)
        s += (i ? "," : "") + set[i].get<std::string>();
    return s + "}";
}

std::string set_list(const json& sets)
{
    if (sets.empty())
        return "none";
    std::string s;
    for (std::size_t i = 0; i < sets.size(); ++i)
        s += (i ? " " : "") + braces(sets[i]);
    return s;
}

std::string rank_text(const json& rank)
{
    std::ostringstream os;
    os << "rank " << rank["generic_rank"].get<std::size_t>() << "/" << rank["states"].get<std::size_t>()
       << " (k=" << rank["k"].get<int>() << ")";
    return os.str();
}

void conserved_text(std::ostringstream& os, const json& r)
{
    for (const auto& c : r["conserved"]) {
        os << "conserved " << c["level"].get<std::string>() << " = " << c["expr"].get<std::string>() << ": "
           << c["verdict"].get<std::string>();
        if (!c["witness"].is_null()) {
            os << " at";
            for (const auto& [k, v] : c["witness"].items())
                os << " " << k << "=" << v.get<std::string>();
        }
        os << "\n";
    }
}

}  // namespace

std::string text_summary(const json& r)
{
    std::ostringstream os;
    const std::string cmd = r["command"];
    const auto& m = r["model"];
    os << "model " << m["name"].get<std::string>() << " (" << m["states"].size() << " states)\n";
    for (const auto& e : m["equations"])
        os << "  " << e.get<std::string>() << "\n";
    if (cmd == "simulate") {
        const auto& s = r["simulation"];
        os << "simulated " << s["steps"].get<std::size_t>() << " steps to t=" << s["t_end"].get<double>()
           << (s["diverged"].get<bool>() ? " (diverged)" : "") << "\n";
        for (const auto& d : s["drift"])
            os << "drift " << d["level"].get<std::string>() << ": " << d["drift"].get<double>() << "\n";
        return os.str();
    }
    conserved_text(os, r);
    if (cmd == "verify")
        return os.str();

    os << "seed " << r["settings"]["seed"].get<std::uint64_t>() << "\n";
    os << "graph roots: " << set_list(r["graph"]["roots"]) << "\n";
    os << "minimal sensor sets: " << set_list(r["graph"]["sensor_menu"]["sets"]) << "\n";
    for (const auto& o : r["observations"]) {
        const auto& rank = o["rank"];
        os << "observe " << o["label"].get<std::string>() << " " << braces(o["states"]) << ": "
           << (rank["observable"].get<bool>() ? "sufficient" : "insufficient") << ", " << rank_text(rank)
           << ", graph " << (o["graphical"]["sufficient"].get<bool>() ? "sufficient" : "insufficient");
        if (!o["graphical"]["missing_roots"].empty())
            os << " missing " << set_list(o["graphical"]["missing_roots"]);
        const auto& w = o["witness"];
        if (w["found"].get<bool>())
            os << ", witness along " << w["direction"].get<std::string>();
        else
            os << ", " << w["note"].get<std::string>();
        os << "\n";
    }
    for (const auto& a : r["alternatives"]) {
        os << "alternatives via " << braces(a["quantities"]) << " from " << braces(a["known"]) << ":";
        bool any = false;
        for (const auto& res : a["results"]) {
            if (res["status"] != "ok") {
                os << " " << res["status"].get<std::string>() << " for s=" << braces(res["s_vars"]);
                any = true;
                continue;
            }
            for (const auto& c : res["candidates"]) {
                os << " " << braces(c["observe"]) << " " << (c["sufficient"].get<bool>() ? "sufficient" : "insufficient");
                if (!c["rank"].is_null())
                    os << " (" << rank_text(c["rank"]) << ")";
                any = true;
            }
        }
        if (!any)
            os << " none";
        os << "\n";
    }
    for (const auto& v : r["reductions"]["variants"]) {
        os << "reduction";
        for (const auto& s : v["steps"])
            os << " " << s.get<std::string>();
        os << ": roots " << set_list(v["roots"]) << ", sensor sets " << set_list(v["sensor_menu"]["sets"]) << "\n";
    }
    const auto& s = r["summary"];
    os << "sufficient: " << set_list(s["sufficient_sets"]) << "\n";
    os << "insufficient: " << set_list(s["insufficient_sets"]) << "\n";
    os << "alternative sufficient: " << set_list(s["alternative_sets"]) << "\n";
    return os.str();
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

}  // namespace obsv
