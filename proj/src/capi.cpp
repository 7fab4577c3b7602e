#include "obsv/obsv.h"

#include "obsv/error.hpp"
#include "obsv/graph.hpp"
#include "obsv/report.hpp"

#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>

struct obsv_model {
    obsv::OdeSystem sys;
    std::vector<obsv::ReduceStep> applied;
};

namespace {

thread_local std::string g_error;

obsv_status fail(obsv_status s, const std::string& msg)
{
    g_error = msg;
    return s;
}

template <class F>
obsv_status guard(F&& f)
{
    try {
        g_error.clear();
        return f();
    } catch (const obsv::Error& e) {
        return fail(e.is_input_error() ? OBSV_ERR_INPUT : OBSV_ERR_ANALYSIS,
                    std::string(obsv::to_string(e.kind())) + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(OBSV_ERR_INPUT, std::string("json: ") + e.what());
    } catch (const std::bad_alloc&) {
        return fail(OBSV_ERR_ANALYSIS, "out of memory");
    } catch (const std::exception& e) {
        return fail(OBSV_ERR_ANALYSIS, e.what());
    }
}

char* dup(const std::string& s)
{
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p)
        throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

}  // namespace

extern "C" {

obsv_options obsv_options_default(void) { return obsv_options{0, -1, 8, nullptr, 0, nullptr, 0.01, 5.0}; }

const char* obsv_last_error(void) { return g_error.c_str(); }

const char* obsv_version(void) { return obsv::kToolVersion; }

obsv_status obsv_model_load(const char* path, obsv_model** out)
{
    if (!path || !out)
        return fail(OBSV_ERR_INPUT, "null argument");
    *out = nullptr;
    return guard([&] {
        *out = new obsv_model{obsv::load_model(path), {}};
        return OBSV_OK;
    });
}

obsv_status obsv_model_parse(const char* text, obsv_model** out)
{
    if (!text || !out)
        return fail(OBSV_ERR_INPUT, "null argument");
    *out = nullptr;
    return guard([&] {
        *out = new obsv_model{obsv::parse_model(text), {}};
        return OBSV_OK;
    });
}

void obsv_model_free(obsv_model* model) { delete model; }

size_t obsv_model_state_count(const obsv_model* model) { return model ? model->sys.size() : 0; }

const char* obsv_model_name(const obsv_model* model) { return model ? model->sys.name.c_str() : nullptr; }

const char* obsv_model_state_name(const obsv_model* model, size_t i)
{
    if (!model || i >= model->sys.size())
        return nullptr;
    return model->sys.states[i].name.c_str();
}

obsv_status obsv_model_reduce(obsv_model* model, const char* level, const char* var)
{
    if (!model || !level)
        return fail(OBSV_ERR_INPUT, "null argument");
    return guard([&] {
        obsv::ReduceStep step = var ? obsv::ReduceStep{level, var} : obsv::parse_reduce_step(level);
        model->sys = obsv::apply_reductions(model->sys, {step});
        model->applied.push_back(step);
        return OBSV_OK;
    });
}

obsv_status obsv_analyze(const obsv_model* model, const obsv_options* options, char** json_out)
{
    if (!model || !json_out)
        return fail(OBSV_ERR_INPUT, "null argument");
    *json_out = nullptr;
    return guard([&] {
        const obsv_options o = options ? *options : obsv_options_default();
        if (o.trials < 1)
            return fail(OBSV_ERR_INPUT, "trials must be >= 1");
        if (o.k < -1)
            return fail(OBSV_ERR_INPUT, "k must be >= 0 or -1");
        obsv::AnalyzeOptions a;
        a.seed = o.seed;
        a.k = o.k;
        a.trials = o.trials;
        if (o.x0)
            a.numeric.x0 = std::vector<double>(o.x0, o.x0 + o.x0_len);
        if (o.params)
            a.numeric.params = obsv::parse_params(o.params);
        if (o.dt > 0)
            a.numeric.dt = o.dt;
        if (o.T > 0)
            a.numeric.T = o.T;
        *json_out = dup(obsv::dump_report(obsv::analyze_report(model->sys, a, model->applied)));
        return OBSV_OK;
    });
}

obsv_status obsv_verify(const obsv_model* model, uint64_t seed, char** json_out)
{
    if (!model || !json_out)
        return fail(OBSV_ERR_INPUT, "null argument");
    *json_out = nullptr;
    return guard([&] {
        auto r = obsv::verify_report(model->sys, seed);
        *json_out = dup(obsv::dump_report(r));
        if (obsv::any_refuted(r))
            return fail(OBSV_REFUTED, "a conserved quantity was refuted");
        return OBSV_OK;
    });
}

obsv_status obsv_graph_dot(const obsv_model* model, char** dot_out)
{
    if (!model || !dot_out)
        return fail(OBSV_ERR_INPUT, "null argument");
    *dot_out = nullptr;
    return guard([&] {
        auto g = obsv::build_graph(model->sys);
        *dot_out = dup(obsv::export_dot(g, obsv::scc_condensation(g)));
        return OBSV_OK;
    });
}

obsv_status obsv_simulate(const obsv_model* model, const double* x0, size_t x0_len, const char* params, double dt,
                          double T, char** csv_out, char** json_out)
{
    if (!model || (!x0 && x0_len))
        return fail(OBSV_ERR_INPUT, "null argument");
    if (csv_out)
        *csv_out = nullptr;
    if (json_out)
        *json_out = nullptr;
    return guard([&] {
        std::vector<double> x(x0, x0 + x0_len);
        auto res = obsv::simulate(model->sys, x, obsv::parse_params(params ? params : ""), dt, T);
        if (csv_out) {
            std::ostringstream os;
            obsv::write_csv(os, res.trajectory);
            *csv_out = dup(os.str());
        }
        if (json_out)
            *json_out = dup(obsv::dump_report(res.report));
        return OBSV_OK;
    });
}

obsv_status obsv_summary(const char* report_json, char** text_out)
{
    if (!report_json || !text_out)
        return fail(OBSV_ERR_INPUT, "null argument");
    *text_out = nullptr;
    return guard([&] {
        *text_out = dup(obsv::text_summary(nlohmann::json::parse(report_json)));
        return OBSV_OK;
    });
}

void obsv_string_free(char* s) { std::free(s); }

}  // extern "C"
