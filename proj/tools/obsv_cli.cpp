#include "obsv/obsv.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Model {
    obsv_model* p = nullptr;
    ~Model() { obsv_model_free(p); }
};

struct Str {
    char* p = nullptr;
    ~Str() { obsv_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

int report_error(int code)
{
    std::cerr << "obsv: " << obsv_last_error() << "\n";
    return code;
}

bool write_file(const std::string& path, const std::string& content)
{
    if (path == "-") {
        std::cout << content;
        return true;
    }
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) {
        std::cerr << "obsv: cannot write '" << path << "'\n";
        return false;
    }
    return true;
}

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        double v = std::stod(item, &used);
        while (used < item.size() && item[used] == ' ')
            ++used;
        if (used != item.size())
            throw std::invalid_argument(item);
        out.push_back(v);
    }
    return out;
}

// Loads the model and applies --reduce steps; 0 on success.
int load(const std::string& path, const std::vector<std::string>& reduce, Model& m)
{
    if (int rc = obsv_model_load(path.c_str(), &m.p))
        return report_error(rc);
    for (const auto& r : reduce)
        if (int rc = obsv_model_reduce(m.p, r.c_str(), nullptr))
            return report_error(rc);
    return 0;
}

int print_summary(const Str& json)
{
    Str text;
    if (int rc = obsv_summary(json.p, &text.p))
        return report_error(rc);
    std::cout << text.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Observability analysis of ODE models"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    std::string k_text = "auto";
    int trials = 8;
    std::string json_path, dot_path, csv_path, x0_text, params_text;
    std::vector<std::string> reduce;
    double dt = 0.01, T = 10;
    bool dt_given = false, T_given = false;

    app.add_option("--seed", seed, "Seed for every randomized step")->capture_default_str();
    app.add_option("--k", k_text, "Embedding order: integer or 'auto' (n - 1)")->capture_default_str();
    app.add_option("--trials", trials, "Random points per rank test")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--json", json_path, "Write the JSON report here ('-' for stdout)");
    app.add_option("--reduce", reduce, "Eliminate a state: LEVEL:var (repeatable)");

    std::string model_path;
    auto* analyze = app.add_subcommand("analyze", "Full analysis report")->fallthrough();
    analyze->add_option("model", model_path, "Model file")->required();
    analyze->add_option("--x0", x0_text, "Initial state for numeric checks, comma separated");
    analyze->add_option("--params", params_text, "Parameters for numeric checks: name=value,...");
    analyze->add_option("--dt", dt, "Integrator step")->each([&](const std::string&) { dt_given = true; });
    analyze->add_option("--T", T, "Integration horizon")->each([&](const std::string&) { T_given = true; });

    auto* graph = app.add_subcommand("graph", "Inference graph as DOT")->fallthrough();
    graph->add_option("model", model_path, "Model file")->required();
    graph->add_option("--dot", dot_path, "Write DOT here (stdout if omitted)");

    auto* verify = app.add_subcommand("verify", "Verify declared conserved quantities")->fallthrough();
    verify->add_option("model", model_path, "Model file")->required();

    auto* simulate = app.add_subcommand("simulate", "Integrate with fixed-step RK4")->fallthrough();
    simulate->add_option("model", model_path, "Model file")->required();
    simulate->add_option("--x0", x0_text, "Initial state, comma separated")->required();
    simulate->add_option("--params", params_text, "name=value,...");
    simulate->add_option("--dt", dt, "Step")->capture_default_str();
    simulate->add_option("--T", T, "Horizon")->capture_default_str();
    simulate->add_option("--csv", csv_path, "Write the trajectory here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    int k = -1;
    if (k_text != "auto") {
        try {
            std::size_t used = 0;
            k = std::stoi(k_text, &used);
            if (used != k_text.size() || k < 0)
                throw std::invalid_argument(k_text);
        } catch (const std::exception&) {
            std::cerr << "obsv: --k expects a non-negative integer or 'auto'\n";
            return 1;
        }
    }
    std::vector<double> x0;
    if (!x0_text.empty()) {
        try {
            x0 = parse_list(x0_text);
        } catch (const std::exception&) {
            std::cerr << "obsv: --x0 expects comma-separated numbers\n";
            return 1;
        }
    }

    Model m;
    if (int rc = load(model_path, reduce, m))
        return rc;

    if (*graph) {
        Str dot;
        if (int rc = obsv_graph_dot(m.p, &dot.p))
            return report_error(rc);
        if (dot_path.empty())
            std::cout << dot.str();
        else if (!write_file(dot_path, dot.str()))
            return 1;
        return 0;
    }

    if (*verify) {
        Str json;
        int status = obsv_verify(m.p, seed, &json.p);
        if (status != 0 && status != 3)
            return report_error(status);
        if (int rc = print_summary(json))
            return rc;
        if (!json_path.empty() && !write_file(json_path, json.str()))
            return 1;
        return status;
    }

    if (*simulate) {
        Str csv, json;
        if (int rc = obsv_simulate(m.p, x0.data(), x0.size(), params_text.c_str(), dt, T, &csv.p, &json.p))
            return report_error(rc);
        if (int rc = print_summary(json))
            return rc;
        if (!csv_path.empty() && !write_file(csv_path, csv.str()))
            return 1;
        if (!json_path.empty() && !write_file(json_path, json.str()))
            return 1;
        return 0;
    }

    obsv_options o = obsv_options_default();
    o.seed = seed;
    o.k = k;
    o.trials = trials;
    if (!x0.empty()) {
        o.x0 = x0.data();
        o.x0_len = x0.size();
    }
    if (!params_text.empty())
        o.params = params_text.c_str();
    if (dt_given)
        o.dt = dt;
    if (T_given)
        o.T = T;
    Str json;
    if (int rc = obsv_analyze(m.p, &o, &json.p))
        return report_error(rc);
    if (json_path != "-")
        if (int rc = print_summary(json))
            return rc;
    if (!json_path.empty() && !write_file(json_path, json.str()))
        return 1;
    return 0;
}
