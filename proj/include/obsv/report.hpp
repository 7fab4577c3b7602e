#pragma once

#include "obsv/embedding.hpp"
#include "obsv/model.hpp"
#include "obsv/numeric.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace obsv {

inline constexpr const char* kReportSchema = "report-v1";
inline constexpr const char* kToolVersion = "0.1.0";

using ReduceStep = std::pair<std::string, std::string>;  // level, var

/// Parses "LEVEL:var". Throws Error(InvalidArgument).
ReduceStep parse_reduce_step(const std::string& text);

/// "name=value,..." (empty text gives no values). Throws Error(InvalidArgument).
FloatPoint parse_params(const std::string& text);

/// "v1,v2,...". Throws Error(InvalidArgument).
std::vector<double> parse_numbers(const std::string& text);

/// Applies the steps in order. Throws Error(InvalidArgument) for an unknown
/// level and the reduce_by_conserved errors otherwise.
OdeSystem apply_reductions(const OdeSystem& sys, const std::vector<ReduceStep>& steps);

struct NumericSetup {
    std::optional<std::vector<double>> x0;
    std::optional<FloatPoint> params;
    double dt = 0.01;
    double T = 5;
    double delta = 0.1;
};

struct AnalyzeOptions {
    std::uint64_t seed = 0;
    int k = kAutoOrder;
    int trials = 8;
    /// Loci for rank probes; empty means one probe per state at 0.
    std::vector<ExactPoint> probes;
    NumericSetup numeric;
    std::size_t variant_cap = 64;
};

/// Full analysis of `sys` (already reduced if requested).
nlohmann::json analyze_report(const OdeSystem& sys, const AnalyzeOptions& options,
                              const std::vector<ReduceStep>& applied = {});

nlohmann::json verify_report(const OdeSystem& sys, std::uint64_t seed);

/// True when some quantity in a verify or analyze report was refuted.
bool any_refuted(const nlohmann::json& report);

struct SimulateResult {
    Trajectory trajectory;
    nlohmann::json report;
};

SimulateResult simulate(const OdeSystem& sys, const std::vector<double>& x0, const FloatPoint& params, double dt,
                        double T);

/// Human-readable summary computed from the JSON alone.
std::string text_summary(const nlohmann::json& report);

/// Deterministic serialization used for every report file.
std::string dump_report(const nlohmann::json& report);

}  // namespace obsv
