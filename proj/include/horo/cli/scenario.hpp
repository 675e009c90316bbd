#pragma once

#include "horo/check_report.hpp"
#include "horo/sphere/field.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace horo::cli {

inline constexpr int kScenarioVersion = 1;
inline constexpr int kReportVersion = 1;

enum ExitCode { kPass = 0, kCheckFailure = 1, kUsageError = 2, kNumericalFailure = 3 };

struct Overrides {
    std::optional<double> tol;
    std::optional<int> resolution;
    std::optional<unsigned long long> seed;
};

struct CheckSpec {
    std::string name;
    nlohmann::json params;  // validated against the check's key set
};

struct Scenario {
    std::string name;
    std::filesystem::path dir;  // relative paths resolve against this
    sphere::DomainSpec domain;
    nlohmann::json field;
    std::string elliptic = "sigma_k:k=2";
    unsigned long long seed = 1;
    std::string derivatives = "automatic";
    std::vector<CheckSpec> checks;
    std::string report_path;  // empty: no report file unless --out
    std::string plot_dir;
    std::optional<double> tol;        // scenario-wide default for every check's tol
    std::optional<double> force_tol;  // --tol: beats per-check values
};

// Names accepted in the "checks" list.
const std::vector<std::string>& check_names();

// Throws InputError with "line L, column C" for syntax errors and a JSON
// pointer for schema errors.
Scenario parse_scenario(const std::string& text, const std::filesystem::path& dir, const Overrides& ov = {});
Scenario load_scenario(const std::string& path, const Overrides& ov = {});

// Field preset or file reference resolved on a domain.
sphere::FieldGrid make_field(const nlohmann::json& spec, const sphere::DomainPtr& domain, unsigned long long seed,
                             const std::filesystem::path& dir, const std::string& where = "/field");

struct RunResult {
    nlohmann::json report;
    int exit_code = kPass;
    std::vector<std::string> notices;
};

// Executes the checks in order. NumericalError inside a check marks it failed
// and yields exit code 3; InputError propagates.
RunResult run_scenario(const Scenario& sc);

nlohmann::json to_json(const CheckReport& r);
// Two-space indented dump with a trailing newline.
std::string dump_report(const nlohmann::json& report);
// Copy without the "timing" block.
nlohmann::json strip_timing(nlohmann::json report);

// Writes the SVGs the report's profile data supports; returns written paths.
// Unsupported cases add a line to `notices` instead.
std::vector<std::string> emit_plots(const nlohmann::json& report, const std::filesystem::path& out_dir,
                                    std::vector<std::string>& notices);

}  // namespace horo::cli
