#include "horo/cli/scenario.hpp"
#include "horo/elliptic/data.hpp"
#include "horo/error.hpp"
#include "horo/hyperbolic/embedding.hpp"
#include "horo/hypersurface/data.hpp"
#include "horo/sphere/field_io.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using horo::cli::ExitCode;
using nlohmann::json;

struct Flags {
    std::optional<double> tol;
    std::optional<int> resolution;
    std::optional<unsigned long long> seed;
    std::string out;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--tol", f.tol, "tolerance override");
    cmd->add_option("--resolution", f.resolution, "grid resolution override")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", f.seed, "random seed override");
    cmd->add_option("--out", f.out, "output path");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw horo::InputError("cannot write '" + path + "'");
    out << text;
}

void summarize(const json& report, std::ostream& os) {
    for (const auto& c : report.at("checks")) {
        os << (c.at("passed").get<bool>() ? "PASS " : "FAIL ") << c.at("name").get<std::string>();
        if (c.contains("info") && c.at("info").contains("error"))
            os << "  error: " << c.at("info").at("error").get<std::string>();
        else if (c.contains("witness"))
            os << "  witness: " << c.at("witness").at("location").get<std::string>() << " #"
               << c.at("witness").at("index").get<long>();
        os << "\n";
    }
}

int run_checks(horo::cli::Scenario sc, const Flags& f, const std::string& plot_dir, bool toponogov_only) {
    if (toponogov_only) {
        std::vector<horo::cli::CheckSpec> keep;
        for (const auto& c : sc.checks)
            if (c.name == "toponogov") keep.push_back(c);
        if (keep.empty()) keep.push_back({"toponogov", json{{"name", "toponogov"}}});
        sc.checks = keep;
    }
    const auto res = horo::cli::run_scenario(sc);
    std::string report_path = f.out;
    if (report_path.empty() && !sc.report_path.empty()) report_path = (sc.dir / sc.report_path).string();
    const std::string text = horo::cli::dump_report(res.report);
    if (report_path.empty()) {
        std::cout << text;
        summarize(res.report, std::cerr);
    } else {
        write_text(report_path, text);
        summarize(res.report, std::cout);
        std::cout << "report: " << report_path << "\n";
    }
    std::string plots = plot_dir;
    if (plots.empty() && !sc.plot_dir.empty()) plots = (sc.dir / sc.plot_dir).string();
    std::vector<std::string> notices = res.notices;
    if (!plots.empty())
        for (const auto& p : horo::cli::emit_plots(res.report, plots, notices)) std::cerr << "wrote " << p << "\n";
    for (const auto& n : notices) std::cerr << "note: " << n << "\n";
    return res.exit_code;
}

horo::cli::Overrides overrides(const Flags& f) { return {f.tol, f.resolution, f.seed}; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conformal rigidity checks on spherical domains"};
    app.require_subcommand(1);

    Flags check_flags, topo_flags, embed_flags, data_flags, plot_flags;
    std::string scenario_path, topo_path, field_path, data_spec, report_path, plot_dir, topo_plot_dir;
    double t = 0.0, kappa0 = 2.0;
    int n = 2, samples = 10000;

    auto* check = app.add_subcommand("check", "run the checks of a scenario");
    check->add_option("scenario", scenario_path, "scenario JSON")->required();
    check->add_option("--plots", plot_dir, "directory for SVG profiles");
    add_common(check, check_flags);

    auto* topo = app.add_subcommand("toponogov", "run the two-dimensional rigidity check of a scenario");
    topo->add_option("scenario", topo_path, "scenario JSON")->required();
    topo->add_option("--plots", topo_plot_dir, "directory for SVG profiles");
    add_common(topo, topo_flags);

    auto* emb = app.add_subcommand("embed", "embed a field file as a hypersurface and export a CSV sample");
    emb->add_option("field", field_path, "field header JSON")->required();
    emb->add_option("--t", t, "dilation")->required();
    add_common(emb, embed_flags);

    auto* val = app.add_subcommand("validate-data", "validate elliptic data (or W:<spec> curvature data)");
    val->add_option("spec", data_spec, "sigma_k:k=2, file:<path>, W:mean, W:sigma_k:k=2, ...")->required();
    val->add_option("--n", n, "dimension")->check(CLI::PositiveNumber);
    val->add_option("--samples", samples, "cone samples")->check(CLI::PositiveNumber);
    val->add_option("--kappa0", kappa0, "normalization curvature for W data");
    add_common(val, data_flags);

    auto* plot = app.add_subcommand("plot", "write SVG profiles from a report");
    plot->add_option("report", report_path, "report JSON")->required();
    add_common(plot, plot_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : ExitCode::kUsageError;
    }

    try {
        if (*check) return run_checks(horo::cli::load_scenario(scenario_path, overrides(check_flags)), check_flags,
                                      plot_dir, false);
        if (*topo) return run_checks(horo::cli::load_scenario(topo_path, overrides(topo_flags)), topo_flags,
                                     topo_plot_dir, true);
        if (*emb) {
            auto rho = horo::sphere::read_field(field_path);
            auto h = horo::hyperbolic::with_curvatures(horo::hyperbolic::embed(rho.shifted(t)));
            auto rep = horo::hyperbolic::frame_invariant_check(h, embed_flags.tol.value_or(1e-9));
            rep.finalize();
            const std::string out =
                embed_flags.out.empty() ? std::filesystem::path(field_path).replace_extension(".embed.csv").string()
                                        : embed_flags.out;
            horo::hyperbolic::write_sample_csv(h, out);
            std::cout << (rep.passed ? "PASS " : "FAIL ") << "frame_invariants\nsample: " << out << "\n";
            return rep.passed ? ExitCode::kPass : ExitCode::kCheckFailure;
        }
        if (*val) {
            horo::elliptic::AxiomOptions opt;
            opt.samples = samples;
            if (data_flags.seed) opt.seed = *data_flags.seed;
            if (data_flags.tol) opt.tol = *data_flags.tol;
            horo::CheckReport rep;
            if (data_spec.rfind("W:", 0) == 0)
                rep = horo::hypersurface::validate_W(horo::hypersurface::parse_W_spec(data_spec.substr(2), n, kappa0), opt);
            else
                rep = horo::elliptic::validate_axioms(horo::elliptic::parse_elliptic_spec(data_spec, n), opt);
            rep.finalize();
            const std::string text = horo::cli::dump_report(horo::cli::to_json(rep));
            if (data_flags.out.empty()) std::cout << text;
            else write_text(data_flags.out, text);
            std::cerr << (rep.passed ? "PASS " : "FAIL ") << rep.name << "\n";
            return rep.passed ? ExitCode::kPass : ExitCode::kCheckFailure;
        }
        if (*plot) {
            std::ifstream in(report_path);
            if (!in) throw horo::InputError("cannot open report '" + report_path + "'");
            json report;
            try {
                report = json::parse(in);
            } catch (const json::parse_error& e) {
                throw horo::InputError(report_path + ": " + e.what());
            }
            const std::string dir = plot_flags.out.empty()
                                        ? std::filesystem::path(report_path).replace_extension("").string() + "_plots"
                                        : plot_flags.out;
            std::vector<std::string> notices;
            for (const auto& p : horo::cli::emit_plots(report, dir, notices)) std::cout << "wrote " << p << "\n";
            for (const auto& msg : notices) std::cerr << "note: " << msg << "\n";
            return ExitCode::kPass;
        }
    } catch (const horo::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ExitCode::kUsageError;
    } catch (const horo::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return ExitCode::kNumericalFailure;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ExitCode::kUsageError;
    }
    return ExitCode::kUsageError;
}
