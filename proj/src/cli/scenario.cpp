#include "horo/cli/scenario.hpp"

#include "horo/error.hpp"
#include "horo/sphere/field_io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace horo::cli {

using nlohmann::json;

namespace {

// Allowed parameter keys per check.
const std::map<std::string, std::set<std::string>>& check_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"supersolution", {"tol"}},
        {"elliptic_axioms", {"samples", "tol"}},
        {"hypotheses", {"boundaries", "t", "tol", "isometry_tol", "margin"}},
        {"boundary_isometry", {"component", "r", "tol"}},
        {"round_orbit", {"r", "tol"}},
        {"frame_invariants", {"t", "tol"}},
        {"embeddedness", {"t"}},
        {"duality", {"t", "tol"}},
        {"sliding_contact", {"t", "r", "expect", "expect_s0", "tol"}},
        {"claim_A", {"t", "radius", "tol"}},
        {"gauss_bonnet", {"tol"}},
        {"monge_ampere", {"tol"}},
        {"toponogov", {"c", "geodesic_ring", "tol", "f_tol", "fit_tol"}},
        {"capillary_cap", {"kappa0", "r", "W", "resolution", "tol"}},
    };
    return keys;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw InputError(where + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) throw InputError(where + ": unknown key '" + it.key() + "'");
}

void require(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw InputError(where + ": missing key '" + key + "'");
}

double get_number(const json& obj, const std::string& key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_number()) throw InputError(where + "/" + key + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw InputError(where + "/" + key + ": not finite");
    return x;
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& where) {
    return obj.contains(key) ? get_number(obj, key, where) : fallback;
}

Eigen::VectorXd get_vector(const json& obj, const std::string& key, int dim, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_array()) throw InputError(where + "/" + key + ": expected an array");
    if (static_cast<int>(v.size()) != dim)
        throw InputError(where + "/" + key + ": expected " + std::to_string(dim) + " entries");
    Eigen::VectorXd out(dim);
    for (int i = 0; i < dim; ++i) {
        if (!v[i].is_number()) throw InputError(where + "/" + key + "/" + std::to_string(i) + ": expected a number");
        out(i) = v[i].get<double>();
    }
    return out;
}

int get_int(const json& obj, const std::string& key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw InputError(where + "/" + key + ": expected an integer");
    return v.get<int>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_string()) throw InputError(where + "/" + key + ": expected a string");
    return v.get<std::string>();
}

Eigen::VectorXd north(int n) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n + 1);
    a(n) = 1.0;
    return a;
}

sphere::DomainSpec parse_domain(const json& d, const Overrides& ov) {
    const std::string where = "/domain";
    reject_unknown(d, {"n", "chart", "r_max", "n_theta", "n_phi", "excluded_balls"}, where);
    for (const char* key : {"n", "chart", "n_theta"}) require(d, key, where);
    sphere::DomainSpec spec;
    spec.n = get_int(d, "n", where);
    spec.chart = sphere::chart_from_string(get_string(d, "chart", where));
    if (d.contains("r_max")) spec.r_max = get_number(d, "r_max", where);
    spec.n_theta = get_int(d, "n_theta", where);
    if (spec.chart == sphere::ChartKind::radial) {
        if (d.contains("n_phi")) throw InputError(where + ": n_phi is not used by the radial chart");
        spec.n_phi = 1;
    } else {
        require(d, "n_phi", where);
        spec.n_phi = get_int(d, "n_phi", where);
    }
    if (d.contains("excluded_balls")) {
        const auto& balls = d.at("excluded_balls");
        if (!balls.is_array()) throw InputError(where + "/excluded_balls: expected an array");
        for (size_t i = 0; i < balls.size(); ++i) {
            const std::string w = where + "/excluded_balls/" + std::to_string(i);
            reject_unknown(balls[i], {"center", "radius"}, w);
            require(balls[i], "center", w);
            require(balls[i], "radius", w);
            spec.excluded.push_back({get_vector(balls[i], "center", spec.n + 1, w), get_number(balls[i], "radius", w)});
        }
    }
    if (ov.resolution) {
        spec.n_theta = *ov.resolution;
        if (spec.chart == sphere::ChartKind::polar) spec.n_phi = *ov.resolution;
        if (spec.chart == sphere::ChartKind::latlon) spec.n_phi = 2 * *ov.resolution;
    }
    return spec;
}

sphere::GeneratorPtr make_generator(const json& f, int n, unsigned long long seed, const std::string& where) {
    if (!f.is_object()) throw InputError(where + ": expected an object");
    require(f, "preset", where);
    const std::string preset = get_string(f, "preset", where);
    if (preset == "constant") {
        reject_unknown(f, {"preset", "c"}, where);
        return sphere::make_constant(number_or(f, "c", 0.0, where));
    }
    if (preset == "linear") {
        reject_unknown(f, {"preset", "a"}, where);
        require(f, "a", where);
        return sphere::make_linear(get_vector(f, "a", n + 1, where));
    }
    if (preset == "mobius") {
        reject_unknown(f, {"preset", "s", "axis"}, where);
        require(f, "s", where);
        const Eigen::VectorXd axis = f.contains("axis") ? get_vector(f, "axis", n + 1, where) : north(n);
        return sphere::make_mobius(get_number(f, "s", where), axis);
    }
    if (preset == "random_smooth") {
        reject_unknown(f, {"preset", "amp", "seed"}, where);
        const unsigned long long s =
            f.contains("seed") ? static_cast<unsigned long long>(get_int(f, "seed", where)) : seed;
        return sphere::make_random_smooth(n, s, number_or(f, "amp", 0.3, where));
    }
    if (preset == "bump") {
        reject_unknown(f, {"preset", "center", "amp", "width"}, where);
        for (const char* key : {"center", "amp", "width"}) require(f, key, where);
        return sphere::make_bump(get_vector(f, "center", n + 1, where), get_number(f, "amp", where),
                                 get_number(f, "width", where));
    }
    if (preset == "radial_poly") {
        reject_unknown(f, {"preset", "coeffs"}, where);
        require(f, "coeffs", where);
        const auto& c = f.at("coeffs");
        if (!c.is_array()) throw InputError(where + "/coeffs: expected an array");
        std::vector<double> coeffs;
        for (const auto& v : c) {
            if (!v.is_number()) throw InputError(where + "/coeffs: expected numbers");
            coeffs.push_back(v.get<double>());
        }
        return sphere::make_radial_poly(coeffs);
    }
    if (preset == "sum") {
        reject_unknown(f, {"preset", "terms"}, where);
        require(f, "terms", where);
        const auto& t = f.at("terms");
        if (!t.is_array() || t.empty()) throw InputError(where + "/terms: expected a non-empty array");
        std::vector<sphere::GeneratorPtr> terms;
        for (size_t i = 0; i < t.size(); ++i)
            terms.push_back(make_generator(t[i], n, seed, where + "/terms/" + std::to_string(i)));
        return sphere::make_sum(terms);
    }
    if (preset == "pullback") {
        reject_unknown(f, {"preset", "base", "s", "axis"}, where);
        require(f, "base", where);
        require(f, "s", where);
        const Eigen::VectorXd axis = f.contains("axis") ? get_vector(f, "axis", n + 1, where) : north(n);
        return sphere::make_pullback(make_generator(f.at("base"), n, seed, where + "/base"),
                                     get_number(f, "s", where), axis);
    }
    if (preset == "file") throw InputError(where + ": a file field cannot be combined with analytic presets");
    throw InputError(where + ": unknown preset '" + preset + "'");
}

void validate_check_params(const CheckSpec& c, const std::string& where) {
    const auto& keys = check_keys().at(c.name);
    std::set<std::string> allowed = keys;
    allowed.insert("name");
    reject_unknown(c.params, allowed, where);
    if (c.name == "hypotheses" && c.params.contains("boundaries")) {
        const auto& b = c.params.at("boundaries");
        if (!b.is_array()) throw InputError(where + "/boundaries: expected an array");
        for (size_t i = 0; i < b.size(); ++i) {
            const std::string w = where + "/boundaries/" + std::to_string(i);
            reject_unknown(b[i], {"component", "r"}, w);
            require(b[i], "component", w);
            require(b[i], "r", w);
            get_string(b[i], "component", w);
            get_number(b[i], "r", w);
        }
    }
    for (const auto& [key, value] : c.params.items()) {
        if (key == "name" || key == "boundaries") continue;
        if (key == "component" || key == "expect" || key == "W") {
            if (!value.is_string()) throw InputError(where + "/" + key + ": expected a string");
        } else if (key == "samples" || key == "geodesic_ring" || key == "resolution") {
            if (!value.is_number_integer()) throw InputError(where + "/" + key + ": expected an integer");
        } else if (!value.is_number()) {
            throw InputError(where + "/" + key + ": expected a number");
        }
    }
}

}  // namespace

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, keys] : check_keys()) out.push_back(name);
        return out;
    }();
    return names;
}

sphere::FieldGrid make_field(const json& spec, const sphere::DomainPtr& domain, unsigned long long seed,
                             const std::filesystem::path& dir, const std::string& where) {
    if (spec.is_object() && spec.contains("preset") && spec.at("preset") == "file") {
        reject_unknown(spec, {"preset", "path"}, where);
        require(spec, "path", where);
        std::filesystem::path p = get_string(spec, "path", where);
        if (p.is_relative()) p = dir / p;
        if (!std::filesystem::exists(p)) throw InputError(where + "/path: file '" + p.string() + "' does not exist");
        sphere::FieldGrid f = sphere::read_field(p.string());
        const auto& a = f.domain->spec();
        const auto& b = domain->spec();
        if (a.n != b.n || a.chart != b.chart || a.n_theta != b.n_theta || f.domain->n_phi() != domain->n_phi() ||
            (a.chart != sphere::ChartKind::latlon && a.r_max != b.r_max))
            throw InputError(where + ": field file grid does not match the scenario domain");
        return sphere::FieldGrid{domain, f.values, nullptr};
    }
    return sphere::FieldGrid::sample(domain, make_generator(spec, domain->n(), seed, where));
}

Scenario parse_scenario(const std::string& text, const std::filesystem::path& dir, const Overrides& ov) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // nlohmann reports "parse error at line L, column C: ..."
        std::string msg = e.what();
        const auto at = msg.find("parse error");
        throw InputError("scenario JSON " + (at == std::string::npos ? msg : msg.substr(at)));
    }
    reject_unknown(j, {"version", "name", "domain", "field", "elliptic", "seed", "derivatives", "tolerance", "checks",
                       "output"},
                   "");
    for (const char* key : {"version", "name", "domain", "field", "checks"}) require(j, key, "scenario");
    if (!j.at("version").is_number_integer() || j.at("version").get<int>() != kScenarioVersion)
        throw InputError("/version: expected " + std::to_string(kScenarioVersion));

    Scenario sc;
    sc.dir = dir;
    sc.name = get_string(j, "name", "");
    sc.domain = parse_domain(j.at("domain"), ov);
    sc.field = j.at("field");
    if (j.contains("elliptic")) sc.elliptic = get_string(j, "elliptic", "");
    if (sc.elliptic.rfind("file:", 0) == 0) {
        std::filesystem::path p = sc.elliptic.substr(5);
        if (p.is_relative()) p = dir / p;
        if (!std::filesystem::exists(p)) throw InputError("/elliptic: file '" + p.string() + "' does not exist");
        sc.elliptic = "file:" + p.string();
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) throw InputError("/seed: expected a non-negative integer");
        sc.seed = j.at("seed").get<unsigned long long>();
    }
    if (ov.seed) sc.seed = *ov.seed;
    if (j.contains("derivatives")) {
        sc.derivatives = get_string(j, "derivatives", "");
        if (sc.derivatives != "automatic" && sc.derivatives != "numeric" && sc.derivatives != "analytic")
            throw InputError("/derivatives: expected automatic, numeric or analytic");
    }
    if (j.contains("tolerance")) sc.tol = get_number(j, "tolerance", "");
    sc.force_tol = ov.tol;

    const auto& checks = j.at("checks");
    if (!checks.is_array() || checks.empty()) throw InputError("/checks: expected a non-empty array");
    for (size_t i = 0; i < checks.size(); ++i) {
        const std::string where = "/checks/" + std::to_string(i);
        if (!checks[i].is_object()) throw InputError(where + ": expected an object");
        require(checks[i], "name", where);
        CheckSpec c{get_string(checks[i], "name", where), checks[i]};
        if (!check_keys().count(c.name)) throw InputError(where + "/name: unknown check '" + c.name + "'");
        validate_check_params(c, where);
        sc.checks.push_back(std::move(c));
    }

    if (j.contains("output")) {
        const auto& o = j.at("output");
        reject_unknown(o, {"report", "plots"}, "/output");
        if (o.contains("report")) sc.report_path = get_string(o, "report", "/output");
        if (o.contains("plots")) sc.plot_dir = get_string(o, "plots", "/output");
    }

    // Resolve the field now so that bad presets and missing files surface as
    // validation errors before any check runs.
    const auto domain = sphere::build_grid(sc.domain);
    make_field(sc.field, domain, sc.seed, dir);
    return sc;
}

Scenario load_scenario(const std::string& path, const Overrides& ov) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open scenario '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str(), std::filesystem::path(path).parent_path(), ov);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

}  // namespace horo::cli
