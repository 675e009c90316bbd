#include "horo/cli/scenario.hpp"

#include "horo/conformal/schouten.hpp"
#include "horo/elliptic/data.hpp"
#include "horo/error.hpp"
#include "horo/hyperbolic/embedding.hpp"
#include "horo/hypersurface/caps.hpp"
#include "horo/hypersurface/data.hpp"
#include "horo/rigidity/rigidity.hpp"
#include "horo/surface2d/surface2d.hpp"

#include <chrono>
#include <cmath>
#include <optional>

namespace horo::cli {

using nlohmann::json;

namespace {

Eigen::VectorXd north(int n) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n + 1);
    a(n) = 1.0;
    return a;
}

sphere::DerivativeSource source_of(const std::string& s) {
    if (s == "numeric") return sphere::DerivativeSource::numeric;
    if (s == "analytic") return sphere::DerivativeSource::analytic;
    return sphere::DerivativeSource::automatic;
}

json vector_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (long i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

// State shared by the checks of one run.
struct Context {
    const Scenario& sc;
    sphere::DomainPtr domain;
    conformal::ConformalMetric g;
    elliptic::EllipticData data;
    std::optional<double> dilation;  // last t used by a check
    std::optional<double> contact_s0, contact_r;
    bool used_monge_ampere = false;
    json tolerances = json::object();

    double tol(const CheckSpec& c, const std::string& key, double fallback) {
        double v = fallback;
        if (key == "tol" && sc.tol) v = *sc.tol;
        if (c.params.contains(key)) v = c.params.at(key).get<double>();
        if (key == "tol" && sc.force_tol) v = *sc.force_tol;
        tolerances[key] = v;
        return v;
    }

    double param(const CheckSpec& c, const std::string& key, double fallback) const {
        return c.params.contains(key) ? c.params.at(key).get<double>() : fallback;
    }

    // Dilation for checks that need an embedded Sigma_t.
    double dilation_for(const CheckSpec& c) {
        double t = param(c, "t", -1.0);
        if (t <= 0.0) t = rigidity::auto_dilation(g).t;
        dilation = t;
        return t;
    }

    sphere::FieldGrid dilated(double t) const { return g.rho.shifted(t); }

    hyperbolic::HypersurfaceSample embed_at(double t, bool gated) const {
        hyperbolic::EmbedOptions opt;
        opt.diff = g.diff;
        opt.require_admissible = gated;
        return hyperbolic::embed(dilated(t), opt);
    }
};

CheckReport run_duality(Context& ctx, const CheckSpec& c) {
    const double tol = ctx.tol(c, "tol", 5e-3);
    const double t = ctx.dilation_for(c);
    const auto rho_t = ctx.dilated(t);
    const auto h = hyperbolic::with_curvatures(ctx.embed_at(t, false));
    const auto lam = conformal::schouten_eigenvalues(conformal::ConformalMetric{rho_t, ctx.g.diff});
    CheckReport rep;
    rep.name = "duality";
    double worst = 0.0;
    long at = -1;
    for (long k = 0; k < h.size(); ++k) {
        if (!ctx.domain->active(k)) continue;
        for (long i = 0; i < lam.values[k].size(); ++i) {
            const double d = std::abs(lam.values[k](i) - hyperbolic::schouten_from_curvature(h.curvatures[k](i)));
            if (!(d <= worst)) {
                worst = d;
                at = k;
            }
        }
    }
    rep.metrics = {{"max_defect", worst}, {"t", t}, {"tol", tol}};
    if (!(worst <= tol)) rep.fail(ctx.domain->witness(at));
    return rep;
}

CheckReport run_sliding(Context& ctx, const CheckSpec& c) {
    const double tol = ctx.tol(c, "tol", 1e-5);
    const double t = ctx.dilation_for(c);
    const double r = ctx.param(c, "r", M_PI / 2);
    const std::string expect = c.params.value("expect", std::string("boundary"));
    const double expect_s0 = ctx.param(c, "expect_s0", 0.0);
    const auto sigma = ctx.embed_at(t, true);
    const auto cap = hyperbolic::cap_construction(t, r, ctx.domain->n());
    const auto res = rigidity::sliding_first_contact(sigma, cap);
    CheckReport rep;
    rep.name = "sliding_contact";
    rep.metrics = {{"s0", res.s0},   {"expected_s0", expect_s0},          {"tol", tol},
                   {"t", t},         {"r", r},                            {"contact_tol", res.contact_tol},
                   {"gap_at_contact", res.gap_at_contact}};
    rep.info["classification"] = res.classification;
    rep.info["expected_classification"] = expect;
    rep.add_child(cap.verification);
    if (res.classification != expect || !(std::abs(res.s0 - expect_s0) <= tol)) rep.fail(res.sigma_witness);
    if (res.classification != "none-in-range") {
        ctx.contact_s0 = res.s0;
        ctx.contact_r = r;
    }
    return rep;
}

CheckReport run_cap(Context& ctx, const CheckSpec& c) {
    const double tol = ctx.tol(c, "tol", 1e-8);
    const int n = ctx.domain->n();
    if (!c.params.contains("kappa0") || !c.params.contains("r"))
        throw InputError("capillary_cap needs kappa0 and r");
    const double k0 = c.params.at("kappa0").get<double>();
    const double r = c.params.at("r").get<double>();
    const int res = c.params.value("resolution", 32);
    const auto W = hypersurface::parse_W_spec(c.params.value("W", std::string("mean")), n, k0);
    const auto cap = hypersurface::build_cap(k0, r, n, res, n == 2 ? res : 1);
    const int sign = hypersurface::orientation_sign(cap.sample, cap.model.center);

    CheckReport rep;
    rep.name = "capillary_cap";
    rep.metrics = {{"kappa0", k0}, {"r", r}, {"alpha", cap.model.alpha}, {"offset", cap.model.offset},
                   {"t", cap.model.t}, {"tol", tol}};
    rep.info["W"] = W.tag;
    rep.add_child(hypersurface::validate_W(W, elliptic::AxiomOptions{2000, ctx.sc.seed, 1e-8}));
    rep.add_child(hypersurface::supersolution_W_check(W, cap.sample, 1e-5, sign));
    rep.add_child(hypersurface::boundary_angle_check(cap.sample, {{cap.ring.name, cap.model.plane_normal}}, r, tol,
                                                     sign));
    rep.add_child(hypersurface::inradius_check({cap.ring}, r, k0, 1e-6));
    ctx.tolerances["supersolution_W"] = 1e-5;
    ctx.tolerances["inradius"] = 1e-6;
    return rep;
}

CheckReport run_check(Context& ctx, const CheckSpec& c) {
    const auto& name = c.name;
    const int n = ctx.domain->n();
    if (name == "supersolution") {
        const double tol = ctx.tol(c, "tol", 5e-3);
        auto rep = elliptic::supersolution_check(ctx.data, conformal::schouten_eigenvalues(ctx.g), tol);
        rep.metrics["tol"] = tol;
        return rep;
    }
    if (name == "elliptic_axioms") {
        const double tol = ctx.tol(c, "tol", 1e-8);
        elliptic::AxiomOptions opt;
        opt.samples = c.params.value("samples", 10000);
        opt.seed = ctx.sc.seed;
        opt.tol = tol;
        return elliptic::validate_axioms(ctx.data, opt);
    }
    if (name == "hypotheses") {
        rigidity::RigidityScenario rs{ctx.g, ctx.data, {}, ctx.param(c, "t", 0.0), {}};
        const double tol = ctx.tol(c, "tol", 5e-3);
        rs.tol.supersolution = tol;
        rs.tol.mean_curvature = tol;
        rs.tol.isometry = ctx.tol(c, "isometry_tol", 1e-3);
        rs.tol.margin = ctx.tol(c, "margin", 1e-3);
        if (c.params.contains("boundaries")) {
            for (const auto& b : c.params.at("boundaries"))
                rs.boundaries.push_back({b.at("component").get<std::string>(), b.at("r").get<double>()});
        } else if (ctx.domain->has_outer_boundary()) {
            rs.boundaries.push_back({"outer", ctx.domain->spec().r_max});
        }
        auto rep = rigidity::check_hypotheses(rs);
        if (const auto* adm = rep.child("admissibility"); adm && adm->metrics.count("t")) ctx.dilation = adm->metric("t");
        return rep;
    }
    if (name == "boundary_isometry") {
        const double tol = ctx.tol(c, "tol", 1e-3);
        return conformal::boundary_isometry_check(ctx.g, c.params.value("component", std::string("outer")),
                                                  ctx.param(c, "r", ctx.domain->spec().r_max), tol);
    }
    if (name == "round_orbit") {
        const double tol = ctx.tol(c, "tol", 1e-6);
        return rigidity::round_orbit_check(ctx.g, ctx.param(c, "r", ctx.domain->spec().r_max), tol);
    }
    if (name == "frame_invariants") {
        const double tol = ctx.tol(c, "tol", 1e-9);
        const double t = ctx.param(c, "t", 0.0);
        ctx.dilation = t;
        auto rep = hyperbolic::frame_invariant_check(ctx.embed_at(t, false), tol);
        rep.metrics["t"] = t;
        return rep;
    }
    if (name == "embeddedness") {
        const double t = ctx.dilation_for(c);
        auto rep = hyperbolic::embeddedness_check(ctx.embed_at(t, false));
        rep.metrics["t"] = t;
        return rep;
    }
    if (name == "duality") return run_duality(ctx, c);
    if (name == "sliding_contact") return run_sliding(ctx, c);
    if (name == "claim_A") {
        const double tol = ctx.tol(c, "tol", 1e-8);
        const double t = ctx.dilation_for(c);
        auto rep = rigidity::claim_A_test(ctx.embed_at(t, false), ctx.param(c, "radius", t), north(n), tol);
        rep.metrics["t"] = t;
        return rep;
    }
    if (name == "gauss_bonnet" || name == "monge_ampere" || name == "toponogov") {
        if (n != 2) throw InputError(name + " needs a two-dimensional domain");
        surface2d::Surface2DScenario s2{ctx.g, ctx.param(c, "c", 0.0), {}, ctx.data};
        if (name == "gauss_bonnet") return surface2d::gauss_bonnet_audit(s2, ctx.tol(c, "tol", 1e-4));
        if (name == "monge_ampere") {
            ctx.used_monge_ampere = true;
            return surface2d::monge_ampere_check(ctx.g, ctx.tol(c, "tol", 5e-3));
        }
        if (c.params.contains("geodesic_ring")) {
            const int i = c.params.at("geodesic_ring").get<int>();
            if (i < 0 || i >= ctx.domain->n_theta()) throw InputError("geodesic_ring out of range");
            for (int j = 0; j < ctx.domain->n_phi(); ++j) s2.geodesic.push_back(ctx.domain->index(i, j));
        }
        surface2d::ToponogovOptions opt;
        opt.tol = ctx.tol(c, "tol", opt.tol);
        opt.f_tol = ctx.tol(c, "f_tol", opt.f_tol);
        opt.fit_tol = ctx.tol(c, "fit_tol", opt.fit_tol);
        return surface2d::toponogov_check(s2, opt);
    }
    if (name == "capillary_cap") return run_cap(ctx, c);
    throw InputError("unknown check '" + name + "'");
}

json grid_json(const sphere::DomainSpec& d) {
    json g{{"n", d.n}, {"chart", sphere::to_string(d.chart)}, {"n_theta", d.n_theta}};
    if (d.chart != sphere::ChartKind::radial) g["n_phi"] = d.n_phi;
    if (d.chart != sphere::ChartKind::latlon) g["r_max"] = d.r_max;
    g["excluded_balls"] = d.excluded.size();
    return g;
}

// Polyline through the x1-x_{n+1} plane of a grid sample: the phi = pi column
// inward, then the phi = 0 column outward. Empty if the plane has no column.
json meridian_section(const hyperbolic::HypersurfaceSample& h) {
    const auto& d = *h.domain;
    json pts = json::array();
    const int n = d.n();
    auto push = [&](long k) {
        const auto& b = h.ball[k];
        pts.push_back(json::array({b(0), b(n)}));
    };
    if (d.chart() == sphere::ChartKind::radial) {
        for (int i = d.n_theta() - 1; i >= 0; --i) {
            const auto& b = h.ball[d.index(i, 0)];
            pts.push_back(json::array({-std::hypot(b(0), b(1)), b(n)}));
        }
        for (int i = 0; i < d.n_theta(); ++i) push(d.index(i, 0));
        return pts;
    }
    if (d.n_phi() % 2 != 0) return pts;
    const int half = d.n_phi() / 2;
    for (int i = d.n_theta() - 1; i >= 0; --i) push(d.index(i, half));
    for (int i = 0; i < d.n_theta(); ++i) push(d.index(i, 0));
    return pts;
}

// Radial charts sample one meridian; a generator that varies around the axis
// cannot be plotted from it.
bool rotationally_symmetric(const sphere::FieldGrid& rho) {
    if (!rho.generator) return true;
    const auto& d = *rho.domain;
    const int n = d.n();
    for (int i = 0; i < d.n_theta(); ++i) {
        const Eigen::VectorXd& x = d.point(d.index(i, 0));
        const double r = x.head(n).norm();
        const double v = rho.generator->value(x);
        for (int j = 0; j < n; ++j)
            for (double sgn : {1.0, -1.0}) {
                Eigen::VectorXd y = Eigen::VectorXd::Zero(n + 1);
                y(j) = sgn * r;
                y(n) = x(n);
                if (std::abs(rho.generator->value(y) - v) > 1e-12 * (1.0 + std::abs(v))) return false;
            }
    }
    return true;
}

json profiles(Context& ctx, std::vector<std::string>& notices) {
    const auto& d = *ctx.domain;
    const int n = d.n();
    const bool radial = d.chart() == sphere::ChartKind::radial;
    json out = json::object();
    if (n != 2 && !radial) {
        notices.push_back("profiles skipped: only two-dimensional or rotationally symmetric fields are plotted");
        return out;
    }
    if (radial && !rotationally_symmetric(ctx.g.rho)) {
        notices.push_back("profiles skipped: the field is not rotationally symmetric on S^" + std::to_string(n));
        return out;
    }

    const auto lam = conformal::schouten_eigenvalues(ctx.g);
    json theta = json::array(), rho = json::array(), f = json::array(), lambdas = json::array();
    for (int i = 0; i < d.n_theta(); ++i) {
        const long k = d.index(i, 0);
        if (!d.active(k)) continue;
        theta.push_back(d.theta(i));
        rho.push_back(ctx.g.rho[k]);
        lambdas.push_back(vector_json(lam.values[k]));
        f.push_back(ctx.data.in_cone(lam.values[k]) ? json(ctx.data(lam.values[k])) : json(nullptr));
    }
    out["radial"] = {{"theta", theta}, {"rho", rho}, {"lambda", lambdas}, {"f", f}};

    if (!radial && !d.rings().empty()) {
        json rings = json::array();
        const surface2d::Surface2DScenario s2{ctx.g, 0.0, {}, ctx.data};
        const auto geo = surface2d::boundary_geodesic_data(s2);
        for (const auto& ring : d.rings()) {
            const auto bd = conformal::boundary_data(ctx.g, ring.name);
            json angle = json::array();
            const auto m = static_cast<double>(ring.points.size());
            for (size_t q = 0; q < ring.points.size(); ++q) angle.push_back(2.0 * M_PI * static_cast<double>(q) / m);
            json entry{{"name", ring.name}, {"angle", angle}, {"H", bd.mean_curvature}};
            for (const auto& gd : geo)
                if (gd.component == ring.name) entry["k"] = gd.k;
            rings.push_back(entry);
        }
        out["boundary"] = rings;
    }

    if (!radial) {
        try {
            const double t = ctx.dilation ? *ctx.dilation : rigidity::auto_dilation(ctx.g).t;
            const double s0 = ctx.contact_s0.value_or(0.0);
            const double r = ctx.contact_r.value_or(M_PI / 2);
            json section{{"t", t}, {"s0", s0}, {"r", r}};
            section["sigma"] = meridian_section(ctx.embed_at(t, false));
            const auto cap = hyperbolic::cap_construction(t, r, n, 32, 32);
            section["cap"] = meridian_section(hyperbolic::translate(cap.sample, s0, north(n)));
            out["cross_section"] = section;
        } catch (const NumericalError& e) {
            notices.push_back(std::string("cross-section skipped: ") + e.what());
        } catch (const InputError& e) {
            notices.push_back(std::string("cross-section skipped: ") + e.what());
        }
    }
    return out;
}

}  // namespace

json to_json(const CheckReport& r) {
    json j{{"name", r.name}, {"passed", r.passed}};
    json metrics = json::object();
    for (const auto& [k, v] : r.metrics) metrics[k] = std::isfinite(v) ? json(v) : json(std::to_string(v));
    j["metrics"] = metrics;
    j["info"] = r.info;
    if (r.witness) j["witness"] = {{"index", r.witness->index}, {"location", r.witness->location}, {"coords", r.witness->coords}};
    if (!r.children.empty()) {
        json ch = json::array();
        for (const auto& c : r.children) ch.push_back(to_json(c));
        j["children"] = ch;
    }
    return j;
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

json strip_timing(json report) {
    report.erase("timing");
    return report;
}

RunResult run_scenario(const Scenario& sc) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    const auto domain = sphere::build_grid(sc.domain);
    Context ctx{sc, domain, conformal::ConformalMetric{make_field(sc.field, domain, sc.seed, sc.dir)},
                elliptic::parse_elliptic_spec(sc.elliptic, sc.domain.n), {}, {}, {}, false, json::object()};
    ctx.g.diff.source = source_of(sc.derivatives);

    RunResult res;
    json checks = json::array(), tolerances = json::object(), timing = json::array();
    bool passed = true, numerical = false;
    for (size_t i = 0; i < sc.checks.size(); ++i) {
        const auto& c = sc.checks[i];
        ctx.tolerances = json::object();
        const auto t0 = clock::now();
        CheckReport rep;
        try {
            rep = run_check(ctx, c);
        } catch (const NumericalError& e) {
            rep = CheckReport{};
            rep.passed = false;
            rep.info["error"] = e.what();
            numerical = true;
        }
        rep.name = c.name;
        rep.finalize();
        passed = passed && rep.passed;
        const std::string label = std::to_string(i) + ":" + c.name;
        tolerances[label] = ctx.tolerances;
        checks.push_back(to_json(rep));
        timing.push_back({{"check", label}, {"seconds", std::chrono::duration<double>(clock::now() - t0).count()}});
    }

    json prov{{"grid", grid_json(sc.domain)},
              {"elliptic", ctx.data.tag},
              {"seed", sc.seed},
              {"derivatives", sc.derivatives},
              {"dilation_t", ctx.dilation ? json(*ctx.dilation) : json(nullptr)},
              {"scaling_note", rigidity::kScalingNote},
              {"tolerances", tolerances}};
    if (ctx.used_monge_ampere) prov["monge_ampere_note"] = surface2d::kMongeAmpereNote;

    res.exit_code = numerical ? kNumericalFailure : (passed ? kPass : kCheckFailure);
    res.report = json{{"report_version", kReportVersion},
                      {"scenario", sc.name},
                      {"passed", passed && !numerical},
                      {"exit_code", res.exit_code},
                      {"provenance", prov},
                      {"checks", checks}};
    res.report["profiles"] = profiles(ctx, res.notices);
    res.report["timing"] = {{"checks", timing},
                            {"total_seconds", std::chrono::duration<double>(clock::now() - start).count()}};
    return res;
}

}  // namespace horo::cli
