#include "horo/conformal/schouten.hpp"
#include "horo/elliptic/data.hpp"
#include "horo/error.hpp"
#include "horo/hyperbolic/embedding.hpp"
#include "horo/hyperbolic/minkowski.hpp"
#include "horo/hypersurface/caps.hpp"
#include "horo/hypersurface/data.hpp"
#include "horo/rigidity/rigidity.hpp"
#include "horo/surface2d/surface2d.hpp"

#include <nlohmann/json.hpp>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace horo;
using namespace horo::sphere;
using namespace horo::hyperbolic;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    // Records a gated quantity: value <= bound.
    void le(const std::string& what, double value, double bound) {
        const bool ok = value <= bound;
        pass = pass && ok;
        detail << what << " " << value << (ok ? " <= " : " > ") << bound << "; ";
    }
    void ge(const std::string& what, double value, double bound) {
        const bool ok = value >= bound;
        pass = pass && ok;
        detail << what << " " << value << (ok ? " >= " : " < ") << bound << "; ";
    }
    void expect(const std::string& what, bool ok) {
        pass = pass && ok;
        detail << what << (ok ? " ok; " : " FAILED; ");
    }
};

const Eigen::Vector3d kNorth(0, 0, 1);

DomainPtr polar(double r, int nt, int np = -1) {
    DomainSpec s;
    s.r_max = r;
    s.n_theta = nt;
    s.n_phi = np < 0 ? nt : np;
    return build_grid(s);
}

DomainPtr latlon(int nt, int np) {
    DomainSpec s;
    s.chart = ChartKind::latlon;
    s.n_theta = nt;
    s.n_phi = np;
    return build_grid(s);
}

DomainPtr radial(int n, double r, int nt) {
    DomainSpec s;
    s.n = n;
    s.chart = ChartKind::radial;
    s.r_max = r;
    s.n_theta = nt;
    return build_grid(s);
}

EmbedOptions ungated() {
    EmbedOptions o;
    o.require_admissible = false;
    return o;
}

// Chart radius whose image under the Mobius factor of parameter s is D(north, r).
double chart_radius(double s, double r) {
    return std::acos((std::cosh(s) * std::cos(r) + std::sinh(s)) / (std::cosh(s) + std::sinh(s) * std::cos(r)));
}

// ---------------------------------------------------------------------------

void duality(Outcome& o) {
    auto defect = [](const FieldGrid& rho) {
        const auto h = with_curvatures(embed(rho));  // gated: rho must be admissible
        const auto lam = conformal::schouten_eigenvalues(conformal::ConformalMetric{rho});
        double worst = 0.0;
        for (long k = 0; k < h.size(); ++k)
            for (long i = 0; i < lam.values[k].size(); ++i)
                worst = std::max(worst, std::abs(lam.values[k](i) - schouten_from_curvature(h.curvatures[k](i))));
        return worst;
    };
    const auto coarse = latlon(64, 64), fine = latlon(128, 128);
    double worst = 0.0, min_order = INFINITY;
    for (unsigned long long seed = 1; seed <= 10; ++seed) {
        const auto gen = make_sum({make_random_smooth(2, seed, 0.3), make_constant(1.0)});
        const double e64 = defect(FieldGrid::sample(coarse, gen));
        const double e128 = defect(FieldGrid::sample(fine, gen));
        worst = std::max(worst, e128);
        min_order = std::min(min_order, std::log2(e64 / e128));
    }
    o.le("max defect at 128^2", worst, 5e-3);
    o.ge("min observed order", min_order, 1.7);
}

void frame_invariants(Outcome& o) {
    std::vector<FieldGrid> fields{
        FieldGrid::sample(latlon(32, 64), make_random_smooth(2, 1, 0.5)).shifted(1.0),
        FieldGrid::sample(latlon(32, 64), make_random_smooth(2, 2, 0.5)).shifted(0.3),
        FieldGrid::sample(polar(1.2, 32), make_mobius(0.7, kNorth)).shifted(0.5),
        FieldGrid::sample(polar(M_PI / 2, 32), make_bump(kNorth, 0.3, 0.5)).shifted(2.0),
        FieldGrid::sample(radial(3, 2.0, 48), make_radial_poly({0.4, 0.2, 0.1})),
    };
    double frame = 0.0, rec_err = 0.0;
    bool all_pass = true;
    for (const auto& rho : fields) {
        const auto h = embed(rho, ungated());
        const auto rep = frame_invariant_check(h, 1e-9);
        all_pass = all_pass && rep.passed;
        frame = std::max(frame, frame_defects(h).max());
        const auto rec = recover(h);
        for (long k = 0; k < rho.size(); ++k) rec_err = std::max(rec_err, std::abs(rec.rho[k] - rho[k]));
    }
    o.expect("frame_invariant_check on 5 fields", all_pass);
    o.le("max frame defect", frame, 1e-9);
    o.le("max |recover(embed(rho)) - rho|", rec_err, 1e-12);
}

void ball_form(Outcome& o) {
    const auto d = latlon(32, 64);
    double worst = 0.0, id = 0.0;
    for (unsigned long long seed = 1; seed <= 5; ++seed) {
        const double t = 0.5 + 0.25 * static_cast<double>(seed);
        const auto base = FieldGrid::sample(d, make_random_smooth(2, seed, 0.4));
        const auto h = embed(base.shifted(t), ungated());
        const auto ball = embed_ball_form(base, std::exp(-t));
        const auto zero = embed_ball_form(base, 0.0);
        for (long k = 0; k < d->size(); ++k) {
            worst = std::max(worst, (ball[k] - h.ball[k]).cwiseAbs().maxCoeff());
            id = std::max(id, (zero[k] - d->point(k)).cwiseAbs().maxCoeff());
        }
    }
    o.le("max |ball form - projected embed|", worst, 1e-9);
    o.le("eps = 0 identity defect", id, 1e-9);
}

void geodesic_spheres(Outcome& o) {
    double phi_err = 0.0, k_err = 0.0, lam_err = 0.0, inc_err = 0.0, ball_err = 0.0;
    for (double t : {0.5, 1.0, 2.0}) {
        const auto rho = FieldGrid::sample(latlon(24, 48), make_constant(t));
        const auto h = with_curvatures(embed(rho));
        const auto lam = conformal::schouten_eigenvalues(conformal::ConformalMetric{rho});
        for (long k = 0; k < h.size(); ++k) {
            Eigen::VectorXd expect(4);
            expect << std::cosh(t), std::sinh(t) * h.x[k];
            phi_err = std::max(phi_err, (h.phi[k] - expect).cwiseAbs().maxCoeff());
            k_err = std::max(k_err, (h.curvatures[k].array() - 1.0 / std::tanh(t)).abs().maxCoeff());
            lam_err = std::max(lam_err, (lam.values[k].array() - 0.5 * std::exp(-2 * t)).abs().maxCoeff());
            inc_err = std::max(inc_err, std::abs(minkowski_dot(h.phi[k], null_lift(h.x[k])) + std::exp(-t)));
            ball_err = std::max(ball_err, std::abs(h.ball[k].norm() - std::tanh(t / 2)));
        }
    }
    o.le("phi", phi_err, 1e-9);
    o.le("k - coth t", k_err, 1e-9);
    o.le("lambda - e^{-2t}/2", lam_err, 1e-9);
    o.le("incidence + e^{-t}", inc_err, 1e-9);
    o.le("ball radius - tanh(t/2)", ball_err, 1e-9);
}

void axioms(Outcome& o) {
    bool all = true;
    double grad = 0.0;
    for (auto [n, k] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}, {3, 2}, {3, 3}}) {
        const auto d = elliptic::make_sigma_k(n, k);
        elliptic::AxiomOptions opt;
        opt.samples = 10000;
        opt.seed = 1;
        opt.tol = 1e-8;
        all = all && elliptic::validate_axioms(d, opt).passed;
        const Eigen::VectorXd g = elliptic::numeric_gradient(d, Eigen::VectorXd::Ones(n));
        grad = std::max(grad, (g.array() - 2.0 / n).abs().maxCoeff());
    }
    o.expect("seven axioms for 5 sigma_k families (tol 1e-8, 1e4 samples)", all);
    o.le("max |grad f(1,..,1) - 2/n|", grad, 1e-6);
}

void concavity(Outcome& o) {
    const auto s2 = elliptic::make_sigma_k(3, 2);
    const auto samples = elliptic::sample_cone(s2, 10000, 1);
    const auto rep = elliptic::concavity_bound_check(s2, samples, 1e-10);
    o.expect("sigma_2, n = 3: f <= R/6 + 1e-10", rep.passed);
    const auto s1 = elliptic::make_sigma_k(3, 1);
    double eq = 0.0;
    for (const auto& l : elliptic::sample_cone(s1, 10000, 1)) eq = std::max(eq, std::abs(s1(l) - 2.0 * l.sum() / 3.0));
    o.le("sigma_1 |f - R/6|", eq, 1e-10);
}

void rigidity_round_trip(Outcome& o) {
    double s_err = 0.0, residual = 0.0;
    bool hyp = true;
    for (double r : {M_PI / 4, M_PI / 2})
        for (double s : {0.0, 0.3}) {
            const auto d = polar(chart_radius(s, r), 48);
            const conformal::ConformalMetric g{FieldGrid::sample(d, make_mobius(s, kNorth))};
            rigidity::RigidityScenario sc{g, elliptic::make_sigma_k(2, 2), {{"outer", r}}, 0.0, {}};
            hyp = hyp && rigidity::check_hypotheses(sc).passed;
            const auto fit = rigidity::fit_round_orbit(g, r);
            s_err = std::max(s_err, std::abs(fit.s - s));
            residual = std::max(residual, fit.residual);
        }
    o.expect("check_hypotheses on 4 round scenarios", hyp);
    o.le("max |s_fit - s|", s_err, 1e-4);
    o.le("max fit residual", residual, 1e-6);

    const auto hemi = polar(M_PI / 2, 48);
    for (auto [label, gen] : std::vector<std::pair<std::string, GeneratorPtr>>{
             {"dilated t = 0.2", make_constant(0.2)}, {"bump", make_bump(kNorth, 0.3, 0.5)}}) {
        rigidity::RigidityScenario sc{conformal::ConformalMetric{FieldGrid::sample(hemi, gen)},
                                      elliptic::make_sigma_k(2, 2), {{"outer", M_PI / 2}}, 0.0, {}};
        auto rep = rigidity::check_hypotheses(sc);
        rep.finalize();
        const auto* sup = rep.child("supersolution");
        o.expect(label + " fails the supersolution gate with a witness",
                 !rep.passed && sup && !sup->passed && sup->witness.has_value() && rep.witness.has_value());
    }
}

void sliding(Outcome& o) {
    const double t = 1.0;
    const auto sigma = embed(FieldGrid::sample(polar(M_PI / 2, 32), make_constant(t)));
    const auto cap = cap_construction(t, M_PI / 2, 2, 32, 32);
    const rigidity::ContactOptions opt;
    // s-resolution of the contact predicate: the gap is quadratic in s at a
    // tangential contact, so gap <= touch_tol pins s to sqrt(touch_tol).
    const double grid_tol = std::sqrt(opt.touch_tol) + opt.bisection_tol;
    const auto res = rigidity::sliding_first_contact(sigma, cap, opt);
    o.le("|s0|", std::abs(res.s0), 2 * grid_tol);
    o.expect("classification boundary", res.classification == "boundary");
    double moved_err = 0.0;
    bool moved_boundary = true;
    for (double sstar : {0.4, -0.6}) {
        const auto m = rigidity::sliding_first_contact(translate(sigma, sstar, kNorth), cap, opt);
        moved_err = std::max(moved_err, std::abs(m.s0 - sstar));
        moved_boundary = moved_boundary && m.classification == "boundary";
    }
    o.le("pre-translated |s0 - s*|", moved_err, 2 * grid_tol);
    o.expect("pre-translated classification boundary", moved_boundary);
}

void claim_a(Outcome& o) {
    const double t = 1.0;
    const auto d = polar(M_PI / 2, 32);
    const auto flat = embed(FieldGrid::sample(d, make_constant(t)));
    const auto rep = rigidity::claim_A_test(flat, t, kNorth, 1e-8);
    o.expect("claim A test passes", rep.passed);
    o.le("|distance to axis - t|", std::abs(rep.metric("min_excess")), 1e-8);
    o.le("max |<eta, N_P>|", rep.metric("max_orthogonality_defect"), 1e-8);
    const auto tilted =
        embed(FieldGrid::sample(d, make_sum({make_constant(t), make_linear(Eigen::Vector3d(0, 0, 0.2))})));
    const auto strict = rigidity::claim_A_test(tilted, t, kNorth, 1e-8);
    o.expect("d rho / d nu != 0 ring strictly exterior",
             strict.passed && strict.metric("flat_points") == 0.0 &&
                 strict.metric("strict_points") == static_cast<double>(d->n_phi()));
    o.ge("exterior excess", strict.metric("min_excess"), 1e-8);
}

void surface_suite(Outcome& o) {
    using surface2d::Surface2DScenario;
    auto scen = [](const FieldGrid& rho, double c = 0.0) {
        return Surface2DScenario{conformal::ConformalMetric{rho}, c, {}, elliptic::make_sigma_k(2, 2)};
    };
    double gb = 0.0;
    for (const auto& rho : {FieldGrid::sample(latlon(128, 128), make_constant(0.0)),
                            FieldGrid::sample(polar(M_PI / 2, 128), make_constant(0.0)),
                            FieldGrid::sample(polar(M_PI / 3, 128), make_constant(0.0)),
                            FieldGrid::sample(polar(M_PI / 4, 128), make_constant(0.0)),
                            FieldGrid::sample(polar(1.0, 128), make_mobius(0.3, kNorth))})
        gb = std::max(gb, std::abs(surface2d::gauss_bonnet_audit(scen(rho)).metric("residual")));
    o.le("Gauss-Bonnet residual", gb, 1e-4);

    double radius = 0.0;
    bool topo = true;
    const std::vector<std::tuple<double, double, double>> discs{
        {0.0, 0.0, M_PI / 2}, {1.0, 0.0, M_PI / 4}, {1.0, 0.3, M_PI / 4}};  // (c, s, r)
    for (auto [c, s, r] : discs) {
        const auto rho = FieldGrid::sample(polar(chart_radius(s, r), 64), make_mobius(s, kNorth));
        const auto rep = surface2d::toponogov_check(scen(rho, c));
        topo = topo && rep.passed;
        radius = std::max(radius, std::abs(rep.metric("recovered_radius") - std::atan2(1.0, c)));
    }
    o.expect("Toponogov disc mode for c in {0, 1}", topo);
    o.le("|recovered radius - arccot c|", radius, 1e-3);

    double ma = 0.0;
    bool ma_pass = true;
    for (const auto& rho : {FieldGrid::sample(polar(M_PI / 2, 64), make_mobius(0.3, kNorth)),
                            FieldGrid::sample(latlon(64, 128), make_mobius(0.5, Eigen::Vector3d(0.6, 0, 0.8)))}) {
        for (auto source : {DerivativeSource::analytic, DerivativeSource::numeric}) {
            const conformal::ConformalMetric g{rho, DiffOptions{source, 4}};
            ma_pass = ma_pass && surface2d::monge_ampere_check(g).passed;
            const auto s2 = surface2d::schouten_2d(g);
            for (const auto& l : s2.lambda.values) ma = std::max(ma, std::abs(2.0 * std::sqrt(l(0) * l(1)) - 1.0));
        }
    }
    o.expect("Monge-Ampere check on Mobius factors (analytic and numeric derivatives)", ma_pass);
    o.le("max |f - 1|", ma, 5e-3);
    const auto dil = surface2d::monge_ampere_check(
        conformal::ConformalMetric{FieldGrid::sample(polar(M_PI / 2, 64), make_constant(0.2))});
    o.expect("rho = 0.2 flagged", !dil.passed);
}

void capillary_suite(Outcome& o) {
    const double k0 = 1.0 / std::tanh(0.8);
    double angle = 0.0;
    bool gates = true;
    for (double r : {0.0, 0.5, 1.0}) {
        const auto cap = hypersurface::build_cap(k0, r, 2, 32, 32);
        const int sign = hypersurface::orientation_sign(cap.sample, cap.model.center);
        const double cos_alpha = -r / std::sqrt(1.0 + r * r);
        angle = std::max(angle, std::abs(std::cos(hypersurface::cap_angle(r)) - cos_alpha));
        const auto& rim = cap.sample.ring("outer");
        for (size_t q = 0; q < rim.phi.size(); ++q) {
            Eigen::VectorXd nu = cap.model.plane_normal + minkowski_dot(cap.model.plane_normal, rim.phi[q]) * rim.phi[q];
            nu /= std::sqrt(minkowski_dot(nu, nu));
            angle = std::max(angle, std::abs(sign * minkowski_dot(rim.eta[q], nu) - cos_alpha));
        }
        gates = gates &&
                hypersurface::boundary_angle_check(cap.sample, {{"outer", cap.model.plane_normal}}, r, 1e-10, sign)
                    .passed;
    }
    o.le("max |cos(measured angle) - cos alpha(r)|", angle, 1e-10);
    o.expect("boundary_angle_check passes at equality", gates);

    bool rejects = true;
    for (double r : {0.5, 1.0}) {
        const auto m = hypersurface::cap_model(k0, r);
        const auto raised = hypersurface::cap_with_offset(k0, r, m.offset + 0.1, 2, 32, 32);
        auto rep = hypersurface::boundary_angle_check(raised.sample, {{"outer", raised.model.plane_normal}}, r, 1e-8);
        rep.finalize();
        rejects = rejects && !rep.passed && rep.witness && rep.witness->location.find("boundary:outer") != std::string::npos;
    }
    o.expect("perturbed rims rejected with a boundary witness", rejects);

    double bridge = 0.0;
    for (double t : {0.5, 1.0, 2.0}) {
        bridge = std::max(bridge, std::abs(schouten_from_curvature(1.0 / std::tanh(t)) - 0.5 * std::exp(-2 * t)));
        bridge = std::max(bridge, std::abs(dilation_from_curvature(1.0 / std::tanh(t)) - t));
        const auto cap = hypersurface::build_cap(1.0 / std::tanh(t), 0.5, 2, 32, 32);
        const auto lam = conformal::schouten_eigenvalues(conformal::ConformalMetric{cap.support});
        bridge = std::max(bridge, std::abs(lam.max_entry() - 0.5 * std::exp(-2 * t)));
        bridge = std::max(bridge, std::abs(lam.min_entry() - 0.5 * std::exp(-2 * t)));
    }
    o.le("kappa0 = coth t <=> lambda = e^{-2t}/2", bridge, 1e-9);
}

int run_cli(const std::string& args, const std::string& out) {
    const std::string cmd = std::string(HORO_BIN) + " " + args + " > " + out + ".log 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string stripped(const std::string& path) {
    std::ifstream in(path);
    if (!in) return "";
    auto j = nlohmann::json::parse(in);
    j.erase("timing");
    return j.dump(2);
}

void cli_determinism(Outcome& o) {
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "horo_acceptance_cli";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const std::vector<std::pair<std::string, int>> matrix{
        {"round_hemisphere", 0}, {"mobius_cap", 0},     {"round_sphere", 0},         {"radial_n3", 0},
        {"capillary_caps", 0},   {"file_field", 0},     {"dilated_hemisphere", 1},   {"bump_violation", 1},
        {"inadmissible_contact", 3}};
    bool codes = true, stable = true;
    for (const auto& [name, expect] : matrix) {
        const std::string scen = std::string(SCENARIO_DIR) + "/" + name + ".json";
        std::string reports[2];
        for (int run = 0; run < 2; ++run) {
            const std::string out = (dir / (name + "." + std::to_string(run) + ".json")).string();
            const int code = run_cli("check " + scen + " --out " + out, out);
            if (code != expect) {
                codes = false;
                o.detail << name << " exit " << code << " (expected " << expect << "); ";
            }
            reports[run] = stripped(out);
        }
        if (reports[0].empty() || reports[0] != reports[1]) {
            stable = false;
            o.detail << name << " report differs between runs; ";
        }
    }
    const std::string bad = (dir / "malformed").string();
    const int malformed = run_cli("check " + std::string(TEST_DATA_DIR) + "/malformed.json", bad);
    o.expect("exit codes match the pass/fail matrix", codes);
    o.expect("malformed JSON exits 2", malformed == 2);
    o.expect("reports byte-stable modulo timing", stable);
    std::filesystem::remove_all(dir);
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        std::string name;
        double budget;  // seconds
        std::function<void(Outcome&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "duality suite", 60, duality},
        {2, "frame invariants", 5, frame_invariants},
        {3, "cross-model agreement", 10, ball_form},
        {4, "geodesic-sphere closed forms", 5, geodesic_spheres},
        {5, "elliptic-data axioms", 30, axioms},
        {6, "concavity bound", 10, concavity},
        {7, "rigidity round-trip", 120, rigidity_round_trip},
        {8, "sliding contact", 60, sliding},
        {9, "claim A geometry", 5, claim_a},
        {10, "2D suite", 60, surface_suite},
        {11, "capillary cap suite", 30, capillary_suite},
        {12, "CLI determinism", 10, cli_determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        o.detail.precision(3);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what() << "; ";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        o.le("runtime s", secs, c.budget);
        if (!o.pass) ++failures;
        std::printf("%s %2d %-30s %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
