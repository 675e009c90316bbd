#include "horo/rigidity/rigidity.hpp"

#include "horo/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace horo::rigidity {

using conformal::ConformalMetric;
using hyperbolic::GeodesicObject;
using hyperbolic::HypersurfaceSample;
using sphere::ChartKind;
using sphere::FieldGrid;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd north_of(int n) { return Eigen::VectorXd::Unit(n + 1, n); }

double max_lambda(const conformal::SchoutenEigenvalues& lam) {
    const auto& d = *lam.domain;
    double top = -kInf;
    for (long k = 0; k < d.size(); ++k) {
        if (!d.active(k)) continue;
        const double v = lam.values[k].maxCoeff();
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "non-finite Schouten eigenvalue at grid point " << k;
            throw NumericalError(os.str());
        }
        top = std::max(top, v);
    }
    return top;
}

bool same_grid(const FieldGrid& a, const FieldGrid& b) {
    if (a.domain == b.domain) return true;
    const auto &sa = a.domain->spec(), &sb = b.domain->spec();
    return sa.n == sb.n && sa.chart == sb.chart && sa.n_theta == sb.n_theta && a.domain->n_phi() == b.domain->n_phi() &&
           std::abs(sa.r_max - sb.r_max) < 1e-14 && sa.excluded.size() == sb.excluded.size();
}

bool on_outer_ring(const sphere::SphereDomain& d, long k) {
    return d.has_outer_boundary() && d.ring_of(k) == d.n_theta() - 1;
}

struct SurfacePoint {
    Eigen::VectorXd phi;
    bool boundary = false;
    Witness witness;
};

std::vector<SurfacePoint> surface_points(const HypersurfaceSample& h) {
    std::vector<SurfacePoint> pts;
    const auto& d = *h.domain;
    for (long k = 0; k < h.size(); ++k)
        if (d.active(k)) pts.push_back({h.phi[k], on_outer_ring(d, k), d.witness(k)});
    for (const auto& b : h.boundary) {
        const auto& ring = d.ring(b.name);
        if (ring.grid_aligned()) continue;
        for (size_t q = 0; q < b.phi.size(); ++q)
            pts.push_back({b.phi[q], true, sphere::SphereDomain::ring_witness(ring, q)});
    }
    return pts;
}

// Signed gap of Sigma against T_s(cap) and the index of the minimizing sample.
std::pair<double, long> signed_gap(const std::vector<SurfacePoint>& pts, const hyperbolic::CapSample& cap, double s,
                                   std::vector<double>* per_point = nullptr) {
    const int n = cap.sample.domain->n();
    const Eigen::MatrixXd back = hyperbolic::boost(-s, north_of(n));
    double best = kInf;
    long arg = -1;
    if (per_point) per_point->assign(pts.size(), kInf);
    for (size_t j = 0; j < pts.size(); ++j) {
        const Eigen::VectorXd p = back * pts[j].phi;
        if (hyperbolic::signed_distance(p, cap.plane) < cap.level - 1e-12) continue;
        const double g = std::acosh(std::max(1.0, p(0))) - cap.t;
        if (per_point) (*per_point)[j] = g;
        if (g < best) {
            best = g;
            arg = static_cast<long>(j);
        }
    }
    return {best, arg};
}

Witness ring_min_witness(const sphere::BoundaryRing& ring, const std::vector<double>& v, double* min_out) {
    size_t arg = 0;
    for (size_t q = 1; q < v.size(); ++q)
        if (v[q] < v[arg]) arg = q;
    if (min_out) *min_out = v.empty() ? kInf : v[arg];
    return sphere::SphereDomain::ring_witness(ring, arg);
}

double mobius_value(double s, const Eigen::VectorXd& a, const Eigen::VectorXd& x) {
    return -std::log(std::cosh(s) - std::sinh(s) * a.dot(x));
}

}  // namespace

Dilation evaluate_dilation(const ConformalMetric& g, double t, double margin) {
    const double base = max_lambda(conformal::schouten_eigenvalues(g));
    Dilation dil;
    dil.t = t;
    dil.lambda_max = std::exp(-2.0 * t) * base;
    dil.margin = 0.5 - dil.lambda_max;
    dil.embeddedness.name = "embeddedness";
    if (dil.lambda_max > 0.5 - margin) {
        dil.embeddedness.info["status"] = "not attempted: eigenvalues too large";
        dil.embeddedness.fail(Witness{-1, "global", {}});
        return dil;
    }
    hyperbolic::EmbedOptions opt;
    opt.diff = g.diff;
    dil.embeddedness = hyperbolic::embeddedness_check(hyperbolic::embed(g.rho.shifted(t), opt));
    return dil;
}

Dilation auto_dilation(const ConformalMetric& g, double margin) {
    for (double t : kDilationLadder) {
        Dilation d = evaluate_dilation(g, t, margin);
        if (d.margin >= margin && d.embeddedness.passed) return d;
    }
    throw NumericalError("no dilation in {0.5, 1, 2, 4, 8} makes the metric admissible and embedded");
}

CheckReport check_hypotheses(const RigidityScenario& sc) {
    CheckReport rep;
    rep.name = "hypotheses";
    rep.info["scaling"] = kScalingNote;
    const auto& g = sc.g;
    const auto& d = *g.rho.domain;
    const auto lam = conformal::schouten_eigenvalues(g);

    rep.add_child(elliptic::supersolution_check(sc.data, lam, sc.tol.supersolution));

    for (const auto& b : sc.boundaries) {
        if (!(b.r > 0.0 && b.r <= M_PI / 2 + 1e-15))
            throw InputError("declared boundary radius must lie in (0, pi/2] for '" + b.component + "'");
        CheckReport iso = conformal::boundary_isometry_check(g, b.component, b.r, sc.tol.isometry);
        iso.name = "boundary_isometry:" + b.component;
        rep.add_child(std::move(iso));

        const auto bd = conformal::boundary_data(g, b.component);
        CheckReport mc;
        mc.name = "mean_curvature:" + b.component;
        const double target = conformal::cot_exact(b.r);
        double min_h = kInf;
        const Witness w = ring_min_witness(d.ring(b.component), bd.mean_curvature, &min_h);
        mc.metrics = {{"min_H", min_h}, {"target", target}, {"tol", sc.tol.mean_curvature}};
        if (!(min_h >= target - sc.tol.mean_curvature)) mc.fail(w);
        rep.add_child(std::move(mc));
    }

    CheckReport adm;
    adm.name = "admissibility";
    adm.info["scaling"] = kScalingNote;
    std::optional<Dilation> dil;
    try {
        dil = sc.t > 0.0 ? evaluate_dilation(g, sc.t, sc.tol.margin) : auto_dilation(g, sc.tol.margin);
    } catch (const NumericalError& e) {
        adm.info["error"] = e.what();
        adm.fail(Witness{-1, "global", {}});
    }
    if (dil) {
        adm.metrics = {{"t", dil->t}, {"lambda_max", dil->lambda_max}, {"margin", dil->margin},
                       {"required_margin", sc.tol.margin}};
        adm.info["t_source"] = sc.t > 0.0 ? "scenario" : "ladder";
        if (dil->margin < sc.tol.margin) adm.fail(Witness{-1, "global", {}});
        adm.add_child(dil->embeddedness);
    }
    rep.add_child(std::move(adm));

    // Rims of excluded balls: eta_t must point into the closed side Q+ of the
    // plane Q over the rim (equivalent to H_g >= 0 there).
    if (dil && dil->margin > 0.0) {
        bool any = false;
        for (const auto& ring : d.rings()) any = any || ring.name.rfind("ball:", 0) == 0;
        if (any) {
            hyperbolic::EmbedOptions opt;
            opt.diff = g.diff;
            opt.require_admissible = false;
            const auto sigma = hyperbolic::embed(g.rho.shifted(dil->t), opt);
            for (const auto& ring : d.rings()) {
                if (ring.name.rfind("ball:", 0) != 0) continue;
                const auto Q = GeodesicObject::plane_over_circle(ring.center, ring.radius);
                const auto& bs = sigma.ring(ring.name);
                std::vector<double> dots;
                for (const auto& eta : bs.eta) dots.push_back(hyperbolic::minkowski_dot(eta, Q.normal));
                CheckReport orient;
                orient.name = "orientation:" + ring.name;
                double mn = kInf;
                const Witness w = ring_min_witness(ring, dots, &mn);
                orient.metrics = {{"min_eta_dot_N", mn}, {"tol", sc.tol.orientation}};
                if (!(mn >= -sc.tol.orientation)) orient.fail(w);
                rep.add_child(std::move(orient));
            }
        }
    }
    rep.finalize();
    return rep;
}

ContactResult sliding_first_contact(const HypersurfaceSample& sigma, const hyperbolic::CapSample& cap,
                                    const ContactOptions& opt) {
    if (!sigma.domain || !cap.sample.domain) throw InputError("contact search needs samples with their grids");
    if (sigma.domain->n() != cap.sample.domain->n()) throw InputError("surface and cap dimensions differ");
    if (!(opt.s_max > opt.s_min) || opt.scan < 2) throw InputError("invalid contact scan range");
    const auto pts = surface_points(sigma);

    ContactResult res;
    if (opt.contact_tol > 0.0) {
        res.contact_tol = opt.contact_tol;
    } else {
        const auto cell = hyperbolic::local_cell_sizes(sigma);
        res.contact_tol = 3.0 * *std::max_element(cell.begin(), cell.end());
    }

    long first = -1;
    for (int k = 0; k < opt.scan; ++k) {
        const double s = opt.s_min + (opt.s_max - opt.s_min) * k / (opt.scan - 1);
        const double g = signed_gap(pts, cap, s).first;
        res.gap_curve.emplace_back(s, g);
        if (first < 0 && g <= opt.touch_tol) first = k;
    }
    if (first <= 0) {
        res.classification = "none-in-range";
        res.s0 = first == 0 ? opt.s_min : opt.s_max;
        return res;
    }
    double lo = res.gap_curve[first - 1].first, hi = res.gap_curve[first].first;
    while (hi - lo > opt.bisection_tol) {
        const double mid = 0.5 * (lo + hi);
        if (signed_gap(pts, cap, mid).first <= opt.touch_tol) hi = mid;
        else lo = mid;
    }
    res.s0 = hi;

    std::vector<double> per;
    const auto [gmin, arg] = signed_gap(pts, cap, res.s0, &per);
    const double slack = res.contact_tol / 3.0;
    for (size_t j = 0; j < pts.size(); ++j)
        if (per[j] <= gmin + slack && pts[j].boundary) res.sigma_on_boundary = true;
    res.sigma_witness = pts[arg].witness;
    res.sigma_point = pts[arg].phi;

    // closest sample of the translated cap
    const int n = cap.sample.domain->n();
    const Eigen::MatrixXd fwd = hyperbolic::boost(res.s0, north_of(n));
    const auto& cd = *cap.sample.domain;
    double best = kInf;
    res.gap_at_contact = kInf;
    for (long i = 0; i < cap.sample.size(); ++i) {
        const Eigen::VectorXd c = fwd * cap.sample.phi[i];
        const double dist = hyperbolic::hyperbolic_distance(c, res.sigma_point);
        if (dist < best) {
            best = dist;
            res.cap_point = c;
            res.cap_on_boundary = on_outer_ring(cd, i);
        }
        for (const auto& p : pts) res.gap_at_contact = std::min(res.gap_at_contact, hyperbolic::hyperbolic_distance(c, p.phi));
    }
    res.classification = res.sigma_on_boundary || res.cap_on_boundary ? "boundary" : "interior";
    return res;
}

CheckReport claim_A_test(const HypersurfaceSample& sigma, double radius, const Eigen::VectorXd& axis, double tol) {
    const auto& d = *sigma.domain;
    const auto& b = sigma.ring("outer");
    const auto& ring = d.ring("outer");
    const Eigen::VectorXd a = axis.normalized();
    if (std::abs(b.radius - M_PI / 2) > 1e-12 || b.center.dot(a) < 1.0 - 1e-12)
        throw InputError("claim A needs the equator boundary about the given axis");
    if (b.normal_derivative.size() != b.phi.size())
        throw InputError("claim A needs boundary normal derivatives (untranslated sample)");
    const auto line = GeodesicObject::axis_line(a);
    Eigen::VectorXd np = Eigen::VectorXd::Zero(a.size() + 1);
    np.tail(a.size()) = a;

    CheckReport rep;
    rep.name = "claim_A";
    double min_excess = kInf, max_orth = 0.0;
    long flat = 0, strict = 0;
    for (size_t q = 0; q < b.phi.size(); ++q) {
        const double dist = hyperbolic::signed_distance(b.phi[q], line);
        const double excess = dist - radius;
        min_excess = std::min(min_excess, excess);
        bool ok = excess >= -tol;
        if (std::abs(b.normal_derivative[q]) <= tol) {
            ++flat;
            const double orth = std::abs(hyperbolic::minkowski_dot(b.eta[q], np));
            max_orth = std::max(max_orth, orth);
            ok = ok && orth <= tol;
        } else {
            ++strict;
            ok = ok && excess > 0.0;
        }
        if (!ok) rep.fail(sphere::SphereDomain::ring_witness(ring, q));
    }
    rep.metrics = {{"min_excess", min_excess}, {"max_orthogonality_defect", max_orth}, {"flat_points", double(flat)},
                   {"strict_points", double(strict)}, {"radius", radius}, {"tol", tol}};
    return rep;
}

FieldGrid cap_support(const sphere::DomainPtr& domain, double t, double s, const Eigen::VectorXd& axis) {
    return FieldGrid::sample(domain, sphere::make_pullback(sphere::make_constant(t), s, axis.normalized()));
}

CheckReport claim_B_support_order(const FieldGrid& rho_t, const FieldGrid& rho_hat, double tol) {
    if (!same_grid(rho_t, rho_hat)) throw InputError("claim B: supports live on different grids");
    const auto& d = *rho_t.domain;
    double mn = kInf;
    long arg = -1;
    for (long k = 0; k < d.size(); ++k) {
        if (!d.active(k)) continue;
        const double v = rho_t[k] - rho_hat[k];
        if (v < mn) {
            mn = v;
            arg = k;
        }
    }
    CheckReport rep;
    rep.name = "claim_B";
    rep.metrics = {{"min_difference", mn}, {"tol", tol}};
    const Witness w = d.witness(arg);
    rep.info["min_location"] = w.location == "interior" ? "interior" : "boundary";
    if (!(mn >= -tol)) rep.fail(w);
    return rep;
}

OrbitFit fit_round_orbit(const ConformalMetric& g, double r, double residual_tol) {
    if (!(r > 0.0 && r <= M_PI / 2 + 1e-15)) throw InputError("fit_round_orbit: boundary radius out of (0, pi/2]");
    const auto& d = *g.rho.domain;
    std::vector<long> idx;
    for (long k = 0; k < d.size(); ++k)
        if (d.active(k)) idx.push_back(k);

    OrbitFit fit;
    auto objective = [&](double s, const Eigen::VectorXd& a) {
        ++fit.evaluations;
        double worst = 0.0;
        for (long k : idx) worst = std::max(worst, std::abs(g.rho[k] - mobius_value(s, a, d.point(k))));
        return std::isfinite(worst) ? worst : kInf;
    };
    auto golden = [&](const Eigen::VectorXd& a, double tol) {
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double lo = -3.0, hi = 3.0;
        double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
        double f1 = objective(x1, a), f2 = objective(x2, a);
        while (hi - lo > tol) {
            if (f1 <= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - phi * (hi - lo);
                f1 = objective(x1, a);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + phi * (hi - lo);
                f2 = objective(x2, a);
            }
        }
        const double s = 0.5 * (lo + hi);
        return std::pair{s, objective(s, a)};
    };

    const Eigen::VectorXd north = north_of(d.n());
    auto [s0, f0] = golden(north, 1e-12);
    fit.s = s0;
    fit.axis = north;
    fit.residual = f0;
    if (d.chart() == ChartKind::radial || f0 <= residual_tol) {
        fit.converged = true;
        return fit;
    }

    // coarse axis scan on a Fibonacci lattice, then compass refinement
    auto axis_of = [](double th, double ph) {
        return Eigen::Vector3d(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
    };
    double best_th = 0.0, best_ph = 0.0, best_s = s0, best_f = f0;
    const int lattice = 200;
    for (int i = 0; i < lattice; ++i) {
        const double z = 1.0 - (i + 0.5) / lattice;  // upper hemisphere suffices: (s, a) ~ (-s, -a)
        const double th = std::acos(z);
        const double ph = std::fmod(i * M_PI * (3.0 - std::sqrt(5.0)), 2.0 * M_PI);
        const auto [s, f] = golden(axis_of(th, ph), 1e-4);
        if (f < best_f) {
            best_f = f;
            best_s = s;
            best_th = th;
            best_ph = ph;
        }
    }
    double step = 0.05;
    Eigen::Vector3d x(best_s, best_th, best_ph);
    double fx = objective(x(0), axis_of(x(1), x(2)));
    while (step > 1e-11) {
        bool improved = false;
        for (int c = 0; c < 3; ++c)
            for (double sign : {1.0, -1.0}) {
                Eigen::Vector3d y = x;
                y(c) += sign * step;
                if (std::abs(y(0)) > 3.0) continue;
                const double fy = objective(y(0), axis_of(y(1), y(2)));
                if (fy < fx) {
                    x = y;
                    fx = fy;
                    improved = true;
                }
            }
        if (!improved) step *= 0.5;
        if (fit.evaluations > 200000) break;
    }
    fit.s = x(0);
    fit.axis = axis_of(x(1), x(2));
    fit.residual = fx;
    fit.converged = step <= 1e-11 || fx <= residual_tol;
    return fit;
}

CheckReport round_orbit_check(const ConformalMetric& g, double r, double residual_tol) {
    const OrbitFit fit = fit_round_orbit(g, r, residual_tol);
    CheckReport rep;
    rep.name = "round_orbit";
    rep.metrics = {{"s", fit.s}, {"residual", fit.residual}, {"residual_tol", residual_tol},
                   {"evaluations", double(fit.evaluations)}};
    for (long c = 0; c < fit.axis.size(); ++c) rep.metrics["axis_" + std::to_string(c + 1)] = fit.axis(c);
    rep.info["converged"] = fit.converged ? "yes" : "no";
    if (!(fit.residual <= residual_tol)) {
        const auto& d = *g.rho.domain;
        long arg = 0;
        double worst = -1.0;
        for (long k = 0; k < d.size(); ++k) {
            if (!d.active(k)) continue;
            const double v = std::abs(g.rho[k] - mobius_value(fit.s, fit.axis, d.point(k)));
            if (v > worst) {
                worst = v;
                arg = k;
            }
        }
        rep.fail(d.witness(arg));
    }
    return rep;
}

CheckReport comparison_harness(const FieldGrid& rho1, const FieldGrid& rho2, const elliptic::EllipticData& data,
                               const ComparisonOptions& opt) {
    if (!same_grid(rho1, rho2)) throw InputError("comparison: fields live on different grids");
    const auto& d = *rho1.domain;
    CheckReport rep;
    rep.name = "comparison";
    rep.info["mode"] = opt.mode == ComparisonMode::smp ? "smp" : "hopf";
    auto reject = [&](const std::string& why, Witness w) {
        rep.info["status"] = "rejected";
        rep.info["reason"] = why;
        rep.fail(std::move(w));
        return rep;
    };

    for (long k = 0; k < d.size(); ++k)
        if (d.active(k) && !(rho1[k] > 0.0 && rho2[k] > 0.0)) return reject("fields must be positive", d.witness(k));

    const auto l1 = conformal::schouten_eigenvalues(ConformalMetric{rho1});
    const auto l2 = conformal::schouten_eigenvalues(ConformalMetric{rho2});
    double worst_order = kInf;
    long worst_k = -1;
    for (long k = 0; k < d.size(); ++k) {
        if (!d.active(k)) continue;
        const double v = data(l1.values[k]) - data(l2.values[k]);
        if (!(v >= worst_order)) {
            worst_order = v;
            worst_k = k;
        }
    }
    rep.metrics["min_f_difference"] = worst_order;
    if (!(worst_order >= -opt.f_tol)) return reject("f(lambda1) >= f(lambda2) violated", d.witness(worst_k));

    if (d.rings().empty()) return reject("domain has no boundary", Witness{-1, "global", {}});
    double min_bdry = kInf, max_bdry_abs = 0.0;
    std::vector<std::pair<const sphere::BoundaryRing*, size_t>> touching;
    for (const auto& ring : d.rings()) {
        const auto t1 = sphere::ring_trace(rho1, ring), t2 = sphere::ring_trace(rho2, ring);
        for (size_t q = 0; q < ring.points.size(); ++q) {
            const double diff = t1.value[q] - t2.value[q];
            min_bdry = std::min(min_bdry, diff);
            max_bdry_abs = std::max(max_bdry_abs, std::abs(diff));
            if (std::abs(diff) <= opt.tol && t1.normal_derivative[q] - t2.normal_derivative[q] <= opt.tol)
                touching.emplace_back(&ring, q);
        }
    }
    double min_int = kInf, max_abs = 0.0;
    long arg = -1;
    for (long k = 0; k < d.size(); ++k) {
        if (!d.active(k)) continue;
        const double v = rho1[k] - rho2[k];
        max_abs = std::max(max_abs, std::abs(v));
        if (v < min_int) {
            min_int = v;
            arg = k;
        }
    }
    rep.metrics["min_boundary_difference"] = min_bdry;
    rep.metrics["min_interior_difference"] = min_int;
    rep.metrics["sup_difference"] = std::max(max_abs, max_bdry_abs);

    if (opt.mode == ComparisonMode::smp) {
        if (!(min_bdry > opt.tol)) return reject("boundary ordering rho1 > rho2 is not strict", Witness{-1, "global", {}});
        rep.info["status"] = "checked";
        if (!(min_int > 0.0)) rep.fail(d.witness(arg));
        return rep;
    }
    if (!(std::min(min_int, min_bdry) >= -opt.tol)) return reject("rho1 >= rho2 violated", d.witness(arg));
    if (touching.empty()) {
        rep.info["status"] = "vacuous: no boundary contact with vanishing normal derivative";
        return rep;
    }
    rep.info["status"] = "checked";
    if (!(rep.metrics["sup_difference"] <= opt.tol))
        rep.fail(sphere::SphereDomain::ring_witness(*touching.front().first, touching.front().second));
    return rep;
}

}  // namespace horo::rigidity
