#include "horo/surface2d/surface2d.hpp"

#include "horo/error.hpp"
#include "horo/rigidity/rigidity.hpp"
#include "horo/sphere/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace horo::surface2d {

using conformal::ConformalMetric;
using sphere::ChartKind;
using sphere::FieldGrid;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_2d(const ConformalMetric& g) {
    if (!g.rho.domain || g.n() != 2) throw InputError("surface checks need n = 2");
}

double arccot(double c) { return std::atan2(1.0, c); }

// k = e^{-rho} (cot r - d rho / d nu) on a circle of chart radius r.
BoundaryGeodesic circle_data(const ConformalMetric& g, const sphere::BoundaryRing& ring, double cot_r) {
    const auto& d = *g.rho.domain;
    const auto tr = sphere::ring_trace(g.rho, ring, g.diff);
    const auto w = sphere::ring_weights(d, ring);
    BoundaryGeodesic b;
    b.component = ring.name;
    b.min_k = kInf;
    for (size_t q = 0; q < ring.points.size(); ++q) {
        b.k.push_back(std::exp(-tr.value[q]) * (cot_r - tr.normal_derivative[q]));
        b.ds.push_back(w[q] * std::exp(tr.value[q]));
        b.length += b.ds.back();
        b.min_k = std::min(b.min_k, b.k.back());
    }
    return b;
}

CheckReport disc_mode(const ConformalMetric& g, double c, const elliptic::EllipticData& data,
                      const ToponogovOptions& opt) {
    const auto& d = *g.rho.domain;
    if (d.chart() != ChartKind::polar || !d.spec().excluded.empty())
        throw InputError("disc mode needs a polar cap without excluded balls");
    CheckReport rep;
    rep.name = "disc";
    rep.metrics["c"] = c;

    rep.add_child(elliptic::supersolution_check(data, conformal::schouten_eigenvalues(g), opt.f_tol));

    const auto& ring = d.ring("outer");
    const auto b = circle_data(g, ring, conformal::cot_exact(ring.radius));

    CheckReport kc;
    kc.name = "geodesic_curvature";
    kc.metrics = {{"min_k", b.min_k}, {"c", c}, {"tol", opt.tol}};
    for (size_t q = 0; q < b.k.size(); ++q)
        if (!(b.k[q] >= c - opt.tol)) kc.fail(sphere::SphereDomain::ring_witness(ring, q));
    rep.add_child(std::move(kc));

    CheckReport lc;
    lc.name = "boundary_length";
    const double target = 2.0 * M_PI / std::sqrt(1.0 + c * c);
    lc.metrics = {{"length", b.length}, {"target", target}, {"tol", opt.tol}};
    if (!(std::abs(b.length - target) <= opt.tol)) lc.fail(Witness{-1, "boundary:outer", {}});
    rep.add_child(std::move(lc));

    // conclusion: rho is a Mobius factor, i.e. (D, g) is a round disc
    const double radius = arccot(c);
    const auto fit = rigidity::fit_round_orbit(g, radius, opt.fit_tol);
    CheckReport rc;
    rc.name = "round_disc";
    const double recovered = mobius_disc_radius(d, fit.s, fit.axis);
    rc.metrics = {{"fit_residual", fit.residual}, {"fit_s", fit.s}, {"recovered_radius", recovered},
                  {"target_radius", radius}, {"tol", opt.tol}};
    if (!(fit.residual <= opt.fit_tol && std::abs(recovered - radius) <= opt.tol))
        rc.fail(Witness{-1, "global", {}});
    rep.add_child(std::move(rc));
    rep.metrics["recovered_radius"] = recovered;
    rep.info["conclusion"] = rep.passed ? "isometric to a round disc of radius arccot(c)" : "not certified";
    return rep;
}

// Latitude ring index of a declared closed curve; throws unless it runs once
// around a single grid ring.
int declared_ring(const sphere::SphereDomain& d, const std::vector<long>& curve) {
    const int m = d.n_phi();
    if (curve.size() != static_cast<size_t>(m))
        throw InputError("declared geodesic must visit every column of one latitude ring exactly once");
    std::set<int> cols;
    const int i = d.ring_of(curve.front());
    for (size_t q = 0; q < curve.size(); ++q) {
        if (curve[q] < 0 || curve[q] >= d.size()) throw InputError("declared geodesic index out of range");
        if (d.ring_of(curve[q]) != i) throw InputError("declared geodesic must lie on a single latitude ring");
        cols.insert(d.column_of(curve[q]));
        const int step = (d.column_of(curve[(q + 1) % curve.size()]) - d.column_of(curve[q]) + m) % m;
        if (step != 1 && step != m - 1) throw InputError("declared geodesic is not a closed simple curve");
    }
    if (static_cast<int>(cols.size()) != m) throw InputError("declared geodesic is not simple");
    return i;
}

ConformalMetric half(const ConformalMetric& g, int i, bool north) {
    const auto& d = *g.rho.domain;
    const int nt = d.n_theta(), m = d.n_phi();
    sphere::DomainSpec spec;
    spec.chart = ChartKind::polar;
    spec.n_theta = north ? i + 1 : nt - i;
    spec.n_phi = m;
    spec.r_max = north ? d.theta(i) : M_PI - d.theta(i);
    auto dom = sphere::build_grid(spec);
    std::vector<double> v(dom->size());
    for (int r = 0; r < spec.n_theta; ++r)
        for (int j = 0; j < m; ++j) v[dom->index(r, j)] = g.rho[d.index(north ? r : nt - 1 - r, j)];
    ConformalMetric h{FieldGrid::from_values(dom, std::move(v)), g.diff};
    h.diff.source = sphere::DerivativeSource::numeric;
    return h;
}

}  // namespace

Schouten2D schouten_2d(const ConformalMetric& g) {
    require_2d(g);
    Schouten2D s;
    s.tensor = conformal::schouten_tensor(g);
    s.lambda = conformal::schouten_eigenvalues(g, s.tensor);
    for (const auto& l : s.lambda.values) s.gauss_curvature.push_back(l.sum());
    return s;
}

CheckReport monge_ampere_check(const ConformalMetric& g, double tol) {
    require_2d(g);
    const auto& d = *g.rho.domain;
    const auto j = sphere::jet(g.rho, g.diff);
    CheckReport rep;
    rep.name = "monge_ampere";
    rep.info["normalization"] = kMongeAmpereNote;
    double fmin = kInf, raw_min = kInf;
    long at = -1, cone_bad = 0;
    for (long k = 0; k < d.size(); ++k) {
        if (!d.active(k)) continue;
        const Eigen::VectorXd& gr = j.grad.data[k];
        const Eigen::MatrixXd m = j.hess.data[k] - gr * gr.transpose() -
                                  0.5 * (1.0 - gr.squaredNorm()) * Eigen::MatrixXd::Identity(2, 2);
        const double w = std::exp(-2.0 * g.rho[k]);
        // lambda in Gamma_2 iff -m is positive definite
        if (!(m.trace() < 0.0 && m.determinant() > 0.0)) {
            ++cone_bad;
            rep.fail(d.witness(k));
            continue;
        }
        const double raw = w * w * m.determinant();
        const double f = 2.0 * std::sqrt(raw);
        raw_min = std::min(raw_min, raw);
        if (f < fmin) {
            fmin = f;
            at = k;
        }
    }
    rep.metrics = {{"min_f", fmin}, {"min_det", raw_min}, {"cone_violations", double(cone_bad)}, {"tol", tol}};
    if (at >= 0 && !(fmin >= 1.0 - tol)) rep.fail(d.witness(at));
    return rep;
}

CheckReport gauss_bonnet_audit(const Surface2DScenario& sc, double tol) {
    require_2d(sc.g);
    const auto& d = *sc.g.rho.domain;
    const auto s = schouten_2d(sc.g);
    const double area_term = sphere::integrate(d, s.gauss_curvature, sphere::Measure::conformal, &sc.g.rho);
    double boundary_term = 0.0;
    for (const auto& b : boundary_geodesic_data(sc))
        for (size_t q = 0; q < b.k.size(); ++q) boundary_term += b.k[q] * b.ds[q];
    const double chi = 2.0 - static_cast<double>(d.rings().size());
    const double residual = 2.0 * M_PI * chi - (area_term + boundary_term);
    CheckReport rep;
    rep.name = "gauss_bonnet";
    rep.metrics = {{"chi", chi}, {"int_K", area_term}, {"int_k", boundary_term}, {"residual", residual}, {"tol", tol}};
    if (!(std::abs(residual) <= tol)) rep.fail(Witness{-1, "global", {}});
    return rep;
}

std::vector<BoundaryGeodesic> boundary_geodesic_data(const Surface2DScenario& sc) {
    require_2d(sc.g);
    std::vector<BoundaryGeodesic> out;
    for (const auto& ring : sc.g.rho.domain->rings()) {
        const bool hole = ring.name.rfind("ball:", 0) == 0;
        const double c = hole ? -conformal::cot_exact(ring.radius) : conformal::cot_exact(ring.radius);
        out.push_back(circle_data(sc.g, ring, c));
    }
    return out;
}

double mobius_disc_radius(const sphere::SphereDomain& d, double s, const Eigen::VectorXd& axis) {
    // the factor -ln(cosh s - sinh s <x, a>) is the one of x -> mobius_map(x, -s, a)
    const auto& ring = d.ring("outer");
    const long m = static_cast<long>(ring.points.size());
    Eigen::MatrixXd pts(m, 3);
    for (long q = 0; q < m; ++q) pts.row(q) = sphere::mobius_map(ring.points[q], -s, axis).transpose();
    const Eigen::RowVector3d mean = pts.colwise().mean();
    const Eigen::MatrixXd centered = pts.rowwise() - mean;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeFullV);
    Eigen::Vector3d normal = svd.matrixV().col(2);
    double offset = normal.dot(mean.transpose());
    const Eigen::VectorXd inside = sphere::mobius_map(Eigen::Vector3d(0, 0, 1), -s, axis);
    if (normal.dot(inside) < offset) {
        normal = -normal;
        offset = -offset;
    }
    return std::acos(std::clamp(offset, -1.0, 1.0));
}

CheckReport toponogov_check(const Surface2DScenario& sc, const ToponogovOptions& opt) {
    require_2d(sc.g);
    if (!(sc.c >= 0.0)) throw InputError("toponogov: c must be >= 0");
    const auto& d = *sc.g.rho.domain;
    if (d.chart() == ChartKind::polar) {
        CheckReport rep = disc_mode(sc.g, sc.c, sc.data, opt);
        rep.name = "toponogov";
        rep.info["mode"] = "disc";
        return rep;
    }
    if (d.chart() != ChartKind::latlon) throw InputError("toponogov needs a polar disc or a latlon sphere");
    if (sc.geodesic.empty()) throw InputError("closed mode needs a declared geodesic");
    const int i = declared_ring(d, sc.geodesic);

    CheckReport rep;
    rep.name = "toponogov";
    rep.info["mode"] = "closed";
    rep.add_child(elliptic::supersolution_check(sc.data, conformal::schouten_eigenvalues(sc.g), opt.f_tol));

    const auto ring = d.latitude_ring(i);
    const auto b = circle_data(sc.g, ring, conformal::cot_exact(d.theta(i)));
    CheckReport geo;
    geo.name = "declared_geodesic";
    const double ktol = 5.0 * d.spacing();
    double max_k = 0.0;
    for (size_t q = 0; q < b.k.size(); ++q) {
        max_k = std::max(max_k, std::abs(b.k[q]));
        if (!(std::abs(b.k[q]) <= ktol)) geo.fail(d.witness(d.index(i, static_cast<int>(q))));
    }
    geo.metrics = {{"ring", double(i)}, {"max_abs_k", max_k}, {"k_tol", ktol}, {"length", b.length},
                   {"target_length", 2.0 * M_PI}, {"tol", opt.tol}};
    if (!(std::abs(b.length - 2.0 * M_PI) <= opt.tol)) geo.fail(d.witness(d.index(i, 0)));
    rep.add_child(std::move(geo));

    for (bool north : {true, false}) {
        CheckReport h = disc_mode(half(sc.g, i, north), 0.0, sc.data, opt);
        h.name = north ? "north_half" : "south_half";
        rep.add_child(std::move(h));
    }
    rep.info["conclusion"] = rep.passed ? "isometric to the round sphere" : "not certified";
    return rep;
}

}  // namespace horo::surface2d
