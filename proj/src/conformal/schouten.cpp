#include "horo/conformal/schouten.hpp"

#include "horo/error.hpp"
#include "horo/sphere/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace horo::conformal {

double SchoutenEigenvalues::max_entry() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& v : values) m = std::max(m, v.maxCoeff());
    return m;
}

double SchoutenEigenvalues::min_entry() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& v : values) m = std::min(m, v.minCoeff());
    return m;
}

SymTensorField schouten_tensor(const ConformalMetric& g) {
    const auto j = sphere::jet(g.rho, g.diff);
    const int n = g.n();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    SymTensorField s{g.rho.domain, std::vector<Eigen::MatrixXd>(g.rho.size())};
    for (long k = 0; k < g.rho.size(); ++k) {
        const Eigen::VectorXd& d = j.grad.data[k];
        Eigen::MatrixXd m = 0.5 * id + d * d.transpose() - j.hess.data[k] - 0.5 * d.squaredNorm() * id;
        s.data[k] = 0.5 * (m + m.transpose());
    }
    return s;
}

SchoutenEigenvalues schouten_eigenvalues(const ConformalMetric& g, const SymTensorField& sch) {
    SchoutenEigenvalues out{g.rho.domain, std::vector<Eigen::VectorXd>(g.rho.size())};
    for (long k = 0; k < g.rho.size(); ++k) {
        if (!sch.data[k].allFinite())
            throw NumericalError("non-finite Schouten tensor at grid index " + std::to_string(k));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sch.data[k], Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw NumericalError("eigen-solver failure at grid index " + std::to_string(k));
        out.values[k] = std::exp(-2.0 * g.rho.values[k]) * es.eigenvalues();  // ascending
    }
    return out;
}

SchoutenEigenvalues schouten_eigenvalues(const ConformalMetric& g) {
    return schouten_eigenvalues(g, schouten_tensor(g));
}

FieldGrid scalar_curvature(const SchoutenEigenvalues& lambda) {
    FieldGrid r;
    r.domain = lambda.domain;
    r.values.resize(lambda.values.size());
    const int n = lambda.domain->n();
    for (size_t k = 0; k < lambda.values.size(); ++k) r.values[k] = 2.0 * (n - 1) * lambda.values[k].sum();
    return r;
}

FieldGrid scalar_curvature(const ConformalMetric& g) { return scalar_curvature(schouten_eigenvalues(g)); }

double cot_exact(double r) {
    if (r == M_PI / 2) return 0.0;
    return std::cos(r) / std::sin(r);
}

BoundaryData boundary_data(const ConformalMetric& g, const std::string& component) {
    const sphere::SphereDomain& d = *g.rho.domain;
    const auto& ring = d.ring(component);
    const auto tr = sphere::ring_trace(g.rho, ring, g.diff);
    BoundaryData b;
    b.component = component;
    // seen from the domain, the rim of an excluded ball D(p, e) is a circle of radius pi - e
    const bool hole = ring.name.rfind("ball:", 0) == 0;
    b.chart_radius = hole ? M_PI - ring.radius : ring.radius;
    b.points = ring.points;
    b.rho = tr.value;
    b.normal_derivative = tr.normal_derivative;
    const double c = hole ? -cot_exact(ring.radius) : cot_exact(ring.radius);
    b.mean_curvature.resize(ring.points.size());
    for (size_t q = 0; q < ring.points.size(); ++q)
        b.mean_curvature[q] = std::exp(-tr.value[q]) * (c - tr.normal_derivative[q]);
    // A geodesic sphere is umbilic for g0 and conformal changes keep it so;
    // the trace-free part of e^{rho}(cot r - d_nu rho) g0 vanishes identically.
    b.umbilicity_defect = 0.0;
    return b;
}

CheckReport boundary_isometry_check(const ConformalMetric& g, const std::string& component, double r,
                                    double tol) {
    CheckReport rep;
    rep.name = "boundary_isometry";
    rep.info["component"] = component;
    const sphere::SphereDomain& d = *g.rho.domain;
    const auto& ring = d.ring(component);
    const auto tr = sphere::ring_trace(g.rho, ring, g.diff);
    rep.metrics["target_radius"] = std::sin(r);
    if (d.n() == 2) {
        std::vector<double> one(ring.points.size(), 1.0);
        const double len =
            sphere::integrate_ring(d, ring, one, sphere::Measure::conformal, &tr.value);
        const double target = 2.0 * M_PI * std::sin(r);
        rep.metrics["length"] = len;
        rep.metrics["target_length"] = target;
        rep.metrics["defect"] = std::abs(len - target);
        if (!(std::abs(len - target) <= tol)) {
            // witness: the sample whose local radius e^rho sin(r_c) is furthest off
            size_t worst = 0;
            double wv = -1.0;
            for (size_t q = 0; q < tr.value.size(); ++q) {
                const double dev = std::abs(std::exp(tr.value[q]) * std::sin(ring.radius) - std::sin(r));
                if (dev > wv) wv = dev, worst = q;
            }
            rep.fail(sphere::SphereDomain::ring_witness(ring, worst));
        }
        return rep;
    }
    // rotationally symmetric: one ring sample
    double lo = tr.value[0], hi = tr.value[0];
    for (double v : tr.value) lo = std::min(lo, v), hi = std::max(hi, v);
    const double radius = std::exp(tr.value[0]) * std::sin(ring.radius);
    rep.metrics["boundary_rho"] = tr.value[0];
    rep.metrics["radius"] = radius;
    rep.metrics["defect"] = std::max(std::abs(radius - std::sin(r)), hi - lo);
    if (!(rep.metrics["defect"] <= tol)) rep.fail(sphere::SphereDomain::ring_witness(ring, 0));
    return rep;
}

}  // namespace horo::conformal
