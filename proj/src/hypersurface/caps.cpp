#include "horo/hypersurface/caps.hpp"

#include "horo/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace horo::hypersurface {

using hyperbolic::minkowski_dot;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Circle {
    double q0 = 0.0;        // time coordinate of the boundary circle
    double spatial = 0.0;   // its Euclidean radius about the axis
    double inradius = 0.0;  // intrinsic radius inside P(r)
};

Circle boundary_circle(double t, double r, double s) {
    Circle c;
    c.q0 = (std::cosh(t) - std::sinh(s) * std::sinh(r)) / std::cosh(s);
    const double y0 = c.q0 / std::cosh(r);
    if (!(y0 > 1.0)) throw InputError("the sphere does not cross the equidistant P(r)");
    c.spatial = std::sqrt(c.q0 * c.q0 - 1.0 - std::sinh(r) * std::sinh(r));
    c.inradius = std::cosh(r) * std::acosh(y0);
    return c;
}

Eigen::VectorXd tangent_part(const Eigen::VectorXd& w, const Eigen::VectorXd& at) {
    return w + minkowski_dot(w, at) * at;
}

void fill_geometry(CapModel& m, int n) {
    m.center = Eigen::VectorXd::Zero(n + 2);
    m.center(0) = std::cosh(m.offset);
    m.center(n + 1) = std::sinh(m.offset);
    m.plane_normal = Eigen::VectorXd::Unit(n + 2, n + 1);
    const Circle c = boundary_circle(m.t, m.r, m.offset);
    m.inradius = c.inradius;

    // Gauss-map latitude of the rim: x = psi / psi0 with psi = q - eta
    Eigen::VectorXd q = Eigen::VectorXd::Zero(n + 2);
    q(0) = c.q0;
    q(1) = c.spatial;
    q(n + 1) = -std::sinh(m.r);
    const Eigen::VectorXd eta = (m.center - std::cosh(m.t) * q) / std::sinh(m.t);
    const Eigen::VectorXd psi = q - eta;
    m.chart_radius = std::acos(std::clamp(psi(n + 1) / psi(0), -1.0, 1.0));
}

}  // namespace

double cap_angle(double r) {
    if (!(r >= 0.0)) throw InputError("equidistant level r must be >= 0");
    return std::acos(-r / std::sqrt(1.0 + r * r));
}

CapModel cap_model(double kappa0, double r, double bracket, int n) {
    if (!(kappa0 > 1.0) || !std::isfinite(kappa0)) throw InputError("cap needs kappa0 > 1");
    CapModel m;
    m.kappa0 = kappa0;
    m.r = r;
    m.alpha = cap_angle(r);
    m.t = hyperbolic::dilation_from_curvature(kappa0);
    const double target = std::cos(m.alpha);
    // cosine between the inward sphere normal and the normal of P(r) at the rim
    auto angle_gap = [&](double s) {
        return (std::sinh(s) + std::sinh(r) * std::cosh(m.t)) / (std::sinh(m.t) * std::cosh(r)) - target;
    };
    double lo = -std::abs(bracket), hi = std::abs(bracket);
    while (angle_gap(lo) > 0.0 && lo > -200.0) lo *= 2.0;
    while (angle_gap(hi) < 0.0 && hi < 200.0) hi *= 2.0;
    if (angle_gap(lo) > 0.0 || angle_gap(hi) < 0.0) throw NumericalError("cap offset root not bracketed");
    for (int it = 0; it < 400 && hi - lo > 1e-16 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (angle_gap(mid) < 0.0 ? lo : hi) = mid;
    }
    m.offset = 0.5 * (lo + hi);
    fill_geometry(m, n);
    return m;
}

CapBuild cap_with_offset(double kappa0, double r, double offset, int n, int n_theta, int n_phi) {
    if (!(kappa0 > 1.0) || !std::isfinite(kappa0)) throw InputError("cap needs kappa0 > 1");
    if (n < 2) throw InputError("cap dimension must be >= 2");
    CapBuild b;
    auto& m = b.model;
    m.kappa0 = kappa0;
    m.r = r;
    m.alpha = cap_angle(r);
    m.t = hyperbolic::dilation_from_curvature(kappa0);
    m.offset = offset;
    fill_geometry(m, n);

    sphere::DomainSpec spec;
    spec.n = n;
    spec.chart = n == 2 ? sphere::ChartKind::polar : sphere::ChartKind::radial;
    spec.r_max = m.chart_radius;
    spec.n_theta = n_theta;
    spec.n_phi = n_phi;
    const auto dom = sphere::build_grid(spec);
    b.support = sphere::FieldGrid::sample(
        dom, sphere::make_pullback(sphere::make_constant(m.t), offset, Eigen::VectorXd::Unit(n + 1, n)));
    b.sample = hyperbolic::embed(b.support);
    b.ring = ring_of(b.sample, "outer", m.plane_normal);
    return b;
}

CapBuild build_cap(double kappa0, double r, int n, int n_theta, int n_phi) {
    const CapModel m = cap_model(kappa0, r);
    return cap_with_offset(kappa0, r, m.offset, n, n_theta, n_phi);
}

int orientation_sign(const hyperbolic::HypersurfaceSample& sigma, const Eigen::VectorXd& inside) {
    long votes = 0;
    for (long k = 0; k < sigma.size(); ++k) {
        const double v = minkowski_dot(sigma.eta[k], tangent_part(inside, sigma.phi[k]));
        votes += v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    }
    return votes >= 0 ? 1 : -1;
}

CheckReport boundary_angle_check(const hyperbolic::HypersurfaceSample& sigma, const std::vector<EquidistantSpec>& rings,
                                 double r, double tol, int sign) {
    if (sign != 1 && sign != -1) throw InputError("orientation sign must be +1 or -1");
    if (!(r >= 0.0)) throw InputError("equidistant level r must be >= 0");
    const double bound = -r / std::sqrt(1.0 + r * r);
    CheckReport rep;
    rep.name = "boundary_angle";
    rep.metrics["bound"] = bound;
    double worst = -kInf;
    for (const auto& spec : rings) {
        if (std::abs(minkowski_dot(spec.normal, spec.normal) - 1.0) > 1e-9)
            throw InputError("equidistant normal must be a unit spacelike vector");
        const auto& b = sigma.ring(spec.component);
        const auto& ring = sigma.domain->ring(spec.component);
        CheckReport on, ang;
        on.name = "equidistant:" + spec.component;
        ang.name = "angle:" + spec.component;
        double off = 0.0, excess = -kInf;
        for (size_t q = 0; q < b.phi.size(); ++q) {
            const auto& p = b.phi[q];
            const double d = std::abs(minkowski_dot(p, spec.normal) + std::sinh(r)) / std::max(1.0, p(0));
            off = std::max(off, d);
            if (!(d <= tol)) on.fail(sphere::SphereDomain::ring_witness(ring, q));
            const Eigen::VectorXd nu = tangent_part(spec.normal, p);
            const double val = sign * minkowski_dot(b.eta[q], nu) / std::sqrt(minkowski_dot(nu, nu));
            excess = std::max(excess, val - bound);
            if (!(val <= bound + tol)) ang.fail(sphere::SphereDomain::ring_witness(ring, q));
        }
        on.metrics = {{"max_offset", off}, {"tol", tol}};
        ang.metrics = {{"max_excess", excess}, {"bound", bound}, {"tol", tol}};
        worst = std::max(worst, excess);
        rep.add_child(std::move(on));
        rep.add_child(std::move(ang));
    }
    rep.metrics["max_excess"] = worst;
    return rep;
}

EquidistantRing ring_of(const hyperbolic::HypersurfaceSample& sigma, const std::string& component,
                        const Eigen::VectorXd& normal) {
    return EquidistantRing{component, sigma.ring(component).phi, normal};
}

double ring_inradius(const EquidistantRing& ring, double r) {
    if (ring.points.empty()) throw InputError("ring '" + ring.name + "' has no points");
    const long dim = ring.normal.size();
    const auto& N = ring.normal;
    std::vector<Eigen::VectorXd> y;
    for (const auto& q : ring.points) y.push_back((q + std::sinh(r) * N) / std::cosh(r));

    if (ring.points.size() == 1) {
        Eigen::VectorXd c = Eigen::VectorXd::Unit(dim, 0);
        c += minkowski_dot(c, N) * N;
        c /= std::sqrt(-minkowski_dot(c, c));
        return std::cosh(r) * std::acosh(std::max(1.0, -minkowski_dot(y[0], c)));
    }
    if (dim != 4) throw InputError("inradius of sampled rings is implemented for surfaces (n = 2)");

    // Poincare disc of P about the normalized centroid
    Eigen::VectorXd o = Eigen::VectorXd::Zero(dim);
    for (const auto& p : y) o += p;
    o /= std::sqrt(-minkowski_dot(o, o));
    std::vector<Eigen::VectorXd> basis;
    for (long a = 1; a < dim && basis.size() < 2; ++a) {
        Eigen::VectorXd v = Eigen::VectorXd::Unit(dim, a);
        v = tangent_part(v, o);
        v -= minkowski_dot(v, N) * N;
        for (const auto& e : basis) v -= minkowski_dot(v, e) * e;
        const double nn = minkowski_dot(v, v);
        if (nn > 1e-8) basis.push_back(v / std::sqrt(nn));
    }
    if (basis.size() != 2) throw NumericalError("degenerate equidistant frame");
    auto to_disc = [&](const Eigen::VectorXd& p) -> Eigen::Vector2d {
        const double a = -minkowski_dot(p, o);
        return Eigen::Vector2d(minkowski_dot(p, basis[0]), minkowski_dot(p, basis[1])) / (1.0 + a);
    };
    auto from_disc = [&](const Eigen::Vector2d& z) {
        const double rr = z.squaredNorm();
        return Eigen::VectorXd(((1.0 + rr) * o + 2.0 * (z(0) * basis[0] + z(1) * basis[1])) / (1.0 - rr));
    };
    std::vector<Eigen::Vector2d> poly;
    for (const auto& p : y) poly.push_back(to_disc(p));
    auto inside = [&](const Eigen::Vector2d& z) {
        bool in = false;
        for (size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
            const auto &a = poly[i], &b = poly[j];
            if ((a(1) > z(1)) != (b(1) > z(1)) && z(0) < (b(0) - a(0)) * (z(1) - a(1)) / (b(1) - a(1)) + a(0))
                in = !in;
        }
        return in;
    };
    auto clearance = [&](const Eigen::Vector2d& z) {
        if (!(z.squaredNorm() < 1.0) || !inside(z)) return -kInf;
        const Eigen::VectorXd p = from_disc(z);
        double best = kInf;
        for (const auto& q : y) best = std::min(best, std::acosh(std::max(1.0, -minkowski_dot(p, q))));
        return best;
    };

    Eigen::Vector2d lo = poly[0], hi = poly[0];
    for (const auto& z : poly) {
        lo = lo.cwiseMin(z);
        hi = hi.cwiseMax(z);
    }
    const int grid = 120;
    const Eigen::Vector2d cell = (hi - lo) / grid;
    Eigen::Vector2d best_z = Eigen::Vector2d::Zero();
    double best = -kInf;
    for (int i = 0; i <= grid; ++i)
        for (int j = 0; j <= grid; ++j) {
            const Eigen::Vector2d z = lo + Eigen::Vector2d(i * cell(0), j * cell(1));
            const double f = clearance(z);
            if (f > best) {
                best = f;
                best_z = z;
            }
        }
    if (!std::isfinite(best)) throw NumericalError("ring '" + ring.name + "' encloses no sample point");
    // compass refinement of the max-min (concave near the optimum)
    double step = cell.maxCoeff();
    while (step > 1e-13) {
        bool improved = false;
        for (int k = 0; k < 8; ++k) {
            const double a = k * M_PI / 4;
            const Eigen::Vector2d z = best_z + step * Eigen::Vector2d(std::cos(a), std::sin(a));
            const double f = clearance(z);
            if (f > best) {
                best = f;
                best_z = z;
                improved = true;
            }
        }
        if (!improved) step *= 0.5;
    }
    return std::cosh(r) * best;
}

CheckReport inradius_check(const std::vector<EquidistantRing>& rings, double r, double kappa0, double tol) {
    if (rings.empty()) throw InputError("inradius check needs at least one ring");
    const double target = cap_model(kappa0, r).inradius;
    CheckReport rep;
    rep.name = "inradius";
    rep.metrics = {{"target", target}, {"tol", tol}};
    double best = -kInf;
    std::string which;
    for (const auto& ring : rings) {
        const double v = ring_inradius(ring, r);
        rep.metrics["inradius:" + ring.name] = v;
        if (v > best) {
            best = v;
            which = ring.name;
        }
    }
    rep.metrics["best"] = best;
    rep.info["best_component"] = which;
    if (!(best >= target - tol)) {
        const auto& p = rings.front().points.front();
        rep.fail(Witness{0, "ring:" + rings.front().name, std::vector<double>(p.data(), p.data() + p.size())});
    }
    return rep;
}

}  // namespace horo::hypersurface
