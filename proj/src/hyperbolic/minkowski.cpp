#include "horo/hyperbolic/minkowski.hpp"

#include "horo/error.hpp"

#include <cmath>

namespace horo::hyperbolic {

double minkowski_dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size() || a.size() < 2) throw InputError("minkowski_dot: dimension mismatch");
    return -a(0) * b(0) + a.tail(a.size() - 1).dot(b.tail(b.size() - 1));
}

Eigen::VectorXd null_lift(const Eigen::VectorXd& x) {
    Eigen::VectorXd v(x.size() + 1);
    v(0) = 1.0;
    v.tail(x.size()) = x;
    return v;
}

double hyperbolic_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
    const Eigen::VectorXd d = p - q;
    const double chord2 = std::max(0.0, minkowski_dot(d, d));
    return 2.0 * std::asinh(0.5 * std::sqrt(chord2));
}

Eigen::VectorXd to_ball(const Eigen::VectorXd& p) { return p.tail(p.size() - 1) / (1.0 + p(0)); }

Eigen::MatrixXd boost(double s, const Eigen::VectorXd& axis) {
    if (std::abs(s) > 20.0) throw InputError("boost parameter |s| must not exceed 20");
    if (std::abs(axis.norm() - 1.0) > 1e-10) throw InputError("boost axis must be a unit vector");
    const long m = axis.size() + 1;
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(m), a = Eigen::VectorXd::Zero(m);
    e0(0) = 1.0;
    a.tail(m - 1) = axis;
    Eigen::MatrixXd L = Eigen::MatrixXd::Identity(m, m);
    L += (std::cosh(s) - 1.0) * (e0 * e0.transpose() + a * a.transpose());
    L += std::sinh(s) * (e0 * a.transpose() + a * e0.transpose());
    return L;
}

Eigen::VectorXd hyperboloid_point(double d, const Eigen::VectorXd& u) {
    Eigen::VectorXd p(u.size() + 1);
    p(0) = std::cosh(d);
    p.tail(u.size()) = std::sinh(d) * u;
    return p;
}

GeodesicObject GeodesicObject::plane(Eigen::VectorXd unit_normal) {
    GeodesicObject o;
    o.kind = ObjectKind::plane;
    o.normal = std::move(unit_normal);
    o.validate();
    return o;
}

GeodesicObject GeodesicObject::horosphere(Eigen::VectorXd x, double t) {
    GeodesicObject o;
    o.kind = ObjectKind::horosphere;
    o.ideal = std::move(x);
    o.level = t;
    o.validate();
    return o;
}

GeodesicObject GeodesicObject::point(Eigen::VectorXd q) {
    GeodesicObject o;
    o.kind = ObjectKind::point;
    o.center = std::move(q);
    o.validate();
    return o;
}

GeodesicObject GeodesicObject::axis_line(const Eigen::VectorXd& axis) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(axis.size() + 1), v = u;
    u(0) = 1.0;
    v.tail(axis.size()) = axis.normalized();
    return line(u, v);
}

GeodesicObject GeodesicObject::line(Eigen::VectorXd u, Eigen::VectorXd v) {
    GeodesicObject o;
    o.kind = ObjectKind::line;
    o.u = std::move(u);
    o.v = std::move(v);
    o.validate();
    return o;
}

GeodesicObject GeodesicObject::cylinder(const GeodesicObject& line, double radius) {
    if (line.kind != ObjectKind::line) throw InputError("cylinder needs a geodesic line");
    if (!(radius >= 0.0)) throw InputError("cylinder radius must be non-negative");
    GeodesicObject o = line;
    o.kind = ObjectKind::cylinder;
    o.radius = radius;
    return o;
}

GeodesicObject GeodesicObject::plane_over_circle(const Eigen::VectorXd& c, double r) {
    if (!(r > 0.0 && r < M_PI)) throw InputError("circle radius must lie in (0, pi)");
    Eigen::VectorXd N(c.size() + 1);
    N(0) = std::cos(r);
    N.tail(c.size()) = c.normalized();
    return plane(N / std::sin(r));
}

void GeodesicObject::validate(double tol) const {
    switch (kind) {
        case ObjectKind::plane:
            if (std::abs(minkowski_dot(normal, normal) - 1.0) > tol) throw InputError("plane normal must satisfy <N,N> = 1");
            break;
        case ObjectKind::horosphere:
            if (std::abs(ideal.norm() - 1.0) > tol) throw InputError("horosphere point at infinity must be a unit vector");
            break;
        case ObjectKind::point:
            if (std::abs(minkowski_dot(center, center) + 1.0) > tol || center(0) <= 0.0)
                throw InputError("sphere center must lie on the hyperboloid");
            break;
        case ObjectKind::line:
        case ObjectKind::cylinder:
            if (std::abs(minkowski_dot(u, u) + 1.0) > tol || std::abs(minkowski_dot(v, v) - 1.0) > tol ||
                std::abs(minkowski_dot(u, v)) > tol)
                throw InputError("line basis must be timelike unit u, spacelike unit v, <u,v> = 0");
            break;
    }
}

std::string to_string(ObjectKind kind) {
    switch (kind) {
        case ObjectKind::plane: return "plane";
        case ObjectKind::horosphere: return "horosphere";
        case ObjectKind::point: return "point";
        case ObjectKind::line: return "line";
        case ObjectKind::cylinder: return "cylinder";
    }
    return "unknown";
}

double signed_distance(const Eigen::VectorXd& p, const GeodesicObject& obj) {
    switch (obj.kind) {
        case ObjectKind::plane: return std::asinh(minkowski_dot(p, obj.normal));
        case ObjectKind::horosphere: return std::log(-minkowski_dot(p, null_lift(obj.ideal))) + obj.level;
        case ObjectKind::point: return hyperbolic_distance(p, obj.center);
        case ObjectKind::line: {
            const double a = minkowski_dot(p, obj.u), b = minkowski_dot(p, obj.v);
            return std::acosh(std::sqrt(std::max(1.0, a * a - b * b)));
        }
        case ObjectKind::cylinder: break;
    }
    throw InputError("cylinders have no signed distance; use the axis line distance minus the radius");
}

}  // namespace horo::hyperbolic
