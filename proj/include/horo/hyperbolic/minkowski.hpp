#pragma once

#include <Eigen/Dense>

#include <string>

namespace horo::hyperbolic {

// Points of L^{n+2} as (x0, x1, ..., x_{n+1}); <a, b> = -a0 b0 + sum ai bi.
double minkowski_dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// (1, x) for x in S^n: the null direction of the ideal point x.
Eigen::VectorXd null_lift(const Eigen::VectorXd& x);

// Hyperbolic distance between hyperboloid points, stable for close points.
double hyperbolic_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

// Central projection onto the Poincare ball: (p1, ..., p_{n+1}) / (1 + p0).
Eigen::VectorXd to_ball(const Eigen::VectorXd& p);

// Hyperbolic translation T_s along the geodesic through (1, 0) in direction
// axis: T_s (1, 0) = (cosh s, sinh s axis).
Eigen::MatrixXd boost(double s, const Eigen::VectorXd& axis);

// (cosh d, sinh d u) for a unit u in R^{n+1}
Eigen::VectorXd hyperboloid_point(double d, const Eigen::VectorXd& u);

enum class ObjectKind { plane, horosphere, point, line, cylinder };

// Geodesic objects with the data their signed distance needs:
//   plane:      unit spacelike normal N (equidistant P(b) is level b)
//   horosphere: ideal point x and level t, H(x, t) = {<p, (1, x)> = -e^{-t}}
//   point:      hyperboloid point q (geodesic sphere = level set)
//   line:       timelike unit u, spacelike unit v with <u, v> = 0
//   cylinder:   line plus radius
struct GeodesicObject {
    ObjectKind kind = ObjectKind::plane;
    Eigen::VectorXd normal;
    Eigen::VectorXd ideal;
    double level = 0.0;
    Eigen::VectorXd center;
    Eigen::VectorXd u, v;
    double radius = 0.0;

    static GeodesicObject plane(Eigen::VectorXd unit_normal);
    static GeodesicObject horosphere(Eigen::VectorXd x, double t);
    static GeodesicObject point(Eigen::VectorXd q);
    // The geodesic through (1, 0) with ideal endpoints +-axis.
    static GeodesicObject axis_line(const Eigen::VectorXd& axis);
    static GeodesicObject line(Eigen::VectorXd u, Eigen::VectorXd v);
    static GeodesicObject cylinder(const GeodesicObject& line, double radius);
    // Totally geodesic hyperplane whose ideal boundary is the circle
    // {x : <x, c> = cos r}, normal pointing toward the side containing c.
    static GeodesicObject plane_over_circle(const Eigen::VectorXd& c, double r);

    void validate(double tol = 1e-10) const;
};

std::string to_string(ObjectKind kind);

// plane: arcsinh <p, N>; line: arccosh sqrt(<p,u>^2 - <p,v>^2);
// point: arccosh(-<p, q>); horosphere: ln(-<p, (1, x)>) + t (negative in the
// horoball). Cylinders have no signed distance of their own; use the line.
double signed_distance(const Eigen::VectorXd& p, const GeodesicObject& obj);

}  // namespace horo::hyperbolic
