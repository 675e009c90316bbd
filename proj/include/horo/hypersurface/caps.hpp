#pragma once

#include "horo/check_report.hpp"
#include "horo/hyperbolic/embedding.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace horo::hypersurface {

// Boundary angle of the (kappa0, r) caps: arccos(-r / sqrt(1 + r^2)).
double cap_angle(double r);

// Geodesic sphere of curvature kappa0 centred at p = (cosh s, 0, ..., sinh s)
// cut by P(r) = {<p, E> = -sinh r}, E = e_{n+1}; the cap is the part on the
// convex side {<p, E> > -sinh r}.
struct CapModel {
    double kappa0 = 0.0, r = 0.0;
    double t = 0.0;       // sphere radius arccoth kappa0
    double offset = 0.0;  // signed distance s of the centre from P
    Eigen::VectorXd center, plane_normal;
    double alpha = 0.0;
    double inradius = 0.0;      // of the boundary circle inside P(r)
    double chart_radius = 0.0;  // Gauss-map radius of the boundary
};

// A boundary component lying on the equidistant {<p, N> = -sinh r} of the
// hyperplane with unit normal N (pointing into the domain). A ring with one
// point stands for the rotation orbit about the x_{n+1} axis.
struct EquidistantRing {
    std::string name;
    std::vector<Eigen::VectorXd> points;
    Eigen::VectorXd normal;
};

struct CapBuild {
    CapModel model;
    sphere::FieldGrid support;
    hyperbolic::HypersurfaceSample sample;
    EquidistantRing ring;
};

// Root-finds the centre offset so that the sphere meets P(r) at angle alpha(r),
// starting from the bracket [-bracket, bracket]. Throws InputError for
// kappa0 <= 1, r < 0 or a sphere missing P(r).
CapModel cap_model(double kappa0, double r, double bracket = 1.0, int n = 2);
// Sphere of curvature kappa0 at the given offset, cut by P(r), sampled on a
// polar (n = 2) or radial grid of its Gauss map.
CapBuild cap_with_offset(double kappa0, double r, double offset, int n = 2, int n_theta = 32, int n_phi = 32);
CapBuild build_cap(double kappa0, double r, int n = 2, int n_theta = 32, int n_phi = 32);

// Orientation sign making eta point towards `inside` on the majority of samples.
int orientation_sign(const hyperbolic::HypersurfaceSample& sigma, const Eigen::VectorXd& inside);

struct EquidistantSpec {
    std::string component;  // boundary ring of the sample
    Eigen::VectorXd normal;
};

// <sign * eta, nu> <= -r / sqrt(1 + r^2) + tol along each ring, nu the unit
// normal of P_i(r) pointing into the domain, and |<phi, N_i> + sinh r| <= tol.
CheckReport boundary_angle_check(const hyperbolic::HypersurfaceSample& sigma, const std::vector<EquidistantSpec>& rings,
                                 double r, double tol = 1e-8, int sign = 1);

// Largest geodesic ball of P_i(r) inside each ring; passes when some ring
// reaches the model inradius (minus tol).
CheckReport inradius_check(const std::vector<EquidistantRing>& rings, double r, double kappa0, double tol = 1e-6);
// Inradius of one ring inside its equidistant.
double ring_inradius(const EquidistantRing& ring, double r);

EquidistantRing ring_of(const hyperbolic::HypersurfaceSample& sigma, const std::string& component,
                        const Eigen::VectorXd& normal);

}  // namespace horo::hypersurface
