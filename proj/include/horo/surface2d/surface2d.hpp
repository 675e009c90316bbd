#pragma once

#include "horo/check_report.hpp"
#include "horo/conformal/schouten.hpp"
#include "horo/elliptic/data.hpp"

#include <string>
#include <vector>

namespace horo::surface2d {

inline constexpr const char* kMongeAmpereNote =
    "f = 2 sqrt(lambda1 lambda2) so that f(1,1) = 2; threshold 1/4 on e^{-4 rho} det(...)";

struct Surface2DScenario {
    conformal::ConformalMetric g;
    double c = 0.0;                 // lower bound for the boundary geodesic curvature
    std::vector<long> geodesic;     // closed mode: grid indices of the declared geodesic
    elliptic::EllipticData data = elliptic::make_sigma_k(2, 2);
};

struct Schouten2D {
    sphere::SymTensorField tensor;
    conformal::SchoutenEigenvalues lambda;
    std::vector<double> gauss_curvature;  // lambda1 + lambda2
};
Schouten2D schouten_2d(const conformal::ConformalMetric& g);

// min 2 sqrt(lambda1 lambda2) >= 1 - tol from the determinant form, with both
// eigenvalues positive everywhere.
CheckReport monge_ampere_check(const conformal::ConformalMetric& g, double tol = 5e-3);

// 2 pi chi = int K dA + int k ds, chi = 2 - (number of boundary circles).
CheckReport gauss_bonnet_audit(const Surface2DScenario& sc, double tol = 1e-4);

struct BoundaryGeodesic {
    std::string component;
    std::vector<double> k;   // -e^{-rho} d rho / d nu plus the g0 curvature of the circle
    std::vector<double> ds;  // g-arclength weight per sample
    double length = 0.0;
    double min_k = 0.0;
};
std::vector<BoundaryGeodesic> boundary_geodesic_data(const Surface2DScenario& sc);

struct ToponogovOptions {
    double tol = 1e-3;       // curvature, length and radius
    double f_tol = 5e-3;     // supersolution gate
    double fit_tol = 1e-6;   // Mobius residual certifying the round disc
};

// Disc mode for a polar cap, closed mode for a latlon sphere with a declared
// latitude geodesic (split into two discs with c = 0).
CheckReport toponogov_check(const Surface2DScenario& sc, const ToponogovOptions& opt = {});

// Radius of the round disc a Mobius factor maps the chart disc onto.
double mobius_disc_radius(const sphere::SphereDomain& d, double s, const Eigen::VectorXd& axis);

}  // namespace horo::surface2d
