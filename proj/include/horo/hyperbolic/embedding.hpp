#pragma once

#include "horo/check_report.hpp"
#include "horo/conformal/schouten.hpp"
#include "horo/hyperbolic/minkowski.hpp"
#include "horo/sphere/operators.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace horo::hyperbolic {

// Embedded boundary component: the ring's points pushed through the same
// representation formula.
struct BoundarySample {
    std::string name;
    double radius = 0.0;  // chart radius of the ring
    Eigen::VectorXd center;
    std::vector<Eigen::VectorXd> x, phi, eta, psi;
    std::vector<double> rho, normal_derivative;
};

// phi in H^{n+1}, eta in dS^{n+1}, psi = phi - eta null, parametrized by the
// Gauss map base point x. After translate() the base points move and the
// sample is no longer tied to the grid (on_grid = false).
struct HypersurfaceSample {
    sphere::DomainPtr domain;
    bool on_grid = true;
    std::vector<Eigen::VectorXd> x, phi, eta, psi, ball;
    std::vector<Eigen::VectorXd> curvatures;  // filled by with_curvatures()
    std::vector<BoundarySample> boundary;

    long size() const { return static_cast<long>(phi.size()); }
    const BoundarySample& ring(const std::string& name) const;
};

// phi, eta at a single base point from rho and its tangential gradient.
struct EmbeddedPoint {
    Eigen::VectorXd phi, eta;
};
EmbeddedPoint embed_point(const Eigen::VectorXd& x, double rho, const Eigen::VectorXd& grad_ambient);
EmbeddedPoint embed_point(const sphere::FieldGenerator& rho, const Eigen::VectorXd& x);

struct EmbedOptions {
    sphere::DiffOptions diff;
    // Refuse fields whose Schouten eigenvalues reach 1/2 - 1e-6 somewhere.
    bool require_admissible = true;
};

// Largest Schouten eigenvalue an embeddable field may have.
inline constexpr double kAdmissibleLambda = 0.5 - 1e-6;

HypersurfaceSample embed(const sphere::FieldGrid& rho_t, const EmbedOptions& opt = {});

// Poincare-ball image x + eps (f x + g grad rho) of the support rho + ln(1/eps)
// evaluated directly, with f = -2 (e^rho + eps) / D, g = 2 eps / D,
// D = (e^rho + eps)^2 + eps^2 |grad rho|^2.
Eigen::VectorXd ball_form_point(const Eigen::VectorXd& x, double rho, const Eigen::VectorXd& grad_ambient,
                                double eps);
std::vector<Eigen::VectorXd> embed_ball_form(const sphere::FieldGrid& rho, double eps,
                                             const sphere::DiffOptions& diff = {});

struct Recovered {
    std::vector<Eigen::VectorXd> x;  // Gauss map image psi / psi0
    std::vector<double> rho;         // ln psi0
    double gauss_map_defect = 0.0;   // max |psi / psi0 - (1, x)| against the stored base points
    std::optional<sphere::FieldGrid> field;  // when the sample lives on its grid
};
Recovered recover(const HypersurfaceSample& h);

// Sorted principal curvatures per point: eigenvalues of A with d eta = -A d phi,
// from tangential finite differences of the embedded coordinates. Throws
// NumericalError naming the point if the induced metric degenerates.
std::vector<Eigen::VectorXd> principal_curvatures(const HypersurfaceSample& h, int accuracy = 4);
HypersurfaceSample with_curvatures(HypersurfaceSample h, int accuracy = 4);

// lambda = 1/2 - 1 / (1 + k)
double schouten_from_curvature(double k);

HypersurfaceSample geodesic_sphere(double t, const sphere::DomainPtr& domain);

HypersurfaceSample translate(const HypersurfaceSample& h, double s, const Eigen::VectorXd& axis);
// Support of the translated hypersurface, rho(Phi_{-s} y) - ln(cosh s - sinh s <y, a>),
// on the same grid. Fields without a generator are interpolated and must keep
// Phi_{-s}(y) inside their domain.
conformal::ConformalMetric translate(const conformal::ConformalMetric& g, double s, const Eigen::VectorXd& axis);

struct FrameDefects {
    double hyperboloid = 0.0;  // |<phi,phi> + 1|
    double de_sitter = 0.0;    // |<eta,eta> - 1|
    double orthogonal = 0.0;   // |<phi,eta>|
    double null = 0.0;         // |<psi,psi>|
    double gauss_map = 0.0;    // |psi / psi0 - (1, x)|
    double incidence = 0.0;    // |<phi,(1,x)> + e^{-rho}|, rho = ln psi0
    double min_psi0 = 0.0;
    double max() const;
};
FrameDefects frame_defects(const HypersurfaceSample& h);
CheckReport frame_invariant_check(const HypersurfaceSample& h, double tol = 1e-9);

// Largest hyperbolic distance from each grid sample to its grid neighbours.
std::vector<double> local_cell_sizes(const HypersurfaceSample& h);

// Non-neighbouring samples (g0 distance > 3 grid spacings) must stay at least
// half a local cell apart in H^{n+1}. Large grids are strided down to about
// max_points samples.
CheckReport embeddedness_check(const HypersurfaceSample& h, long max_points = 2500);

// phi~_t over D(north, r) with boundary verified on P_r(arcsinh(-e^{-t} cot r))
// and on the horospheres H(x, t).
struct CapSample {
    double t = 0.0, r = 0.0;
    double level = 0.0;  // equidistant level of the boundary ring
    GeodesicObject plane;
    HypersurfaceSample sample;
    CheckReport verification;
};
CapSample cap_construction(double t, double r, int n = 2, int n_theta = 32, int n_phi = 32);
// Geodesic sphere radius with principal curvature kappa0 > 1: arccoth kappa0.
double dilation_from_curvature(double kappa0);

// CSV: i, j, x..., phi0..phi_{n+1}, ball..., k1..kn (curvatures when present).
void write_sample_csv(const HypersurfaceSample& h, const std::string& path);

}  // namespace horo::hyperbolic
