#pragma once

#include "horo/check_report.hpp"
#include "horo/conformal/schouten.hpp"
#include "horo/elliptic/data.hpp"
#include "horo/hyperbolic/embedding.hpp"

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace horo::rigidity {

// Dilation law used throughout: lambda(g_t) = e^{-2t} lambda(g) for g_t = e^{2t} g.
inline constexpr const char* kScalingNote =
    "lambda(e^{2t} g) = e^{-2t} lambda(g), not e^{-t}; supersolution and model scale alike";

struct BoundarySpec {
    std::string component;  // ring name on the domain
    double r = 0.0;         // declared radius: boundary isometric to S^{n-1}(sin r), H >= cot r
};

struct Tolerances {
    double supersolution = 5e-3;
    double mean_curvature = 5e-3;
    double isometry = 1e-3;
    double orientation = 1e-8;
    double margin = 1e-3;  // admissibility margin below 1/2
};

struct RigidityScenario {
    conformal::ConformalMetric g;
    elliptic::EllipticData data;
    std::vector<BoundarySpec> boundaries;
    double t = 0.0;  // dilation; <= 0 picks one from the ladder
    Tolerances tol;
};

// Ladder tried by auto_dilation.
inline const std::vector<double> kDilationLadder{0.5, 1.0, 2.0, 4.0, 8.0};

struct Dilation {
    double t = 0.0;
    double lambda_max = 0.0;  // of g_t
    double margin = 0.0;      // 1/2 - lambda_max
    CheckReport embeddedness;
};

// Smallest ladder t with max lambda(g_t) <= 1/2 - margin and an embedded
// Sigma_t. Throws NumericalError when no rung works or lambda is not finite.
Dilation auto_dilation(const conformal::ConformalMetric& g, double margin = 1e-3);
// The same gates at a fixed t.
Dilation evaluate_dilation(const conformal::ConformalMetric& g, double t, double margin = 1e-3);

CheckReport check_hypotheses(const RigidityScenario& sc);

struct ContactOptions {
    double s_min = -3.0, s_max = 3.0;
    int scan = 121;             // coarse samples of the signed gap before bisection
    double bisection_tol = 1e-10;
    double touch_tol = 1e-12;   // signed gap at which the surfaces count as touching
    double contact_tol = -1.0;  // <= 0: 3 local cells of Sigma
};

struct ContactResult {
    double s0 = 0.0;
    std::string classification;  // interior | boundary | none-in-range
    double contact_tol = 0.0;
    double gap_at_contact = 0.0;  // unsigned min sample distance at s0
    Witness sigma_witness;
    Eigen::VectorXd sigma_point, cap_point;  // on Sigma and on T_{s0}(cap)
    bool sigma_on_boundary = false, cap_on_boundary = false;
    std::vector<std::pair<double, double>> gap_curve;  // (s, signed gap) on the scan
};

// Slides T_s(cap) up the axis through the north pole and finds the first s
// where it touches Sigma. The signed gap is min over Sigma samples inside the
// translated cap's half-space of d(p, gamma(s)) - t; Sigma lies outside the
// translated geodesic ball while it is positive.
ContactResult sliding_first_contact(const hyperbolic::HypersurfaceSample& sigma, const hyperbolic::CapSample& cap,
                                    const ContactOptions& opt = {});

// Boundary ring on the equator: d(p, axis line) >= radius - tol everywhere,
// |<eta, N_P>| <= tol where d rho / d nu vanishes, strict exterior elsewhere.
CheckReport claim_A_test(const hyperbolic::HypersurfaceSample& sigma, double radius, const Eigen::VectorXd& axis,
                         double tol = 1e-8);

// rho_t >= rho_hat pointwise (same grid).
CheckReport claim_B_support_order(const sphere::FieldGrid& rho_t, const sphere::FieldGrid& rho_hat,
                                  double tol = 1e-9);
// Support of the translated model sphere T_s(S_t) on the grid.
sphere::FieldGrid cap_support(const sphere::DomainPtr& domain, double t, double s,
                              const Eigen::VectorXd& axis);

struct OrbitFit {
    double s = 0.0;
    Eigen::VectorXd axis;
    double residual = 0.0;  // sup |rho - rho_{s,axis}|
    bool converged = false;
    long evaluations = 0;
};

// Best Mobius factor -ln(cosh s - sinh s <x, a>) in sup norm over s in [-3, 3];
// the axis is searched too unless the chart is radial or the north axis
// already fits to residual_tol.
OrbitFit fit_round_orbit(const conformal::ConformalMetric& g, double r, double residual_tol = 1e-6);
CheckReport round_orbit_check(const conformal::ConformalMetric& g, double r, double residual_tol = 1e-6);

enum class ComparisonMode { smp, hopf };

struct ComparisonOptions {
    ComparisonMode mode = ComparisonMode::smp;
    double tol = 1e-6;    // value / derivative tolerance
    double f_tol = 5e-3;  // tolerance of the ordering gate f(lambda1) >= f(lambda2)
};

// Consistency harness for the comparison principles. Rejected inputs (non-positive
// fields, f(lambda1) < f(lambda2), missing boundary ordering) fail with
// info["status"] = "rejected".
CheckReport comparison_harness(const sphere::FieldGrid& rho1, const sphere::FieldGrid& rho2,
                               const elliptic::EllipticData& d, const ComparisonOptions& opt = {});

}  // namespace horo::rigidity
