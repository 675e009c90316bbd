#pragma once

#include "horo/check_report.hpp"
#include "horo/elliptic/data.hpp"
#include "horo/hyperbolic/embedding.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace horo::hypersurface {

// Curvature function W on a cone Gamma* (Gamma*_n in Gamma* in Gamma*_1) of
// principal curvatures, normalized by W(kappa0, ..., kappa0) = 1.
struct WData {
    std::string family;  // mean | sigma_k | user
    std::string tag;
    int n = 0;
    double kappa0 = 0.0;
    std::function<double(const Eigen::VectorXd&)> W;
    std::function<bool(const Eigen::VectorXd&)> cone;

    double operator()(const Eigen::VectorXd& x) const { return W(x); }
    bool in_cone(const Eigen::VectorXd& x) const { return cone(x); }
};

bool in_gamma_star_1(const Eigen::VectorXd& x);  // sum x_i > n
bool in_gamma_star_n(const Eigen::VectorXd& x);  // every x_i > 1

// (sum x / n - 1) / (kappa0 - 1) on Gamma*_1.
WData make_mean_W(int n, double kappa0);
// (sigma_k(x - 1) / C(n,k))^{1/k} / (kappa0 - 1) on the component of
// {sigma_k(x - 1) > 0} through the diagonal.
WData make_sigma_k_W(int n, int k, double kappa0);
// Expression over x1..xn, s1..sn; cone = Gamma*_1 intersected with {W > 0}.
WData make_user_W(int n, double kappa0, const std::string& expr);
// "mean", "sigma_k:k=2", "user:<expr>"
WData parse_W_spec(const std::string& spec, int n, double kappa0);

// Sampled check of the six axioms plus W(1, ..., 1) = 0.
CheckReport validate_W(const WData& d, const elliptic::AxiomOptions& opt = {});

// W(sign * k(p)) >= 1 - tol with sign * k(p) in Gamma* at every sample; the
// curvatures are computed when the sample has none. sign = -1 flips the
// orientation.
CheckReport supersolution_W_check(const WData& d, const hyperbolic::HypersurfaceSample& sigma, double tol = 1e-6,
                                  int sign = 1);

}  // namespace horo::hypersurface
