#pragma once

#include "horo/check_report.hpp"
#include "horo/conformal/schouten.hpp"

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace horo::elliptic {

// A curvature function f on a symmetric cone Gamma (Gamma_n in Gamma in Gamma_1).
struct EllipticData {
    std::string family;  // sigma_k | weighted_sum | min_normalized | user
    std::string tag;     // human-readable parameters
    int n = 0;
    bool concave = false;
    std::function<double(const Eigen::VectorXd&)> f;
    std::function<bool(const Eigen::VectorXd&)> cone;

    double operator()(const Eigen::VectorXd& x) const { return f(x); }
    bool in_cone(const Eigen::VectorXd& x) const { return cone(x); }
};

// Garding cone Gamma_k = {sigma_j > 0, j <= k}.
bool in_garding_cone(const Eigen::VectorXd& x, int k);

// f = 2 C(n,k)^{-1/k} sigma_k^{1/k} on Gamma_k.
EllipticData make_sigma_k(int n, int k);
// sum_k w_k f_{sigma_k}, weights positive and summing to 1; cone Gamma_{max k}.
EllipticData make_weighted_sum(int n, const std::map<int, double>& weights);
// min_k f_{sigma_k}; cone Gamma_{max k}.
EllipticData make_min_normalized(int n, const std::vector<int>& ks);
// Expression f over x1..xn, s1..sn with cone = {every inequality expression > 0}.
EllipticData make_user(int n, const std::string& f, const std::vector<std::string>& cone, bool concave);

// JSON file {version, n, f, cone[], concave}.
EllipticData load_user_file(const std::string& path);

// "sigma_k:k=2", "weighted_sum:1=0.5,2=0.5", "min_normalized:1,2", "file:<path>".
EllipticData parse_elliptic_spec(const std::string& spec, int n);

struct AxiomOptions {
    int samples = 10000;
    unsigned long long seed = 1;
    double tol = 1e-8;
};

// Random-sampling verification of the seven axioms.
CheckReport validate_axioms(const EllipticData& d, const AxiomOptions& opt = {});

// Central-difference gradient of f.
Eigen::VectorXd numeric_gradient(const EllipticData& d, const Eigen::VectorXd& x, double step = 1e-5);

// f(lambda(p)) >= 1 - tol and lambda(p) in Gamma at every point. The domain
// (optional) supplies witness coordinates.
CheckReport supersolution_check(const EllipticData& d, const std::vector<Eigen::VectorXd>& lambda, double tol,
                                const sphere::SphereDomain* domain = nullptr);
CheckReport supersolution_check(const EllipticData& d, const conformal::SchoutenEigenvalues& lambda,
                                double tol = 1e-8);

// f(lambda) <= R / (n(n-1)) + tol with R = 2(n-1) sum lambda; needs concave f.
CheckReport concavity_bound_check(const EllipticData& d, const std::vector<Eigen::VectorXd>& lambda, double tol,
                                  const sphere::SphereDomain* domain = nullptr);
CheckReport concavity_bound_check(const EllipticData& d, const conformal::SchoutenEigenvalues& lambda,
                                  double tol = 1e-10);

// Draws points of Gamma: half from the positive orthant, half by rejection
// around the diagonal.
std::vector<Eigen::VectorXd> sample_cone(const EllipticData& d, int count, unsigned long long seed);

}  // namespace horo::elliptic
