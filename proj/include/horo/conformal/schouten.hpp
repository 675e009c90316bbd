#pragma once

#include "horo/check_report.hpp"
#include "horo/sphere/field.hpp"
#include "horo/sphere/operators.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace horo::conformal {

using sphere::DiffOptions;
using sphere::FieldGrid;
using sphere::SymTensorField;

// g = e^{2 rho} g0 on the field's domain.
struct ConformalMetric {
    FieldGrid rho;
    DiffOptions diff{};

    int n() const { return rho.domain->n(); }
};

struct SchoutenEigenvalues {
    sphere::DomainPtr domain;
    std::vector<Eigen::VectorXd> values;  // ascending per point

    double max_entry() const;
    double min_entry() const;
};

// Sch_g = 1/2 g0 + d rho (x) d rho - Hess rho - 1/2 |d rho|^2 g0, in the g0 frame.
SymTensorField schouten_tensor(const ConformalMetric& g);

// Eigenvalues of g^{-1} Sch_g: e^{-2 rho} times the frame eigenvalues.
SchoutenEigenvalues schouten_eigenvalues(const ConformalMetric& g);
SchoutenEigenvalues schouten_eigenvalues(const ConformalMetric& g, const SymTensorField& sch);

// R = 2(n-1) sum lambda_i
FieldGrid scalar_curvature(const ConformalMetric& g);
FieldGrid scalar_curvature(const SchoutenEigenvalues& lambda);

struct BoundaryData {
    std::string component;
    double chart_radius = 0.0;  // radius of the boundary circle in g0
    std::vector<Eigen::VectorXd> points;
    std::vector<double> rho;
    std::vector<double> normal_derivative;  // along the inward g0 normal
    std::vector<double> mean_curvature;     // H_g, normalized by n - 1
    double umbilicity_defect = 0.0;
};

// cot with the exact zero at pi/2
double cot_exact(double r);

// H_g = e^{-rho} (cot r - d rho / d nu) on the named ring. With rho = 0 on the
// ring this is the familiar -d rho/d nu + cot r.
BoundaryData boundary_data(const ConformalMetric& g, const std::string& component);

// Boundary is round of radius sin(r): length 2 pi sin r for n = 2; for the
// radial chart e^{rho} sin(r_chart) = sin r.
CheckReport boundary_isometry_check(const ConformalMetric& g, const std::string& component, double r,
                                    double tol = 1e-3);

}  // namespace horo::conformal
