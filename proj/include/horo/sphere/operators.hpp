#pragma once

#include "horo/sphere/field.hpp"
#include "horo/sphere/stencil.hpp"

#include <Eigen/Dense>

#include <vector>

namespace horo::sphere {

// Per-point n-vectors in the chart's g0-orthonormal frame.
struct VectorField {
    DomainPtr domain;
    std::vector<Eigen::VectorXd> data;
};

// Per-point symmetric n x n matrices in the chart's g0-orthonormal frame.
struct SymTensorField {
    DomainPtr domain;
    std::vector<Eigen::MatrixXd> data;

    double max_asymmetry() const;
};

// analytic: closed-form ambient derivatives of the field's generator
// (finite-differenced ambient gradient when the generator has no Hessian);
// automatic picks analytic when a generator is attached.
enum class DerivativeSource { numeric, analytic, automatic };

struct DiffOptions {
    DerivativeSource source = DerivativeSource::automatic;
    int accuracy = 4;
};

VectorField gradient(const FieldGrid& rho, const DiffOptions& opt = {});
SymTensorField hessian(const FieldGrid& rho, const DiffOptions& opt = {});

// Both at once, sharing the stencil passes.
struct FieldJet {
    VectorField grad;
    SymTensorField hess;
};
FieldJet jet(const FieldGrid& rho, const DiffOptions& opt = {});

// Tangential gradient of an ambient function (frame coordinates).
Eigen::VectorXd frame_gradient(const SphereDomain& d, long k, const Eigen::VectorXd& ambient_grad);

// Numerical derivative of a per-point scalar along the g0 unit vector `dir`
// (tangent at grid point k); used for the ambient-coordinate derivatives of
// embedded samples.
struct TangentDerivatives {
    // d[c][k]: derivative along frame vector c at point k
    std::vector<std::vector<double>> d;
};
TangentDerivatives tangent_derivatives(const ChartDifferentiator& diff, const std::vector<double>& f,
                                       Parity p = Parity::even);

// Interpolated value, normal derivative of a field on a boundary ring. The
// normal derivative is along the ring's inward g0 normal.
struct RingTrace {
    std::vector<double> value;
    std::vector<double> normal_derivative;
    std::vector<Eigen::VectorXd> gradient_ambient;  // tangential gradient in R^{n+1}
};
RingTrace ring_trace(const FieldGrid& rho, const BoundaryRing& ring, const DiffOptions& opt = {});

}  // namespace horo::sphere
