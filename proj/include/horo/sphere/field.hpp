#pragma once

#include "horo/sphere/domain.hpp"

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace horo::sphere {

// Analytic scalar function on S^n, given through an ambient extension F on
// R^{n+1}. Tangential gradient and covariant Hessian on the sphere follow from
// the ambient derivatives:
//   grad f = P dF,  Hess f(u, v) = D^2F(u, v) - (x . dF) <u, v>.
class FieldGenerator {
public:
    virtual ~FieldGenerator() = default;
    virtual double value(const Eigen::VectorXd& x) const = 0;
    virtual Eigen::VectorXd ambient_gradient(const Eigen::VectorXd& x) const = 0;
    // Empty when the generator has no closed-form second derivatives.
    virtual std::optional<Eigen::MatrixXd> ambient_hessian(const Eigen::VectorXd& x) const = 0;
    virtual std::string tag() const = 0;
};

using GeneratorPtr = std::shared_ptr<const FieldGenerator>;

GeneratorPtr make_constant(double c);
// rho(x) = a . x
GeneratorPtr make_linear(Eigen::VectorXd a);
// rho(x) = -ln(cosh s - sinh s <x, axis>): log conformal factor of the Mobius
// map induced by the boost of parameter -s along axis. Equals the horospherical
// support function of the translated unit-origin sphere minus its radius.
GeneratorPtr make_mobius(double s, Eigen::VectorXd axis);
// amp * (a . x + x^T B x + c (u . x)^3) with seeded coefficients.
GeneratorPtr make_random_smooth(int n, unsigned long long seed, double amp);
// amp * exp(-|x - center|^2 / width^2)
GeneratorPtr make_bump(Eigen::VectorXd center, double amp, double width);
// sum_k c_k (x_{n+1})^k: rotationally symmetric about the north pole.
GeneratorPtr make_radial_poly(std::vector<double> coeffs);
GeneratorPtr make_sum(std::vector<GeneratorPtr> terms);
// rho~(y) = rho(Phi_{-s}(y)) - ln(cosh s - sinh s <y, axis>): support function
// of the hypersurface translated by distance s along axis.
GeneratorPtr make_pullback(GeneratorPtr base, double s, Eigen::VectorXd axis);

// Mobius map on S^n induced by the boost T_s along axis (T_s(1,0) = gamma(s)).
Eigen::VectorXd mobius_map(const Eigen::VectorXd& x, double s, const Eigen::VectorXd& axis);

// Scalar samples on a domain (the conformal factor rho of g = e^{2 rho} g0).
struct FieldGrid {
    DomainPtr domain;
    std::vector<double> values;
    GeneratorPtr generator;  // null for fields read from files

    long size() const { return static_cast<long>(values.size()); }
    double operator[](long k) const { return values[k]; }

    static FieldGrid sample(DomainPtr domain, GeneratorPtr gen);
    static FieldGrid from_values(DomainPtr domain, std::vector<double> values);

    // rho + t, keeping the analytic generator in sync.
    FieldGrid shifted(double t) const;

    // Throws InputError / NumericalError when invariants are violated.
    void validate() const;
};

}  // namespace horo::sphere
