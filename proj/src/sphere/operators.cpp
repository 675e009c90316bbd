#include "horo/sphere/operators.hpp"

#include "horo/error.hpp"
#include "horo/sphere/interpolate.hpp"

#include <cmath>

namespace horo::sphere {

namespace {

bool use_analytic(const FieldGrid& rho, const DiffOptions& opt) {
    switch (opt.source) {
        case DerivativeSource::numeric: return false;
        case DerivativeSource::analytic:
            if (!rho.generator) throw InputError("analytic derivatives requested for a field without generator");
            return true;
        case DerivativeSource::automatic: return static_cast<bool>(rho.generator);
    }
    return false;
}

// Ambient second derivative applied to the tangent frame: columns D^2F e_b.
Eigen::MatrixXd ambient_hessian_on_frame(const FieldGenerator& gen, const Eigen::VectorXd& x,
                                         const Eigen::MatrixXd& e) {
    if (auto h = gen.ambient_hessian(x)) return (*h) * e;
    const double step = 1e-5;
    Eigen::MatrixXd out(x.size(), e.cols());
    for (long b = 0; b < e.cols(); ++b)
        out.col(b) = (gen.ambient_gradient(x + step * e.col(b)) - gen.ambient_gradient(x - step * e.col(b))) /
                     (2.0 * step);
    return out;
}

FieldJet analytic_jet(const FieldGrid& rho) {
    const SphereDomain& d = *rho.domain;
    const int n = d.n();
    FieldJet j{{rho.domain, std::vector<Eigen::VectorXd>(d.size())},
               {rho.domain, std::vector<Eigen::MatrixXd>(d.size())}};
    for (long k = 0; k < d.size(); ++k) {
        const Eigen::VectorXd& x = d.point(k);
        const Eigen::MatrixXd& e = d.frame(k);
        const Eigen::VectorXd g = rho.generator->ambient_gradient(x);
        j.grad.data[k] = e.transpose() * g;
        Eigen::MatrixXd h = e.transpose() * ambient_hessian_on_frame(*rho.generator, x, e);
        h = 0.5 * (h + h.transpose()).eval();
        h -= x.dot(g) * Eigen::MatrixXd::Identity(n, n);
        j.hess.data[k] = h;
    }
    return j;
}

FieldJet numeric_jet(const FieldGrid& rho, int accuracy) {
    const SphereDomain& d = *rho.domain;
    const int n = d.n();
    ChartDifferentiator diff(rho.domain, accuracy);
    FieldJet j{{rho.domain, std::vector<Eigen::VectorXd>(d.size())},
               {rho.domain, std::vector<Eigen::MatrixXd>(d.size())}};
    const auto ft = diff.d_theta(rho.values);
    const auto ftt = diff.d_theta2(rho.values);
    if (d.chart() == ChartKind::radial) {
        for (long k = 0; k < d.size(); ++k) {
            const double th = d.theta(d.ring_of(k));
            Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
            g(0) = ft[k];
            Eigen::MatrixXd h = (std::cos(th) / std::sin(th) * ft[k]) * Eigen::MatrixXd::Identity(n, n);
            h(0, 0) = ftt[k];
            j.grad.data[k] = g;
            j.hess.data[k] = h;
        }
        return j;
    }
    const auto fp = diff.d_phi(rho.values);
    const auto fpp = diff.d_phi2(rho.values);
    const auto ftp = diff.d_theta(fp);
    for (long k = 0; k < d.size(); ++k) {
        const double th = d.theta(d.ring_of(k));
        const double s = std::sin(th), cot = std::cos(th) / s;
        Eigen::Vector2d g(ft[k], fp[k] / s);
        Eigen::Matrix2d h;
        h(0, 0) = ftt[k];
        h(0, 1) = h(1, 0) = (ftp[k] - cot * fp[k]) / s;
        h(1, 1) = fpp[k] / (s * s) + cot * ft[k];
        j.grad.data[k] = g;
        j.hess.data[k] = h;
    }
    return j;
}

}  // namespace

double SymTensorField::max_asymmetry() const {
    double worst = 0.0;
    for (const auto& m : data) worst = std::max(worst, (m - m.transpose()).cwiseAbs().maxCoeff());
    return worst;
}

FieldJet jet(const FieldGrid& rho, const DiffOptions& opt) {
    rho.validate();
    return use_analytic(rho, opt) ? analytic_jet(rho) : numeric_jet(rho, opt.accuracy);
}

VectorField gradient(const FieldGrid& rho, const DiffOptions& opt) { return jet(rho, opt).grad; }
SymTensorField hessian(const FieldGrid& rho, const DiffOptions& opt) { return jet(rho, opt).hess; }

Eigen::VectorXd frame_gradient(const SphereDomain& d, long k, const Eigen::VectorXd& ambient_grad) {
    return d.frame(k).transpose() * ambient_grad;
}

TangentDerivatives tangent_derivatives(const ChartDifferentiator& diff, const std::vector<double>& f, Parity p) {
    const SphereDomain& d = diff.domain();
    TangentDerivatives out;
    out.d.push_back(diff.d_theta(f, p));
    if (d.chart() == ChartKind::radial) return out;
    auto fp = diff.d_phi(f);
    for (long k = 0; k < d.size(); ++k) fp[k] /= std::sin(d.theta(d.ring_of(k)));
    out.d.push_back(std::move(fp));
    return out;
}

RingTrace ring_trace(const FieldGrid& rho, const BoundaryRing& ring, const DiffOptions& opt) {
    const SphereDomain& d = *rho.domain;
    RingTrace tr;
    const size_t m = ring.points.size();
    tr.value.resize(m);
    tr.normal_derivative.resize(m);
    tr.gradient_ambient.resize(m);
    if (use_analytic(rho, opt)) {
        for (size_t q = 0; q < m; ++q) {
            const Eigen::VectorXd& x = ring.points[q];
            Eigen::VectorXd g = rho.generator->ambient_gradient(x);
            g -= x.dot(g) * x;
            tr.value[q] = rho.generator->value(x);
            tr.gradient_ambient[q] = g;
            tr.normal_derivative[q] = g.dot(ring.inward[q]);
        }
        return tr;
    }
    const FieldJet j = numeric_jet(rho, opt.accuracy);
    if (ring.grid_aligned()) {
        for (size_t q = 0; q < m; ++q) {
            const long k = ring.grid_index[q];
            const Eigen::VectorXd g = d.frame(k) * j.grad.data[k];
            tr.value[q] = rho.values[k];
            tr.gradient_ambient[q] = g;
            tr.normal_derivative[q] = g.dot(ring.inward[q]);
        }
        return tr;
    }
    // Off-grid ring: interpolate the value and each ambient gradient component.
    const int amb = d.n() + 1;
    std::vector<std::vector<double>> comp(amb, std::vector<double>(d.size()));
    for (long k = 0; k < d.size(); ++k) {
        const Eigen::VectorXd g = d.frame(k) * j.grad.data[k];
        for (int c = 0; c < amb; ++c) comp[c][k] = g(c);
    }
    for (size_t q = 0; q < m; ++q) {
        const Eigen::VectorXd& x = ring.points[q];
        tr.value[q] = interpolate(d, rho.values, x);
        Eigen::VectorXd g(amb);
        for (int c = 0; c < amb; ++c) g(c) = interpolate(d, comp[c], x);
        g -= x.dot(g) * x;
        tr.gradient_ambient[q] = g;
        tr.normal_derivative[q] = g.dot(ring.inward[q]);
    }
    return tr;
}

}  // namespace horo::sphere
