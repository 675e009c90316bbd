#include "horo/sphere/domain.hpp"

#include "horo/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace horo::sphere {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd polar_point(double theta, double phi) {
    Eigen::VectorXd x(3);
    x << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta);
    return x;
}

Eigen::MatrixXd polar_frame(double theta, double phi) {
    Eigen::MatrixXd e(3, 2);
    e.col(0) << std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta);
    e.col(1) << -std::sin(phi), std::cos(phi), 0.0;
    return e;
}

// Orthonormal basis of the tangent space at unit vector p (columns).
Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& p) {
    const long m = p.size();
    Eigen::MatrixXd basis(m, m - 1);
    long filled = 0;
    for (long c = 0; c < m && filled < m - 1; ++c) {
        Eigen::VectorXd v = Eigen::VectorXd::Unit(m, c);
        v -= v.dot(p) * p;
        for (long b = 0; b < filled; ++b) v -= v.dot(basis.col(b)) * basis.col(b);
        if (v.norm() > 1e-6) basis.col(filled++) = v.normalized();
    }
    return basis;
}

}  // namespace

std::string to_string(ChartKind kind) {
    switch (kind) {
        case ChartKind::polar: return "polar";
        case ChartKind::latlon: return "latlon";
        case ChartKind::radial: return "radial";
    }
    return "unknown";
}

ChartKind chart_from_string(const std::string& name) {
    if (name == "polar") return ChartKind::polar;
    if (name == "latlon") return ChartKind::latlon;
    if (name == "radial") return ChartKind::radial;
    throw InputError("unknown chart kind '" + name + "'");
}

double geodesic_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    // atan2 form is accurate for both tiny and near-antipodal separations.
    const double s = (a - b).norm();
    const double c = (a + b).norm();
    return 2.0 * std::atan2(s, c);
}

double unit_sphere_volume(int m) {
    // |S^m| = 2 pi^{(m+1)/2} / Gamma((m+1)/2)
    return 2.0 * std::pow(kPi, 0.5 * (m + 1)) / std::tgamma(0.5 * (m + 1));
}

double SphereDomain::theta_extent() const {
    return spec_.chart == ChartKind::latlon ? kPi : spec_.r_max;
}

double SphereDomain::spacing() const {
    if (spec_.chart == ChartKind::radial) return h_theta_;
    return std::max(h_theta_, h_phi_);
}

Witness SphereDomain::witness(long k) const {
    Witness w;
    w.index = k;
    w.location = has_outer_boundary() && ring_of(k) == n_theta() - 1 ? "boundary:outer" : "interior";
    const auto& x = points_[k];
    w.coords.assign(x.data(), x.data() + x.size());
    return w;
}

Witness SphereDomain::ring_witness(const BoundaryRing& ring, size_t q) {
    Witness w;
    w.index = ring.grid_aligned() ? ring.grid_index[q] : static_cast<long>(q);
    w.location = "boundary:" + ring.name;
    const auto& x = ring.points[q];
    w.coords.assign(x.data(), x.data() + x.size());
    return w;
}

const BoundaryRing& SphereDomain::ring(const std::string& name) const {
    for (const auto& r : rings_)
        if (r.name == name) return r;
    throw InputError("unknown boundary component '" + name + "'");
}

BoundaryRing SphereDomain::latitude_ring(int i) const {
    if (spec_.chart == ChartKind::radial) throw InputError("latitude rings need a 2D chart");
    if (i < 0 || i >= n_theta()) throw InputError("latitude ring index out of range");
    BoundaryRing ring;
    ring.name = "ring:" + std::to_string(i);
    ring.center = Eigen::VectorXd::Unit(3, 2);
    ring.radius = theta(i);
    for (int j = 0; j < n_phi(); ++j) {
        const long k = index(i, j);
        ring.points.push_back(points_[k]);
        ring.inward.push_back(-frames_[k].col(0));
        ring.grid_index.push_back(k);
    }
    return ring;
}

std::shared_ptr<const SphereDomain> SphereDomain::build(const DomainSpec& spec) {
    if (spec.n < 2) throw InputError("dimension n must be >= 2");
    if (spec.chart != ChartKind::radial && spec.n != 2)
        throw InputError("polar and latlon charts are two-dimensional; use the radial chart for n >= 3");
    if (spec.n_theta < 8) throw InputError("resolution too small: n_theta must be >= 8");
    if (spec.chart != ChartKind::radial) {
        if (spec.n_phi < 8) throw InputError("resolution too small: n_phi must be >= 8");
        if (spec.n_phi % 2 != 0) throw InputError("n_phi must be even (antipodal pole continuation)");
    }
    if (spec.chart != ChartKind::latlon && !(spec.r_max > 0.0 && spec.r_max < kPi))
        throw InputError("radius out of range: r_max must lie in (0, pi)");
    if (spec.chart == ChartKind::radial && !spec.excluded.empty())
        throw InputError("excluded balls are not supported on the radial chart");

    auto dom = std::shared_ptr<SphereDomain>(new SphereDomain());
    dom->spec_ = spec;
    const int nt = spec.n_theta;
    if (spec.chart == ChartKind::latlon) {
        dom->h_theta_ = kPi / nt;
    } else {
        dom->h_theta_ = spec.r_max / (nt - 0.5);
    }
    dom->h_phi_ = spec.chart == ChartKind::radial ? 0.0 : 2.0 * kPi / spec.n_phi;

    // Normalize and validate excluded balls.
    auto& balls = dom->spec_.excluded;
    for (auto& b : balls) {
        if (b.center.size() != spec.n + 1) throw InputError("excluded ball center has wrong dimension");
        const double nrm = b.center.norm();
        if (!(nrm > 0.0)) throw InputError("excluded ball center must be nonzero");
        b.center /= nrm;
        if (!(b.radius > 0.0 && b.radius < kPi)) throw InputError("radius out of range for excluded ball");
    }
    for (size_t a = 0; a < balls.size(); ++a)
        for (size_t b = a + 1; b < balls.size(); ++b)
            if (geodesic_distance(balls[a].center, balls[b].center) <= balls[a].radius + balls[b].radius)
                throw InputError("overlapping boundary balls (" + std::to_string(a) + ", " +
                                 std::to_string(b) + ")");
    if (spec.chart == ChartKind::polar) {
        const Eigen::VectorXd north = Eigen::VectorXd::Unit(3, 2);
        for (size_t a = 0; a < balls.size(); ++a)
            if (geodesic_distance(balls[a].center, north) + balls[a].radius >= spec.r_max)
                throw InputError("excluded ball " + std::to_string(a) + " meets the outer boundary");
    }

    const long total = dom->size();
    dom->points_.resize(total);
    dom->frames_.resize(total);
    dom->active_.assign(total, true);
    for (int i = 0; i < nt; ++i) {
        const double th = dom->theta(i);
        if (spec.chart == ChartKind::radial) {
            const int n = spec.n;
            Eigen::VectorXd x = Eigen::VectorXd::Zero(n + 1);
            x(0) = std::sin(th);
            x(n) = std::cos(th);
            Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n + 1, n);
            e(0, 0) = std::cos(th);
            e(n, 0) = -std::sin(th);
            for (int a = 1; a < n; ++a) e(a, a) = 1.0;
            dom->points_[i] = x;
            dom->frames_[i] = e;
            continue;
        }
        for (int j = 0; j < spec.n_phi; ++j) {
            const long k = dom->index(i, j);
            dom->points_[k] = polar_point(th, dom->phi(j));
            dom->frames_[k] = polar_frame(th, dom->phi(j));
            for (const auto& b : balls)
                if (geodesic_distance(dom->points_[k], b.center) < b.radius) dom->active_[k] = false;
        }
    }

    if (spec.chart != ChartKind::latlon) {
        BoundaryRing outer;
        outer.name = "outer";
        outer.center = Eigen::VectorXd::Unit(spec.n + 1, spec.n);
        outer.radius = spec.r_max;
        const int i = nt - 1;
        for (int j = 0; j < dom->n_phi(); ++j) {
            const long k = dom->index(i, j);
            outer.points.push_back(dom->points_[k]);
            outer.inward.push_back(-dom->frames_[k].col(0));
            outer.grid_index.push_back(k);
        }
        dom->rings_.push_back(std::move(outer));
    }
    for (size_t a = 0; a < balls.size(); ++a) {
        const auto& b = balls[a];
        BoundaryRing ring;
        ring.name = "ball:" + std::to_string(a);
        ring.center = b.center;
        ring.radius = b.radius;
        const Eigen::MatrixXd tb = tangent_basis(b.center);
        const int samples = std::max(spec.n_phi, 32);
        for (int m = 0; m < samples; ++m) {
            const double alpha = 2.0 * kPi * m / samples;
            const Eigen::VectorXd dir = std::cos(alpha) * tb.col(0) + std::sin(alpha) * tb.col(1);
            ring.points.push_back(std::cos(b.radius) * b.center + std::sin(b.radius) * dir);
            // d/d(radius): away from the ball center, i.e. into the domain.
            ring.inward.push_back(-std::sin(b.radius) * b.center + std::cos(b.radius) * dir);
        }
        dom->rings_.push_back(std::move(ring));
    }
    return dom;
}

DomainPtr build_grid(const DomainSpec& spec) { return SphereDomain::build(spec); }

}  // namespace horo::sphere
