#include "horo/hyperbolic/embedding.hpp"

#include "horo/error.hpp"
#include "horo/sphere/interpolate.hpp"
#include "horo/sphere/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace horo::hyperbolic {

using sphere::ChartKind;
using sphere::DomainPtr;
using sphere::FieldGrid;

namespace {

Eigen::VectorXd ambient_gradient(const sphere::SphereDomain& d, long k, const Eigen::VectorXd& frame_grad) {
    return d.frame(k) * frame_grad;
}

std::string point_label(const sphere::SphereDomain& d, long k) {
    std::ostringstream os;
    os << "grid point " << k << " (ring " << d.ring_of(k) << ", column " << d.column_of(k) << ")";
    return os.str();
}

void fill_derived(HypersurfaceSample& h) {
    const long m = h.size();
    h.psi.resize(m);
    h.ball.resize(m);
    for (long k = 0; k < m; ++k) {
        h.psi[k] = h.phi[k] - h.eta[k];
        h.ball[k] = to_ball(h.phi[k]);
    }
}

void check_admissible(const FieldGrid& rho_t, const sphere::DiffOptions& diff) {
    const auto lam = conformal::schouten_eigenvalues(conformal::ConformalMetric{rho_t, diff});
    const auto& d = *rho_t.domain;
    for (long k = 0; k < d.size(); ++k) {
        if (!d.active(k)) continue;
        const double top = lam.values[k].maxCoeff();
        if (!std::isfinite(top) || top >= kAdmissibleLambda) {
            std::ostringstream os;
            os << "embed: Schouten eigenvalue " << top << " >= 1/2 - 1e-6 at " << point_label(d, k)
               << "; dilate the metric first";
            throw NumericalError(os.str());
        }
    }
}

}  // namespace

const BoundarySample& HypersurfaceSample::ring(const std::string& name) const {
    for (const auto& b : boundary)
        if (b.name == name) return b;
    throw InputError("hypersurface sample has no boundary ring '" + name + "'");
}

EmbeddedPoint embed_point(const Eigen::VectorXd& x, double rho, const Eigen::VectorXd& grad) {
    const double a = std::exp(rho);
    const double c = 0.5 * a * (1.0 + (1.0 + grad.squaredNorm()) / (a * a));
    const Eigen::VectorXd lift = null_lift(x);
    EmbeddedPoint p;
    p.phi = c * lift;
    p.phi.tail(x.size()) += (grad - x) / a;
    p.eta = p.phi - a * lift;
    return p;
}

EmbeddedPoint embed_point(const sphere::FieldGenerator& rho, const Eigen::VectorXd& x) {
    Eigen::VectorXd g = rho.ambient_gradient(x);
    g -= x.dot(g) * x;
    return embed_point(x, rho.value(x), g);
}

HypersurfaceSample embed(const FieldGrid& rho_t, const EmbedOptions& opt) {
    rho_t.validate();
    if (opt.require_admissible) check_admissible(rho_t, opt.diff);
    const auto& d = *rho_t.domain;
    const auto grad = sphere::gradient(rho_t, opt.diff);

    HypersurfaceSample h;
    h.domain = rho_t.domain;
    const long m = d.size();
    h.x.resize(m);
    h.phi.resize(m);
    h.eta.resize(m);
    for (long k = 0; k < m; ++k) {
        const auto p = embed_point(d.point(k), rho_t[k], ambient_gradient(d, k, grad.data[k]));
        if (!p.phi.allFinite() || !p.eta.allFinite())
            throw NumericalError("embed: non-finite embedding at " + point_label(d, k));
        h.x[k] = d.point(k);
        h.phi[k] = p.phi;
        h.eta[k] = p.eta;
    }
    fill_derived(h);

    for (const auto& ring : d.rings()) {
        const auto tr = sphere::ring_trace(rho_t, ring, opt.diff);
        BoundarySample b;
        b.name = ring.name;
        b.radius = ring.radius;
        b.center = ring.center;
        b.x = ring.points;
        b.rho = tr.value;
        b.normal_derivative = tr.normal_derivative;
        for (size_t q = 0; q < ring.points.size(); ++q) {
            const auto p = embed_point(ring.points[q], tr.value[q], tr.gradient_ambient[q]);
            b.phi.push_back(p.phi);
            b.eta.push_back(p.eta);
            b.psi.push_back(p.phi - p.eta);
        }
        h.boundary.push_back(std::move(b));
    }
    return h;
}

Eigen::VectorXd ball_form_point(const Eigen::VectorXd& x, double rho, const Eigen::VectorXd& grad, double eps) {
    const double e = std::exp(rho);
    const double den = (e + eps) * (e + eps) + eps * eps * grad.squaredNorm();
    const double f = -2.0 * (e + eps) / den;
    const double g = 2.0 * eps / den;
    return x + eps * (f * x + g * grad);
}

std::vector<Eigen::VectorXd> embed_ball_form(const FieldGrid& rho, double eps, const sphere::DiffOptions& diff) {
    if (!(eps >= 0.0)) throw InputError("ball form needs eps >= 0");
    rho.validate();
    const auto& d = *rho.domain;
    const auto grad = sphere::gradient(rho, diff);
    std::vector<Eigen::VectorXd> out(d.size());
    for (long k = 0; k < d.size(); ++k)
        out[k] = ball_form_point(d.point(k), rho[k], ambient_gradient(d, k, grad.data[k]), eps);
    return out;
}

Recovered recover(const HypersurfaceSample& h) {
    Recovered r;
    const long m = h.size();
    r.x.resize(m);
    r.rho.resize(m);
    for (long k = 0; k < m; ++k) {
        const Eigen::VectorXd& psi = h.psi[k];
        if (!(psi(0) > 0.0) || !psi.allFinite())
            throw NumericalError("recover: psi0 <= 0 at sample " + std::to_string(k));
        r.rho[k] = std::log(psi(0));
        r.x[k] = psi.tail(psi.size() - 1) / psi(0);
        r.gauss_map_defect = std::max(r.gauss_map_defect, (r.x[k] - h.x[k]).cwiseAbs().maxCoeff());
    }
    if (h.on_grid && h.domain) r.field = FieldGrid::from_values(h.domain, r.rho);
    return r;
}

double schouten_from_curvature(double k) { return 0.5 - 1.0 / (1.0 + k); }

std::vector<Eigen::VectorXd> principal_curvatures(const HypersurfaceSample& h, int accuracy) {
    if (!h.on_grid || !h.domain) throw InputError("principal curvatures need a sample on its parametrizing grid");
    const auto& d = *h.domain;
    const int n = d.n();
    const int m = n + 2;
    const long size = d.size();
    const sphere::ChartDifferentiator diff(h.domain, accuracy);

    auto component = [&](const std::vector<Eigen::VectorXd>& v, int c) {
        std::vector<double> out(size);
        for (long k = 0; k < size; ++k) out[k] = v[k](c);
        return out;
    };
    std::vector<Eigen::VectorXd> result(size);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    if (d.chart() == ChartKind::radial) {
        // Meridian derivatives give the radial curvature; rotational symmetry
        // gives the tangential one as -eta1 / phi1.
        std::vector<std::vector<double>> dphi(m), deta(m);
        for (int c = 0; c < m; ++c) {
            const auto p = c == 1 ? sphere::Parity::odd : sphere::Parity::even;
            dphi[c] = diff.d_theta(component(h.phi, c), p);
            deta[c] = diff.d_theta(component(h.eta, c), p);
        }
        for (long k = 0; k < size; ++k) {
            Eigen::VectorXd a(m), b(m);
            for (int c = 0; c < m; ++c) {
                a(c) = dphi[c][k];
                b(c) = deta[c][k];
            }
            const double metric = minkowski_dot(a, a);
            const double phi1 = h.phi[k](1);
            if (!(metric > 1e-24) || std::abs(phi1) < 1e-14)
                throw NumericalError("principal curvatures: induced metric degenerate at " + point_label(d, k));
            Eigen::VectorXd kv(n);
            kv(0) = -minkowski_dot(b, a) / metric;
            for (int i = 1; i < n; ++i) kv(i) = -h.eta[k](1) / phi1;
            std::sort(kv.data(), kv.data() + n);
            result[k] = kv;
        }
        return result;
    }

    std::vector<sphere::TangentDerivatives> dphi, deta;
    for (int c = 0; c < m; ++c) {
        dphi.push_back(sphere::tangent_derivatives(diff, component(h.phi, c)));
        deta.push_back(sphere::tangent_derivatives(diff, component(h.eta, c)));
    }
    Eigen::MatrixXd G = Eigen::MatrixXd::Identity(m, m);
    G(0, 0) = -1.0;
    for (long k = 0; k < size; ++k) {
        Eigen::MatrixXd jp(m, n), je(m, n);
        for (int c = 0; c < m; ++c)
            for (int a = 0; a < n; ++a) {
                jp(c, a) = dphi[c].d[a][k];
                je(c, a) = deta[c].d[a][k];
            }
        const Eigen::MatrixXd M = jp.transpose() * G * jp;
        Eigen::MatrixXd B = jp.transpose() * G * je;
        B = 0.5 * (B + B.transpose());
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ms(M, Eigen::EigenvaluesOnly);
        if (!(ms.eigenvalues()(0) > 1e-12 * std::max(1.0, ms.eigenvalues()(n - 1)))) {
            if (!d.active(k)) {
                result[k] = Eigen::VectorXd::Constant(n, nan);
                continue;
            }
            throw NumericalError("principal curvatures: induced metric degenerate at " + point_label(d, k));
        }
        const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(-B, M, Eigen::EigenvaluesOnly);
        result[k] = es.eigenvalues();
    }
    return result;
}

HypersurfaceSample with_curvatures(HypersurfaceSample h, int accuracy) {
    h.curvatures = principal_curvatures(h, accuracy);
    return h;
}

HypersurfaceSample geodesic_sphere(double t, const DomainPtr& domain) {
    if (!(t > 0.0)) throw InputError("geodesic sphere radius must be positive");
    EmbedOptions opt;
    opt.require_admissible = false;
    return embed(FieldGrid::sample(domain, sphere::make_constant(t)), opt);
}

HypersurfaceSample translate(const HypersurfaceSample& h, double s, const Eigen::VectorXd& axis) {
    const Eigen::MatrixXd L = boost(s, axis);
    HypersurfaceSample out = h;
    out.on_grid = false;
    auto move = [&](std::vector<Eigen::VectorXd>& phi, std::vector<Eigen::VectorXd>& eta,
                    std::vector<Eigen::VectorXd>& psi, std::vector<Eigen::VectorXd>& x) {
        for (size_t k = 0; k < phi.size(); ++k) {
            phi[k] = L * phi[k];
            eta[k] = L * eta[k];
            psi[k] = phi[k] - eta[k];
            x[k] = psi[k].tail(psi[k].size() - 1) / psi[k](0);
        }
    };
    move(out.phi, out.eta, out.psi, out.x);
    for (long k = 0; k < out.size(); ++k) out.ball[k] = to_ball(out.phi[k]);
    for (auto& b : out.boundary) {
        move(b.phi, b.eta, b.psi, b.x);
        for (size_t q = 0; q < b.psi.size(); ++q) b.rho[q] = std::log(b.psi[q](0));
        b.normal_derivative.clear();
    }
    return out;
}

conformal::ConformalMetric translate(const conformal::ConformalMetric& g, double s, const Eigen::VectorXd& axis) {
    if (std::abs(s) > 20.0) throw InputError("translation parameter |s| must not exceed 20");
    const Eigen::VectorXd a = axis.normalized();
    conformal::ConformalMetric out = g;
    if (g.rho.generator) {
        out.rho = FieldGrid::sample(g.rho.domain, sphere::make_pullback(g.rho.generator, s, a));
        return out;
    }
    const auto& d = *g.rho.domain;
    std::vector<double> v(d.size());
    for (long k = 0; k < d.size(); ++k) {
        const Eigen::VectorXd& y = d.point(k);
        const Eigen::VectorXd src = sphere::mobius_map(y, -s, a);
        if (d.has_outer_boundary() && sphere::polar_angle(src) > d.theta_extent() + 1e-12)
            throw InputError("translate: preimage of " + point_label(d, k) + " leaves the field's domain");
        v[k] = sphere::interpolate(d, g.rho.values, src) - std::log(std::cosh(s) - std::sinh(s) * a.dot(y));
    }
    out.rho = FieldGrid::from_values(g.rho.domain, std::move(v));
    return out;
}

double FrameDefects::max() const {
    return std::max({hyperboloid, de_sitter, orthogonal, null, gauss_map, incidence});
}

FrameDefects frame_defects(const HypersurfaceSample& h) {
    FrameDefects f;
    f.min_psi0 = std::numeric_limits<double>::infinity();
    for (long k = 0; k < h.size(); ++k) {
        const auto &p = h.phi[k], &e = h.eta[k], &q = h.psi[k];
        const double pp = minkowski_dot(p, p), ee = minkowski_dot(e, e);
        // relative to the coordinate scale so large dilations stay meaningful
        const double scale = std::max(1.0, p(0) * p(0));
        f.hyperboloid = std::max(f.hyperboloid, std::abs(pp + 1.0) / scale);
        f.de_sitter = std::max(f.de_sitter, std::abs(ee - 1.0) / scale);
        f.orthogonal = std::max(f.orthogonal, std::abs(minkowski_dot(p, e)) / scale);
        f.null = std::max(f.null, std::abs(minkowski_dot(q, q)) / scale);
        f.min_psi0 = std::min(f.min_psi0, q(0));
        const Eigen::VectorXd gx = q.tail(q.size() - 1) / q(0);
        f.gauss_map = std::max(f.gauss_map, (gx - h.x[k]).cwiseAbs().maxCoeff());
        f.incidence = std::max(f.incidence, std::abs(minkowski_dot(p, null_lift(h.x[k])) + 1.0 / q(0)));
    }
    return f;
}

CheckReport frame_invariant_check(const HypersurfaceSample& h, double tol) {
    CheckReport rep;
    rep.name = "frame_invariants";
    const auto f = frame_defects(h);
    rep.metrics = {{"hyperboloid", f.hyperboloid}, {"de_sitter", f.de_sitter}, {"orthogonal", f.orthogonal},
                   {"null", f.null},               {"gauss_map", f.gauss_map}, {"incidence", f.incidence},
                   {"min_psi0", f.min_psi0},       {"tol", tol}};
    if (!(f.max() <= tol) || !(f.min_psi0 > 0.0)) {
        // locate the worst point
        long worst = 0;
        double wv = -1.0;
        for (long k = 0; k < h.size(); ++k) {
            HypersurfaceSample one;
            one.x = {h.x[k]};
            one.phi = {h.phi[k]};
            one.eta = {h.eta[k]};
            one.psi = {h.psi[k]};
            const auto fk = frame_defects(one);
            const double v = fk.min_psi0 > 0.0 ? fk.max() : std::numeric_limits<double>::infinity();
            if (v > wv) {
                wv = v;
                worst = k;
            }
        }
        Witness w{worst, "interior", {h.x[worst].data(), h.x[worst].data() + h.x[worst].size()}};
        if (h.on_grid && h.domain) w = h.domain->witness(worst);
        rep.fail(w);
    }
    return rep;
}

std::vector<double> local_cell_sizes(const HypersurfaceSample& h) {
    if (!h.domain) throw InputError("cell sizes need the parametrizing grid");
    const auto& d = *h.domain;
    const int nt = d.n_theta(), np = d.n_phi();
    const bool radial = d.chart() == ChartKind::radial;
    std::vector<double> cell(d.size(), 0.0);
    for (long k = 0; k < d.size(); ++k) {
        const int i = d.ring_of(k), j = d.column_of(k);
        auto upd = [&](int ii, int jj) {
            if (ii < 0 || ii >= nt) return;
            if (!radial) jj = (jj + np) % np;
            cell[k] = std::max(cell[k], hyperbolic_distance(h.phi[k], h.phi[d.index(ii, jj)]));
        };
        upd(i - 1, j);
        upd(i + 1, j);
        if (!radial) {
            upd(i, j - 1);
            upd(i, j + 1);
        }
    }
    return cell;
}

CheckReport embeddedness_check(const HypersurfaceSample& h, long max_points) {
    if (!h.domain) throw InputError("embeddedness check needs the parametrizing grid");
    const auto& d = *h.domain;
    const bool radial = d.chart() == ChartKind::radial;
    const std::vector<double> cell = local_cell_sizes(h);

    struct Node {
        long k;
        Eigen::VectorXd phi, base;
    };
    std::vector<Node> nodes;
    const double stride_f = std::sqrt(static_cast<double>(d.size()) / std::max(1L, max_points));
    const int stride = std::max(1, static_cast<int>(std::ceil(radial ? stride_f * stride_f : stride_f)));
    for (long k = 0; k < d.size(); ++k) {
        if (!d.active(k) || d.ring_of(k) % stride || d.column_of(k) % stride) continue;
        nodes.push_back({k, h.phi[k], d.point(k)});
        if (radial) {
            // mirror image of the meridian closes the profile curve
            Node m{k, h.phi[k], d.point(k)};
            m.phi(1) = -m.phi(1);
            m.base(0) = -m.base(0);
            nodes.push_back(m);
        }
    }

    const double far = 3.0 * d.spacing() * stride;
    double min_ratio = std::numeric_limits<double>::infinity();
    long wi = -1;
    long pairs = 0;
    for (size_t a = 0; a < nodes.size(); ++a)
        for (size_t b = a + 1; b < nodes.size(); ++b) {
            if (sphere::geodesic_distance(nodes[a].base, nodes[b].base) <= far) continue;
            const double c = std::min(cell[nodes[a].k], cell[nodes[b].k]);
            if (!(c > 0.0)) continue;
            ++pairs;
            const double ratio = hyperbolic_distance(nodes[a].phi, nodes[b].phi) / c;
            if (ratio < min_ratio) {
                min_ratio = ratio;
                wi = nodes[a].k;
            }
        }

    CheckReport rep;
    rep.name = "embeddedness";
    rep.metrics = {{"min_ratio", pairs ? min_ratio : 0.0}, {"threshold", 0.5}, {"pairs", double(pairs)},
                   {"stride", double(stride)}};
    if (pairs && min_ratio < 0.5) rep.fail(d.witness(wi));
    return rep;
}

CapSample cap_construction(double t, double r, int n, int n_theta, int n_phi) {
    if (!(r > 0.0 && r <= M_PI / 2 + 1e-15)) throw InputError("cap radius r must lie in (0, pi/2]");
    if (!(t > 0.0)) throw InputError("cap dilation t must be positive");
    sphere::DomainSpec spec;
    spec.n = n;
    spec.chart = n == 2 ? ChartKind::polar : ChartKind::radial;
    spec.r_max = r;
    spec.n_theta = n_theta;
    spec.n_phi = n_phi;
    CapSample cap;
    cap.t = t;
    cap.r = r;
    cap.sample = embed(FieldGrid::sample(sphere::build_grid(spec), sphere::make_constant(t)));
    cap.level = std::asinh(-std::exp(-t) * conformal::cot_exact(r));
    const Eigen::VectorXd north = Eigen::VectorXd::Unit(n + 1, n);
    cap.plane = GeodesicObject::plane_over_circle(north, r);

    const auto& ring = cap.sample.ring("outer");
    CheckReport eq, horo;
    eq.name = "equidistant";
    horo.name = "horosphere";
    double eq_max = 0.0, horo_max = 0.0;
    const auto& dring = cap.sample.domain->ring("outer");
    for (size_t q = 0; q < ring.phi.size(); ++q) {
        const double e = std::abs(signed_distance(ring.phi[q], cap.plane) - cap.level);
        const double hz = std::abs(signed_distance(ring.phi[q], GeodesicObject::horosphere(ring.x[q], t)));
        if (e > 1e-9) eq.fail(sphere::SphereDomain::ring_witness(dring, q));
        if (hz > 1e-9) horo.fail(sphere::SphereDomain::ring_witness(dring, q));
        eq_max = std::max(eq_max, e);
        horo_max = std::max(horo_max, hz);
    }
    eq.metrics = {{"level", cap.level}, {"max_defect", eq_max}};
    horo.metrics = {{"max_defect", horo_max}};
    cap.verification.name = "cap_construction";
    cap.verification.add_child(std::move(eq));
    cap.verification.add_child(std::move(horo));
    return cap;
}

double dilation_from_curvature(double kappa0) {
    if (!(kappa0 > 1.0)) throw InputError("geodesic sphere curvature must exceed 1");
    return std::atanh(1.0 / kappa0);
}

void write_sample_csv(const HypersurfaceSample& h, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out.precision(17);
    const long dim = h.x.empty() ? 0 : h.x[0].size();
    const int n = static_cast<int>(dim - 1);
    const bool with_k = h.curvatures.size() == h.phi.size();
    out << "i,j";
    for (int c = 1; c <= dim; ++c) out << ",x" << c;
    for (int c = 0; c <= dim; ++c) out << ",phi" << c;
    for (int c = 1; c <= dim; ++c) out << ",ball" << c;
    if (with_k)
        for (int c = 1; c <= n; ++c) out << ",k" << c;
    out << '\n';
    for (long k = 0; k < h.size(); ++k) {
        const int i = h.domain ? h.domain->ring_of(k) : static_cast<int>(k);
        const int j = h.domain ? h.domain->column_of(k) : 0;
        out << i << ',' << j;
        for (long c = 0; c < dim; ++c) out << ',' << h.x[k](c);
        for (long c = 0; c <= dim; ++c) out << ',' << h.phi[k](c);
        for (long c = 0; c < dim; ++c) out << ',' << h.ball[k](c);
        if (with_k)
            for (int c = 0; c < n; ++c) out << ',' << h.curvatures[k](c);
        out << '\n';
    }
    if (!out) throw InputError("failed writing " + path);
}

}  // namespace horo::hyperbolic
