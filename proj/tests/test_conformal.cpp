#include <doctest.h>

#include "horo/conformal/schouten.hpp"
#include "horo/error.hpp"

#include <cmath>

using namespace horo;
using namespace horo::sphere;
using namespace horo::conformal;

namespace {

DomainPtr polar(double r, int nt) {
    DomainSpec s;
    s.r_max = r;
    s.n_theta = nt;
    s.n_phi = nt;
    return build_grid(s);
}

DomainPtr radial(int n, double r, int nt) {
    DomainSpec s;
    s.n = n;
    s.chart = ChartKind::radial;
    s.r_max = r;
    s.n_theta = nt;
    return build_grid(s);
}

Eigen::VectorXd pole(int n) { return Eigen::VectorXd::Unit(n + 1, n); }

// Gaussian curvature of e^{2F} g0 from ambient derivatives of F:
// K = e^{-2F} (1 - Lap F), Lap F = tr D^2F - x.D^2F.x - n x.dF.
double gauss_curvature_oracle(const FieldGenerator& gen, const Eigen::VectorXd& x) {
    const Eigen::MatrixXd h = *gen.ambient_hessian(x);
    const Eigen::VectorXd g = gen.ambient_gradient(x);
    const double lap = h.trace() - x.dot(h * x) - 2.0 * x.dot(g);
    return std::exp(-2.0 * gen.value(x)) * (1.0 - lap);
}

}  // namespace

TEST_CASE("round and dilated metrics") {
    auto d = polar(M_PI / 2, 16);
    for (double t : {0.0, 0.3, -0.7}) {
        ConformalMetric g{FieldGrid::sample(d, make_constant(t))};
        const auto sch = schouten_tensor(g);
        const auto lam = schouten_eigenvalues(g, sch);
        for (long k = 0; k < d->size(); ++k) {
            CHECK((sch.data[k] - 0.5 * Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-14);
            CHECK(std::abs(lam.values[k](0) - 0.5 * std::exp(-2 * t)) < 1e-14);
            CHECK(std::abs(lam.values[k](1) - 0.5 * std::exp(-2 * t)) < 1e-14);
        }
        const auto K = scalar_curvature(lam);
        CHECK(std::abs(K[0] - 2.0 * std::exp(-2 * t)) < 1e-13);
    }
    auto d3 = radial(3, 1.0, 16);
    ConformalMetric g3{FieldGrid::sample(d3, make_constant(0.0))};
    CHECK(std::abs(scalar_curvature(g3)[5] - 6.0) < 1e-13);
    ConformalMetric g3t{FieldGrid::sample(d3, make_constant(0.25))};
    CHECK(std::abs(scalar_curvature(g3t)[5] - 6.0 * std::exp(-0.5)) < 1e-13);
}

TEST_CASE("mobius factors have all eigenvalues one half") {
    Eigen::VectorXd axis = Eigen::Vector3d(0.3, 0.2, 0.9);
    for (double s : {-1.0, -0.4, 0.5, 1.0}) {
        auto f = FieldGrid::sample(polar(1.3, 64), make_mobius(s, axis));
        ConformalMetric ga{f, {DerivativeSource::analytic}};
        ConformalMetric gn{f, {DerivativeSource::numeric}};
        const auto la = schouten_eigenvalues(ga);
        const auto ln = schouten_eigenvalues(gn);
        CAPTURE(s);
        CHECK(std::abs(la.max_entry() - 0.5) < 1e-12);
        CHECK(std::abs(la.min_entry() - 0.5) < 1e-12);
        CHECK(std::abs(ln.max_entry() - 0.5) < 5e-4);
        CHECK(std::abs(ln.min_entry() - 0.5) < 5e-4);
    }
    for (int n : {3, 5}) {
        auto f = FieldGrid::sample(radial(n, 1.2, 64), make_mobius(0.6, pole(n)));
        ConformalMetric gn{f, {DerivativeSource::numeric}};
        const auto ln = schouten_eigenvalues(gn);
        CHECK(std::abs(ln.max_entry() - 0.5) < 1e-5);
        CHECK(std::abs(ln.min_entry() - 0.5) < 1e-5);
    }
}

TEST_CASE("eigenvalue sum equals gauss curvature") {
    auto gen = make_random_smooth(2, 21, 0.4);
    double err_c = 0.0, err_f = 0.0;
    for (int nt : {32, 64}) {
        auto f = FieldGrid::sample(polar(M_PI / 2, nt), gen);
        ConformalMetric g{f, {DerivativeSource::numeric}};
        const auto lam = schouten_eigenvalues(g);
        double err = 0.0;
        for (long k = 0; k < f.size(); ++k)
            err = std::max(err, std::abs(lam.values[k].sum() - gauss_curvature_oracle(*gen, f.domain->point(k))));
        (nt == 32 ? err_c : err_f) = err;
    }
    CHECK(err_f < 1e-4);
    CHECK(std::log2(err_c / err_f) > 1.8);
}

TEST_CASE("trace identity and constant shift law") {
    auto f = FieldGrid::sample(polar(1.1, 32), make_random_smooth(2, 4, 0.3));
    ConformalMetric g{f};
    const auto lam = schouten_eigenvalues(g);
    const auto R = scalar_curvature(lam);
    for (long k = 0; k < f.size(); ++k) CHECK(std::abs(2.0 * lam.values[k].sum() - R[k]) < 1e-14);
    ConformalMetric gt{f.shifted(0.4)};
    const auto lt = schouten_eigenvalues(gt, schouten_tensor(g));
    for (long k = 0; k < f.size(); ++k)
        CHECK((lt.values[k] - std::exp(-0.8) * lam.values[k]).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("boundary mean curvature") {
    for (double r : {M_PI / 6, M_PI / 4, M_PI / 2}) {
        ConformalMetric g{FieldGrid::sample(polar(r, 32), make_constant(0.0))};
        const auto b = boundary_data(g, "outer");
        for (double h : b.mean_curvature) CHECK(std::abs(h - cot_exact(r)) < 1e-12);
    }
    CHECK(cot_exact(M_PI / 2) == 0.0);

    // rho = c z: inward derivative at the equator is c, so H = -c
    ConformalMetric g{FieldGrid::sample(polar(M_PI / 2, 48), make_linear(Eigen::Vector3d(0, 0, 0.3)))};
    g.diff.source = DerivativeSource::numeric;
    for (double h : boundary_data(g, "outer").mean_curvature) CHECK(std::abs(h + 0.3) < 1e-6);

    // Mobius pullback of a round cap: chart circle r_c maps onto radius r
    const double s = 0.4, rc = 1.0;
    const double r = std::acos((std::cosh(s) * std::cos(rc) - std::sinh(s)) / (std::cosh(s) - std::sinh(s) * std::cos(rc)));
    ConformalMetric gm{FieldGrid::sample(polar(rc, 48), make_mobius(s, pole(2))), {DerivativeSource::numeric}};
    for (double h : boundary_data(gm, "outer").mean_curvature) CHECK(std::abs(h - std::cos(r) / std::sin(r)) < 1e-6);
    CHECK(boundary_isometry_check(gm, "outer", r, 1e-6).passed);

    CHECK_THROWS_AS(boundary_data(g, "ball:3"), InputError);

    // rim of an excluded ball, seen from outside the ball: circle of radius pi - eps
    DomainSpec spec;
    spec.r_max = 2.5;
    spec.n_theta = 48;
    spec.n_phi = 48;
    const double eps = 0.3;
    spec.excluded.push_back({Eigen::Vector3d(1, 0, 1).normalized(), eps});
    ConformalMetric gh{FieldGrid::sample(build_grid(spec), make_constant(0.0))};
    const auto hb = boundary_data(gh, "ball:0");
    CHECK(std::abs(hb.chart_radius - (M_PI - eps)) < 1e-15);
    for (double h : hb.mean_curvature) CHECK(std::abs(h + 1.0 / std::tan(eps)) < 1e-12);
}

TEST_CASE("boundary isometry") {
    ConformalMetric g0{FieldGrid::sample(polar(M_PI / 3, 32), make_constant(0.0))};
    auto rep = boundary_isometry_check(g0, "outer", M_PI / 3);
    CHECK(rep.passed);
    CHECK(rep.metric("defect") < 1e-12);

    ConformalMetric g1{FieldGrid::sample(polar(M_PI / 2, 32), make_constant(0.1))};
    rep = boundary_isometry_check(g1, "outer", M_PI / 2);
    CHECK_FALSE(rep.passed);
    REQUIRE(rep.witness);
    CHECK(rep.witness->location == "boundary:outer");

    ConformalMetric gc{FieldGrid::sample(polar(M_PI / 2, 32), make_constant(-0.5 * std::log(2.0)))};
    CHECK(boundary_isometry_check(gc, "outer", M_PI / 4).passed);

    ConformalMetric g3{FieldGrid::sample(radial(3, M_PI / 2, 32), make_constant(0.1))};
    CHECK_FALSE(boundary_isometry_check(g3, "outer", M_PI / 2).passed);
    ConformalMetric g3m{FieldGrid::sample(radial(3, 1.0, 32), make_mobius(0.3, pole(3)))};
    const double r3 = std::acos((std::cosh(0.3) * std::cos(1.0) - std::sinh(0.3)) /
                                (std::cosh(0.3) - std::sinh(0.3) * std::cos(1.0)));
    CHECK(boundary_isometry_check(g3m, "outer", r3, 1e-12).passed);
}
