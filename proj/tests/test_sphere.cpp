#include <doctest.h>

#include "horo/error.hpp"
#include "horo/sphere/domain.hpp"
#include "horo/sphere/field.hpp"
#include "horo/sphere/field_io.hpp"
#include "horo/sphere/interpolate.hpp"
#include "horo/sphere/operators.hpp"
#include "horo/sphere/quadrature.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace horo::sphere;

namespace {

DomainPtr polar(double r, int nt, int np) {
    DomainSpec s;
    s.chart = ChartKind::polar;
    s.r_max = r;
    s.n_theta = nt;
    s.n_phi = np;
    return build_grid(s);
}

DomainPtr latlon(int nt, int np) {
    DomainSpec s;
    s.chart = ChartKind::latlon;
    s.n_theta = nt;
    s.n_phi = np;
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

Eigen::VectorXd e3() { return Eigen::Vector3d(0, 0, 1); }

double max_grad_error(const FieldGrid& f, const DiffOptions& opt) {
    const auto num = gradient(f, opt);
    const auto ref = gradient(f, {DerivativeSource::analytic});
    double err = 0.0;
    for (long k = 0; k < f.size(); ++k) err = std::max(err, (num.data[k] - ref.data[k]).cwiseAbs().maxCoeff());
    return err;
}

double max_hess_error(const FieldGrid& f, const DiffOptions& opt) {
    const auto num = hessian(f, opt);
    const auto ref = hessian(f, {DerivativeSource::analytic});
    double err = 0.0;
    for (long k = 0; k < f.size(); ++k) err = std::max(err, (num.data[k] - ref.data[k]).cwiseAbs().maxCoeff());
    return err;
}

}  // namespace

TEST_CASE("grid construction") {
    auto d = polar(M_PI / 2, 64, 64);
    for (long k = 0; k < d->size(); ++k) CHECK(std::abs(d->point(k).norm() - 1.0) < 1e-12);
    const auto& outer = d->ring("outer");
    for (const auto& p : outer.points) CHECK(std::abs(p(2)) < 1e-15);
    CHECK(d->rings().size() == 1);

    auto r = radial(3, M_PI / 4, 32);
    CHECK(r->size() == 32);
    CHECK(std::abs(polar_angle(r->ring("outer").points[0]) - M_PI / 4) < 1e-14);
}

TEST_CASE("grid validation errors") {
    DomainSpec s;
    s.n_theta = 4;
    CHECK_THROWS_AS(build_grid(s), horo::InputError);
    s.n_theta = 16;
    s.r_max = 3.5;
    CHECK_THROWS_AS(build_grid(s), horo::InputError);
    s.r_max = 1.2;
    s.excluded = {{Eigen::Vector3d(1, 0, 0.3), 0.2}, {Eigen::Vector3d(1, 0.1, 0.3), 0.2}};
    try {
        build_grid(s);
        FAIL("expected an overlap error");
    } catch (const horo::InputError& e) {
        CHECK(std::string(e.what()).find("overlapping boundary balls") != std::string::npos);
    }
}

TEST_CASE("excluded ball rings lie on their circles") {
    DomainSpec s;
    s.chart = ChartKind::latlon;
    s.n_theta = 32;
    s.n_phi = 32;
    s.excluded = {{Eigen::Vector3d(1, 0, 0), 0.3}, {Eigen::Vector3d(-1, 0, 0), 0.5}};
    auto d = build_grid(s);
    for (const auto& ring : d->rings()) {
        for (size_t q = 0; q < ring.points.size(); ++q) {
            CHECK(std::abs(geodesic_distance(ring.points[q], ring.center) - ring.radius) < 1e-12);
            CHECK(std::abs(ring.inward[q].dot(ring.center)) > 0.0);
            CHECK(ring.inward[q].dot(ring.center) < 0.0);
        }
    }
}

TEST_CASE("quadrature of constants") {
    auto s2 = latlon(64, 64);
    std::vector<double> one(s2->size(), 1.0);
    CHECK(std::abs(integrate(*s2, one) - 4 * M_PI) < 1e-6);

    for (double r : {0.4, M_PI / 4, M_PI / 2, 2.5}) {
        auto cap = polar(r, 64, 64);
        std::vector<double> c1(cap->size(), 1.0);
        CHECK(std::abs(integrate(*cap, c1) - 2 * M_PI * (1 - std::cos(r))) < 1e-6);
    }

    auto hemi = polar(M_PI / 2, 32, 32);
    auto f = FieldGrid::sample(hemi, make_constant(1.0));
    CHECK(std::abs(integrate(f, Measure::round, "outer") - 2 * M_PI) < 1e-8);
    CHECK_THROWS_AS(integrate(f, Measure::round, "nowhere"), horo::InputError);

    // conformal boundary length with rho = -ln(1 + c^2)/2, c = 1
    auto g = FieldGrid::sample(hemi, make_constant(-0.5 * std::log(2.0)));
    CHECK(std::abs(integrate(f, Measure::conformal, "outer", &g) - 2 * M_PI / std::sqrt(2.0)) < 1e-6);

    // |D(3, r)| = 2 pi (r - sin r cos r)
    auto b3 = radial(3, 1.0, 64);
    std::vector<double> ones(b3->size(), 1.0);
    CHECK(std::abs(integrate(*b3, ones) - 2 * M_PI * (1.0 - std::sin(1.0) * std::cos(1.0))) < 1e-7);
}

TEST_CASE("quadrature of a non-constant integrand") {
    // int_{S^2} z^2 = 4 pi / 3
    auto s2 = latlon(48, 48);
    std::vector<double> z2(s2->size());
    for (long k = 0; k < s2->size(); ++k) z2[k] = std::pow(s2->point(k)(2), 2);
    CHECK(std::abs(integrate(*s2, z2) - 4 * M_PI / 3) < 1e-12);
    auto cap = polar(1.0, 64, 64);
    std::vector<double> c2(cap->size());
    for (long k = 0; k < cap->size(); ++k) c2[k] = std::pow(cap->point(k)(2), 2);
    CHECK(std::abs(integrate(*cap, c2) - 2 * M_PI * (1 - std::pow(std::cos(1.0), 3)) / 3) < 1e-6);
}

TEST_CASE("gradient and hessian of constants vanish") {
    auto d = polar(1.2, 32, 32);
    auto f = FieldGrid::from_values(d, std::vector<double>(d->size(), 0.7));
    const auto j = jet(f, {DerivativeSource::numeric});
    for (long k = 0; k < d->size(); ++k) {
        CHECK(j.grad.data[k].norm() < 1e-12);
        CHECK(j.hess.data[k].norm() < 1e-9);
    }
}

TEST_CASE("linear restrictions") {
    auto d = latlon(64, 64);
    auto f = FieldGrid::sample(d, make_linear(e3()));
    f.generator = nullptr;
    const auto j = jet(f, {DerivativeSource::numeric});
    double gerr = 0.0, herr = 0.0;
    for (long k = 0; k < d->size(); ++k) {
        const double th = d->theta(d->ring_of(k));
        gerr = std::max(gerr, std::abs(j.grad.data[k].norm() - std::sin(th)));
        const Eigen::MatrixXd want = -d->point(k)(2) * Eigen::MatrixXd::Identity(2, 2);
        herr = std::max(herr, (j.hess.data[k] - want).cwiseAbs().maxCoeff());
    }
    CHECK(gerr < 1e-6);
    CHECK(herr < 1e-5);

    // an oblique direction, through the pole continuation
    Eigen::VectorXd a = Eigen::Vector3d(0.3, -0.5, 0.8);
    auto g = FieldGrid::sample(polar(M_PI / 2, 64, 64), make_linear(a));
    g.generator = nullptr;
    const auto hg = hessian(g, {DerivativeSource::numeric});
    double err = 0.0;
    for (long k = 0; k < g.size(); ++k) {
        const Eigen::MatrixXd want = -a.dot(g.domain->point(k)) * Eigen::MatrixXd::Identity(2, 2);
        err = std::max(err, (hg.data[k] - want).cwiseAbs().maxCoeff());
    }
    // the 1/sin(theta) factors near the pole cap this at third order
    CHECK(err < 1e-4);
}

TEST_CASE("hessian symmetry for random fields") {
    auto d = polar(1.3, 32, 32);
    auto f = FieldGrid::sample(d, make_random_smooth(2, 7, 0.4));
    CHECK(hessian(f, {DerivativeSource::numeric}).max_asymmetry() < 1e-12);
    CHECK(hessian(f, {DerivativeSource::analytic}).max_asymmetry() < 1e-12);
}

TEST_CASE("refinement order") {
    auto gen = make_random_smooth(2, 11, 0.5);
    for (int acc : {2, 4}) {
        const DiffOptions opt{DerivativeSource::numeric, acc};
        auto c = FieldGrid::sample(polar(M_PI / 2, 32, 32), gen);
        auto f = FieldGrid::sample(polar(M_PI / 2, 64, 64), gen);
        const double og = std::log2(max_grad_error(c, opt) / max_grad_error(f, opt));
        const double oh = std::log2(max_hess_error(c, opt) / max_hess_error(f, opt));
        CAPTURE(acc);
        CHECK(og > 1.8);
        // second-order stencils lose an order in the pole ring
        CHECK(oh > (acc == 4 ? 2.8 : 0.9));
    }
}

TEST_CASE("radial chart derivatives") {
    auto gen = make_radial_poly({0.1, -0.4, 0.3, 0.2});
    auto d = radial(4, 1.1, 64);
    auto f = FieldGrid::sample(d, gen);
    CHECK(max_grad_error(f, {DerivativeSource::numeric}) < 1e-6);
    CHECK(max_hess_error(f, {DerivativeSource::numeric}) < 1e-5);
}

TEST_CASE("pullback generator derivatives") {
    Eigen::VectorXd axis = Eigen::Vector3d(0.2, 0.1, 1.0);
    auto gen = make_pullback(make_random_smooth(2, 3, 0.3), 0.4, axis);
    // ambient gradient against central differences of the value
    Eigen::VectorXd x = Eigen::Vector3d(0.3, 0.4, 0.5).normalized();
    const Eigen::VectorXd g = gen->ambient_gradient(x);
    for (int c = 0; c < 3; ++c) {
        Eigen::VectorXd dx = Eigen::VectorXd::Unit(3, c) * 1e-6;
        CHECK(std::abs((gen->value(x + dx) - gen->value(x - dx)) / 2e-6 - g(c)) < 1e-7);
    }
    auto f = FieldGrid::sample(polar(1.4, 64, 64), gen);
    CHECK(max_hess_error(f, {DerivativeSource::numeric}) < 1e-4);
}

TEST_CASE("mobius map") {
    Eigen::VectorXd a = e3();
    Eigen::VectorXd x = Eigen::Vector3d(0.6, 0.0, 0.8);
    const auto y = mobius_map(x, 0.7, a);
    CHECK(std::abs(y.norm() - 1.0) < 1e-14);
    CHECK((mobius_map(y, -0.7, a) - x).norm() < 1e-14);
    CHECK((mobius_map(a, 2.0, a) - a).norm() < 1e-14);
}

TEST_CASE("interpolation") {
    auto d = polar(1.2, 48, 48);
    auto gen = make_random_smooth(2, 5, 0.5);
    auto f = FieldGrid::sample(d, gen);
    for (double th : {0.01, 0.4, 1.19}) {
        Eigen::VectorXd x = Eigen::Vector3d(std::sin(th) * std::cos(1.0), std::sin(th) * std::sin(1.0), std::cos(th));
        CHECK(std::abs(interpolate(*d, f.values, x) - gen->value(x)) < 1e-4);
    }
}

TEST_CASE("field file round trip") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "horo_field_io";
    fs::create_directories(dir);
    const std::string path = (dir / "rho.json").string();
    auto f = FieldGrid::sample(polar(1.0, 16, 16), make_random_smooth(2, 2, 0.3));
    write_field(f, path);
    auto g = read_field(path);
    REQUIRE(g.size() == f.size());
    for (long k = 0; k < f.size(); ++k) CHECK(g[k] == f[k]);
    CHECK(g.domain->spec().r_max == 1.0);

    std::ofstream(path) << R"({"version":1,"n":2,"chart":"polar","sizes":[16,16],"color":"red"})";
    CHECK_THROWS_AS(read_field(path), horo::InputError);
    std::ofstream(path) << R"({"version":1,"n":2,"chart":"polar","sizes":[16,8],"r_max":1.0})";
    CHECK_THROWS_AS(read_field(path), horo::InputError);
    fs::remove_all(dir);
}
