#include <doctest.h>

#include "horo/error.hpp"
#include "horo/hyperbolic/embedding.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace horo;
using namespace horo::sphere;
using namespace horo::hyperbolic;

namespace {

DomainPtr latlon(int nt) {
    DomainSpec s;
    s.chart = ChartKind::latlon;
    s.n_theta = nt;
    s.n_phi = 2 * nt;
    return build_grid(s);
}

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

EmbedOptions ungated() {
    EmbedOptions o;
    o.require_admissible = false;
    return o;
}

const Eigen::Vector3d north(0, 0, 1);

}  // namespace

TEST_CASE("minkowski primitives") {
    const Eigen::Vector4d o(1, 0, 0, 0);
    CHECK(minkowski_dot(o, o) == -1.0);
    const Eigen::Vector3d x = Eigen::Vector3d(1, 2, 2) / 3.0;
    CHECK(std::abs(minkowski_dot(null_lift(x), null_lift(x))) < 1e-15);
    const double t = 0.8;
    CHECK(std::abs(minkowski_dot(hyperboloid_point(t, x), null_lift(x)) + std::exp(-t)) < 1e-15);

    const double s = 0.6;
    const Eigen::MatrixXd L = boost(s, north);
    const Eigen::VectorXd g = L * o;
    CHECK((g - Eigen::Vector4d(std::cosh(s), 0, 0, std::sinh(s))).norm() < 1e-15);
    Eigen::Matrix4d G = Eigen::Matrix4d::Identity();
    G(0, 0) = -1;
    CHECK((L.transpose() * G * L - G).norm() < 1e-14);
    CHECK((boost(-s, north) * L - Eigen::Matrix4d::Identity()).norm() < 1e-14);
    CHECK_THROWS_AS(boost(21.0, north), InputError);

    const Eigen::VectorXd p = hyperboloid_point(0.3, x), q = hyperboloid_point(1.1, x);
    CHECK(std::abs(hyperbolic_distance(p, q) - 0.8) < 1e-14);
    CHECK(std::abs(hyperbolic_distance(p, p + 1e-9 * Eigen::Vector4d(0, 1, 0, 0))) < 1e-8);
}

TEST_CASE("signed distances") {
    const double b = 0.7;
    const auto plane = GeodesicObject::plane(Eigen::Vector4d(0, 0, 0, 1));
    CHECK(std::abs(signed_distance(hyperboloid_point(b, north), plane) - b) < 1e-14);
    CHECK(std::abs(signed_distance(hyperboloid_point(b, -north), plane) + b) < 1e-14);

    const double t = 1.3;
    const auto line = GeodesicObject::axis_line(north);
    for (double a : {0.0, 1.0, 2.5}) {
        const Eigen::Vector3d eq(std::cos(a), std::sin(a), 0);
        CHECK(std::abs(signed_distance(hyperboloid_point(t, eq), line) - t) < 1e-13);
    }
    CHECK(std::abs(signed_distance(hyperboloid_point(t, north), line)) < 1e-7);

    const Eigen::Vector3d x = Eigen::Vector3d(0.6, 0, 0.8);
    const auto horo = GeodesicObject::horosphere(x, t);
    CHECK(std::abs(signed_distance(hyperboloid_point(t, x), horo)) < 1e-14);
    CHECK(signed_distance(hyperboloid_point(t + 0.5, x), horo) < 0.0);  // inside the horoball

    const auto pt = GeodesicObject::point(hyperboloid_point(0.4, north));
    CHECK(std::abs(signed_distance(hyperboloid_point(1.0, north), pt) - 0.6) < 1e-14);
    CHECK_THROWS_AS(signed_distance(hyperboloid_point(1.0, north), GeodesicObject::cylinder(line, 1.0)), InputError);
    CHECK_THROWS_AS(GeodesicObject::plane(Eigen::Vector4d(1, 0, 0, 0)), InputError);
    CHECK_THROWS_AS(GeodesicObject::line(Eigen::Vector4d(1, 0, 0, 0), Eigen::Vector4d(1, 0, 0, 1)), InputError);
}

TEST_CASE("geodesic sphere closed forms") {
    const double t = 1.2;
    const auto h = with_curvatures(geodesic_sphere(t, latlon(24)));
    CHECK(frame_invariant_check(h).passed);
    const auto rec = recover(h);
    for (long k = 0; k < h.size(); ++k) {
        CHECK((h.phi[k] - hyperboloid_point(t, h.x[k])).norm() < 1e-13);
        CHECK(std::abs(h.ball[k].norm() - std::tanh(t / 2)) < 1e-14);
        CHECK(std::abs(rec.rho[k] - t) < 1e-13);
        for (int i = 0; i < 2; ++i) CHECK(std::abs(h.curvatures[k](i) - 1.0 / std::tanh(t)) < 1e-9);
        CHECK(std::abs(schouten_from_curvature(h.curvatures[k](0)) - 0.5 * std::exp(-2 * t)) < 1e-9);
    }
    CHECK(rec.gauss_map_defect < 1e-14);
    CHECK_THROWS_AS(geodesic_sphere(0.0, latlon(8)), InputError);

    const auto hr = with_curvatures(geodesic_sphere(t, radial(4, 2.5, 40)));
    for (long k = 0; k < hr.size(); ++k)
        for (int i = 0; i < 4; ++i) CHECK(std::abs(hr.curvatures[k](i) - 1.0 / std::tanh(t)) < 1e-9);
}

TEST_CASE("embed frame invariants and incidence for random fields") {
    for (unsigned long long seed : {1ull, 2ull, 3ull}) {
        const auto rho = FieldGrid::sample(latlon(32), make_random_smooth(2, seed, 0.5)).shifted(1.0);
        const auto h = embed(rho, ungated());
        const auto rep = frame_invariant_check(h, 1e-9);
        CHECK(rep.passed);
        CHECK(rep.metric("incidence") < 1e-12);
        const auto rec = recover(h);
        for (long k = 0; k < h.size(); ++k) {
            CHECK(std::abs(rec.rho[k] - rho[k]) < 1e-12);
            CHECK(std::abs(minkowski_dot(h.phi[k], null_lift(h.x[k])) + std::exp(-rho[k])) < 1e-12);
        }
        REQUIRE(rec.field);
        CHECK(rec.field->domain == rho.domain);
    }
}

TEST_CASE("ball form agrees with central projection") {
    const auto d = latlon(32);
    const double t = 1.0;
    const auto base = FieldGrid::sample(d, make_random_smooth(2, 5, 0.4));
    const auto h = embed(base.shifted(t), ungated());
    const auto ball = embed_ball_form(base, std::exp(-t));
    double worst = 0.0;
    for (long k = 0; k < d->size(); ++k) worst = std::max(worst, (ball[k] - h.ball[k]).cwiseAbs().maxCoeff());
    CHECK(worst <= 1e-9);

    const auto zero = FieldGrid::sample(d, make_constant(0.0));
    const auto cap = embed_ball_form(zero, std::exp(-t));
    const auto id = embed_ball_form(base, 0.0);
    for (long k = 0; k < d->size(); ++k) {
        CHECK((cap[k] - std::tanh(t / 2) * d->point(k)).norm() < 1e-15);
        CHECK((id[k] - d->point(k)).norm() == 0.0);
    }
}

TEST_CASE("recover rejects corrupted samples") {
    auto h = geodesic_sphere(0.5, latlon(8));
    h.psi[3](0) = 0.0;
    CHECK_THROWS_AS(recover(h), NumericalError);
}

TEST_CASE("admissibility gate") {
    const auto d = polar(M_PI / 3, 16);
    CHECK_THROWS_AS(embed(FieldGrid::sample(d, make_constant(0.0))), NumericalError);
    CHECK_NOTHROW(embed(FieldGrid::sample(d, make_constant(0.5))));
    CHECK_NOTHROW(embed(FieldGrid::sample(d, make_constant(0.0)), ungated()));
}

TEST_CASE("duality between principal curvatures and Schouten eigenvalues") {
    auto defect = [](const FieldGrid& rho) {
        const auto h = with_curvatures(embed(rho, ungated()));
        const auto lam = conformal::schouten_eigenvalues(conformal::ConformalMetric{rho});
        double worst = 0.0;
        for (long k = 0; k < h.size(); ++k)
            for (long i = 0; i < lam.values[k].size(); ++i)
                worst = std::max(worst,
                                 std::abs(lam.values[k](i) - schouten_from_curvature(h.curvatures[k](i))));
        return worst;
    };
    const auto gen = make_sum({make_random_smooth(2, 7, 0.3), make_constant(1.0)});
    const double e16 = defect(FieldGrid::sample(latlon(16), gen));
    const double e32 = defect(FieldGrid::sample(latlon(32), gen));
    CHECK(e32 < 1e-4);
    CHECK(std::log2(e16 / e32) > 1.7);

    const auto rgen = make_sum({make_radial_poly({0.0, 0.2, 0.1}), make_constant(0.8)});
    const double r40 = defect(FieldGrid::sample(radial(3, 2.0, 40), rgen));
    const double r80 = defect(FieldGrid::sample(radial(3, 2.0, 80), rgen));
    CHECK(r80 < 1e-5);
    CHECK(std::log2(r40 / r80) > 1.7);
}

TEST_CASE("degenerate induced metric is flagged") {
    auto h = geodesic_sphere(1.0, latlon(8));
    for (auto& p : h.phi) p = h.phi[0];
    CHECK_THROWS_AS(principal_curvatures(h), NumericalError);
    CHECK_THROWS_AS(principal_curvatures(translate(geodesic_sphere(1.0, latlon(8)), 0.3, north)), InputError);
}

TEST_CASE("translation of samples") {
    const double t = 0.9, s = 0.7;
    const Eigen::Vector3d a = Eigen::Vector3d(1, 1, 1).normalized();
    const auto h = geodesic_sphere(t, latlon(16));
    const auto moved = translate(h, s, a);
    CHECK_FALSE(moved.on_grid);
    CHECK(frame_invariant_check(moved).passed);
    const auto rec = recover(moved);
    for (long k = 0; k < moved.size(); ++k) {
        const double expect = t - std::log(std::cosh(s) - std::sinh(s) * rec.x[k].dot(a));
        CHECK(std::abs(rec.rho[k] - expect) < 1e-12);
    }
    const auto back = translate(moved, -s, a);
    for (long k = 0; k < h.size(); ++k) {
        CHECK((back.phi[k] - h.phi[k]).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((back.x[k] - h.x[k]).cwiseAbs().maxCoeff() < 1e-10);
    }
    // T_s of the origin is gamma(s)
    CHECK((boost(s, north) * Eigen::Vector4d(1, 0, 0, 0) - hyperboloid_point(s, north)).norm() < 1e-15);
}

TEST_CASE("equivariance of embed and translate") {
    const double s = -0.6;
    const Eigen::Vector3d a(0.6, 0.0, 0.8);
    const auto gen = make_sum({make_random_smooth(2, 11, 0.3), make_constant(1.0)});
    const auto g = conformal::ConformalMetric{FieldGrid::sample(latlon(24), gen)};
    const auto moved = translate(embed(g.rho, ungated()), s, a);
    const auto tg = translate(g, s, a);
    REQUIRE(tg.rho.generator);
    double worst = 0.0;
    for (long k = 0; k < moved.size(); ++k) {
        const auto p = embed_point(*tg.rho.generator, moved.x[k]);
        worst = std::max({worst, (p.phi - moved.phi[k]).cwiseAbs().maxCoeff(),
                          (p.eta - moved.eta[k]).cwiseAbs().maxCoeff()});
    }
    CHECK(worst <= 1e-8);

    // interpolation path for fields read without a generator
    const auto d = polar(M_PI / 2, 64);
    const auto base = FieldGrid::sample(d, make_random_smooth(2, 4, 0.3));
    const auto analytic = translate(conformal::ConformalMetric{base}, -0.4, north);
    const auto numeric = translate(conformal::ConformalMetric{FieldGrid::from_values(d, base.values)}, -0.4, north);
    double diff = 0.0;
    for (long k = 0; k < d->size(); ++k) diff = std::max(diff, std::abs(analytic.rho[k] - numeric.rho[k]));
    CHECK(diff < 1e-5);
    CHECK_THROWS_AS(translate(conformal::ConformalMetric{FieldGrid::from_values(d, base.values)}, 0.4, north),
                    InputError);
}

TEST_CASE("cap construction") {
    const auto cap = cap_construction(1.0, M_PI / 4);
    CHECK(cap.verification.passed);
    CHECK(std::abs(cap.level - std::asinh(-std::exp(-1.0))) < 1e-15);
    CHECK(std::abs(cap.level + 0.36004) < 1e-5);
    for (const auto& p : cap.sample.ring("outer").phi)
        CHECK(std::abs(signed_distance(p, cap.plane) - cap.level) < 1e-9);
    for (size_t q = 0; q < cap.sample.ring("outer").x.size(); ++q) {
        const auto& b = cap.sample.ring("outer");
        CHECK(std::abs(minkowski_dot(b.phi[q], null_lift(b.x[q])) + std::exp(-1.0)) < 1e-14);
    }
    const auto half = cap_construction(0.7, M_PI / 2);
    CHECK(half.level == 0.0);
    CHECK(half.verification.passed);
    CHECK(cap_construction(0.7, M_PI / 3, 3, 24).verification.passed);
    CHECK_THROWS_AS(cap_construction(1.0, 2.0), InputError);
    CHECK_THROWS_AS(cap_construction(1.0, 0.0), InputError);
    CHECK(std::abs(dilation_from_curvature(1.0 / std::tanh(0.8)) - 0.8) < 1e-14);
}

TEST_CASE("embeddedness") {
    const auto h = geodesic_sphere(1.0, latlon(24));
    const auto rep = embeddedness_check(h);
    CHECK(rep.passed);
    CHECK(rep.metric("pairs") > 0);
    CHECK(embeddedness_check(geodesic_sphere(0.5, radial(3, 2.5, 40))).passed);
    CHECK(embeddedness_check(embed(FieldGrid::sample(polar(M_PI / 2, 32), make_random_smooth(2, 3, 0.3))
                                       .shifted(1.0),
                                   ungated()))
              .passed);

    // fold: a far-away point is moved onto another one
    auto bad = h;
    bad.phi[bad.size() - 1] = bad.phi[0];
    const auto fail = embeddedness_check(bad);
    CHECK_FALSE(fail.passed);
    CHECK(fail.witness);
}

TEST_CASE("sample csv export") {
    namespace fs = std::filesystem;
    const auto path = (fs::temp_directory_path() / "horo_sample.csv").string();
    write_sample_csv(with_curvatures(geodesic_sphere(1.0, latlon(8))), path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "i,j,x1,x2,x3,phi0,phi1,phi2,phi3,ball1,ball2,ball3,k1,k2");
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    CHECK(rows == 8 * 16);
    fs::remove(path);
}
