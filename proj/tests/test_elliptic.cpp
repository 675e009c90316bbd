#include <doctest.h>

#include "horo/elliptic/data.hpp"
#include "horo/elliptic/expression.hpp"
#include "horo/error.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace horo;
using namespace horo::elliptic;

TEST_CASE("elementary symmetric polynomials") {
    const auto e = elementary_symmetric(Eigen::Vector3d(1, 2, 3));
    CHECK(e(0) == 1.0);
    CHECK(e(1) == 6.0);
    CHECK(e(2) == 11.0);
    CHECK(e(3) == 6.0);
}

TEST_CASE("sigma_k normalization and closed forms") {
    const auto d31 = make_sigma_k(3, 1);
    CHECK(std::abs(d31(Eigen::Vector3d(1, 2, 4)) - 2.0 / 3.0 * 7.0) < 1e-14);
    const auto d22 = make_sigma_k(2, 2);
    CHECK(std::abs(d22(Eigen::Vector2d(0.5, 0.5)) - 1.0) < 1e-15);
    CHECK(std::abs(d22(Eigen::Vector2d(0.2, 0.8)) - 2.0 * std::sqrt(0.16)) < 1e-15);
    for (int n = 1; n <= 5; ++n)
        for (int k = 1; k <= n; ++k) CHECK(std::abs(make_sigma_k(n, k)(Eigen::VectorXd::Ones(n)) - 2.0) < 1e-12);
    CHECK_THROWS_AS(make_sigma_k(3, 4), InputError);
    CHECK_THROWS_AS(make_sigma_k(3, 0), InputError);
}

TEST_CASE("garding cones") {
    CHECK(in_garding_cone(Eigen::Vector3d(2, 2, -0.5), 2));  // s1 = 3.5, s2 = 4 - 2 = 2
    CHECK_FALSE(in_garding_cone(Eigen::Vector3d(2, 2, -0.5), 3));
    CHECK_FALSE(in_garding_cone(Eigen::Vector3d(1, 1, -0.9), 2));  // s2 = 1 - 1.8 < 0
}

TEST_CASE("axioms hold for built-in families") {
    AxiomOptions opt;
    opt.samples = 2000;
    for (auto [n, k] : {std::pair{2, 1}, {2, 2}, {3, 1}, {3, 2}, {3, 3}, {4, 2}}) {
        const auto rep = validate_axioms(make_sigma_k(n, k), opt);
        CAPTURE(n);
        CAPTURE(k);
        CHECK(rep.passed);
        CHECK(rep.metric("worst_violation") <= 1e-8);
        CHECK(rep.child("monotonicity")->metric("gradient_at_one_defect") < 1e-6);
    }
    // sigma_1 does not vanish on the boundary of Gamma_3: mixing orders breaks axiom 4 only
    const auto mixed = validate_axioms(make_weighted_sum(3, {{1, 0.25}, {3, 0.75}}), opt);
    CHECK_FALSE(mixed.passed);
    for (const auto& c : mixed.children) CHECK(c.passed == (c.name != "boundary_vanishing"));
    CHECK(validate_axioms(make_weighted_sum(3, {{2, 1.0}}), opt).passed);
    CHECK(validate_axioms(make_min_normalized(3, {1, 2}), opt).passed);
}

TEST_CASE("axiom failures carry witnesses") {
    AxiomOptions opt;
    opt.samples = 500;
    const auto asym = make_user(3, "2*x1", {"s1"}, false);
    auto rep = validate_axioms(asym, opt);
    CHECK_FALSE(rep.passed);
    CHECK_FALSE(rep.child("symmetry")->passed);
    REQUIRE(rep.child("symmetry")->witness);
    CHECK(rep.child("symmetry")->info.count("permutation") == 1);

    const auto inhom = make_user(3, "2*s1/3 + 1", {"s1"}, true);
    rep = validate_axioms(inhom, opt);
    CHECK_FALSE(rep.child("homogeneity")->passed);
    CHECK(rep.child("homogeneity")->metric("violation_t2") > 1e-3);
    CHECK_FALSE(rep.child("normalization")->passed);

    // sigma_2 on the larger cone Gamma_1 is not positive there
    const auto wrong_cone = make_user(3, "2*sqrt(max(s2,0)/3)", {"s1"}, true);
    rep = validate_axioms(wrong_cone, opt);
    CHECK_FALSE(rep.passed);
}

TEST_CASE("user expression and file") {
    const auto e = Expression::parse("2*sqrt(s2/3) + 0*x1 - -1 + 2^3 - pow(2,3) - 1", 3);
    CHECK(std::abs(e.eval(Eigen::Vector3d(1, 1, 1)) - 2.0) < 1e-15);
    CHECK_THROWS_AS(Expression::parse("x4", 3), InputError);
    CHECK_THROWS_AS(Expression::parse("foo(x1)", 3), InputError);
    CHECK_THROWS_AS(Expression::parse("(x1", 3), InputError);
    CHECK_THROWS_AS(Expression::parse("x1 x2", 3), InputError);
    CHECK_THROWS_AS(make_user(2, "x1", {}, false), InputError);

    namespace fs = std::filesystem;
    const auto path = (fs::temp_directory_path() / "horo_user_data.json").string();
    std::ofstream(path) << R"J({"version":1,"n":2,"f":"2*sqrt(s2)","cone":["s1","s2"],"concave":true})J";
    const auto d = parse_elliptic_spec("file:" + path, 2);
    CHECK(d.family == "user");
    CHECK(validate_axioms(d, {500, 3, 1e-8}).passed);
    CHECK_THROWS_AS(parse_elliptic_spec("file:" + path, 3), InputError);
    std::ofstream(path) << R"J({"version":1,"n":2,"f":"x1","cone":["s1"],"shape":1})J";
    CHECK_THROWS_AS(load_user_file(path), InputError);
    fs::remove(path);

    CHECK(parse_elliptic_spec("sigma_k:k=2", 3).tag == "sigma_k:k=2");
    CHECK_THROWS_AS(parse_elliptic_spec("sigma_k:k=x", 3), InputError);
    CHECK_THROWS_AS(parse_elliptic_spec("nope", 3), InputError);
}

TEST_CASE("supersolution gate") {
    const auto d = make_sigma_k(3, 1);
    std::vector<Eigen::VectorXd> round(5, Eigen::VectorXd::Constant(3, 0.5));
    CHECK(supersolution_check(d, round, 1e-12).passed);
    CHECK(std::abs(supersolution_check(d, round, 1e-12).metric("min_f") - 1.0) < 1e-15);

    std::vector<Eigen::VectorXd> dil(5, Eigen::VectorXd::Constant(3, 0.5 * std::exp(-0.4)));
    auto rep = supersolution_check(d, dil, 1e-8);
    CHECK_FALSE(rep.passed);
    CHECK(std::abs(rep.metric("min_f") - std::exp(-0.4)) < 1e-14);
    REQUIRE(rep.witness);

    std::vector<Eigen::VectorXd> shrink(5, Eigen::VectorXd::Constant(3, 0.5 * std::exp(0.4)));
    CHECK(supersolution_check(d, shrink, 1e-8).passed);

    auto bad = round;
    bad[3] = Eigen::Vector3d(-1, -1, 0.5);
    rep = supersolution_check(d, bad, 1e-8);
    CHECK_FALSE(rep.passed);
    CHECK(rep.metric("cone_violations") == 1.0);
    CHECK(rep.witness->index == 3);
}

TEST_CASE("concavity bound") {
    const auto d2 = make_sigma_k(3, 2);
    // f(0.2,0.5,0.8) = 2 sqrt(0.66/3)
    const Eigen::VectorXd lam = Eigen::Vector3d(0.2, 0.5, 0.8);
    CHECK(std::abs(d2(lam) - 2.0 * std::sqrt(0.66 / 3.0)) < 1e-14);
    CHECK(concavity_bound_check(d2, std::vector<Eigen::VectorXd>{lam}, 1e-10).passed);

    const auto samples = sample_cone(d2, 4000, 9);
    CHECK(concavity_bound_check(d2, samples, 1e-10).passed);
    const auto d1 = make_sigma_k(3, 1);
    const auto rep = concavity_bound_check(d1, sample_cone(d1, 1000, 2), 1e-10);
    CHECK(rep.passed);
    CHECK(rep.metric("max_slack") < 1e-13);
    CHECK_THROWS_AS(concavity_bound_check(make_user(2, "x1+x2", {"s1"}, false),
                                          std::vector<Eigen::VectorXd>{lam.head(2)}, 1e-10),
                    InputError);
}
