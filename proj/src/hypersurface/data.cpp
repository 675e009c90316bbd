#include "horo/hypersurface/data.hpp"

#include "horo/elliptic/expression.hpp"
#include "horo/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace horo::hypersurface {

namespace {

Witness sample_witness(long i, const Eigen::VectorXd& x, const std::string& where = "sample") {
    return Witness{i, where, std::vector<double>(x.data(), x.data() + x.size())};
}

void check_kappa(double kappa0) {
    if (!(kappa0 > 1.0) || !std::isfinite(kappa0)) throw InputError("kappa0 must be a finite number > 1");
}

double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

std::vector<Eigen::VectorXd> sample_gamma_star(const WData& d, int count, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> ex(1.0);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<Eigen::VectorXd> out;
    const int n = d.n;
    long guard = 0;
    while (static_cast<int>(out.size()) < count && guard < 100L * count) {
        ++guard;
        Eigen::VectorXd x(n);
        if (out.size() % 2 == 0) {
            for (int i = 0; i < n; ++i) x(i) = 1.0 + ex(rng);
        } else {
            const double scale = (d.kappa0 - 1.0) * (0.2 + 2.0 * ex(rng));
            for (int i = 0; i < n; ++i) x(i) = 1.0 + scale * (1.0 + 0.8 * nd(rng));
        }
        if (d.in_cone(x)) out.push_back(x);
    }
    return out;
}

}  // namespace

bool in_gamma_star_1(const Eigen::VectorXd& x) { return x.sum() > static_cast<double>(x.size()); }
bool in_gamma_star_n(const Eigen::VectorXd& x) { return (x.array() > 1.0).all(); }

WData make_mean_W(int n, double kappa0) {
    if (n < 1) throw InputError("dimension must be >= 1");
    check_kappa(kappa0);
    WData d;
    d.family = "mean";
    std::ostringstream os;
    os << "mean, kappa0=" << kappa0;
    d.tag = os.str();
    d.n = n;
    d.kappa0 = kappa0;
    d.W = [n, kappa0](const Eigen::VectorXd& x) { return (x.sum() / n - 1.0) / (kappa0 - 1.0); };
    d.cone = [](const Eigen::VectorXd& x) { return in_gamma_star_1(x); };
    return d;
}

WData make_sigma_k_W(int n, int k, double kappa0) {
    if (n < 1 || k < 1 || k > n) throw InputError("sigma_k needs 1 <= k <= n");
    check_kappa(kappa0);
    WData d;
    d.family = "sigma_k";
    std::ostringstream os;
    os << "sigma_k, k=" << k << ", kappa0=" << kappa0;
    d.tag = os.str();
    d.n = n;
    d.kappa0 = kappa0;
    const double c = binomial(n, k);
    d.W = [k, c, kappa0](const Eigen::VectorXd& x) {
        const Eigen::VectorXd s = elliptic::elementary_symmetric(x.array() - 1.0);
        return std::pow(std::max(s(k), 0.0) / c, 1.0 / k) / (kappa0 - 1.0);
    };
    d.cone = [k](const Eigen::VectorXd& x) {
        return elliptic::in_garding_cone((x.array() - 1.0).matrix(), k);
    };
    return d;
}

WData make_user_W(int n, double kappa0, const std::string& expr) {
    check_kappa(kappa0);
    const auto e = elliptic::Expression::parse(expr, n);
    WData d;
    d.family = "user";
    d.tag = "user: " + expr;
    d.n = n;
    d.kappa0 = kappa0;
    d.W = [e](const Eigen::VectorXd& x) { return e.eval(x); };
    d.cone = [e](const Eigen::VectorXd& x) { return in_gamma_star_1(x) && e.eval(x) > 0.0; };
    return d;
}

WData parse_W_spec(const std::string& spec, int n, double kappa0) {
    if (spec == "mean") return make_mean_W(n, kappa0);
    if (spec.rfind("sigma_k:", 0) == 0) {
        const std::string rest = spec.substr(8);
        const auto eq = rest.find('=');
        if (rest.substr(0, eq) != "k" || eq == std::string::npos) throw InputError("expected sigma_k:k=<int>");
        try {
            return make_sigma_k_W(n, std::stoi(rest.substr(eq + 1)), kappa0);
        } catch (const std::logic_error&) {
            throw InputError("bad k in '" + spec + "'");
        }
    }
    if (spec.rfind("user:", 0) == 0) return make_user_W(n, kappa0, spec.substr(5));
    throw InputError("unknown curvature data '" + spec + "'");
}

CheckReport validate_W(const WData& d, const elliptic::AxiomOptions& opt) {
    CheckReport rep;
    rep.name = "W_axioms";
    rep.info["family"] = d.family;
    rep.info["data"] = d.tag;
    const int n = d.n;
    const auto samples = sample_gamma_star(d, opt.samples, opt.seed);
    rep.metrics["samples"] = static_cast<double>(samples.size());
    std::mt19937_64 rng(opt.seed ^ 0x51ed270b27a1f1d3ULL);

    auto gate = [&](CheckReport& c, double violation, long idx, const Eigen::VectorXd& x) {
        if (violation > c.metrics["violation"]) {
            c.metrics["violation"] = violation;
            if (violation > opt.tol) c.fail(sample_witness(idx, x));
        }
    };
    auto fresh = [](const std::string& name) {
        CheckReport c;
        c.name = name;
        c.metrics["violation"] = 0.0;
        return c;
    };

    {  // Gamma*_n in Gamma* in Gamma*_1
        CheckReport c = fresh("cone_sandwich");
        std::exponential_distribution<double> ex(1.0);
        for (int i = 0; i < opt.samples / 2; ++i) {
            Eigen::VectorXd y(n);
            for (int j = 0; j < n; ++j) y(j) = 1.0 + 1e-6 + ex(rng);
            if (!d.in_cone(y)) gate(c, 1.0, i, y);
        }
        for (size_t i = 0; i < samples.size(); ++i)
            if (!in_gamma_star_1(samples[i])) gate(c, 1.0, static_cast<long>(i), samples[i]);
        rep.add_child(std::move(c));
    }
    {  // symmetry
        CheckReport c = fresh("symmetry");
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (size_t i = 0; i < samples.size(); ++i) {
            std::shuffle(perm.begin(), perm.end(), rng);
            Eigen::VectorXd y(n);
            for (int j = 0; j < n; ++j) y(j) = samples[i](perm[j]);
            const double v = std::abs(d(y) - d(samples[i])) / std::max(1.0, std::abs(d(samples[i])));
            gate(c, v, static_cast<long>(i), samples[i]);
        }
        rep.add_child(std::move(c));
    }
    {  // positivity
        CheckReport c = fresh("positivity");
        for (size_t i = 0; i < samples.size(); ++i) {
            const double w = d(samples[i]);
            if (!(w > 0.0)) gate(c, std::max(-w, 10.0 * opt.tol), static_cast<long>(i), samples[i]);
        }
        rep.add_child(std::move(c));
    }
    {  // W -> 0 at the cone boundary: power-law decay along rays into the cone
        CheckReport c = fresh("boundary_vanishing");
        const int rays = std::min<int>(200, static_cast<int>(samples.size()));
        double min_exponent = std::numeric_limits<double>::infinity();
        for (int r = 0; r < rays; ++r) {
            const Eigen::VectorXd& x = samples[r];
            const Eigen::VectorXd e = Eigen::VectorXd::Unit(n, r % n);
            double lo = 0.0, hi = 1.0;
            while (d.in_cone(x - hi * e) && hi < 1e12) {
                lo = hi;
                hi *= 2.0;
            }
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                (d.in_cone(x - mid * e) ? lo : hi) = mid;
            }
            const Eigen::VectorXd b = x - lo * e;
            std::vector<double> ld, lw;
            bool monotone = true;
            double prev = std::numeric_limits<double>::infinity();
            for (int k = 2; k <= 12; ++k) {
                const double delta = std::pow(10.0, -k) * std::max(1.0, b.norm());
                const double w = d(b + delta * e);
                if (!(w > 0.0) || !std::isfinite(w)) {
                    monotone = false;
                    break;
                }
                monotone = monotone && w <= prev;
                prev = w;
                ld.push_back(std::log(delta));
                lw.push_back(std::log(w));
            }
            double slope = 0.0;
            if (ld.size() >= 3) {
                const double mx = std::accumulate(ld.begin(), ld.end(), 0.0) / ld.size();
                const double my = std::accumulate(lw.begin(), lw.end(), 0.0) / lw.size();
                double sxy = 0.0, sxx = 0.0;
                for (size_t q = 0; q < ld.size(); ++q) {
                    sxy += (ld[q] - mx) * (lw[q] - my);
                    sxx += (ld[q] - mx) * (ld[q] - mx);
                }
                slope = sxy / sxx;
            }
            min_exponent = std::min(min_exponent, slope);
            const double v = (monotone && slope > 0.05) ? 0.0 : std::max(std::abs(prev), 10.0 * opt.tol);
            gate(c, v, r, b);
        }
        c.metrics["min_exponent"] = min_exponent;
        rep.add_child(std::move(c));
    }
    {  // dW/dx_i > 0
        CheckReport c = fresh("monotonicity");
        for (size_t i = 0; i < samples.size(); ++i) {
            const auto& x = samples[i];
            for (int j = 0; j < n; ++j) {
                const double h = 1e-6 * std::max(1.0, std::abs(x(j)));
                const Eigen::VectorXd e = Eigen::VectorXd::Unit(n, j);
                if (!d.in_cone(x - h * e)) continue;
                const double g = (d(x + h * e) - d(x - h * e)) / (2 * h);
                if (!(g > 0.0)) gate(c, std::max(-g, 10.0 * opt.tol), static_cast<long>(i), x);
            }
        }
        rep.add_child(std::move(c));
    }
    {  // W(kappa0, ..., kappa0) = 1 and W(1, ..., 1) = 0
        CheckReport c = fresh("normalization");
        const Eigen::VectorXd k0 = Eigen::VectorXd::Constant(n, d.kappa0);
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
        const double v0 = std::abs(d(k0) - 1.0);
        c.metrics["W_kappa0"] = d(k0);
        c.metrics["W_ones"] = d(ones);
        c.metrics["violation"] = std::max(v0, std::abs(d(ones)));
        if (!(v0 <= 1e-12)) c.fail(sample_witness(-1, k0, "diagonal"));
        if (!(std::abs(d(ones)) <= 1e-12)) c.fail(sample_witness(-1, ones, "diagonal"));
        if (!d.in_cone(k0)) c.fail(sample_witness(-1, k0, "diagonal"));
        rep.add_child(std::move(c));
    }
    rep.finalize();
    return rep;
}

CheckReport supersolution_W_check(const WData& d, const hyperbolic::HypersurfaceSample& sigma, double tol, int sign) {
    if (sign != 1 && sign != -1) throw InputError("orientation sign must be +1 or -1");
    const auto curv = sigma.curvatures.empty() ? hyperbolic::principal_curvatures(sigma) : sigma.curvatures;
    const auto& dom = *sigma.domain;
    if (dom.n() != d.n) throw InputError("curvature data dimension differs from the hypersurface");
    CheckReport rep;
    rep.name = "W_supersolution";
    rep.info["data"] = d.tag;
    double wmin = std::numeric_limits<double>::infinity();
    long at = -1, cone_bad = 0;
    for (long k = 0; k < static_cast<long>(curv.size()); ++k) {
        if (!dom.active(k)) continue;
        const Eigen::VectorXd x = sign * curv[k];
        if (!x.allFinite()) throw NumericalError("non-finite principal curvature at grid index " + std::to_string(k));
        if (!d.in_cone(x)) {
            if (cone_bad++ == 0) rep.fail(dom.witness(k));
            continue;
        }
        const double w = d(x);
        if (w < wmin) {
            wmin = w;
            at = k;
        }
    }
    rep.metrics = {{"min_W", wmin}, {"cone_violations", double(cone_bad)}, {"tol", tol}};
    if (cone_bad > 0) rep.info["failure"] = "curvatures outside the cone";
    if (at >= 0 && !(wmin >= 1.0 - tol)) rep.fail(dom.witness(at));
    return rep;
}

}  // namespace horo::hypersurface
