#include "horo/elliptic/data.hpp"

#include "horo/elliptic/expression.hpp"
#include "horo/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace horo::elliptic {

namespace {

double binomial(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

double sigma_k_value(const Eigen::VectorXd& x, int k) {
    const double s = elementary_symmetric(x)(k);
    const double c = 2.0 / std::pow(binomial(static_cast<int>(x.size()), k), 1.0 / k);
    if (k == 1) return c * s;
    return c * std::pow(std::max(s, 0.0), 1.0 / k);
}

void check_nk(int n, int k) {
    if (n < 1) throw InputError("dimension n must be positive");
    if (k < 1 || k > n) throw InputError("k out of range: need 1 <= k <= n (k = " + std::to_string(k) + ")");
}

Witness sample_witness(long i, const Eigen::VectorXd& x, const std::string& where = "sample") {
    return Witness{i, where, std::vector<double>(x.data(), x.data() + x.size())};
}

std::string vec_str(const Eigen::VectorXd& v) {
    std::ostringstream os;
    os.precision(6);
    os << "(";
    for (long i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
    os << ")";
    return os.str();
}

}  // namespace

bool in_garding_cone(const Eigen::VectorXd& x, int k) {
    const Eigen::VectorXd e = elementary_symmetric(x);
    for (int j = 1; j <= k; ++j)
        if (!(e(j) > 0.0)) return false;
    return true;
}

EllipticData make_sigma_k(int n, int k) {
    check_nk(n, k);
    EllipticData d;
    d.family = "sigma_k";
    d.tag = "sigma_k:k=" + std::to_string(k);
    d.n = n;
    d.concave = true;
    d.f = [k](const Eigen::VectorXd& x) { return sigma_k_value(x, k); };
    d.cone = [k](const Eigen::VectorXd& x) { return in_garding_cone(x, k); };
    return d;
}

EllipticData make_weighted_sum(int n, const std::map<int, double>& weights) {
    if (weights.empty()) throw InputError("weighted_sum needs at least one term");
    double total = 0.0;
    int kmax = 0;
    for (const auto& [k, w] : weights) {
        check_nk(n, k);
        if (!(w > 0.0)) throw InputError("weighted_sum weights must be positive");
        total += w;
        kmax = std::max(kmax, k);
    }
    if (std::abs(total - 1.0) > 1e-12) throw InputError("weighted_sum weights must sum to 1");
    EllipticData d;
    d.family = "weighted_sum";
    std::ostringstream tag;
    tag << "weighted_sum:";
    bool first = true;
    for (const auto& [k, w] : weights) {
        tag << (first ? "" : ",") << k << "=" << w;
        first = false;
    }
    d.tag = tag.str();
    d.n = n;
    d.concave = true;
    d.f = [weights](const Eigen::VectorXd& x) {
        double v = 0.0;
        for (const auto& [k, w] : weights) v += w * sigma_k_value(x, k);
        return v;
    };
    d.cone = [kmax](const Eigen::VectorXd& x) { return in_garding_cone(x, kmax); };
    return d;
}

EllipticData make_min_normalized(int n, const std::vector<int>& ks) {
    if (ks.empty()) throw InputError("min_normalized needs at least one k");
    for (int k : ks) check_nk(n, k);
    const int kmax = *std::max_element(ks.begin(), ks.end());
    EllipticData d;
    d.family = "min_normalized";
    std::ostringstream tag;
    tag << "min_normalized:";
    for (size_t i = 0; i < ks.size(); ++i) tag << (i ? "," : "") << ks[i];
    d.tag = tag.str();
    d.n = n;
    d.concave = true;
    d.f = [ks](const Eigen::VectorXd& x) {
        double v = std::numeric_limits<double>::infinity();
        for (int k : ks) v = std::min(v, sigma_k_value(x, k));
        return v;
    };
    d.cone = [kmax](const Eigen::VectorXd& x) { return in_garding_cone(x, kmax); };
    return d;
}

EllipticData make_user(int n, const std::string& f, const std::vector<std::string>& cone, bool concave) {
    if (cone.empty()) throw InputError("user elliptic data needs an explicit cone predicate");
    const Expression fe = Expression::parse(f, n);
    std::vector<Expression> ineq;
    for (const auto& c : cone) ineq.push_back(Expression::parse(c, n));
    EllipticData d;
    d.family = "user";
    d.tag = "user:" + f;
    d.n = n;
    d.concave = concave;
    d.f = [fe](const Eigen::VectorXd& x) { return fe.eval(x); };
    d.cone = [ineq](const Eigen::VectorXd& x) {
        for (const auto& e : ineq)
            if (!(e.eval(x) > 0.0)) return false;
        return true;
    };
    return d;
}

EllipticData load_user_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open elliptic data file '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("elliptic data file '" + path + "': " + e.what());
    }
    static const std::set<std::string> allowed{"version", "n", "f", "cone", "concave"};
    if (!j.is_object()) throw InputError("elliptic data file must hold a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw InputError("elliptic data file: unknown key '" + it.key() + "'");
    try {
        if (j.at("version").get<int>() != 1) throw InputError("elliptic data file: unsupported version");
        return make_user(j.at("n").get<int>(), j.at("f").get<std::string>(),
                         j.at("cone").get<std::vector<std::string>>(), j.value("concave", false));
    } catch (const nlohmann::json::exception& e) {
        throw InputError("elliptic data file '" + path + "': " + e.what());
    }
}

EllipticData parse_elliptic_spec(const std::string& spec, int n) {
    const auto colon = spec.find(':');
    const std::string family = spec.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(item);
        return out;
    };
    try {
        if (family == "sigma_k") {
            if (args.rfind("k=", 0) != 0) throw InputError("sigma_k spec needs 'k=<int>'");
            return make_sigma_k(n, std::stoi(args.substr(2)));
        }
        if (family == "weighted_sum") {
            std::map<int, double> w;
            for (const auto& item : split(args)) {
                const auto eq = item.find('=');
                if (eq == std::string::npos) throw InputError("weighted_sum terms look like '<k>=<weight>'");
                w[std::stoi(item.substr(0, eq))] = std::stod(item.substr(eq + 1));
            }
            return make_weighted_sum(n, w);
        }
        if (family == "min_normalized") {
            std::vector<int> ks;
            for (const auto& item : split(args)) ks.push_back(std::stoi(item));
            return make_min_normalized(n, ks);
        }
        if (family == "file") {
            EllipticData d = load_user_file(args);
            if (d.n != n) throw InputError("elliptic data file has n = " + std::to_string(d.n) + ", expected " +
                                           std::to_string(n));
            return d;
        }
    } catch (const std::invalid_argument&) {
        throw InputError("malformed elliptic data spec '" + spec + "'");
    } catch (const std::out_of_range&) {
        throw InputError("malformed elliptic data spec '" + spec + "'");
    }
    throw InputError("unknown elliptic data family '" + family + "'");
}

std::vector<Eigen::VectorXd> sample_cone(const EllipticData& d, int count, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> shift(-0.5, 2.0);
    std::vector<Eigen::VectorXd> out;
    out.reserve(count);
    auto orthant = [&]() {
        Eigen::VectorXd x(d.n);
        for (int i = 0; i < d.n; ++i) x(i) = std::exp(normal(rng));
        return x;
    };
    for (int s = 0; s < count; ++s) {
        if (s % 2 == 0) {
            out.push_back(orthant());
            continue;
        }
        bool found = false;
        for (int attempt = 0; attempt < 1000 && !found; ++attempt) {
            Eigen::VectorXd x(d.n);
            const double c = shift(rng);
            for (int i = 0; i < d.n; ++i) x(i) = normal(rng) + c;
            if (d.in_cone(x)) {
                out.push_back(x);
                found = true;
            }
        }
        if (!found) out.push_back(orthant());
    }
    return out;
}

Eigen::VectorXd numeric_gradient(const EllipticData& d, const Eigen::VectorXd& x, double step) {
    Eigen::VectorXd g(x.size());
    for (long i = 0; i < x.size(); ++i) {
        Eigen::VectorXd p = x, m = x;
        p(i) += step;
        m(i) -= step;
        if (d.in_cone(m)) g(i) = (d(p) - d(m)) / (2.0 * step);
        else g(i) = (d(p) - d(x)) / step;
    }
    return g;
}

CheckReport validate_axioms(const EllipticData& d, const AxiomOptions& opt) {
    CheckReport rep;
    rep.name = "elliptic_axioms";
    rep.info["family"] = d.family;
    rep.info["data"] = d.tag;
    rep.metrics["samples"] = opt.samples;
    const auto samples = sample_cone(d, opt.samples, opt.seed);
    std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
    const int n = d.n;

    auto gate = [&](CheckReport& c, double violation, long idx, const Eigen::VectorXd& x) {
        if (violation > c.metrics["violation"]) {
            c.metrics["violation"] = violation;
            if (violation > opt.tol) {
                c.passed = false;
                c.witness = sample_witness(idx, x);
            }
        }
    };

    // (1) Gamma_n in Gamma in Gamma_1, plus sampled cone/convexity structure
    {
        CheckReport c;
        c.name = "cone_sandwich";
        c.metrics["violation"] = 0.0;
        long bad = 0;
        for (size_t i = 0; i < samples.size(); ++i) {
            const auto& x = samples[i];
            const bool positive = (x.array() > 0.0).all();
            double v = 0.0;
            if (positive && !d.in_cone(x)) v = 1.0;
            if (d.in_cone(x) && !(x.sum() > 0.0)) v = 1.0;
            if (d.in_cone(x) && !d.in_cone(3.7 * x)) v = 1.0;
            const auto& y = samples[(i * 7919 + 13) % samples.size()];
            if (d.in_cone(x) && d.in_cone(y) && !d.in_cone(0.5 * (x + y))) v = 1.0;
            if (v > 0.0) ++bad;
            gate(c, v, static_cast<long>(i), x);
        }
        c.metrics["failures"] = static_cast<double>(bad);
        rep.add_child(std::move(c));
    }
    // (2) symmetry
    {
        CheckReport c;
        c.name = "symmetry";
        c.metrics["violation"] = 0.0;
        std::vector<int> perm(n);
        for (size_t i = 0; i < samples.size(); ++i) {
            const auto& x = samples[i];
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            if (i % 3 == 0 && n > 1) {
                std::iota(perm.begin(), perm.end(), 0);
                std::swap(perm[0], perm[1 + i % (n - 1)]);
            }
            Eigen::VectorXd px(n);
            for (int a = 0; a < n; ++a) px(a) = x(perm[a]);
            const double fx = d(x);
            const double v = std::abs(d(px) - fx) / std::max(1.0, std::abs(fx));
            const bool was_passing = c.passed;
            gate(c, v, static_cast<long>(i), x);
            if (was_passing && !c.passed) {
                std::ostringstream os;
                for (int a = 0; a < n; ++a) os << (a ? " " : "") << perm[a] + 1;
                c.info["permutation"] = os.str();
            }
        }
        rep.add_child(std::move(c));
    }
    // (3) positivity
    {
        CheckReport c;
        c.name = "positivity";
        c.metrics["violation"] = 0.0;
        double fmin = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < samples.size(); ++i) {
            const double fx = d(samples[i]);
            fmin = std::min(fmin, fx);
            const double v = fx > 0.0 ? 0.0 : std::max(std::abs(fx), 10.0 * opt.tol);
            gate(c, std::isfinite(fx) ? v : 1.0, static_cast<long>(i), samples[i]);
        }
        c.metrics["min_f"] = fmin;
        rep.add_child(std::move(c));
    }
    // (4) f -> 0 at the cone boundary: power-law decay along rays into the cone
    {
        CheckReport c;
        c.name = "boundary_vanishing";
        c.metrics["violation"] = 0.0;
        double min_exponent = std::numeric_limits<double>::infinity();
        const int rays = std::min<int>(200, static_cast<int>(samples.size()));
        for (int r = 0; r < rays; ++r) {
            const Eigen::VectorXd& x = samples[r];
            const int axis = r % n;
            // walk along -e_axis until leaving the cone (Gamma is inside Gamma_1)
            double lo = 0.0, hi = 1.0;
            while (d.in_cone(x - hi * Eigen::VectorXd::Unit(n, axis))) {
                lo = hi;
                hi *= 2.0;
                if (hi > 1e12) break;
            }
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (d.in_cone(x - mid * Eigen::VectorXd::Unit(n, axis))) lo = mid;
                else hi = mid;
            }
            const Eigen::VectorXd b = x - lo * Eigen::VectorXd::Unit(n, axis);
            const Eigen::VectorXd u = (x - b).normalized();
            std::vector<double> ld, lf;
            bool monotone = true;
            double prev = std::numeric_limits<double>::infinity();
            for (int e = 2; e <= 12; ++e) {
                const double delta = std::pow(10.0, -e) * std::max(1.0, b.norm());
                const double fv = d(b + delta * u);
                if (!(fv > 0.0) || !std::isfinite(fv)) {
                    monotone = false;
                    break;
                }
                if (fv > prev) monotone = false;
                prev = fv;
                ld.push_back(std::log(delta));
                lf.push_back(std::log(fv));
            }
            double slope = 0.0;
            if (ld.size() >= 3) {
                const double mx = std::accumulate(ld.begin(), ld.end(), 0.0) / ld.size();
                const double my = std::accumulate(lf.begin(), lf.end(), 0.0) / lf.size();
                double sxy = 0.0, sxx = 0.0;
                for (size_t q = 0; q < ld.size(); ++q) {
                    sxy += (ld[q] - mx) * (lf[q] - my);
                    sxx += (ld[q] - mx) * (ld[q] - mx);
                }
                slope = sxy / sxx;
            }
            min_exponent = std::min(min_exponent, slope);
            // decaying at a positive rate is vanishing; otherwise report the residual value
            const double v = (monotone && slope > 0.05) ? 0.0 : std::max(std::abs(prev), 10.0 * opt.tol);
            gate(c, v, r, b);
        }
        c.metrics["min_exponent"] = min_exponent;
        rep.add_child(std::move(c));
    }
    // (5) homogeneity of degree one
    {
        CheckReport c;
        c.name = "homogeneity";
        c.metrics["violation"] = 0.0;
        for (double t : {0.5, 2.0, 10.0}) {
            double worst = 0.0;
            for (size_t i = 0; i < samples.size(); ++i) {
                const auto& x = samples[i];
                const double fx = d(x);
                const double v = std::abs(d(t * x) - t * fx) / (t * std::max(std::abs(fx), 1e-300));
                worst = std::max(worst, v);
                const bool was_passing = c.passed;
                gate(c, v, static_cast<long>(i), x);
                if (was_passing && !c.passed) {
                    std::ostringstream os;
                    os << t;
                    c.info["t"] = os.str();
                }
            }
            std::ostringstream key;
            key << "violation_t" << t;
            c.metrics[key.str()] = worst;
        }
        rep.add_child(std::move(c));
    }
    // (6) gradient in Gamma_n
    {
        CheckReport c;
        c.name = "monotonicity";
        c.metrics["violation"] = 0.0;
        for (size_t i = 0; i < samples.size(); ++i) {
            const auto& x = samples[i];
            const double step = 1e-6 * std::max(1.0, x.cwiseAbs().maxCoeff());
            const Eigen::VectorXd g = numeric_gradient(d, x, step);
            double v = 0.0;
            for (int a = 0; a < n; ++a)
                if (!(g(a) > 0.0)) v = std::max(v, std::max(-g(a), 10.0 * opt.tol));
            gate(c, v, static_cast<long>(i), x);
        }
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
        const Eigen::VectorXd g1 = numeric_gradient(d, ones);
        c.metrics["gradient_at_one_defect"] = (g1.array() - 2.0 / n).abs().maxCoeff();
        c.info["gradient_at_one"] = vec_str(g1);
        rep.add_child(std::move(c));
    }
    // (7) normalization
    {
        CheckReport c;
        c.name = "normalization";
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
        const double v = std::abs(d(ones) - 2.0);
        c.metrics["f_at_one"] = d(ones);
        c.metrics["violation"] = v;
        if (!(v <= 1e-12)) c.fail(sample_witness(-1, ones, "diagonal"));
        rep.add_child(std::move(c));
    }
    double worst = 0.0;
    for (const auto& c : rep.children) worst = std::max(worst, c.metric("violation"));
    rep.metrics["worst_violation"] = worst;
    rep.finalize();
    return rep;
}

CheckReport supersolution_check(const EllipticData& d, const std::vector<Eigen::VectorXd>& lambda, double tol,
                                const sphere::SphereDomain* domain) {
    CheckReport rep;
    rep.name = "supersolution";
    rep.info["data"] = d.tag;
    rep.metrics["tol"] = tol;
    double fmin = std::numeric_limits<double>::infinity();
    long at = -1, cone_bad = 0, first_cone_bad = -1;
    for (size_t k = 0; k < lambda.size(); ++k) {
        if (domain && !domain->active(static_cast<long>(k))) continue;
        if (!lambda[k].allFinite()) throw NumericalError("non-finite eigenvalues at grid index " + std::to_string(k));
        if (!d.in_cone(lambda[k])) {
            if (first_cone_bad < 0) first_cone_bad = static_cast<long>(k);
            ++cone_bad;
            continue;
        }
        const double fv = d(lambda[k]);
        if (fv < fmin) fmin = fv, at = static_cast<long>(k);
    }
    rep.metrics["min_f"] = fmin;
    rep.metrics["cone_violations"] = static_cast<double>(cone_bad);
    auto wit = [&](long k) {
        if (domain) return domain->witness(k);
        return sample_witness(k, lambda[k]);
    };
    if (cone_bad > 0) {
        rep.info["failure"] = "eigenvalues outside the cone";
        rep.fail(wit(first_cone_bad));
    } else if (!(fmin >= 1.0 - tol)) {
        rep.info["failure"] = "f(lambda) below 1";
        rep.fail(wit(at));
    }
    if (at >= 0) rep.info["min_f_lambda"] = vec_str(lambda[at]);
    return rep;
}

CheckReport supersolution_check(const EllipticData& d, const conformal::SchoutenEigenvalues& lambda, double tol) {
    return supersolution_check(d, lambda.values, tol, lambda.domain.get());
}

CheckReport concavity_bound_check(const EllipticData& d, const std::vector<Eigen::VectorXd>& lambda, double tol,
                                  const sphere::SphereDomain* domain) {
    if (!d.concave) throw InputError("concavity bound needs elliptic data declared concave (" + d.tag + ")");
    CheckReport rep;
    rep.name = "concavity_bound";
    rep.info["data"] = d.tag;
    const int n = d.n;
    double worst = -std::numeric_limits<double>::infinity();
    double max_gap = 0.0;
    long at = -1;
    for (size_t k = 0; k < lambda.size(); ++k) {
        if (!d.in_cone(lambda[k])) continue;
        const double bound = 2.0 * lambda[k].sum() / n;  // R / (n(n-1))
        const double excess = d(lambda[k]) - bound;
        max_gap = std::max(max_gap, -excess);
        if (excess > worst) worst = excess, at = static_cast<long>(k);
    }
    rep.metrics["max_excess"] = worst;
    rep.metrics["max_slack"] = max_gap;
    if (at >= 0 && worst > tol) {
        if (domain) rep.fail(domain->witness(at));
        else rep.fail(sample_witness(at, lambda[at]));
    }
    return rep;
}

CheckReport concavity_bound_check(const EllipticData& d, const conformal::SchoutenEigenvalues& lambda, double tol) {
    return concavity_bound_check(d, lambda.values, tol, lambda.domain.get());
}

}  // namespace horo::elliptic
