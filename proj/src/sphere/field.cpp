#include "horo/sphere/field.hpp"

#include "horo/error.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace horo::sphere {

namespace {

class Constant final : public FieldGenerator {
public:
    explicit Constant(double c) : c_(c) {}
    double value(const Eigen::VectorXd&) const override { return c_; }
    Eigen::VectorXd ambient_gradient(const Eigen::VectorXd& x) const override {
        return Eigen::VectorXd::Zero(x.size());
    }
    std::optional<Eigen::MatrixXd> ambient_hessian(const Eigen::VectorXd& x) const override {
        return Eigen::MatrixXd::Zero(x.size(), x.size());
    }
    std::string tag() const override {
        std::ostringstream os;
        os.precision(17);
        os << "constant(" << c_ << ")";
        return os.str();
    }

private:
    double c_;
};

class Linear final : public FieldGenerator {
public:
    explicit Linear(Eigen::VectorXd a) : a_(std::move(a)) {}
    double value(const Eigen::VectorXd& x) const override { return a_.dot(x); }
    Eigen::VectorXd ambient_gradient(const Eigen::VectorXd&) const override { return a_; }
    std::optional<Eigen::MatrixXd> ambient_hessian(const Eigen::VectorXd& x) const override {
        return Eigen::MatrixXd::Zero(x.size(), x.size());
    }
    std::string tag() const override { return "linear"; }

private:
    Eigen::VectorXd a_;
};

class Mobius final : public FieldGenerator {
public:
    Mobius(double s, Eigen::VectorXd axis) : s_(s), axis_(axis.normalized()) {}
    double value(const Eigen::VectorXd& x) const override {
        return -std::log(std::cosh(s_) - std::sinh(s_) * axis_.dot(x));
    }
    Eigen::VectorXd ambient_gradient(const Eigen::VectorXd& x) const override {
        const double d = std::cosh(s_) - std::sinh(s_) * axis_.dot(x);
        return (std::sinh(s_) / d) * axis_;
    }
    std::optional<Eigen::MatrixXd> ambient_hessian(const Eigen::VectorXd& x) const override {
        const double d = std::cosh(s_) - std::sinh(s_) * axis_.dot(x);
        const double c = std::sinh(s_) / d;
        return Eigen::MatrixXd(c * c * axis_ * axis_.transpose());
    }
    std::string tag() const override {
        std::ostringstream os;
        os.precision(17);
        os << "mobius(s=" << s_ << ")";
        return os.str();
    }

private:
    double s_;
    Eigen::VectorXd axis_;
};

class RandomSmooth final : public FieldGenerator {
public:
    RandomSmooth(int n, unsigned long long seed, double amp) : seed_(seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const int m = n + 1;
        a_ = Eigen::VectorXd(m);
        for (int i = 0; i < m; ++i) a_(i) = amp * u(rng);
        B_ = Eigen::MatrixXd(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) B_(i, j) = B_(j, i) = 0.5 * amp * u(rng);
        dir_ = Eigen::VectorXd(m);
        for (int i = 0; i < m; ++i) dir_(i) = u(rng);
        dir_.normalize();
        c_ = 0.5 * amp * u(rng);
    }
    double value(const Eigen::VectorXd& x) const override {
        const double p = dir_.dot(x);
        return a_.dot(x) + x.dot(B_ * x) + c_ * p * p * p;
    }
    Eigen::VectorXd ambient_gradient(const Eigen::VectorXd& x) const override {
        const double p = dir_.dot(x);
        return a_ + 2.0 * B_ * x + 3.0 * c_ * p * p * dir_;
    }
    std::optional<Eigen::MatrixXd> ambient_hessian(const Eigen::VectorXd& x) const override {
        const double p = dir_.dot(x);
        return Eigen::MatrixXd(2.0 * B_ + 6.0 * c_ * p * dir_ * dir_.transpose());
    }
    std::string tag() const override { return "random(seed=" + std::to_string(seed_) + ")"; }

private:
    unsigned long long seed_;
    Eigen::VectorXd a_;
    Eigen::MatrixXd B_;
    Eigen::VectorXd dir_;
    double c_ = 0.0;
};

class Bump final : public FieldGenerator {
public:
    Bump(Eigen::VectorXd center, double amp, double width)
        : center_(std::move(center)), amp_(amp), w2_(width * width) {}
    double value(const Eigen::VectorXd& x) const override {
        return amp_ * std::exp(-(x - center_).squaredNorm() / w2_);
    }
    Eigen::VectorXd ambient_gradient(const Eigen::VectorXd& x) const override {
        return value(x) * (-2.0 / w2_) * (x - center_);
    }
    std::optional<Eigen::MatrixXd> ambient_hessian(const Eigen::VectorXd& x) const override {
        const Eigen::VectorXd d = x - center_;
        const long m = x.size();
        return Eigen::MatrixXd(value(x) * ((4.0 / (w2_ * w2_)) * d * d.transpose() -
                                           (2.0 / w2_) * Eigen::MatrixXd::Identity(m, m)));
    }
    std::string tag() const override { return "bump"; }

private:
    Eigen::VectorXd center_;
    double amp_;
    double w2_;
};

class RadialPoly final : public FieldGenerator {
public:
    explicit RadialPoly(std::vector<double> c) : c_(std::move(c)) {}
    double value(const Eigen::VectorXd& x) const override {
        const double z = x(x.size() - 1);
        double acc = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
        return acc;
    }
    Eigen::VectorXd ambient_gradient(const Eigen::VectorXd& x) const override {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
        g(x.size() - 1) = derivative(x(x.size() - 1), 1);
        return g;
    }
    std::optional<Eigen::MatrixXd> ambient_hessian(const Eigen::VectorXd& x) const override {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(x.size(), x.size());
        h(x.size() - 1, x.size() - 1) = derivative(x(x.size() - 1), 2);
        return h;
    }
    std::string tag() const override { return "radial_poly"; }

private:
    double derivative(double z, int order) const {
        double acc = 0.0;
        for (size_t k = order; k < c_.size(); ++k) {
            double coef = c_[k];
            for (int m = 0; m < order; ++m) coef *= static_cast<double>(k - m);
            acc += coef * std::pow(z, static_cast<double>(k - order));
        }
        return acc;
    }
    std::vector<double> c_;
};

class Sum final : public FieldGenerator {
public:
    explicit Sum(std::vector<GeneratorPtr> terms) : terms_(std::move(terms)) {}
    double value(const Eigen::VectorXd& x) const override {
        double v = 0.0;
        for (const auto& t : terms_) v += t->value(x);
        return v;
    }
    Eigen::VectorXd ambient_gradient(const Eigen::VectorXd& x) const override {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
        for (const auto& t : terms_) g += t->ambient_gradient(x);
        return g;
    }
    std::optional<Eigen::MatrixXd> ambient_hessian(const Eigen::VectorXd& x) const override {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(x.size(), x.size());
        for (const auto& t : terms_) {
            auto th = t->ambient_hessian(x);
            if (!th) return std::nullopt;
            h += *th;
        }
        return h;
    }
    std::string tag() const override {
        std::string s = "sum(";
        for (size_t i = 0; i < terms_.size(); ++i) s += (i ? "," : "") + terms_[i]->tag();
        return s + ")";
    }

private:
    std::vector<GeneratorPtr> terms_;
};

class Pullback final : public FieldGenerator {
public:
    Pullback(GeneratorPtr base, double s, Eigen::VectorXd axis)
        : base_(std::move(base)), s_(s), axis_(axis.normalized()) {}

    double value(const Eigen::VectorXd& y) const override {
        const double d = std::cosh(s_) - std::sinh(s_) * axis_.dot(y);
        return base_->value(mobius_map(y, -s_, axis_)) - std::log(d);
    }
    Eigen::VectorXd ambient_gradient(const Eigen::VectorXd& y) const override {
        // Phi_{-s}(y) = (y - y_a a + (cosh s y_a - sinh s) a) / D,
        // D = cosh s - sinh s y_a. Extended off the sphere by the same formula.
        const double ch = std::cosh(s_), sh = std::sinh(s_);
        const double ya = axis_.dot(y);
        const double d = ch - sh * ya;
        const Eigen::VectorXd num = y - ya * axis_ + (ch * ya - sh) * axis_;
        const long m = y.size();
        const Eigen::MatrixXd jac =
            (Eigen::MatrixXd::Identity(m, m) + (ch - 1.0) * axis_ * axis_.transpose()) / d +
            (sh / (d * d)) * num * axis_.transpose();
        const Eigen::VectorXd inner = base_->ambient_gradient(num / d);
        return jac.transpose() * inner + (sh / d) * axis_;
    }
    std::optional<Eigen::MatrixXd> ambient_hessian(const Eigen::VectorXd&) const override {
        return std::nullopt;
    }
    std::string tag() const override {
        std::ostringstream os;
        os.precision(17);
        os << "pullback(" << base_->tag() << ",s=" << s_ << ")";
        return os.str();
    }

private:
    GeneratorPtr base_;
    double s_;
    Eigen::VectorXd axis_;
};

}  // namespace

GeneratorPtr make_constant(double c) { return std::make_shared<Constant>(c); }
GeneratorPtr make_linear(Eigen::VectorXd a) { return std::make_shared<Linear>(std::move(a)); }
GeneratorPtr make_mobius(double s, Eigen::VectorXd axis) {
    if (!(axis.norm() > 0.0)) throw InputError("mobius axis must be nonzero");
    return std::make_shared<Mobius>(s, std::move(axis));
}
GeneratorPtr make_random_smooth(int n, unsigned long long seed, double amp) {
    return std::make_shared<RandomSmooth>(n, seed, amp);
}
GeneratorPtr make_bump(Eigen::VectorXd center, double amp, double width) {
    if (!(width > 0.0)) throw InputError("bump width must be positive");
    return std::make_shared<Bump>(std::move(center), amp, width);
}
GeneratorPtr make_radial_poly(std::vector<double> coeffs) {
    return std::make_shared<RadialPoly>(std::move(coeffs));
}
GeneratorPtr make_sum(std::vector<GeneratorPtr> terms) { return std::make_shared<Sum>(std::move(terms)); }
GeneratorPtr make_pullback(GeneratorPtr base, double s, Eigen::VectorXd axis) {
    if (!(axis.norm() > 0.0)) throw InputError("pullback axis must be nonzero");
    return std::make_shared<Pullback>(std::move(base), s, std::move(axis));
}

Eigen::VectorXd mobius_map(const Eigen::VectorXd& x, double s, const Eigen::VectorXd& axis) {
    const Eigen::VectorXd a = axis.normalized();
    const double xa = a.dot(x);
    const double ch = std::cosh(s), sh = std::sinh(s);
    return (x - xa * a + (sh + ch * xa) * a) / (ch + sh * xa);
}

FieldGrid FieldGrid::sample(DomainPtr domain, GeneratorPtr gen) {
    FieldGrid f;
    f.values.resize(domain->size());
    for (long k = 0; k < domain->size(); ++k) f.values[k] = gen->value(domain->point(k));
    f.domain = std::move(domain);
    f.generator = std::move(gen);
    return f;
}

FieldGrid FieldGrid::from_values(DomainPtr domain, std::vector<double> values) {
    FieldGrid f{std::move(domain), std::move(values), nullptr};
    f.validate();
    return f;
}

FieldGrid FieldGrid::shifted(double t) const {
    FieldGrid f = *this;
    for (auto& v : f.values) v += t;
    if (generator) f.generator = make_sum({generator, make_constant(t)});
    return f;
}

void FieldGrid::validate() const {
    if (!domain) throw InputError("field has no domain");
    if (size() != domain->size())
        throw InputError("sample count " + std::to_string(size()) + " does not match grid size " +
                         std::to_string(domain->size()));
    for (long k = 0; k < size(); ++k)
        if (!std::isfinite(values[k]))
            throw NumericalError("non-finite field sample at index " + std::to_string(k));
}

}  // namespace horo::sphere
