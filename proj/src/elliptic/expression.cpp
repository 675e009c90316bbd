#include "horo/elliptic/expression.hpp"

#include "horo/error.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <vector>

namespace horo::elliptic {

Eigen::VectorXd elementary_symmetric(const Eigen::VectorXd& x) {
    const long n = x.size();
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n + 1);
    e(0) = 1.0;
    for (long i = 0; i < n; ++i)
        for (long j = i + 1; j >= 1; --j) e(j) += x(i) * e(j - 1);
    return e;
}

struct Expression::Node {
    enum Kind { number, coord, sym, dim, neg, add, sub, mul, div, pow, call } kind;
    double value = 0.0;
    int index = 0;
    std::string fn;
    std::vector<std::shared_ptr<const Node>> args;

    double eval(const Eigen::VectorXd& x, const Eigen::VectorXd& s) const {
        switch (kind) {
            case number: return value;
            case coord: return x(index - 1);
            case sym: return s(index);
            case dim: return static_cast<double>(x.size());
            case neg: return -args[0]->eval(x, s);
            case add: return args[0]->eval(x, s) + args[1]->eval(x, s);
            case sub: return args[0]->eval(x, s) - args[1]->eval(x, s);
            case mul: return args[0]->eval(x, s) * args[1]->eval(x, s);
            case div: return args[0]->eval(x, s) / args[1]->eval(x, s);
            case pow: return std::pow(args[0]->eval(x, s), args[1]->eval(x, s));
            case call: {
                std::vector<double> v;
                for (const auto& a : args) v.push_back(a->eval(x, s));
                if (fn == "sqrt") return std::sqrt(v[0]);
                if (fn == "cbrt") return std::cbrt(v[0]);
                if (fn == "exp") return std::exp(v[0]);
                if (fn == "log") return std::log(v[0]);
                if (fn == "abs") return std::abs(v[0]);
                if (fn == "pow") return std::pow(v[0], v[1]);
                if (fn == "min") return std::min(v[0], v[1]);
                return std::max(v[0], v[1]);
            }
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

class Parser {
public:
    Parser(const std::string& s, int n) : s_(s), n_(n) {}

    NodePtr run() {
        NodePtr e = expr();
        skip();
        if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void error(const std::string& msg) const {
        throw InputError("expression, column " + std::to_string(pos_ + 1) + ": " + msg);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    static NodePtr make(Node::Kind k, std::vector<NodePtr> args) {
        auto node = std::make_shared<Node>();
        node->kind = k;
        node->args = std::move(args);
        return node;
    }

    NodePtr expr() {
        NodePtr l = term();
        while (true) {
            if (accept('+')) l = make(Node::add, {l, term()});
            else if (accept('-')) l = make(Node::sub, {l, term()});
            else return l;
        }
    }
    NodePtr term() {
        NodePtr l = unary();
        while (true) {
            if (accept('*')) l = make(Node::mul, {l, unary()});
            else if (accept('/')) l = make(Node::div, {l, unary()});
            else return l;
        }
    }
    NodePtr unary() {
        if (accept('-')) return make(Node::neg, {unary()});
        if (accept('+')) return unary();
        return power();
    }
    NodePtr power() {
        NodePtr b = primary();
        if (accept('^')) return make(Node::pow, {b, unary()});
        return b;
    }
    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) error("unexpected end of expression");
        if (accept('(')) {
            NodePtr e = expr();
            if (!accept(')')) error("expected ')'");
            return e;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(s_.substr(pos_), &used);
            } catch (const std::exception&) {
                error("bad number");
            }
            pos_ += used;
            auto node = std::make_shared<Node>();
            node->kind = Node::number;
            node->value = v;
            return node;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string id = s_.substr(start, pos_ - start);
            skip();
            if (pos_ < s_.size() && s_[pos_] == '(') return call(id, start);
            return symbol(id, start);
        }
        error("unexpected '" + std::string(1, c) + "'");
    }
    NodePtr symbol(const std::string& id, size_t start) {
        auto node = std::make_shared<Node>();
        if (id == "n") {
            node->kind = Node::dim;
            return node;
        }
        if ((id[0] == 'x' || id[0] == 's') && id.size() > 1 &&
            id.find_first_not_of("0123456789", 1) == std::string::npos) {
            const int idx = std::stoi(id.substr(1));
            if (idx < 1 || idx > n_) {
                pos_ = start;
                error("symbol '" + id + "' out of range for n = " + std::to_string(n_));
            }
            node->kind = id[0] == 'x' ? Node::coord : Node::sym;
            node->index = idx;
            return node;
        }
        pos_ = start;
        error("unknown symbol '" + id + "'");
    }
    NodePtr call(const std::string& id, size_t start) {
        static const std::vector<std::pair<std::string, int>> fns{{"sqrt", 1}, {"cbrt", 1}, {"exp", 1},
                                                                  {"log", 1},  {"abs", 1},  {"pow", 2},
                                                                  {"min", 2},  {"max", 2}};
        int arity = -1;
        for (const auto& [name, a] : fns)
            if (name == id) arity = a;
        if (arity < 0) {
            pos_ = start;
            error("unknown function '" + id + "'");
        }
        accept('(');
        std::vector<NodePtr> args{expr()};
        while (accept(',')) args.push_back(expr());
        if (!accept(')')) error("expected ')'");
        if (static_cast<int>(args.size()) != arity)
            error("function '" + id + "' takes " + std::to_string(arity) + " argument(s)");
        auto node = std::make_shared<Node>();
        node->kind = Node::call;
        node->fn = id;
        node->args = std::move(args);
        return node;
    }

    const std::string& s_;
    int n_;
    size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text, int n) {
    if (n < 1) throw InputError("expression dimension must be positive");
    Expression e;
    e.text_ = text;
    e.n_ = n;
    e.root_ = Parser(text, n).run();
    return e;
}

double Expression::eval(const Eigen::VectorXd& x) const {
    if (x.size() != n_) throw InputError("expression evaluated with wrong dimension");
    return root_->eval(x, elementary_symmetric(x));
}

}  // namespace horo::elliptic
