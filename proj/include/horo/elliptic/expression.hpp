#pragma once

#include <Eigen/Dense>

#include <memory>
#include <string>

namespace horo::elliptic {

// Arithmetic over the symbols x1..xn (coordinates), s1..sn (elementary
// symmetric polynomials) and n. Operators + - * / ^, parentheses, and the
// functions sqrt cbrt exp log abs pow min max.
class Expression {
public:
    static Expression parse(const std::string& text, int n);

    double eval(const Eigen::VectorXd& x) const;
    const std::string& text() const { return text_; }

    struct Node;

private:
    std::string text_;
    int n_ = 0;
    std::shared_ptr<const Node> root_;
};

// sigma_j(x) for j = 0..n
Eigen::VectorXd elementary_symmetric(const Eigen::VectorXd& x);

}  // namespace horo::elliptic
