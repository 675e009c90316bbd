#include "horo/sphere/stencil.hpp"

#include "horo/error.hpp"

#include <algorithm>

namespace horo::sphere {

std::vector<double> fornberg_weights(const std::vector<double>& nodes, double x0, int order) {
    const int n = static_cast<int>(nodes.size());
    if (order >= n) throw InputError("stencil too small for derivative order");
    // c[j][k]: weight of node j for derivative k
    std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j) w[j] = c[j][order];
    return w;
}

ChartDifferentiator::ChartDifferentiator(DomainPtr domain, int accuracy)
    : domain_(std::move(domain)), accuracy_(accuracy) {
    if (accuracy != 2 && accuracy != 4) throw InputError("stencil accuracy must be 2 or 4");
    const SphereDomain& d = *domain_;
    const int nt = d.n_theta();
    const bool south_ghost = d.chart() == ChartKind::latlon;
    const int half = accuracy / 2;
    const double h = d.h_theta();

    auto build = [&](int deriv) {
        std::vector<Row> rows(nt);
        for (int i = 0; i < nt; ++i) {
            int lo = i - half, width = 2 * half + 1;
            if (!south_ghost && i + half > nt - 1) {
                // one-sided window needs one extra node for the second derivative
                width = accuracy + (deriv == 2 ? 2 : 1);
                lo = nt - width;
            }
            Row row;
            std::vector<double> nodes;
            for (int m = 0; m < width; ++m) {
                row.offsets.push_back(lo + m);
                nodes.push_back(static_cast<double>(lo + m - i));
            }
            row.weights = fornberg_weights(nodes, 0.0, deriv);
            for (auto& w : row.weights) w /= (deriv == 1 ? h : h * h);
            rows[i] = std::move(row);
        }
        return rows;
    };
    theta1_ = build(1);
    theta2_ = build(2);

    if (d.chart() != ChartKind::radial) {
        std::vector<double> nodes;
        for (int m = -half; m <= half; ++m) nodes.push_back(m);
        const double hp = d.h_phi();
        phi1_ = fornberg_weights(nodes, 0.0, 1);
        phi2_ = fornberg_weights(nodes, 0.0, 2);
        for (auto& w : phi1_) w /= hp;
        for (auto& w : phi2_) w /= hp * hp;
    }
}

std::vector<double> ChartDifferentiator::apply_theta(const std::vector<Row>& rows,
                                                     const std::vector<double>& f, Parity p) const {
    const SphereDomain& d = *domain_;
    if (static_cast<long>(f.size()) != d.size()) throw InputError("field size does not match grid");
    const int nt = d.n_theta(), np = d.n_phi();
    const bool radial = d.chart() == ChartKind::radial;
    const double sign = p == Parity::odd ? -1.0 : 1.0;
    std::vector<double> out(f.size(), 0.0);
    for (int i = 0; i < nt; ++i) {
        const Row& row = rows[i];
        for (int j = 0; j < np; ++j) {
            double acc = 0.0;
            for (size_t m = 0; m < row.offsets.size(); ++m) {
                int ii = row.offsets[m];
                int jj = j;
                double s = 1.0;
                if (ii < 0) {
                    ii = -1 - ii;
                    if (radial) s = sign;
                    else jj = (j + np / 2) % np;
                } else if (ii >= nt) {
                    ii = 2 * nt - 1 - ii;
                    jj = (j + np / 2) % np;
                }
                acc += row.weights[m] * s * f[d.index(ii, jj)];
            }
            out[d.index(i, j)] = acc;
        }
    }
    return out;
}

std::vector<double> ChartDifferentiator::apply_phi(const std::vector<double>& w,
                                                   const std::vector<double>& f) const {
    const SphereDomain& d = *domain_;
    if (d.chart() == ChartKind::radial) return std::vector<double>(f.size(), 0.0);
    if (static_cast<long>(f.size()) != d.size()) throw InputError("field size does not match grid");
    const int nt = d.n_theta(), np = d.n_phi();
    const int half = static_cast<int>(w.size()) / 2;
    std::vector<double> out(f.size(), 0.0);
    for (int i = 0; i < nt; ++i)
        for (int j = 0; j < np; ++j) {
            double acc = 0.0;
            for (int m = -half; m <= half; ++m) acc += w[m + half] * f[d.index(i, ((j + m) % np + np) % np)];
            out[d.index(i, j)] = acc;
        }
    return out;
}

std::vector<double> ChartDifferentiator::d_theta(const std::vector<double>& f, Parity p) const {
    return apply_theta(theta1_, f, p);
}
std::vector<double> ChartDifferentiator::d_theta2(const std::vector<double>& f, Parity p) const {
    return apply_theta(theta2_, f, p);
}
std::vector<double> ChartDifferentiator::d_phi(const std::vector<double>& f) const { return apply_phi(phi1_, f); }
std::vector<double> ChartDifferentiator::d_phi2(const std::vector<double>& f) const { return apply_phi(phi2_, f); }

}  // namespace horo::sphere
