#include "horo/sphere/interpolate.hpp"

#include "horo/error.hpp"
#include "horo/sphere/stencil.hpp"

#include <algorithm>
#include <cmath>

namespace horo::sphere {

double polar_angle(const Eigen::VectorXd& x) {
    const long n = x.size() - 1;
    return std::atan2(x.head(n).norm(), x(n));
}

double azimuth(const Eigen::VectorXd& x) {
    double p = std::atan2(x(1), x(0));
    if (p < 0.0) p += 2.0 * M_PI;
    return p;
}

double interpolate(const SphereDomain& d, const std::vector<double>& f, const Eigen::VectorXd& x) {
    if (static_cast<long>(f.size()) != d.size()) throw InputError("field size does not match grid");
    const int nt = d.n_theta(), np = d.n_phi();
    const double th = polar_angle(x);
    const double u = th / d.h_theta() - 0.5;
    int i0 = static_cast<int>(std::floor(u)) - 1;
    if (d.chart() != ChartKind::latlon) i0 = std::min(i0, nt - 4);

    std::vector<double> tnodes;
    for (int a = 0; a < 4; ++a) tnodes.push_back(i0 + a);
    const auto wt = fornberg_weights(tnodes, u, 0);

    auto sample = [&](int i, int j) {
        if (i < 0) {
            i = -1 - i;
            j = (j + np / 2) % np;
        } else if (i >= nt) {
            i = 2 * nt - 1 - i;
            j = (j + np / 2) % np;
        }
        return f[d.index(i, j)];
    };

    if (d.chart() == ChartKind::radial) {
        double acc = 0.0;
        for (int a = 0; a < 4; ++a) acc += wt[a] * sample(i0 + a, 0);
        return acc;
    }
    const double v = azimuth(x) / d.h_phi();
    const int j0 = static_cast<int>(std::floor(v)) - 1;
    std::vector<double> pnodes;
    for (int b = 0; b < 4; ++b) pnodes.push_back(j0 + b);
    const auto wp = fornberg_weights(pnodes, v, 0);
    double acc = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) acc += wt[a] * wp[b] * sample(i0 + a, ((j0 + b) % np + np) % np);
    return acc;
}

}  // namespace horo::sphere
