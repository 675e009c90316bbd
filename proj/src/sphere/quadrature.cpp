#include "horo/sphere/quadrature.hpp"

#include "horo/error.hpp"
#include "horo/sphere/interpolate.hpp"

#include <cmath>

namespace horo::sphere {

namespace {

// Gauss-Legendre rule on [a, b].
void gauss_legendre(int m, double a, double b, std::vector<double>& x, std::vector<double>& w) {
    x.assign(m, 0.0);
    w.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= m; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = m * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = 0.5 * (a + b) - 0.5 * (b - a) * z;
        w[i] = (b - a) / ((1.0 - z * z) * dp * dp);
    }
}

// Fejer's first rule in x = cos(theta): exact for polynomials in cos(theta) of
// degree < nt, hence spectrally accurate on the full sphere.
std::vector<double> fejer_weights(int nt) {
    std::vector<double> w(nt);
    for (int i = 0; i < nt; ++i) {
        const double th = (i + 0.5) * M_PI / nt;
        double acc = 1.0;
        for (int k = 1; k <= nt / 2; ++k) acc -= 2.0 * std::cos(2.0 * k * th) / (4.0 * k * k - 1.0);
        w[i] = 2.0 / nt * acc;
    }
    return w;
}

// Theta weights for integrand F(theta) sin^{n-1}(theta), returned per ring.
std::vector<double> theta_weights(const SphereDomain& d) {
    const int nt = d.n_theta();
    if (d.chart() == ChartKind::latlon) return fejer_weights(nt);
    const int n = d.n();
    const double h = d.h_theta();
    std::vector<double> c(nt, 1.0);
    const double ends[4] = {17.0 / 48.0, 59.0 / 48.0, 43.0 / 48.0, 49.0 / 48.0};
    for (int a = 0; a < 4; ++a) {
        c[a] = ends[a];
        c[nt - 1 - a] = ends[a];
    }
    std::vector<double> w(nt);
    for (int i = 0; i < nt; ++i) w[i] = h * c[i] * std::pow(std::sin(d.theta(i)), n - 1);

    // [0, theta_0]: F ~ a + b theta^2 through rings 0 and 1.
    std::vector<double> gx, gw;
    const double t0 = d.theta(0), t1 = d.theta(1);
    gauss_legendre(12, 0.0, t0, gx, gw);
    double i0 = 0.0, i2 = 0.0;
    for (size_t q = 0; q < gx.size(); ++q) {
        const double s = std::pow(std::sin(gx[q]), n - 1);
        i0 += gw[q] * s;
        i2 += gw[q] * gx[q] * gx[q] * s;
    }
    const double cc = (i2 - t0 * t0 * i0) / (t1 * t1 - t0 * t0);
    w[0] += i0 - cc;
    w[1] += cc;
    return w;
}

}  // namespace

std::vector<double> volume_weights(const SphereDomain& d) {
    const auto tw = theta_weights(d);
    std::vector<double> w(d.size());
    const double factor = d.chart() == ChartKind::radial ? unit_sphere_volume(d.n() - 1) : d.h_phi();
    for (long k = 0; k < d.size(); ++k) w[k] = d.active(k) ? tw[d.ring_of(k)] * factor : 0.0;
    return w;
}

std::vector<double> ring_weights(const SphereDomain& d, const BoundaryRing& ring) {
    const size_t m = ring.points.size();
    const double total = unit_sphere_volume(d.n() - 1) * std::pow(std::sin(ring.radius), d.n() - 1);
    return std::vector<double>(m, total / static_cast<double>(m));
}

double integrate(const SphereDomain& d, const std::vector<double>& f, Measure m, const FieldGrid* rho) {
    if (static_cast<long>(f.size()) != d.size()) throw InputError("field size does not match grid");
    if (m == Measure::conformal && !rho) throw InputError("conformal measure needs the conformal factor");
    const auto w = volume_weights(d);
    double acc = 0.0;
    for (long k = 0; k < d.size(); ++k) {
        double v = f[k] * w[k];
        if (m == Measure::conformal) v *= std::exp(d.n() * rho->values[k]);
        acc += v;
    }
    return acc;
}

double integrate_ring(const SphereDomain& d, const BoundaryRing& ring, const std::vector<double>& f, Measure m,
                      const std::vector<double>* rho_on_ring) {
    if (f.size() != ring.points.size()) throw InputError("ring sample count mismatch");
    if (m == Measure::conformal && !rho_on_ring) throw InputError("conformal measure needs the conformal factor");
    const auto w = ring_weights(d, ring);
    double acc = 0.0;
    for (size_t q = 0; q < f.size(); ++q) {
        double v = f[q] * w[q];
        if (m == Measure::conformal) v *= std::exp((d.n() - 1) * (*rho_on_ring)[q]);
        acc += v;
    }
    return acc;
}

namespace {

std::vector<double> trace_values(const FieldGrid& f, const BoundaryRing& ring) {
    std::vector<double> out(ring.points.size());
    for (size_t q = 0; q < out.size(); ++q) {
        if (ring.grid_aligned()) out[q] = f.values[ring.grid_index[q]];
        else if (f.generator) out[q] = f.generator->value(ring.points[q]);
        else out[q] = interpolate(*f.domain, f.values, ring.points[q]);
    }
    return out;
}

}  // namespace

double integrate(const FieldGrid& field, Measure m, const std::string& region, const FieldGrid* rho) {
    field.validate();
    const SphereDomain& d = *field.domain;
    if (region == "interior") return integrate(d, field.values, m, rho);
    const BoundaryRing& ring = d.ring(region);
    const auto vals = trace_values(field, ring);
    if (m == Measure::conformal) {
        if (!rho) throw InputError("conformal measure needs the conformal factor");
        const auto rr = trace_values(*rho, ring);
        return integrate_ring(d, ring, vals, m, &rr);
    }
    return integrate_ring(d, ring, vals, m);
}

}  // namespace horo::sphere
