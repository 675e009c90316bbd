#pragma once

#include "horo/sphere/domain.hpp"

#include <vector>

namespace horo::sphere {

// Finite-difference weights for derivative `order` at x0 on arbitrary nodes.
std::vector<double> fornberg_weights(const std::vector<double>& nodes, double x0, int order);

// How a quantity continues across theta = 0 on the radial chart, where the
// representative meridian is reflected. Scalars are even; the first ambient
// coordinate of an equivariant map is odd.
enum class Parity { even, odd };

// Chart-coordinate derivatives on a SphereDomain. Ghost values across the
// pole (and the south pole for latlon) come from antipodal continuation;
// near an outer boundary the window slides inward.
class ChartDifferentiator {
public:
    // accuracy: 2 or 4
    ChartDifferentiator(DomainPtr domain, int accuracy = 4);

    std::vector<double> d_theta(const std::vector<double>& f, Parity p = Parity::even) const;
    std::vector<double> d_theta2(const std::vector<double>& f, Parity p = Parity::even) const;
    std::vector<double> d_phi(const std::vector<double>& f) const;
    std::vector<double> d_phi2(const std::vector<double>& f) const;

    int accuracy() const { return accuracy_; }
    const SphereDomain& domain() const { return *domain_; }

private:
    struct Row {
        std::vector<int> offsets;  // absolute ring indices (may be ghosts)
        std::vector<double> weights;
    };
    std::vector<double> apply_theta(const std::vector<Row>& rows, const std::vector<double>& f,
                                    Parity p) const;
    std::vector<double> apply_phi(const std::vector<double>& w, const std::vector<double>& f) const;

    DomainPtr domain_;
    int accuracy_;
    std::vector<Row> theta1_, theta2_;
    std::vector<double> phi1_, phi2_;  // centered weights, offsets -m..m
};

}  // namespace horo::sphere
