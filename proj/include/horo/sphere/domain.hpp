#pragma once

#include "horo/check_report.hpp"

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

namespace horo::sphere {

// polar:  geodesic polar grid about the north pole on S^2, theta in (0, r_max]
// latlon: full S^2 (colatitude / longitude), no boundary ring
// radial: 1D radial grid on S^n for rotationally symmetric fields
enum class ChartKind { polar, latlon, radial };

std::string to_string(ChartKind kind);
ChartKind chart_from_string(const std::string& name);

struct ExcludedBall {
    Eigen::VectorXd center;  // unit vector in R^{n+1}
    double radius = 0.0;     // geodesic radius
};

struct DomainSpec {
    int n = 2;
    ChartKind chart = ChartKind::polar;
    double r_max = 1.5707963267948966;
    int n_theta = 64;
    int n_phi = 64;
    std::vector<ExcludedBall> excluded;
};

// A boundary component: a geodesic circle (sphere) of the given radius about
// `center`. Samples lie exactly on it; `inward` is the g0-unit normal
// pointing into the domain.
struct BoundaryRing {
    std::string name;
    Eigen::VectorXd center;
    double radius = 0.0;
    std::vector<Eigen::VectorXd> points;
    std::vector<Eigen::VectorXd> inward;
    // Grid indices when the ring coincides with a grid ring (polar "outer").
    std::vector<long> grid_index;
    bool grid_aligned() const { return !grid_index.empty(); }
};

// North pole is the last embedding coordinate (x_{n+1}). Grid rings sit at
// theta_i = (i + 1/2) h, so the pole itself is never a sample; for polar and
// radial charts the last ring lies exactly on theta = r_max.
class SphereDomain {
public:
    static std::shared_ptr<const SphereDomain> build(const DomainSpec& spec);

    const DomainSpec& spec() const { return spec_; }
    int n() const { return spec_.n; }
    ChartKind chart() const { return spec_.chart; }
    int n_theta() const { return spec_.n_theta; }
    int n_phi() const { return spec_.chart == ChartKind::radial ? 1 : spec_.n_phi; }
    long size() const { return static_cast<long>(n_theta()) * n_phi(); }
    long index(int i, int j) const { return static_cast<long>(i) * n_phi() + j; }
    int ring_of(long k) const { return static_cast<int>(k / n_phi()); }
    int column_of(long k) const { return static_cast<int>(k % n_phi()); }

    double h_theta() const { return h_theta_; }
    double h_phi() const { return h_phi_; }
    double theta(int i) const { return (i + 0.5) * h_theta_; }
    double phi(int j) const { return j * h_phi_; }
    // Angular extent covered by the theta grid (r_max, or pi for latlon).
    double theta_extent() const;
    bool has_outer_boundary() const { return spec_.chart != ChartKind::latlon; }

    const Eigen::VectorXd& point(long k) const { return points_[k]; }
    // Columns are the g0-orthonormal frame (e_theta, e_2, ..., e_n).
    const Eigen::MatrixXd& frame(long k) const { return frames_[k]; }

    // False for samples inside an excluded ball.
    bool active(long k) const { return active_[k]; }

    const std::vector<BoundaryRing>& rings() const { return rings_; }
    const BoundaryRing& ring(const std::string& name) const;

    // Builds a ring sampling the latitude circle theta = theta(i) (latlon /
    // polar), with inward normal pointing toward the north pole.
    BoundaryRing latitude_ring(int i) const;

    // Witness for grid point k ("boundary:outer" on the outer ring).
    Witness witness(long k) const;
    static Witness ring_witness(const BoundaryRing& ring, size_t q);

    // Typical grid spacing in g0 distance.
    double spacing() const;

private:
    SphereDomain() = default;

    DomainSpec spec_;
    double h_theta_ = 0.0;
    double h_phi_ = 0.0;
    std::vector<Eigen::VectorXd> points_;
    std::vector<Eigen::MatrixXd> frames_;
    std::vector<bool> active_;
    std::vector<BoundaryRing> rings_;
};

using DomainPtr = std::shared_ptr<const SphereDomain>;

// Validates and builds; throws InputError on invalid parameters.
DomainPtr build_grid(const DomainSpec& spec);

double geodesic_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Volume of the unit S^{m}.
double unit_sphere_volume(int m);

}  // namespace horo::sphere
