#pragma once

#include "horo/sphere/field.hpp"

#include <string>
#include <vector>

namespace horo::sphere {

enum class Measure { round, conformal };

// Per-sample g0 volume weights over the (active) interior. Caps use a
// fourth-order rule in theta with an even end-fit on [0, theta_0], latlon uses
// Fejer's rule in cos(theta); phi is always trapezoidal. Samples inside
// excluded balls get zero weight.
std::vector<double> volume_weights(const SphereDomain& d);

// Per-sample g0 arclength (area) weights on a boundary ring.
std::vector<double> ring_weights(const SphereDomain& d, const BoundaryRing& ring);

// Integral of f over the interior. Conformal measure multiplies by e^{n rho}.
double integrate(const SphereDomain& d, const std::vector<double>& f, Measure m = Measure::round,
                 const FieldGrid* rho = nullptr);

// Integral of per-ring-sample values over a named boundary component; the
// conformal boundary measure multiplies by e^{(n-1) rho} using the ring's
// traced rho values.
double integrate_ring(const SphereDomain& d, const BoundaryRing& ring, const std::vector<double>& f,
                      Measure m = Measure::round, const std::vector<double>* rho_on_ring = nullptr);

// Field-level convenience matching region names: "interior" or a ring name.
double integrate(const FieldGrid& field, Measure m, const std::string& region, const FieldGrid* rho = nullptr);

}  // namespace horo::sphere
