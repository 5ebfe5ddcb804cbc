#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pdmetric/diagram.hpp"
#include "pdmetric/prokhorov.hpp"

namespace pdmetric::oracle {

// Exhaustive ground truth on small diagrams: every bijection between
// U = X0 + proj(Y0) and V = Y0 + proj(X0) is enumerated. A pair of two
// diagonal points costs 0; every other pair costs its ground distance,
// including pairs of a point with a projection other than its own.

inline constexpr std::size_t kMaxPoints = 10;  // |X0| + |Y0|; 10! bijections

// Throws std::length_error when |X0| + |Y0| exceeds kMaxPoints.
std::size_t brute_profile_value(const PersistenceDiagram& x, const PersistenceDiagram& y, double t,
                                GroundMetric metric = {});

// Profile values at several thresholds from a single enumeration.
std::vector<std::size_t> brute_profile_values(const PersistenceDiagram& x, const PersistenceDiagram& y,
                                              std::span<const double> thresholds, GroundMetric metric = {});

// Least element of prokhorov_candidates(x, y, f) beyond pi_f, with the
// profile evaluated by enumeration.
double brute_prokhorov(const PersistenceDiagram& x, const PersistenceDiagram& y, const ParamFunction& f,
                       GroundMetric metric = {});

double brute_wasserstein(const PersistenceDiagram& x, const PersistenceDiagram& y, double order,
                         GroundMetric metric = {});

}  // namespace pdmetric::oracle
