#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "pdmetric/diagram.hpp"

namespace pdmetric {

// The bottleneck profile t -> D_{X,Y}(t): the least number, over all
// bijections of the augmented diagrams, of pairs at distance > t.
//
// Stored as a right-continuous step function: value(s) = steps[i].value for
// s in [steps[i].threshold, steps[i+1].threshold). The first threshold is 0,
// thresholds increase strictly, values decrease strictly and end at 0.
class BottleneckProfile {
 public:
  struct Step {
    double threshold;
    std::size_t value;
    friend bool operator==(const Step&, const Step&) = default;
  };

  // Throws std::invalid_argument if the step invariants do not hold.
  BottleneckProfile(std::vector<Step> steps, std::size_t n_x, std::size_t n_y, GroundMetric metric = {});

  const std::vector<Step>& steps() const { return steps_; }
  std::size_t n_x() const { return n_x_; }
  std::size_t n_y() const { return n_y_; }
  const GroundMetric& metric() const { return metric_; }

  // O(log #steps). Throws std::invalid_argument if t < 0.
  std::size_t value_at(double t) const;

  // First threshold at which the profile is 0, i.e. the bottleneck distance.
  double zero_threshold() const { return steps_.back().threshold; }

 private:
  std::vector<Step> steps_;
  std::size_t n_x_, n_y_;
  GroundMetric metric_;
};

// D_{X,Y}(t) = |X0| + |Y0| - M(t). Throws std::invalid_argument if t < 0.
std::size_t profile_value(const PersistenceDiagram& x, const PersistenceDiagram& y, double t,
                          GroundMetric metric = {});

BottleneckProfile full_profile(const PersistenceDiagram& x, const PersistenceDiagram& y, GroundMetric metric = {});

inline std::size_t profile_query(const BottleneckProfile& profile, double t) { return profile.value_at(t); }

// {"ground_order": "<p|inf>", "n_x": .., "n_y": .., "steps": [[t, value], ...]}
std::string profile_to_json(const BottleneckProfile& profile);
BottleneckProfile profile_from_json(const std::string& text);

// Header `t,value`, then one row per step.
void write_profile_csv(std::ostream& out, const BottleneckProfile& profile);

}  // namespace pdmetric
