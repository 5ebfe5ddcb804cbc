#include "pdmetric/profile.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "pdmetric/matching.hpp"

namespace pdmetric {

BottleneckProfile::BottleneckProfile(std::vector<Step> steps, std::size_t n_x, std::size_t n_y, GroundMetric metric)
    : steps_(std::move(steps)), n_x_(n_x), n_y_(n_y), metric_(metric) {
  if (steps_.empty()) throw std::invalid_argument("profile needs at least one step");
  if (steps_.front().threshold != 0.0) throw std::invalid_argument("profile must start at t = 0");
  if (steps_.back().value != 0) throw std::invalid_argument("profile must end with value 0");
  if (steps_.front().value > n_x + n_y) throw std::invalid_argument("profile value exceeds |X0| + |Y0|");
  for (std::size_t i = 1; i < steps_.size(); ++i) {
    if (!(steps_[i].threshold > steps_[i - 1].threshold) || !(steps_[i].value < steps_[i - 1].value)) {
      throw std::invalid_argument("profile steps must have increasing thresholds and decreasing values");
    }
  }
}

std::size_t BottleneckProfile::value_at(double t) const {
  if (!(t >= 0)) throw std::invalid_argument("profile query needs t >= 0");
  auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                             [](double value, const Step& step) { return value < step.threshold; });
  return std::prev(it)->value;
}

std::size_t profile_value(const PersistenceDiagram& x, const PersistenceDiagram& y, double t, GroundMetric metric) {
  if (!(t >= 0)) throw std::invalid_argument("profile value needs t >= 0");
  ThresholdMatcher matcher(x, y, metric);
  return matcher.vertex_count() - matcher.max_matching_size(t);
}

// Finds each drop of the profile by binary search over the remaining
// candidates; the matcher keeps its matching between evaluations.
BottleneckProfile full_profile(const PersistenceDiagram& x, const PersistenceDiagram& y, GroundMetric metric) {
  const auto candidates = candidate_distances(x, y, metric);
  ThresholdMatcher matcher(x, y, metric);
  const std::size_t n = matcher.vertex_count();
  auto value = [&](std::size_t index) { return n - matcher.max_matching_size(candidates[index]); };

  std::vector<BottleneckProfile::Step> steps;
  std::size_t index = 0;
  std::size_t current = value(0);
  steps.push_back({0.0, current});
  while (current > 0) {
    // value(candidates.back()) == 0: every edge is present at the largest distance.
    std::size_t lo = index + 1, hi = candidates.size() - 1;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (value(mid) < current) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    index = lo;
    current = value(index);
    steps.push_back({candidates[index], current});
  }
  return BottleneckProfile(std::move(steps), x.off_diagonal().size(), y.off_diagonal().size(), metric);
}

namespace {

std::string format_number(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

}  // namespace

std::string profile_to_json(const BottleneckProfile& profile) {
  std::string out = "{\"ground_order\": \"" + profile.metric().to_string() + "\", \"n_x\": " +
                    std::to_string(profile.n_x()) + ", \"n_y\": " + std::to_string(profile.n_y()) +
                    ", \"steps\": [";
  bool first = true;
  for (const auto& step : profile.steps()) {
    if (!first) out += ", ";
    first = false;
    out += "[" + format_number(step.threshold) + ", " + std::to_string(step.value) + "]";
  }
  out += "]}";
  return out;
}

BottleneckProfile profile_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  std::vector<BottleneckProfile::Step> steps;
  for (const auto& entry : doc.at("steps")) {
    steps.push_back({entry.at(0).get<double>(), entry.at(1).get<std::size_t>()});
  }
  return BottleneckProfile(std::move(steps), doc.at("n_x").get<std::size_t>(), doc.at("n_y").get<std::size_t>(),
                           GroundMetric::parse(doc.at("ground_order").get<std::string>()));
}

void write_profile_csv(std::ostream& out, const BottleneckProfile& profile) {
  out << "t,value\n";
  for (const auto& step : profile.steps()) out << format_number(step.threshold) << ',' << step.value << '\n';
}

}  // namespace pdmetric
