#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdmetric/diagram.hpp"
#include "pdmetric/prokhorov.hpp"

namespace pdmetric::cli {

enum ExitCode : int {
  kOk = 0,
  kViolation = 1,     // `check` found a failing inequality
  kInputError = 2,    // unreadable or malformed diagram
  kInvalidSpec = 3,   // bad flags or metric combination
};

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MetricKind { prokhorov, bottleneck, kth_bottleneck, wasserstein };

// Which distance to compute; only the fields required by `kind` may be set.
struct MetricSpec {
  MetricKind kind = MetricKind::bottleneck;
  std::optional<ParamFunction> f;  // prokhorov
  std::optional<long> k;           // kth-bottleneck
  std::optional<double> p;         // wasserstein
  GroundMetric ground;

  // Throws SpecError. `metric_only` additionally rejects constant f, as
  // needed for distance matrices.
  void validate(bool metric_only) const;
};

MetricKind parse_metric_kind(const std::string& name);

double compute_distance(const MetricSpec& spec, const PersistenceDiagram& x, const PersistenceDiagram& y,
                        bool use_oracle = false);

// 12 significant digits.
std::string format_value(double value);

// m x m distance matrix over `diagrams`, computed on up to `threads` workers.
// Only the upper triangle is computed; the result is independent of `threads`.
std::vector<std::vector<double>> distance_matrix(const std::vector<PersistenceDiagram>& diagrams,
                                                 const MetricSpec& spec, unsigned threads);

// `pdmetric {profile|dist|matrix|check} ...`; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pdmetric::cli
