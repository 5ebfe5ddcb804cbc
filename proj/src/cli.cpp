#include "pdmetric/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "pdmetric/oracle.hpp"
#include "pdmetric/profile.hpp"
#include "pdmetric/wasserstein.hpp"

namespace pdmetric::cli {

namespace fs = std::filesystem;

MetricKind parse_metric_kind(const std::string& name) {
  if (name == "prokhorov") return MetricKind::prokhorov;
  if (name == "bottleneck") return MetricKind::bottleneck;
  if (name == "kth-bottleneck") return MetricKind::kth_bottleneck;
  if (name == "wasserstein") return MetricKind::wasserstein;
  throw SpecError("unknown metric '" + name + "' (prokhorov, bottleneck, kth-bottleneck, wasserstein)");
}

void MetricSpec::validate(bool metric_only) const {
  const bool wants_f = kind == MetricKind::prokhorov;
  const bool wants_k = kind == MetricKind::kth_bottleneck;
  const bool wants_p = kind == MetricKind::wasserstein;
  if (wants_f != f.has_value()) throw SpecError(wants_f ? "--metric prokhorov needs --f" : "--f only applies to prokhorov");
  if (wants_k != k.has_value()) throw SpecError(wants_k ? "--metric kth-bottleneck needs --k" : "--k only applies to kth-bottleneck");
  if (wants_p != p.has_value()) throw SpecError(wants_p ? "--metric wasserstein needs --p" : "--p only applies to wasserstein");
  if (k && *k < 1) throw SpecError("--k must be >= 1");
  if (p && !(*p >= 1.0 && std::isfinite(*p))) throw SpecError("--p must be a finite order >= 1");
  if (metric_only && f && !f->is_metric()) {
    throw SpecError("distance matrices need a metric-mode f (poly:0,...); const:k is a query");
  }
}

double compute_distance(const MetricSpec& spec, const PersistenceDiagram& x, const PersistenceDiagram& y,
                        bool use_oracle) {
  switch (spec.kind) {
    case MetricKind::prokhorov:
      return use_oracle ? oracle::brute_prokhorov(x, y, *spec.f, spec.ground)
                        : prokhorov_distance(x, y, *spec.f, spec.ground);
    case MetricKind::bottleneck:
    case MetricKind::kth_bottleneck: {
      const auto f = ParamFunction::constant(spec.k.value_or(1));
      return use_oracle ? oracle::brute_prokhorov(x, y, f, spec.ground) : prokhorov_distance(x, y, f, spec.ground);
    }
    case MetricKind::wasserstein:
      return use_oracle ? oracle::brute_wasserstein(x, y, *spec.p, spec.ground)
                        : wasserstein_distance(x, y, *spec.p, spec.ground);
  }
  throw std::logic_error("unhandled metric kind");
}

std::string format_value(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::vector<std::vector<double>> distance_matrix(const std::vector<PersistenceDiagram>& diagrams,
                                                 const MetricSpec& spec, unsigned threads) {
  const std::size_t m = diagrams.size();
  std::vector<std::pair<std::size_t, std::size_t>> work;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) work.emplace_back(i, j);
  }
  std::vector<double> upper(work.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t w; (w = next.fetch_add(1)) < work.size();) {
      try {
        upper[w] = compute_distance(spec, diagrams[work[w].first], diagrams[work[w].second]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(work.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<std::vector<double>> matrix(m, std::vector<double>(m, 0.0));
  for (std::size_t w = 0; w < work.size(); ++w) {
    const auto [i, j] = work[w];
    matrix[i][j] = matrix[j][i] = upper[w];
  }
  return matrix;
}

namespace {

struct MetricFlags {
  std::string metric;
  std::string f;
  long k = 0;
  double p = 0.0;
  std::string ground = "inf";
  CLI::Option* f_opt = nullptr;
  CLI::Option* k_opt = nullptr;
  CLI::Option* p_opt = nullptr;

  void attach(CLI::App* app) {
    app->add_option("--metric", metric, "prokhorov | bottleneck | kth-bottleneck | wasserstein")->required();
    f_opt = app->add_option("--f", f,
                            "parameter function: poly:0,c1,...,cm (metric) or const:k (k-th bottleneck query); "
                            "inverses of non-monomial polynomials are exact to 1e-12 relative");
    k_opt = app->add_option("--k", k, "k for kth-bottleneck");
    p_opt = app->add_option("--p", p, "Wasserstein order p >= 1");
    add_ground(app);
  }

  void add_ground(CLI::App* app) {
    app->add_option("--ground-p", ground, "ground metric order: P >= 1 or inf")->capture_default_str();
  }

  MetricSpec spec(bool metric_only) const {
    MetricSpec s;
    s.kind = parse_metric_kind(metric);
    try {
      if (f_opt->count()) s.f = ParamFunction::parse(f);
    } catch (const std::invalid_argument& e) {
      throw SpecError(std::string("--f: ") + e.what());
    }
    if (k_opt->count()) s.k = k;
    if (p_opt->count()) s.p = p;
    s.ground = ground_metric(ground);
    s.validate(metric_only);
    return s;
  }

  static GroundMetric ground_metric(const std::string& text) {
    try {
      return GroundMetric::parse(text);
    } catch (const std::invalid_argument& e) {
      throw SpecError(std::string("--ground-p: ") + e.what());
    }
  }
};

// Output goes to `out` or, if a path is given, to that file.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error(path + ": cannot write");
  file << text;
}

std::vector<std::string> expand_inputs(const std::vector<std::string>& inputs) {
  if (inputs.size() == 1 && fs::is_directory(inputs.front())) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(inputs.front())) {
      if (entry.is_regular_file() && entry.path().filename().string().front() != '.') {
        files.push_back(entry.path().string());
      }
    }
    std::sort(files.begin(), files.end());
    return files;
  }
  return inputs;
}

int cmd_profile(const std::string& a, const std::string& b, const std::string& ground, const std::string& format,
                const std::string& out_path, std::ostream& out) {
  const auto metric = MetricFlags::ground_metric(ground);
  const auto x = read_diagram_file(a);
  const auto y = read_diagram_file(b);
  const auto profile = full_profile(x, y, metric);
  std::ostringstream text;
  if (format == "csv") {
    write_profile_csv(text, profile);
  } else {
    text << profile_to_json(profile) << '\n';
  }
  emit(text.str(), out_path, out);
  return kOk;
}

void report_line(std::ostream& out, const BoundCheck& check) {
  out << (check.holds ? "holds     " : "VIOLATED  ") << check.name << ": " << format_value(check.lhs)
      << " <= " << format_value(check.rhs) << '\n';
}

int cmd_check(const std::string& a, const std::string& b, const std::vector<double>& ps,
              const std::vector<double>& qs, const std::vector<double>& cs, bool triple, const std::string& ground,
              std::ostream& out) {
  const auto metric = MetricFlags::ground_metric(ground);
  for (double p : ps) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw SpecError("--p values must be finite and >= 1");
  }
  for (double v : qs) {
    if (!(v > 0) || !std::isfinite(v)) throw SpecError("--q values must be > 0");
  }
  for (double v : cs) {
    if (!(v > 0) || !std::isfinite(v)) throw SpecError("--c values must be > 0");
  }
  const auto x = read_diagram_file(a);
  const auto y = read_diagram_file(b);

  BoundsReport report;
  for (double p : ps) {
    for (double q : qs) {
      for (double c : cs) {
        auto part = audit_bounds(x, y, p, q, c, metric);
        report.checks.insert(report.checks.end(), part.checks.begin(), part.checks.end());
      }
    }
  }

  if (triple) {
    const auto z = midpoint_diagram(x, y, metric);
    const PersistenceDiagram* d[3] = {&x, &z, &y};
    const char* names[3] = {"X", "Z", "Y"};
    // Each rotation (a, b, c) checks the a-c side against the path through b.
    const int rotations[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
    for (const auto& r : rotations) {
      const auto& p_ab = full_profile(*d[r[0]], *d[r[1]], metric);
      const auto& p_bc = full_profile(*d[r[1]], *d[r[2]], metric);
      const auto& p_ac = full_profile(*d[r[0]], *d[r[2]], metric);
      auto samples = [](const BottleneckProfile& profile) {
        std::vector<double> ts;
        const auto& steps = profile.steps();
        for (std::size_t i = 0; i < steps.size(); ++i) {
          ts.push_back(steps[i].threshold);
          ts.push_back(i + 1 < steps.size() ? (steps[i].threshold + steps[i + 1].threshold) / 2
                                            : steps[i].threshold + 1);
        }
        return ts;
      };
      const std::string label = std::string("D_") + names[r[0]] + names[r[2]] + "(s+t) <= D_" + names[r[0]] +
                                names[r[1]] + "(s) + D_" + names[r[1]] + names[r[2]] + "(t)";
      // Report only the tightest sampled pair to keep the output readable.
      BoundCheck tightest{label, 0.0, 0.0, true};
      double worst_gap = -std::numeric_limits<double>::infinity();
      for (double s : samples(p_ab)) {
        for (double t : samples(p_bc)) {
          const auto lhs = static_cast<double>(p_ac.value_at(s + t));
          const auto rhs = static_cast<double>(p_ab.value_at(s) + p_bc.value_at(t));
          if (lhs - rhs > worst_gap) {
            worst_gap = lhs - rhs;
            std::ostringstream name;
            name << label << " [s=" << format_value(s) << ", t=" << format_value(t) << "]";
            tightest = {name.str(), lhs, rhs, lhs <= rhs};
          }
        }
      }
      report.checks.push_back(tightest);

      for (double q : qs) {
        for (double c : cs) {
          const auto f = ParamFunction::power(c, q);
          const double ac = prokhorov_distance(*d[r[0]], *d[r[2]], f, metric);
          const double ab = prokhorov_distance(*d[r[0]], *d[r[1]], f, metric);
          const double bc = prokhorov_distance(*d[r[1]], *d[r[2]], f, metric);
          std::ostringstream name;
          name << "pi_f(" << names[r[0]] << names[r[2]] << ") <= pi_f(" << names[r[0]] << names[r[1]]
               << ") + pi_f(" << names[r[1]] << names[r[2]] << ") [q=" << q << ", c=" << c << "]";
          report.add(name.str(), ac, ab + bc);
        }
      }
    }
  }

  std::size_t violated = 0;
  for (const auto& check : report.checks) {
    report_line(out, check);
    if (!check.holds) ++violated;
  }
  out << report.checks.size() << " inequalities, " << violated << " violated\n";
  return violated == 0 ? kOk : kViolation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bottleneck profiles and f-Prokhorov distances between persistence diagrams", "pdmetric"};
  app.require_subcommand(1);

  std::string a, b, ground = "inf", format = "json", out_path;
  auto* profile = app.add_subcommand("profile", "print the full bottleneck profile of two diagrams");
  profile->add_option("A", a, "first diagram")->required();
  profile->add_option("B", b, "second diagram")->required();
  profile->add_option("--ground-p", ground, "ground metric order: P >= 1 or inf")->capture_default_str();
  profile->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  profile->add_option("--out", out_path, "write to this file instead of stdout");

  MetricFlags dist_flags;
  bool use_oracle = false;
  auto* dist = app.add_subcommand("dist", "distance between two diagrams");
  dist->add_option("A", a, "first diagram")->required();
  dist->add_option("B", b, "second diagram")->required();
  dist_flags.attach(dist);
  dist->add_flag("--oracle", use_oracle, "exhaustive enumeration (<= 10 off-diagonal points)")->group("");

  MetricFlags matrix_flags;
  std::vector<std::string> inputs;
  unsigned threads = 1;
  auto* matrix = app.add_subcommand("matrix", "pairwise distance matrix as CSV");
  matrix->add_option("inputs", inputs, "a directory or a list of diagram files")->required();
  matrix_flags.attach(matrix);
  matrix->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  matrix->add_option("--out", out_path, "write to this file instead of stdout");

  std::vector<double> ps{1, 2}, qs{1, 2}, cs{1, 3};
  bool triple = false;
  auto* check = app.add_subcommand("check", "audit the profile/Prokhorov/Wasserstein inequalities on a pair");
  check->add_option("A", a, "first diagram")->required();
  check->add_option("B", b, "second diagram")->required();
  check->add_option("--p", ps, "Wasserstein orders")->delimiter(',')->capture_default_str();
  check->add_option("--q", qs, "exponents of f = c t^q")->delimiter(',')->capture_default_str();
  check->add_option("--c", cs, "scales of f = c t^q")->delimiter(',')->capture_default_str();
  check->add_flag("--triple", triple, "also check triangle inequalities through the midpoint diagram");
  check->add_option("--ground-p", ground, "ground metric order: P >= 1 or inf")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "pdmetric: " << e.what() << '\n';
    return kInvalidSpec;
  }

  try {
    if (profile->parsed()) return cmd_profile(a, b, ground, format, out_path, out);
    if (dist->parsed()) {
      const auto spec = dist_flags.spec(false);
      const auto x = read_diagram_file(a);
      const auto y = read_diagram_file(b);
      out << format_value(compute_distance(spec, x, y, use_oracle)) << '\n';
      return kOk;
    }
    if (matrix->parsed()) {
      const auto spec = matrix_flags.spec(true);
      const auto files = expand_inputs(inputs);
      if (files.size() < 2) throw SpecError("matrix needs at least 2 diagrams");
      std::vector<PersistenceDiagram> diagrams;
      for (const auto& file : files) diagrams.push_back(read_diagram_file(file));
      const auto values = distance_matrix(diagrams, spec, threads);
      std::ostringstream text;
      text << "name";
      for (const auto& file : files) text << ',' << fs::path(file).filename().string();
      text << '\n';
      for (std::size_t i = 0; i < files.size(); ++i) {
        text << fs::path(files[i]).filename().string();
        for (double v : values[i]) text << ',' << format_value(v);
        text << '\n';
      }
      emit(text.str(), out_path, out);
      return kOk;
    }
    if (check->parsed()) return cmd_check(a, b, ps, qs, cs, triple, ground, out);
  } catch (const SpecError& e) {
    err << "pdmetric: " << e.what() << '\n';
    return kInvalidSpec;
  } catch (const ParseError& e) {
    err << "pdmetric: " << e.what() << '\n';
    return kInputError;
  } catch (const std::length_error& e) {
    err << "pdmetric: " << e.what() << '\n';
    return kInvalidSpec;
  } catch (const std::exception& e) {
    err << "pdmetric: " << e.what() << '\n';
    return kInputError;
  }
  return kInvalidSpec;
}

}  // namespace pdmetric::cli
