#pragma once

// Subcommand bodies for the paclab executable. Each takes the merged config
// and returns named artifacts; main() writes them and the manifest.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "paclab/paclab.hpp"
#include "paclab/serialization.hpp"

namespace paclab::cli {

using json = nlohmann::json;

struct RunOptions {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool strict = false;
};

struct Artifacts {
  std::map<std::string, std::string> files;  // name -> contents
  std::vector<std::string> budget_notes;     // non-empty: some search ran out of budget
};

// User keys override defaults; a key absent from the defaults is rejected.
inline json merge_config(const json& defaults, const json& user, const std::string& where) {
  if (user.is_null()) return defaults;
  if (!user.is_object()) throw ConfigError(where + ": config must be a JSON object");
  json merged = defaults;
  for (const auto& [key, value] : user.items()) {
    if (!defaults.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    merged[key] = value;
  }
  return merged;
}

template <typename T>
T field(const json& cfg, const char* key) {
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("key '") + key + "': " + e.what());
  }
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : columns_(header.size()) { row_strings(header); }

  Csv& cell(double v) { return put(io::format_real(v)); }
  Csv& cell(std::uint64_t v) { return put(std::to_string(v)); }
  Csv& cell(std::int64_t v) { return put(std::to_string(v)); }
  Csv& cell(int v) { return put(std::to_string(v)); }
  Csv& cell(const std::string& v) { return put(v); }
  Csv& end() {
    ensure(pending_ == columns_, "csv: row width does not match the header");
    text_ += '\n';
    pending_ = 0;
    return *this;
  }
  const std::string& str() const { return text_; }

 private:
  void row_strings(const std::vector<std::string>& cells) {
    for (const auto& c : cells) put(c);
    end();
  }
  Csv& put(const std::string& s) {
    if (pending_ > 0) text_ += ',';
    text_ += s;
    ++pending_;
    return *this;
  }
  std::size_t columns_;
  std::size_t pending_ = 0;
  std::string text_;
};

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline std::string concept_label(const Concept& c) {
  if (const auto* s = c.as<SontagConcept>()) return "sontag_w=" + io::format_real(s->w);
  return io::concept_to_json(c).at("kind").get<std::string>();
}

// Concepts from an explicit list, or Sontag weights 2^k for k in [from, to].
inline std::vector<Concept> concepts_from(const json& cfg) {
  std::vector<Concept> out;
  if (!cfg.at("concepts").is_null()) {
    for (const auto& c : cfg.at("concepts")) out.push_back(io::concept_from_json(c));
  } else {
    const auto range = field<std::vector<int>>(cfg, "sontag_powers");
    if (range.size() != 2 || range[0] > range[1] || range[0] < -60 || range[1] > 60) {
      throw ConfigError("sontag_powers must be [from, to] with -60 <= from <= to <= 60");
    }
    for (int k = range[0]; k <= range[1]; ++k) out.push_back(Concept::sontag(std::ldexp(1.0, k)));
  }
  if (out.empty()) throw ConfigError("empty concept list");
  return out;
}

struct Distances {
  std::vector<double> values;
  std::vector<std::string> warnings;
};

inline Distances pairwise_distances(const std::vector<Concept>& cs, const Measure& mu, unsigned threads) {
  const std::size_t n = cs.size();
  Distances d{std::vector<double>(n * n, 0.0), {}};
  std::vector<std::vector<std::string>> notes(n);
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      auto r = l1_distance_detailed(cs[i], cs[j], mu);
      d.values[i * n + j] = r.value;
      for (auto& w : r.warnings) notes[i].push_back("(" + std::to_string(i) + "," + std::to_string(j) + ") " + w);
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) d.values[i * n + j] = d.values[j * n + i];
    for (auto& w : notes[i]) d.warnings.push_back(std::move(w));
  }
  return d;
}

// ---------------------------------------------------------------------------

inline json construct_defaults() {
  return {{"schedule", io::schedule_to_json(construction::ComplexitySchedule::standard())}, {"delta", 0.1}};
}

inline Artifacts run_construct(const json& cfg, const RunOptions& run) {
  const auto schedule = io::schedule_from_json(cfg.at("schedule"));
  const auto inst = construction::build_measure(schedule);
  const auto profile = construction::theoretical_profile(inst, field<double>(cfg, "delta"), run.threads);
  Artifacts a;
  a.files["construct.json"] = dump({{"instance", io::instance_to_json(inst)}, {"profile", io::profile_to_json(profile)}});
  return a;
}

inline json complexity_defaults() {
  return {{"schedule", io::schedule_to_json(construction::ComplexitySchedule::standard())},
          {"delta", 0.1},
          {"trials", 400},
          {"eps", nullptr},
          {"n_cap", 10'000'000}};
}

inline Artifacts run_complexity(const json& cfg, const RunOptions& run) {
  const auto schedule = io::schedule_from_json(cfg.at("schedule"));
  const auto inst = construction::build_measure(schedule);
  const double delta = field<double>(cfg, "delta");
  const auto profile = construction::theoretical_profile(inst, delta, run.threads);
  std::vector<double> grid;
  if (cfg.at("eps").is_null()) {
    for (std::size_t k = 1; k <= inst.K(); ++k) grid.push_back(inst.eps(k));
  } else {
    grid = field<std::vector<double>>(cfg, "eps");
  }
  if (grid.empty()) throw ConfigError("complexity: empty eps grid (K = 0 and no 'eps' given)");
  const auto problem = learner::LearningProblem::from_instance(inst);
  learner::EstimatorOptions opt;
  opt.threads = run.threads;
  opt.n_cap = field<std::uint64_t>(cfg, "n_cap");
  const auto trials = field<std::size_t>(cfg, "trials");

  Csv csv({"eps", "delta", "n_probed", "failures", "trials", "n_hat", "ci_lo", "ci_hi", "seed"});
  json runs = json::array();
  Artifacts a;
  for (double eps : grid) {
    const auto est = learner::estimate_sample_complexity(problem, eps, delta, trials, run.seed, opt);
    for (const auto& p : est.probes) {
      csv.cell(eps).cell(delta).cell(p.n).cell(static_cast<std::uint64_t>(p.failures)).cell(static_cast<std::uint64_t>(trials))
          .cell(est.n_hat).cell(est.confidence_interval.first).cell(est.confidence_interval.second).cell(run.seed).end();
    }
    json summary = io::estimate_to_json(est);
    for (const auto& row : profile.rows) {
      if (std::abs(row.eps - eps) <= 1e-15 * eps) {
        summary["bracket"] = {{"k", row.k}, {"lower", row.lower}, {"upper", row.upper},
                              {"inside", row.lower <= est.n_hat && est.n_hat <= row.upper}};
      }
    }
    if (!est.converged) a.budget_notes.push_back("complexity: eps = " + io::format_real(eps) + " hit n_cap");
    runs.push_back(summary);
  }
  a.files["complexity.csv"] = csv.str();
  a.files["complexity.json"] = dump({{"protocol", "uniform random target over labelings of the level atoms, per-atom ERM, "
                                                  "common random numbers across n, doubling then bisection"},
                                     {"runs", runs}});
  return a;
}

inline json shatter_defaults() {
  return {{"points", nullptr}, {"log_primes", 3},     {"labels", nullptr},           {"w_min", 0.0},
          {"w_max", 1e4},      {"alpha", sontag::kDefaultAlpha}, {"budget", 100'000'000}};
}

inline Artifacts run_shatter(const json& cfg, const RunOptions& run) {
  std::vector<double> points;
  if (!cfg.at("points").is_null()) {
    points = field<std::vector<double>>(cfg, "points");
  } else {
    points = sontag::rationally_independent_points(field<std::size_t>(cfg, "log_primes"));
  }
  sontag::SearchOptions opt{field<double>(cfg, "w_min"), field<double>(cfg, "w_max"), field<double>(cfg, "alpha"),
                            field<std::uint64_t>(cfg, "budget")};
  sontag::SontagParams{1.0, opt.alpha}.validate();
  const auto verified = [&](const sontag::ShatterResult& r) {
    if (!r.witness) return false;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (sontag::net_output(points[j], {*r.witness, opt.alpha}) != r.labels[j]) return false;
    }
    return true;
  };
  json out{{"points", points}};
  Artifacts a;
  if (!cfg.at("labels").is_null()) {
    const auto labels = field<std::vector<int>>(cfg, "labels");
    const auto r = sontag::shatter_search(points, labels, opt);
    out["result"] = io::shatter_to_json(r);
    out["result"]["verified"] = verified(r);
    if (r.status == sontag::SearchStatus::budget_exceeded) a.budget_notes.push_back("shatter: budget exceeded");
  } else {
    const auto census = sontag::shatter_census(points, opt, run.threads);
    json results = json::array();
    std::size_t ok = 0;
    for (const auto& r : census.per_labeling) {
      json j = io::shatter_to_json(r);
      j["verified"] = verified(r);
      ok += verified(r);
      results.push_back(j);
    }
    out["census"] = {{"realized", census.realized}, {"verified", ok}, {"total", census.total},
                     {"budget_exceeded", census.budget_exceeded}, {"results", results}};
    if (census.budget_exceeded > 0) {
      a.budget_notes.push_back("shatter: " + std::to_string(census.budget_exceeded) + " labelings exceeded the budget");
    }
  }
  a.files["shatter.json"] = dump(out);
  return a;
}

inline json uniform_circle() { return {{"kind", "uniform"}, {"a", 0.0}, {"b", 2.0 * sontag::kPi}}; }

inline json distances_defaults() {
  return {{"measure", uniform_circle()}, {"concepts", nullptr}, {"sontag_powers", {1, 6}}};
}

inline Artifacts run_distances(const json& cfg, const RunOptions& run) {
  const auto mu = io::measure_from_json(cfg.at("measure"));
  const auto cs = concepts_from(cfg);
  const auto d = pairwise_distances(cs, mu, run.threads);
  std::vector<std::string> header{"concept"};
  for (const auto& c : cs) header.push_back(concept_label(c));
  Csv csv(header);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    csv.cell(concept_label(cs[i]));
    for (std::size_t j = 0; j < cs.size(); ++j) csv.cell(d.values[i * cs.size() + j]);
    csv.end();
  }
  Artifacts a;
  a.files["distances.csv"] = csv.str();
  if (!d.warnings.empty()) a.files["distances_warnings.json"] = dump(d.warnings);
  return a;
}

inline json gc_defaults() {
  return {{"mode", "adversarial"}, {"family", "sontag"},   {"measure", uniform_circle()},
          {"n", {4, 8, 16}},       {"trials", 500},        {"concepts", nullptr},
          {"sontag_powers", {1, 6}}, {"w_min", 100.0},     {"w_max", 1e9},
          {"budget", 100'000'000}};
}

inline Artifacts run_gc(const json& cfg, const RunOptions& run) {
  const auto mu = io::measure_from_json(cfg.at("measure"));
  const auto mode = field<std::string>(cfg, "mode");
  const auto ns = field<std::vector<std::size_t>>(cfg, "n");
  const auto trials = field<std::size_t>(cfg, "trials");
  learner::AdversaryOptions adv;
  std::vector<Concept> family;
  if (mode == "adversarial") {
    const auto fam = field<std::string>(cfg, "family");
    if (fam == "sontag") {
      adv.family = learner::AdversaryFamily::sontag;
    } else if (fam == "order_intervals") {
      adv.family = learner::AdversaryFamily::order_intervals;
    } else {
      throw ConfigError("gc: family must be 'sontag' or 'order_intervals'");
    }
    adv.search.w_min = field<double>(cfg, "w_min");
    adv.search.w_max = field<double>(cfg, "w_max");
    adv.search.budget = field<std::uint64_t>(cfg, "budget");
  } else if (mode == "census") {
    family = concepts_from(cfg);
  } else {
    throw ConfigError("gc: mode must be 'adversarial' or 'census'");
  }
  Csv csv({"mode", "n", "trials", "counted", "flagged", "mean", "median", "max", "seed"});
  Artifacts a;
  for (std::size_t n : ns) {
    const auto s = mode == "census" ? learner::gc_deviation_census(family, mu, n, trials, run.seed, run.threads)
                                    : learner::gc_deviation_adversarial(mu, n, trials, run.seed, adv, run.threads);
    csv.cell(mode).cell(static_cast<std::uint64_t>(n)).cell(static_cast<std::uint64_t>(trials))
        .cell(static_cast<std::uint64_t>(s.deviations.size())).cell(static_cast<std::uint64_t>(s.flagged))
        .cell(s.mean).cell(s.median).cell(s.max).cell(run.seed).end();
    if (s.flagged > 0) a.budget_notes.push_back("gc: n = " + std::to_string(n) + ", " + std::to_string(s.flagged) + " trials flagged");
  }
  a.files["gc.csv"] = csv.str();
  return a;
}

inline json packing_defaults() {
  return {{"mode", "hamming"},        {"n", 200},          {"eps", 0.21},         {"restart_factor", 50},
          {"patience", 256},          {"measure", uniform_circle()}, {"concepts", nullptr},
          {"sontag_powers", {1, 6}},  {"radius", 0.4}};
}

inline Artifacts run_packing(const json& cfg, const RunOptions& run) {
  const auto mode = field<std::string>(cfg, "mode");
  Artifacts a;
  if (mode == "hamming") {
    bounds::HammingOptions opt{run.seed, field<std::uint64_t>(cfg, "restart_factor"), field<std::size_t>(cfg, "patience")};
    a.files["packing.json"] = dump(io::hamming_to_json(bounds::hamming_packing(field<std::size_t>(cfg, "n"), field<double>(cfg, "eps"), opt)));
  } else if (mode == "greedy") {
    const auto mu = io::measure_from_json(cfg.at("measure"));
    const auto cs = concepts_from(cfg);
    auto d = pairwise_distances(cs, mu, run.threads);
    const bounds::DistanceMatrix m(cs.size(), std::move(d.values));
    const double radius = field<double>(cfg, "radius");
    json labels = json::array();
    for (const auto& c : cs) labels.push_back(concept_label(c));
    a.files["packing.json"] = dump({{"concepts", labels},
                                    {"greedy", io::packing_to_json(bounds::greedy_packing(m, radius))},
                                    {"best", io::packing_to_json(bounds::packing(m, radius))},
                                    {"warnings", d.warnings}});
  } else {
    throw ConfigError("packing: mode must be 'hamming' or 'greedy'");
  }
  return a;
}

inline json cantor_defaults() { return {{"layout_levels", 3}, {"map_levels", {1, 2}}, {"max_order", 64}}; }

inline Artifacts run_cantor(const json& cfg, const RunOptions&) {
  const int layout = field<int>(cfg, "layout_levels");
  if (layout < 0 || layout > 20) throw ConfigError("cantor: layout_levels must lie in [0, 20]");
  json layouts = json::array();
  for (int n = 0; n <= layout; ++n) {
    json ivs = json::array();
    for (const auto& iv : cantor::cantor_level_intervals(n)) ivs.push_back({iv.lo, iv.hi});
    layouts.push_back({{"level", n}, {"intervals", ivs}});
  }
  const auto max_order = field<std::uint64_t>(cfg, "max_order");
  json maps = json::array();
  for (int level : field<std::vector<int>>(cfg, "map_levels")) {
    if (level < 0 || level > 4) throw ConfigError("cantor: map levels must lie in [0, 4]");
    const std::uint64_t count = std::uint64_t{1} << level;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << count); ++mask) {
      std::vector<std::uint64_t> selected;
      for (std::uint64_t i = 0; i < count; ++i) {
        if ((mask >> i) & 1) selected.push_back(i);
      }
      std::vector<std::uint64_t> feasible;
      json reports = json::array();
      for (std::uint64_t order = 1; order <= max_order; ++order) {
        const auto r = order_class::cantor_shatter_search(level, order, selected);
        if (r.status == order_class::FeasibilityStatus::feasible) feasible.push_back(order);
        reports.push_back(io::cantor_report_to_json(r));
      }
      maps.push_back({{"level", level}, {"selected", selected}, {"feasible_orders", feasible}, {"reports", reports}});
    }
  }
  Artifacts a;
  a.files["cantor.json"] = dump({{"layouts", layouts}, {"feasibility", maps}});
  return a;
}

inline json figures_defaults() {
  return {{"alpha", sontag::kDefaultAlpha}, {"w", 5.0}, {"x_range", {-10.0, 10.0}}, {"samples", 4001},
          {"phi_range", {-20.0, 20.0}},     {"cantor_levels", 4}};
}

inline Artifacts run_figures(const json& cfg, const RunOptions&) {
  const double alpha = field<double>(cfg, "alpha");
  const double w = field<double>(cfg, "w");
  sontag::SontagParams{w, alpha}.validate();
  const auto xr = field<std::vector<double>>(cfg, "x_range");
  const auto pr = field<std::vector<double>>(cfg, "phi_range");
  const auto samples = field<std::size_t>(cfg, "samples");
  if (xr.size() != 2 || pr.size() != 2 || !(xr[0] < xr[1]) || !(pr[0] < pr[1]) || samples < 2) {
    throw ConfigError("figures: ranges must be [lo, hi] with lo < hi and samples >= 2");
  }
  const auto at = [&](const std::vector<double>& r, std::size_t i) {
    return r[0] + (r[1] - r[0]) * static_cast<double>(i) / static_cast<double>(samples - 1);
  };
  Csv phi({"x", "phi"}), rho({"x", "rho"}), out({"x", "output", "cos_wx"});
  for (std::size_t i = 0; i < samples; ++i) {
    const double p = at(pr, i), x = at(xr, i);
    phi.cell(p).cell(sontag::phi(p, alpha)).end();
    rho.cell(x).cell(sontag::rho(x, w, alpha)).end();
    out.cell(x).cell(sontag::net_output(x, {w, alpha})).cell(std::cos(w * x)).end();
  }
  const int levels = field<int>(cfg, "cantor_levels");
  if (levels < 0 || levels > 20) throw ConfigError("figures: cantor_levels must lie in [0, 20]");
  Csv layout({"level", "index", "lo", "hi", "mass"});
  for (int n = 0; n <= levels; ++n) {
    for (const auto& iv : cantor::cantor_level_intervals(n)) {
      layout.cell(n).cell(iv.index).cell(iv.lo).cell(iv.hi).cell(iv.mass).end();
    }
  }
  Artifacts a;
  a.files["figure_phi.csv"] = phi.str();
  a.files["figure_rho.csv"] = rho.str();
  a.files["figure_output.csv"] = out.str();
  a.files["figure_cantor.csv"] = layout.str();
  return a;
}

struct Command {
  const char* name;
  const char* help;
  json (*defaults)();
  Artifacts (*run)(const json&, const RunOptions&);
};

inline const std::vector<Command>& commands() {
  static const std::vector<Command> all{
      {"construct", "build the atomic instance and its complexity profile (JSON)", construct_defaults, run_construct},
      {"complexity", "Monte Carlo sample complexity over eps_k (CSV)", complexity_defaults, run_complexity},
      {"shatter", "Sontag shattering search or census (JSON)", shatter_defaults, run_shatter},
      {"distances", "pairwise L1 distance matrix (CSV)", distances_defaults, run_distances},
      {"gc", "uniform deviation sweep over n (CSV)", gc_defaults, run_gc},
      {"packing", "Hamming or greedy packing (JSON)", packing_defaults, run_packing},
      {"cantor", "Cantor level layouts and C_N feasibility map (JSON)", cantor_defaults, run_cantor},
      {"figures", "samples of phi, rho, the network output and Cantor levels (CSV)", figures_defaults, run_figures},
  };
  return all;
}

// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace paclab::cli
