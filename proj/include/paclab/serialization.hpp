#pragma once

// JSON documents for measures, concepts, schedules and results, plus the
// CSV number format shared by all tabular outputs.

#include <cstdint>
#include <cstdio>
#include <initializer_list>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "paclab/bounds.hpp"
#include "paclab/concept.hpp"
#include "paclab/construction.hpp"
#include "paclab/error.hpp"
#include "paclab/learner.hpp"
#include "paclab/measure.hpp"
#include "paclab/order_class.hpp"
#include "paclab/rational.hpp"
#include "paclab/sontag.hpp"

namespace paclab::io {

using json = nlohmann::json;

// 17 significant digits: round-trips every double.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Rejects keys outside `allowed`.
inline void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("key '") + key + "': " + e.what());
  }
}

template <typename T>
T get_required(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  return get_or<T>(j, key, T{});
}

// ---------------------------------------------------------------------------
// Measures.

inline json measure_to_json(const Measure& m) {
  return std::visit(
      [](const auto& k) -> json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AtomicMeasure>) {
          json atoms = json::array();
          for (std::size_t i = 0; i < k.size(); ++i) atoms.push_back({k.location(i), k.mass(i)});
          return {{"kind", "atomic"}, {"atoms", atoms}};
        } else if constexpr (std::is_same_v<T, UniformMeasure>) {
          return {{"kind", "uniform"}, {"a", k.a}, {"b", k.b}};
        } else if constexpr (std::is_same_v<T, CantorMeasure>) {
          return {{"kind", "cantor"}, {"depth", k.depth}};
        } else if constexpr (std::is_same_v<T, ProductMeasure>) {
          return {{"kind", "product"}, {"base", measure_to_json(*k.base)}, {"fiber", json::array({k.fiber.a, k.fiber.b})}};
        } else {
          json cells = json::array();
          for (const auto& c : k.cells) {
            cells.push_back({{"lo", c.lo}, {"hi", c.hi}, {"lo_closed", c.lo_closed}, {"hi_closed", c.hi_closed},
                             {"target", c.target}});
          }
          return {{"kind", "pushforward"}, {"base", measure_to_json(*k.base)}, {"cells", cells}};
        }
      },
      m.kind());
}

inline Measure measure_from_json(const json& j) {
  const auto kind = get_required<std::string>(j, "kind", "measure");
  try {
    if (kind == "atomic") {
      check_keys(j, {"kind", "atoms"}, "atomic measure");
      std::vector<Atom> atoms;
      for (const auto& a : j.at("atoms")) atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
      return Measure(AtomicMeasure(std::move(atoms)));
    }
    if (kind == "uniform") {
      check_keys(j, {"kind", "a", "b"}, "uniform measure");
      return Measure(UniformMeasure{get_or(j, "a", 0.0), get_or(j, "b", 1.0)});
    }
    if (kind == "cantor") {
      check_keys(j, {"kind", "depth"}, "cantor measure");
      return Measure(CantorMeasure{get_or(j, "depth", cantor::kMaxDigits)});
    }
    if (kind == "product") {
      check_keys(j, {"kind", "base", "fiber"}, "product measure");
      UniformMeasure fiber{0.0, 1.0};
      if (j.contains("fiber")) fiber = {j.at("fiber").at(0).get<double>(), j.at("fiber").at(1).get<double>()};
      return product_lift(measure_from_json(j.at("base")), fiber);
    }
    if (kind == "pushforward") {
      check_keys(j, {"kind", "base", "cells"}, "pushforward measure");
      std::vector<PartitionCell> cells;
      for (const auto& c : j.at("cells")) {
        check_keys(c, {"lo", "hi", "lo_closed", "hi_closed", "target"}, "partition cell");
        cells.push_back({c.at("lo").get<double>(), c.at("hi").get<double>(), get_or(c, "lo_closed", true),
                         get_or(c, "hi_closed", false), c.at("target").get<double>()});
      }
      return pushforward(measure_from_json(j.at("base")), std::move(cells));
    }
  } catch (const json::exception& e) {
    throw ConfigError("measure: " + std::string(e.what()));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("measure: ") + e.what());
  }
  throw ConfigError("measure: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Concepts.

inline json concept_to_json(const Concept& c) {
  return std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, SontagConcept>) {
          return {{"kind", "sontag"}, {"w", d.w}, {"alpha", d.alpha}};
        } else if constexpr (std::is_same_v<T, IntervalUnion>) {
          json pieces = json::array();
          for (const auto& p : d.intervals) pieces.push_back({p.lo, p.hi});
          return {{"kind", "intervals"}, {"intervals", pieces}};
        } else if constexpr (std::is_same_v<T, AtomLabeling>) {
          std::vector<int> bits(d.bits.begin(), d.bits.end());
          return {{"kind", "atom_labels"}, {"locations", *d.locations}, {"bits", bits}, {"default", d.default_bit}};
        } else {
          json thirds = json::array();
          for (const auto& t : d.thirds) thirds.push_back({t.level, t.index});
          return {{"kind", "middle_thirds"}, {"thirds", thirds}};
        }
      },
      c.descriptor());
}

inline Concept concept_from_json(const json& j) {
  const auto kind = get_required<std::string>(j, "kind", "concept");
  try {
    if (kind == "sontag") {
      check_keys(j, {"kind", "w", "alpha"}, "sontag concept");
      return Concept::sontag(get_required<double>(j, "w", "sontag concept"), get_or(j, "alpha", sontag::kDefaultAlpha));
    }
    if (kind == "intervals") {
      check_keys(j, {"kind", "intervals"}, "interval concept");
      std::vector<Interval> pieces;
      for (const auto& p : j.at("intervals")) pieces.push_back(Interval::closed(p.at(0).get<double>(), p.at(1).get<double>()));
      return Concept::intervals(std::move(pieces));
    }
    if (kind == "atom_labels") {
      check_keys(j, {"kind", "locations", "bits", "default"}, "atom labeling");
      auto loc = std::make_shared<std::vector<double>>(j.at("locations").get<std::vector<double>>());
      require(std::is_sorted(loc->begin(), loc->end()), "atom labeling locations must be sorted");
      std::vector<std::uint8_t> bits;
      for (const auto& b : j.at("bits")) bits.push_back(b.get<int>() ? 1 : 0);
      return Concept::atom_labels(std::move(loc), std::move(bits), get_or(j, "default", 0));
    }
    if (kind == "middle_thirds") {
      check_keys(j, {"kind", "thirds"}, "middle-third union");
      std::vector<MiddleThird> thirds;
      for (const auto& t : j.at("thirds")) thirds.push_back({t.at(0).get<int>(), t.at(1).get<std::uint64_t>()});
      return Concept::middle_thirds(std::move(thirds));
    }
  } catch (const json::exception& e) {
    throw ConfigError("concept: " + std::string(e.what()));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("concept: ") + e.what());
  }
  throw ConfigError("concept: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Schedules and construction results.

inline Rational rational_from_json(const json& v) {
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (v.is_number()) return Rational::from_double(v.get<double>());
  throw ConfigError("expected a number or a \"p/q\" string");
}

inline construction::RateFunction rate_from_json(const json& j) {
  using construction::RateFunction;
  const auto kind = get_required<std::string>(j, "kind", "rate function");
  if (kind == "poly") {
    check_keys(j, {"kind", "power", "coef"}, "poly rate");
    return RateFunction::poly(get_or(j, "power", 1.0), get_or(j, "coef", 1.0));
  }
  if (kind == "exp") {
    check_keys(j, {"kind", "base", "coef"}, "exp rate");
    return RateFunction::exponential(get_or(j, "base", 2.0), get_or(j, "coef", 1.0));
  }
  if (kind == "table") {
    check_keys(j, {"kind", "points"}, "table rate");
    std::vector<std::pair<double, double>> points;
    for (const auto& p : j.at("points")) points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    if (points.empty()) throw ConfigError("table rate: no points");
    return RateFunction::from_table(std::move(points));
  }
  throw ConfigError("rate function: unknown kind '" + kind + "'");
}

inline json rate_to_json(const construction::RateFunction& f) {
  using Kind = construction::RateFunction::Kind;
  switch (f.kind) {
    case Kind::poly: return {{"kind", "poly"}, {"power", f.power}, {"coef", f.coef}};
    case Kind::exp: return {{"kind", "exp"}, {"base", f.base}, {"coef", f.coef}};
    case Kind::table: {
      json pts = json::array();
      for (const auto& [x, y] : f.table) pts.push_back({x, y});
      return {{"kind", "table"}, {"points", pts}};
    }
  }
  return {};
}

inline construction::ComplexitySchedule schedule_from_json(const json& j) {
  check_keys(j, {"eps", "f", "K", "c"}, "schedule");
  construction::ComplexitySchedule s;
  try {
    if (j.contains("c")) {
      if (!j.at("c").is_number()) throw ConfigError("schedule: 'c' must be a number");
      s.linear_c = j.at("c").get<double>();
    }
    s.K = get_required<int>(j, "K", "schedule");
    if (!j.contains("eps") || !j.at("eps").is_array()) throw ConfigError("schedule: 'eps' must be an array");
    for (const auto& e : j.at("eps")) s.eps.push_back(rational_from_json(e));
    if (!j.contains("f")) throw ConfigError("schedule: missing key 'f'");
    s.f = rate_from_json(j.at("f"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("schedule: ") + e.what());
  }
  return s;
}

inline json schedule_to_json(const construction::ComplexitySchedule& s) {
  json eps = json::array();
  for (const auto& e : s.eps) eps.push_back(e.to_string());
  json out{{"eps", eps}, {"f", rate_to_json(s.f)}, {"K", s.K}};
  if (s.linear_c) out["c"] = *s.linear_c;
  return out;
}

inline json instance_to_json(const construction::ConstructedInstance& inst) {
  json levels = json::array();
  for (std::size_t k = 0; k < inst.levels.size(); ++k) {
    const auto& l = inst.levels[k];
    levels.push_back({{"k", k + 1},
                      {"eps", inst.eps(k + 1)},
                      {"f_k", l.f_value},
                      {"size", l.atoms.size()},
                      {"mass", l.mass.to_double()},
                      {"mass_exact", l.mass.to_string()},
                      {"atoms", l.atoms}});
  }
  double total = inst.residual.mass;
  for (const auto& l : inst.levels) {
    if (!l.atoms.empty()) total += l.mass.to_double();
  }
  return {{"schedule", schedule_to_json(inst.schedule)},
          {"levels", levels},
          {"residual", {{"location", inst.residual.location}, {"mass", inst.residual.mass},
                        {"mass_exact", inst.residual_mass.to_string()}}},
          {"total_mass", total},
          {"warnings", inst.warnings}};
}

inline json profile_to_json(const construction::ComplexityProfile& p) {
  json rows = json::array();
  for (const auto& r : p.rows) {
    json row = {{"k", r.k},
                {"eps", r.eps},
                {"f_k", r.f_value},
                {"log2_cover_size", r.f_value},
                {"lower_rate", r.lower_rate},
                {"lower", r.lower},
                {"upper", r.upper},
                {"proof_line_annotation", r.proof_line}};
    row["lower_packing"] = r.lower_packing ? json(*r.lower_packing) : json(nullptr);
    rows.push_back(row);
  }
  return {{"delta", p.delta}, {"rows", rows}};
}

// ---------------------------------------------------------------------------
// Results.

inline json shatter_to_json(const sontag::ShatterResult& r) {
  return {{"labels", r.labels},
          {"witness_w", r.witness ? json(*r.witness) : json(nullptr)},
          {"status", sontag::to_string(r.status)},
          {"range_searched", json::array({r.range_lo, r.range_hi})},
          {"breakpoints", r.breakpoints}};
}

inline json packing_to_json(const bounds::PackingResult& p) {
  return {{"selected", p.selected}, {"size", p.size()}, {"radius", p.radius}, {"certified", p.certified}};
}

inline json cover_to_json(const bounds::Cover& c) {
  return {{"centers", c.centers}, {"size", c.size()}, {"radius", c.radius}};
}

inline json hamming_to_json(const bounds::HammingPacking& h) {
  std::vector<std::string> words;
  for (const auto& w : h.codewords) words.push_back(w.to_string());
  return {{"dimension", h.dimension}, {"eps", h.eps}, {"min_bits", h.min_bits}, {"bound", h.bound},
          {"size", h.codewords.size()}, {"radius", 2.0 * h.eps}, {"codewords", words}};
}

inline json cantor_report_to_json(const order_class::CantorShatterReport& r) {
  return {{"level", r.level},
          {"order", r.order},
          {"selected", r.selected},
          {"status", order_class::to_string(r.status)},
          {"forced", r.forced},
          {"witness", r.witness ? concept_to_json(*r.witness) : json(nullptr)},
          {"certificate", r.certificate}};
}

inline json estimate_to_json(const learner::ComplexityEstimate& e) {
  json probes = json::array();
  for (const auto& p : e.probes) probes.push_back({{"n", p.n}, {"failures", p.failures}});
  return {{"eps", e.eps},
          {"delta", e.delta},
          {"n_hat", e.n_hat},
          {"trials", e.trials},
          {"failure_rate_at_n_hat", e.failure_rate_at_n_hat},
          {"ci", json::array({e.confidence_interval.first, e.confidence_interval.second})},
          {"seed", e.seed},
          {"converged", e.converged},
          {"n_cap", e.n_cap},
          {"probes", probes}};
}

}  // namespace paclab::io
