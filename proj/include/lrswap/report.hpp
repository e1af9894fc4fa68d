#pragma once

#include <charconv>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bethe.hpp"
#include "check.hpp"
#include "configuration.hpp"
#include "generator.hpp"
#include "version.hpp"

namespace lrswap {

using Json = nlohmann::ordered_json;

/// Ordered key/value list describing a fully resolved run.
using RunSettings = std::vector<std::pair<std::string, std::string>>;

/// Shortest round-trip decimal rendering, stable across runs.
/// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline Json to_json(const CheckResult& c) {
  Json j{{"name", c.name}, {"category", c.category}, {"pass", c.pass}};
  if (c.witness) j["witness_word"] = word_to_string(*c.witness);
  if (c.discrepancy) j["discrepancy"] = *c.discrepancy;
  if (c.seed) j["seed"] = *c.seed;
  return j;
}

inline Json to_json(const IdentityReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return Json{{"rule_type", to_string(r.rule)}, {"n", r.particles}, {"N", r.species}, {"checks", std::move(checks)}};
}

inline Json settings_json(const RunSettings& s) {
  Json j = Json::object();
  for (const auto& [k, v] : s) j[k] = v;
  return j;
}

inline Json rate_matrix_json(const RateMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.dim(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.dim(); ++c) row.push_back(m.entry(r, c).str());
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Extracted and predicted incoming rates for one target shape, with labels.
inline Json generator_json(const GeneratorReport& rep) {
  const int n = static_cast<int>(rep.target.size());
  const WordSpace space(rep.species, n);
  Json labels = Json::array();
  for (std::size_t i = 0; i < space.size(); ++i) labels.push_back(word_to_string(space.word(i)));
  const auto got = incoming_generator(rep.target, rep.species, rep.rule);
  const auto want = predicted_incoming(rep.target, rep.species, rep.rule);
  const RateMatrix zero(space.size());
  Json sources = Json::array();
  for (const auto& src : rep.sources) {
    sources.push_back(Json{{"shape", src},
                           {"extracted", rate_matrix_json(got.count(src) ? got.at(src) : zero)},
                           {"predicted", rate_matrix_json(want.count(src) ? want.at(src) : zero)}});
  }
  Json diffs = Json::array();
  for (const auto& d : rep.differences)
    diffs.push_back(Json{{"source", d.source},
                         {"row", word_to_string(d.row)},
                         {"col", word_to_string(d.col)},
                         {"extracted", d.extracted.str()},
                         {"predicted", d.predicted.str()}});
  return Json{{"rule_type", to_string(rep.rule)}, {"n", n},          {"N", rep.species},
              {"target", rep.target},           {"labels", labels}, {"sources", sources},
              {"differences", diffs},           {"row_sums_ok", rep.row_sums_ok}, {"pass", rep.pass()}};
}

/// One line of the shared probability CSV. Missing methods stay blank.
struct ComparisonRow {
  Configuration state;
  std::optional<double> p_bethe;
  std::optional<double> p_series;
  std::optional<double> p_mc;
  std::optional<double> imag_residual;
  std::optional<double> conv_delta;

  /// Largest pairwise gap among the methods present.
  std::optional<double> abs_diff() const {
    std::vector<double> v;
    for (const auto& p : {p_bethe, p_series, p_mc})
      if (p) v.push_back(*p);
    if (v.size() < 2) return std::nullopt;
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j) d = std::max(d, std::abs(v[i] - v[j]));
    return d;
  }
};

inline void write_csv(std::ostream& os, const RunSettings& settings, int particles,
                      const std::vector<ComparisonRow>& rows) {
  os << "# lrswap " << kVersion << '\n';
  for (const auto& [k, v] : settings) os << "# " << k << '=' << v << '\n';
  for (int i = 1; i <= particles; ++i) os << "x_" << i << ',';
  os << "word,p_bethe,p_series,p_mc,abs_diff,imag_residual,conv_delta\n";
  auto cell = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& r : rows) {
    for (auto x : r.state.positions) os << x << ',';
    os << word_to_string(r.state.word) << ',' << cell(r.p_bethe) << ',' << cell(r.p_series) << ','
       << cell(r.p_mc) << ',' << cell(r.abs_diff()) << ',' << cell(r.imag_residual) << ',' << cell(r.conv_delta)
       << '\n';
  }
}

inline Json table_summary_json(const ProbabilityTable& t) {
  return Json{{"query",
               {{"initial", t.initial.key()},
                {"t", t.time},
                {"window", t.window},
                {"rule_type", to_string(t.rule)}}},
              {"cfg", {{"r", t.cfg.radius}, {"M", t.cfg.nodes}}},
              {"total_mass", t.total_mass},
              {"deficit", t.deficit},
              {"max_imag", t.max_imag}};
}

}  // namespace lrswap
