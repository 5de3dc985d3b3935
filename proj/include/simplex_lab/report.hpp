#pragma once

#include <chrono>
#include <cmath>
#include <ctime>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "simplex_lab/analysis.hpp"
#include "simplex_lab/core.hpp"
#include "simplex_lab/verdict.hpp"

namespace simplex_lab {

using Json = nlohmann::ordered_json;

struct ReportWitness {
  std::vector<std::string> tuple;
  std::string z;
  double ratio = 0.0;
};

/// One expected-versus-observed line. Rows without an exact expectation may
/// carry published bounds instead and are then judged on consistency.
struct Row {
  std::string name;
  std::size_t n = 0;
  std::size_t k = 0;
  std::optional<double> expected;
  std::optional<ConstantBounds> bounds;
  double observed = 0.0;
  bool unbounded = false;
  double tolerance = 0.0;
  Method method = Method::sampled;
  std::size_t trials = 0;
  std::optional<ReportWitness> witness;
  bool attained = false;
  Status status = Status::not_applicable;
  std::string note;

  std::optional<double> delta() const {
    if (!expected || unbounded) return std::nullopt;
    return observed - *expected;
  }
};

struct Report {
  std::string command;
  Json config = Json::object();
  std::vector<Row> rows;
  std::vector<PropertyVerdict> verdicts;
  /// Space each verdict's counterexample lives in, parallel to `verdicts`.
  std::vector<Space> verdict_spaces;
  std::vector<std::string> notes;
  std::string timestamp;

  void add_verdict(PropertyVerdict v, const Space& space) {
    verdicts.push_back(std::move(v));
    verdict_spaces.push_back(space);
  }

  bool any_failure() const {
    for (const Row& r : rows)
      if (r.status == Status::fail) return true;
    for (const PropertyVerdict& v : verdicts)
      if (v.failed()) return true;
    return false;
  }
};

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline ReportWitness to_report(const Witness& w, const Space& space) {
  ReportWitness r;
  for (const Point& p : w.tuple) r.tuple.push_back(space.format(p));
  r.z = space.format(w.z);
  r.ratio = w.ratio;
  return r;
}

/// Fills a row from an estimate. An exact expectation passes when the lower
/// bound is within tolerance of it; bounds pass when the lower bound is
/// consistent with them.
inline Row make_row(std::string name, const ConstantEstimate& est, const Space& space, double tolerance,
                    std::optional<ConstantBounds> bounds = std::nullopt) {
  Row r;
  r.name = std::move(name);
  r.n = est.n;
  r.k = est.k;
  r.expected = est.analytic;
  r.bounds = bounds;
  r.observed = est.lower_bound;
  r.unbounded = est.unbounded;
  r.tolerance = tolerance;
  r.method = est.method;
  r.trials = est.trials;
  if (est.witness) r.witness = to_report(*est.witness, space);
  if (r.unbounded) {
    r.status = Status::fail;
    r.note = "zero partial denominator: no constant exists for this k";
    if (est.k == 1) {
      r.status = Status::pass;
      r.note = "k = 1 admits no constant";
    }
    return r;
  }
  if (r.expected) {
    r.attained = est.witness && std::abs(est.witness->ratio - *r.expected) <= tolerance;
    r.status = std::abs(r.observed - *r.expected) <= tolerance ? Status::pass : Status::fail;
  } else if (bounds) {
    bool ok = true;
    if (bounds->upper) ok = ok && (bounds->upper_strict ? r.observed < *bounds->upper : r.observed <= *bounds->upper + tolerance);
    if (bounds->lower) ok = ok && r.observed >= *bounds->lower - tolerance;
    r.status = ok ? Status::pass : Status::fail;
    r.note = "bound consistency only; the exact value is open";
  } else {
    r.note = "no published value; lower bound only";
  }
  return r;
}

inline Json number_or_null(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

inline Json to_json(const Counterexample& c, const Space* space) {
  Json j;
  j["description"] = c.description;
  Json tuples = Json::array();
  for (const Tuple& t : c.tuples) tuples.push_back(space ? space->format(t.points()) : std::to_string(t.size()));
  j["tuples"] = tuples;
  if (c.z) j["z"] = space ? space->format(*c.z) : "";
  if (!c.composition.empty()) j["composition"] = c.composition;
  j["lhs"] = number_or_null(c.lhs);
  j["rhs"] = number_or_null(c.rhs);
  return j;
}

inline Json to_json(const Row& r) {
  Json j;
  j["name"] = r.name;
  j["n"] = r.n;
  j["k"] = r.k;
  j["expected"] = number_or_null(r.expected);
  if (r.bounds) {
    j["bounds"] = {{"lower", number_or_null(r.bounds->lower)},
                   {"upper", number_or_null(r.bounds->upper)},
                   {"upper_strict", r.bounds->upper_strict}};
  }
  j["observed"] = r.unbounded ? Json(nullptr) : Json(r.observed);
  j["delta"] = number_or_null(r.delta());
  j["tolerance"] = r.tolerance;
  j["method"] = to_string(r.method);
  j["trials"] = r.trials;
  if (r.witness) {
    j["witness"] = {{"tuple", r.witness->tuple}, {"z", r.witness->z}, {"ratio", number_or_null(r.witness->ratio)}};
  } else {
    j["witness"] = nullptr;
  }
  j["attained"] = r.attained;
  j["unbounded"] = r.unbounded;
  j["status"] = to_string(r.status);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline Json to_json(const PropertyVerdict& v, const Space* space) {
  Json j;
  j["property"] = v.property;
  j["status"] = to_string(v.status);
  if (!v.detail.empty()) j["detail"] = v.detail;
  j["trials"] = v.trials;
  if (v.max_ratio) j["max_ratio"] = number_or_null(v.max_ratio);
  if (!v.relations.empty()) {
    Json rel = Json::array();
    for (const Relation& r : v.relations) {
      rel.push_back({{"name", r.name},
                     {"lhs", number_or_null(r.lhs)},
                     {"rhs", number_or_null(r.rhs)},
                     {"holds", r.holds},
                     {"equality", r.equality}});
    }
    j["relations"] = rel;
  }
  if (v.counterexample) j["counterexample"] = to_json(*v.counterexample, space);
  if (v.worst && v.worst->description != (v.counterexample ? v.counterexample->description : "")) {
    j["worst"] = to_json(*v.worst, space);
  }
  return j;
}

inline Json to_json(const Report& r) {
  Json j;
  j["schema"] = "simplex-lab/1";
  j["command"] = r.command;
  j["timestamp"] = r.timestamp;
  j["config"] = r.config;
  Json rows = Json::array();
  for (const Row& row : r.rows) rows.push_back(to_json(row));
  j["rows"] = rows;
  Json verdicts = Json::array();
  for (std::size_t i = 0; i < r.verdicts.size(); ++i) {
    verdicts.push_back(to_json(r.verdicts[i], i < r.verdict_spaces.size() ? &r.verdict_spaces[i] : nullptr));
  }
  j["verdicts"] = verdicts;
  if (!r.notes.empty()) j["notes"] = r.notes;
  j["status"] = r.any_failure() ? "fail" : "pass";
  return j;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string opt_number(std::optional<double> v) { return v && std::isfinite(*v) ? format_double(*v) : ""; }

inline std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
  return s;
}

}  // namespace detail

/// Flat projection of the rows.
inline void write_csv(const Report& r, std::ostream& out) {
  out << "name,n,k,expected,observed,delta,tolerance,method,status,attained,witness_tuple,witness_z,witness_ratio\n";
  for (const Row& row : r.rows) {
    out << detail::csv_field(row.name) << ',' << row.n << ',' << row.k << ',' << detail::opt_number(row.expected) << ','
        << (row.unbounded ? "inf" : format_double(row.observed)) << ',' << detail::opt_number(row.delta()) << ','
        << format_double(row.tolerance) << ',' << to_string(row.method) << ',' << to_string(row.status) << ','
        << (row.attained ? "true" : "false") << ',';
    if (row.witness) {
      out << detail::csv_field("(" + detail::join(row.witness->tuple, ";") + ")") << ','
          << detail::csv_field(row.witness->z) << ',' << detail::opt_number(row.witness->ratio);
    } else {
      out << ",,";
    }
    out << '\n';
  }
}

inline void write_text(const Report& r, std::ostream& out) {
  out << "simplex-lab " << r.command;
  if (r.config.contains("distance") && r.config["distance"].is_string() &&
      !r.config["distance"].get<std::string>().empty()) {
    out << "  " << r.config["distance"].get<std::string>();
  }
  out << '\n';
  for (const Row& row : r.rows) {
    out << "  [" << to_string(row.status) << "] " << row.name << " n=" << row.n;
    if (row.k != row.n) out << " k=" << row.k;
    out << "  observed " << (row.unbounded ? std::string("inf") : format_double(row.observed));
    if (row.expected) out << "  expected " << format_double(*row.expected);
    if (row.bounds) {
      out << "  bounds [" << detail::opt_number(row.bounds->lower) << ", " << detail::opt_number(row.bounds->upper)
          << (row.bounds->upper_strict ? ")" : "]");
    }
    out << "  (" << to_string(row.method) << ", tol " << format_double(row.tolerance) << ")";
    if (row.witness) out << "\n      witness " << "(" << detail::join(row.witness->tuple, ", ") << "; " << row.witness->z << ")";
    if (!row.note.empty()) out << "\n      " << row.note;
    out << '\n';
  }
  for (const PropertyVerdict& v : r.verdicts) {
    out << "  [" << to_string(v.status) << "] " << v.property;
    if (!v.detail.empty()) out << "  " << v.detail;
    if (v.max_ratio) out << "  max ratio " << format_double(*v.max_ratio);
    out << '\n';
    if (v.counterexample) out << "      counterexample: " << v.counterexample->description << '\n';
  }
  for (const std::string& note : r.notes) out << "  note: " << note << '\n';
  out << (r.any_failure() ? "FAIL" : "PASS") << '\n';
}

}  // namespace simplex_lab
