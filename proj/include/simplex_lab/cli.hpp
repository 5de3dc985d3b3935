#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "simplex_lab/analysis.hpp"
#include "simplex_lab/catalog.hpp"
#include "simplex_lab/constructions.hpp"
#include "simplex_lab/core.hpp"
#include "simplex_lab/properties.hpp"
#include "simplex_lab/report.hpp"

namespace simplex_lab::cli {

enum ExitCode : int { all_pass = 0, check_failure = 1, config_error = 2 };

struct RunConfig {
  std::string command;
  std::string distance;
  std::optional<std::string> space;
  std::size_t n = 4;
  std::vector<std::size_t> ks;
  std::size_t budget = 100000;
  std::uint64_t seed = 42;
  std::optional<double> tolerance;
  std::string format = "json";
  std::optional<std::string> out;
  std::vector<std::string> checks;
  std::optional<double> M;
  std::optional<std::size_t> p;

  Json to_json() const {
    Json j;
    j["command"] = command;
    j["distance"] = distance;
    j["space"] = space ? Json(*space) : Json(nullptr);
    j["n"] = n;
    j["k"] = ks;
    j["budget"] = budget;
    j["seed"] = seed;
    j["tolerance"] = tolerance ? Json(*tolerance) : Json(nullptr);
    j["format"] = format;
    j["checks"] = checks;
    j["M"] = M ? Json(*M) : Json(nullptr);
    j["p"] = p ? Json(*p) : Json(nullptr);
    return j;
  }
};

/// "id" or "id:key=value,key=value".
struct DistanceId {
  std::string id;
  std::map<std::string, std::string> params;

  std::optional<std::string> get(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) return std::nullopt;
    return it->second;
  }
};

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string current;
  std::istringstream in(s);
  while (std::getline(in, current, sep)) out.push_back(current);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline DistanceId parse_distance_id(const std::string& text) {
  DistanceId d;
  const auto colon = text.find(':');
  d.id = text.substr(0, colon);
  if (d.id.empty()) throw Error(Errc::invalid_argument, "empty distance id");
  if (colon == std::string::npos) return d;
  for (const std::string& kv : split(text.substr(colon + 1), ',')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(Errc::invalid_argument, "distance parameter '" + kv + "' is not key=value");
    }
    d.params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return d;
}

/// Decimal or p/q.
inline double parse_number(const std::string& text) {
  auto one = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw Error(Errc::invalid_argument, "not a number: '" + text + "'");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return one(text);
  const double den = one(text.substr(slash + 1));
  if (den == 0.0) throw Error(Errc::invalid_argument, "zero denominator in '" + text + "'");
  return one(text.substr(0, slash)) / den;
}

inline std::size_t parse_count(const std::string& text, const char* what) {
  const double v = parse_number(text);
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e15) {
    throw Error(Errc::invalid_argument, std::string(what) + " must be a positive integer, got '" + text + "'");
  }
  return static_cast<std::size_t>(v);
}

/// "2..5", "2,3,4" or a mix.
inline std::vector<std::size_t> parse_k_list(const std::vector<std::string>& items) {
  std::vector<std::size_t> ks;
  for (const std::string& item : items) {
    for (const std::string& part : split(item, ',')) {
      const auto dots = part.find("..");
      if (dots == std::string::npos) {
        ks.push_back(parse_count(part, "k"));
        continue;
      }
      const std::size_t lo = parse_count(part.substr(0, dots), "k");
      const std::size_t hi = parse_count(part.substr(dots + 2), "k");
      if (hi < lo) throw Error(Errc::invalid_argument, "empty k range '" + part + "'");
      for (std::size_t k = lo; k <= hi; ++k) ks.push_back(k);
    }
  }
  return ks;
}

/// finite:N | finite:a,b,c | real[:lo,hi] | plane[:lo,hi]
inline Space parse_space(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "finite") {
    if (rest.empty()) throw Error(Errc::invalid_argument, "finite space needs a size or labels");
    if (rest.find_first_not_of("0123456789") == std::string::npos) return Space::finite(parse_count(rest, "size"));
    auto labels = split(rest, ',');
    std::vector<std::string> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() ||
        std::find(labels.begin(), labels.end(), "") != labels.end()) {
      throw Error(Errc::invalid_argument, "finite space labels must be distinct and nonempty");
    }
    return Space::finite(std::move(labels));
  }
  if (kind == "real" || kind == "plane") {
    Box box;
    if (!rest.empty()) {
      const auto parts = split(rest, ',');
      if (parts.size() != 2) throw Error(Errc::invalid_argument, "box must be lo,hi");
      box = {parse_number(parts[0]), parse_number(parts[1])};
      if (!(box.lo < box.hi)) throw Error(Errc::invalid_argument, "box needs lo < hi");
    }
    return kind == "real" ? Space::real_line(box) : Space::plane(box);
  }
  throw Error(Errc::invalid_argument, "unknown space '" + text + "'");
}

inline Ground parse_ground(const std::string& g) {
  if (g == "abs") return Ground::abs;
  if (g == "euclidean") return Ground::euclidean;
  if (g == "chebyshev") return Ground::chebyshev;
  if (g == "discrete") return Ground::discrete;
  throw Error(Errc::invalid_argument, "unknown ground distance '" + g + "'");
}

inline Ground ground_for(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::finite: return Ground::discrete;
    case SpaceKind::real_line: return Ground::abs;
    case SpaceKind::plane: return Ground::euclidean;
  }
  return Ground::abs;
}

/// Space used when --space is absent.
inline std::string default_space(const DistanceId& id) {
  const std::string& d = id.id;
  if (d == "drastic" || d == "cardinality" || d == "single-anchor") return "finite:3";
  if (d == "two-anchor") return "finite:4";
  if (d == "arithmetic-mean" || d == "inner-interval" || d == "inner-interval-power") return "real";
  if (d == "line-count" || d == "enclosing-radius" || d == "enclosing-area") return "plane";
  if (d == "chebyshev-diameter") return id.get("q").value_or("2") == "1" ? "real" : "plane";
  if (d == "diameter" || d == "sum" || d == "fermat") {
    switch (parse_ground(id.get("ground").value_or("abs"))) {
      case Ground::abs: return "real";
      case Ground::euclidean:
      case Ground::chebyshev: return "plane";
      case Ground::discrete: return "finite:3";
    }
  }
  return "finite:3";
}

inline Point parse_label(const Space& space, const std::string& label) {
  auto i = space.find_label(label);
  if (!i) throw Error(Errc::invalid_argument, "label '" + label + "' is not in " + space.describe());
  return Point::symbol(*i);
}

struct Resolved {
  CatalogEntry entry;
  Space space;
};

inline const std::vector<std::string>& distance_ids() {
  static const std::vector<std::string> ids = {
      "drastic",        "cardinality",      "diameter",       "sum",
      "arithmetic-mean", "fermat",          "line-count",     "enclosing-radius",
      "enclosing-area", "chebyshev-diameter", "inner-interval", "inner-interval-power",
      "single-anchor",  "two-anchor",       "appendix-witness"};
  return ids;
}

/// Builds the distance named by `text` with arity n on the given (or
/// default) space.
inline Resolved resolve(const std::string& text, std::size_t n, const std::optional<std::string>& space_text) {
  const DistanceId id = parse_distance_id(text);
  if (id.id == "appendix-witness") {
    const std::size_t k = parse_count(id.get("k").value_or("2"), "k");
    AppendixWitness w(n, k);
    if (space_text && parse_space(*space_text).describe() != w.space().describe()) {
      throw Error(Errc::invalid_argument, "appendix-witness lives on " + w.space().describe());
    }
    return {{w.distance(), {}, {}}, w.space()};
  }
  Space space = parse_space(space_text.value_or(default_space(id)));
  const Ground ground = id.get("ground") ? parse_ground(*id.get("ground")) : ground_for(space.kind());
  auto entry = [&]() -> CatalogEntry {
    const std::string& d = id.id;
    if (d == "drastic") return catalog::drastic(n);
    if (d == "cardinality") return catalog::cardinality(n);
    if (d == "diameter") return catalog::diameter(n, ground);
    if (d == "sum") return catalog::sum_based(n, ground);
    if (d == "arithmetic-mean") return catalog::arithmetic_mean(n);
    if (d == "fermat") return catalog::fermat(n, ground, space);
    if (d == "line-count") return catalog::line_count(n);
    if (d == "enclosing-radius") return catalog::enclosing_radius(n);
    if (d == "enclosing-area") return catalog::enclosing_area(n);
    if (d == "chebyshev-diameter") {
      return catalog::chebyshev_diameter(n, parse_count(id.get("q").value_or("2"), "q"));
    }
    if (d == "inner-interval") return catalog::largest_inner_interval(n);
    if (d == "inner-interval-power") {
      return catalog::inner_interval_power(n, static_cast<unsigned>(parse_count(id.get("p").value_or("1"), "p")));
    }
    if (d == "single-anchor") {
      if (!id.get("s")) throw Error(Errc::invalid_argument, "single-anchor needs s=<value>");
      const std::string base = id.get("base").value_or("drastic");
      CatalogEntry b = base == "drastic"       ? catalog::drastic(n)
                       : base == "cardinality" ? catalog::cardinality(n)
                                               : throw Error(Errc::unknown_id, "unknown single-anchor base '" + base + "'");
      if (!space.is_finite()) throw Error(Errc::invalid_argument, "single-anchor needs a finite space");
      const Point e = parse_label(space, id.get("e").value_or(space.labels().front()));
      return {build_single_anchor(b.distance, e, parse_number(*id.get("s")), space).distance, {}, {}};
    }
    if (d == "two-anchor") {
      if (!id.get("s")) throw Error(Errc::invalid_argument, "two-anchor needs s=<value>");
      if (!space.is_finite() || space.size() < 2) throw Error(Errc::invalid_argument, "two-anchor needs a finite space");
      const Point a = parse_label(space, id.get("a").value_or(space.labels()[0]));
      const Point b = parse_label(space, id.get("b").value_or(space.labels()[1]));
      return {build_two_anchor(a, b, parse_number(*id.get("s")), n, space).distance, {}, {}};
    }
    throw Error(Errc::unknown_id, "unknown distance id '" + d + "'");
  }();
  if (entry.distance.space_kind() && *entry.distance.space_kind() != space.kind()) {
    throw Error(Errc::space_mismatch, entry.distance.name() + " is not defined on " + space.describe());
  }
  return {std::move(entry), std::move(space)};
}

inline double default_tolerance(const Space& space) { return space.kind() == SpaceKind::plane ? 1e-6 : 1e-9; }

inline EstimateOptions estimate_options(const RunConfig& c) {
  EstimateOptions o;
  o.budget = c.budget;
  o.seed = c.seed;
  return o;
}

inline CheckOptions check_options(const RunConfig& c) {
  CheckOptions o;
  o.budget = c.budget;
  o.seed = c.seed;
  return o;
}

inline Report begin_report(const RunConfig& c) {
  Report r;
  r.command = c.command;
  r.config = c.to_json();
  r.timestamp = utc_timestamp();
  return r;
}

/// Axiom checks plus the requested property checks.
inline Report cmd_verify(const RunConfig& c) {
  Report report = begin_report(c);
  const Resolved res = resolve(c.distance, c.n, c.space);
  const NDistance& d = res.entry.distance;
  report.config["space"] = res.space.describe();
  const CheckOptions opts = check_options(c);
  for (PropertyVerdict& v : check_axioms(d, res.space, opts).verdicts()) report.add_verdict(std::move(v), res.space);

  std::vector<std::size_t> ks = c.ks;
  if (ks.empty()) {
    for (std::size_t k = 2; k < c.n; ++k) ks.push_back(k);
  }
  for (const std::string& check : c.checks) {
    if (check == "repetition-invariance") {
      report.add_verdict(check_repetition_invariance(d, res.space, opts), res.space);
    } else if (check == "nonincreasing") {
      report.add_verdict(check_nonincreasing_identification(d, res.space, opts), res.space);
    } else if (check == "strong") {
      for (std::size_t k : ks) {
        double M = 0.0;
        if (c.M) {
          M = *c.M;
        } else if (d.traits().standard == true && d.traits().repetition_invariant == true) {
          M = strong_constant_standard(c.n, k);
        } else {
          throw Error(Errc::invalid_argument, "strong check needs --M unless the distance is standard and repetition invariant");
        }
        report.add_verdict(check_strong_k_simplex(d, k, M, res.space, opts), res.space);
      }
    } else if (check == "lemma") {
      for (std::size_t k : ks) {
        if (k < 2 || k + 1 > c.n) continue;
        for (std::size_t p = 0; p <= c.n - k; ++p) {
          if (c.p && *c.p != p) continue;
          report.add_verdict(check_lemma_mixed_bound(d, k, p, res.space, opts), res.space);
        }
      }
    } else {
      throw Error(Errc::invalid_argument, "unknown check '" + check + "'");
    }
  }
  return report;
}

/// K*_n and each requested K*_{n,k}, with the relation checks when the full
/// constant is known.
inline Report cmd_constants(const RunConfig& c) {
  Report report = begin_report(c);
  const Resolved res = resolve(c.distance, c.n, c.space);
  const NDistance& d = res.entry.distance;
  report.config["space"] = res.space.describe();
  const double tol = c.tolerance.value_or(default_tolerance(res.space));
  const EstimateOptions opts = estimate_options(c);

  const ConstantEstimate full = estimate_best_constant(res.entry, res.space, opts);
  report.rows.push_back(make_row("K*_" + std::to_string(c.n), full, res.space, tol, d.bounds()));
  for (std::size_t k : c.ks) {
    if (k == c.n) continue;
    if (k > c.n) throw Error(Errc::invalid_argument, "k must not exceed n");
    const ConstantEstimate partial = estimate_partial_constant(res.entry, res.space, k, opts);
    report.rows.push_back(make_row("K*_{" + std::to_string(c.n) + "," + std::to_string(k) + "}", partial, res.space, tol));
    if (d.known_constant() && k >= 2) {
      auto pb = check_partial_bound(full, partial, 1e-6);
      pb.property += "(k=" + std::to_string(k) + ")";
      report.add_verdict(std::move(pb), res.space);
      auto sym = check_symmetrization(full, partial, 1e-6);
      sym.property += "(k=" + std::to_string(k) + ")";
      report.add_verdict(std::move(sym), res.space);
    }
  }
  report.notes.push_back("observed values are lower bounds on the best constants; expected values come from metadata");
  return report;
}

struct Table1Entry {
  std::string name;
  CatalogEntry entry;
  Space space;
};

inline std::vector<Table1Entry> table1_entries(std::size_t n) {
  const Space finite = Space::finite(3), real = Space::real_line(), plane = Space::plane();
  std::vector<Table1Entry> rows = {
      {"drastic", catalog::drastic(n), finite},
      {"cardinality", catalog::cardinality(n), finite},
      {"diameter-abs", catalog::diameter(n, Ground::abs), real},
      {"diameter-euclidean", catalog::diameter(n, Ground::euclidean), plane},
      {"sum-abs", catalog::sum_based(n, Ground::abs), real},
      {"arithmetic-mean", catalog::arithmetic_mean(n), real},
      {"enclosing-radius", catalog::enclosing_radius(n), plane},
  };
  rows.push_back({"enclosing-area", catalog::enclosing_area(3), plane});
  if (n > 3) rows.push_back({"enclosing-area", catalog::enclosing_area(n), plane});
  rows.push_back({"fermat-abs", catalog::fermat(n, Ground::abs, real), real});
  if (n >= 3) rows.push_back({"line-count", catalog::line_count(n), plane});
  return rows;
}

inline Report cmd_table1(const RunConfig& c) {
  Report report = begin_report(c);
  const EstimateOptions opts = estimate_options(c);
  for (const Table1Entry& t : table1_entries(c.n)) {
    const double tol = c.tolerance.value_or(default_tolerance(t.space));
    const ConstantEstimate est = estimate_best_constant(t.entry, t.space, opts);
    Row row = make_row(t.name, est, t.space, tol, t.entry.distance.bounds());
    if (row.expected && !row.attained) row.status = Status::fail;
    report.rows.push_back(std::move(row));
  }
  report.notes.push_back("fermat and line-count rows are checked against published bounds only");
  return report;
}

inline Report cmd_multidistance(const RunConfig& c) {
  Report report = begin_report(c);
  const DistanceId id = parse_distance_id(c.distance);
  if (c.n < 2) throw Error(Errc::invalid_argument, "multidistance needs a maximum arity >= 2");
  catalog::Family family;
  std::string space_text;
  if (id.id == "enclosing-radius") {
    family = catalog::enclosing_radius_family(c.n);
    space_text = "plane";
  } else if (id.id == "line-count") {
    family = catalog::line_count_family(c.n);
    space_text = "plane";
  } else if (id.id == "arithmetic-mean") {
    const std::string doubled = id.get("doubled").value_or("true");
    if (doubled != "true" && doubled != "false") throw Error(Errc::invalid_argument, "doubled must be true or false");
    family = catalog::arithmetic_mean_family(c.n, doubled == "true");
    space_text = "real";
  } else {
    throw Error(Errc::unknown_id, "unknown family '" + id.id + "'");
  }
  const Space space = parse_space(c.space.value_or(space_text));
  if (space.kind() != *family.at(2).space_kind()) throw Error(Errc::space_mismatch, "family does not live on " + space.describe());
  report.config["space"] = space.describe();
  const CheckOptions opts = check_options(c);

  MultidistanceReport md = check_multidistance(family, space, opts);
  for (ArityVerdicts& a : md.arities) {
    report.add_verdict(std::move(a.triangle), space);
    report.add_verdict(std::move(a.sufficient), space);
    report.add_verdict(std::move(a.lemma), space);
    if (a.sufficient_equality) {
      report.notes.push_back("n=" + std::to_string(a.n) + ": d_n(x,z,...,z) = d_2(x,z) on every probe");
    }
  }
  report.add_verdict(std::move(md.overall), space);
  for (const auto& [n, dn] : family) {
    if (n < 3) continue;
    report.add_verdict(check_multi_to_ndistance(dn, family.at(2), space, opts), space);
  }
  return report;
}

inline std::string render(const Report& r, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    os << to_json(r).dump(2) << '\n';
  } else if (format == "csv") {
    write_csv(r, os);
  } else {
    write_text(r, os);
  }
  return os.str();
}

/// Full command-line entry point. Never throws; returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"n-distance best constants and property checks", "simplex_lab"};
  app.require_subcommand(1);

  RunConfig config;
  std::string budget_text = "1e5";
  std::optional<std::uint64_t> seed;
  std::vector<std::string> k_items;
  std::optional<std::string> M_text;
  std::optional<std::size_t> n_arg;

  auto common = [&](CLI::App* sub, std::size_t default_n) {
    sub->add_option("--distance", config.distance, "distance id, optionally id:key=value,...");
    sub->add_option("--space", config.space, "finite:N | finite:a,b,c | real[:lo,hi] | plane[:lo,hi]");
    sub->add_option("--n", n_arg, "arity (default " + std::to_string(default_n) + ")");
    sub->add_option("--k", k_items, "k values, e.g. 2..5 or 2,3");
    sub->add_option("--budget", budget_text, "random samples per search")->default_val("1e5");
    sub->add_option("--seed", seed, "seed (default 42, or SIMPLEX_LAB_SEED)");
    sub->add_option("--format", config.format, "json | csv | text")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->default_val("json");
    sub->add_option("--out", config.out, "write the report to FILE");
    sub->add_option("--tolerance", config.tolerance, "override the row tolerance");
  };
  CLI::App* verify = app.add_subcommand("verify", "axiom and property checks");
  common(verify, 4);
  verify->add_option("--check", config.checks,
                     "repetition-invariance | nonincreasing | strong | lemma (repeatable)")
      ->delimiter(',');
  verify->add_option("--M", M_text, "constant for the strong k-simplex check");
  verify->add_option("--p", config.p, "only this p for the mixed-bound check");
  CLI::App* constants = app.add_subcommand("constants", "estimate K*_n and K*_{n,k}");
  common(constants, 4);
  CLI::App* table1 = app.add_subcommand("table1", "reproduce the table of best constants");
  common(table1, 4);
  CLI::App* multi = app.add_subcommand("multidistance", "multidistance checks for a family");
  common(multi, 5);

  std::vector<std::string> argv_store;
  argv_store.push_back("simplex_lab");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? all_pass : config_error;
  }

  try {
    config.command = app.get_subcommands().front()->get_name();
    config.n = n_arg.value_or(config.command == "multidistance" ? 5 : 4);
    config.budget = parse_count(budget_text, "budget");
    if (seed) {
      config.seed = *seed;
    } else if (const char* env = std::getenv("SIMPLEX_LAB_SEED")) {
      const std::string text = env;
      if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        throw Error(Errc::invalid_argument, "SIMPLEX_LAB_SEED must be a nonnegative integer");
      }
      config.seed = std::stoull(text);
    }
    config.ks = parse_k_list(k_items);
    if (M_text) config.M = parse_number(*M_text);
    if (config.n < 2) throw Error(Errc::domain_error, "n must be at least 2");
    if (config.command != "table1" && config.distance.empty()) {
      throw Error(Errc::invalid_argument, "--distance is required");
    }

    Report report;
    if (config.command == "verify") {
      report = cmd_verify(config);
    } else if (config.command == "constants") {
      report = cmd_constants(config);
    } else if (config.command == "table1") {
      report = cmd_table1(config);
    } else {
      report = cmd_multidistance(config);
    }
    const std::string text = render(report, config.format);
    if (config.out) {
      std::ofstream file(*config.out);
      if (!file) throw Error(Errc::invalid_argument, "cannot write " + *config.out);
      file << text;
    } else {
      out << text;
    }
    return report.any_failure() ? check_failure : all_pass;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return config_error;
  }
}

}  // namespace simplex_lab::cli
