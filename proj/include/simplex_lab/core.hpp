#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace simplex_lab {

enum class Errc {
  arity_mismatch,
  space_mismatch,
  index_out_of_range,
  degenerate_tuple,
  domain_error,
  invalid_argument,
  unknown_id,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

enum class SpaceKind { finite, real_line, plane };

inline const char* to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::finite: return "finite";
    case SpaceKind::real_line: return "real";
    case SpaceKind::plane: return "plane";
  }
  return "?";
}

/// Element of a finite alphabet, identified by its position in the alphabet.
struct Symbol {
  std::size_t index = 0;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

struct Planar {
  double x = 0.0;
  double y = 0.0;
  friend std::partial_ordering operator<=>(const Planar&, const Planar&) = default;
  friend bool operator==(const Planar&, const Planar&) = default;
};

/// A point of one of the three supported spaces. Equality is exact; the
/// ordering (kind first, then coordinates) is only used for tie-breaking.
class Point {
 public:
  constexpr Point(Symbol s) : value_(s) {}
  constexpr Point(double x) : value_(x) {}
  constexpr Point(Planar p) : value_(p) {}

  static constexpr Point symbol(std::size_t index) { return Point(Symbol{index}); }
  static constexpr Point real(double x) { return Point(x); }
  static constexpr Point planar(double x, double y) { return Point(Planar{x, y}); }

  SpaceKind kind() const noexcept {
    switch (value_.index()) {
      case 0: return SpaceKind::finite;
      case 1: return SpaceKind::real_line;
      default: return SpaceKind::plane;
    }
  }

  std::size_t as_symbol() const { return std::get<Symbol>(value_).index; }
  double as_real() const { return std::get<double>(value_); }
  const Planar& as_planar() const { return std::get<Planar>(value_); }

  friend bool operator==(const Point&, const Point&) = default;
  friend std::partial_ordering operator<=>(const Point&, const Point&) = default;

 private:
  std::variant<Symbol, double, Planar> value_;
};

/// Shortest text that reads back as the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

/// An ordered n-tuple of points. Stored as given; sorted and set views are
/// computed on demand because section replacement is positional.
class Tuple {
 public:
  Tuple() = default;
  Tuple(std::initializer_list<Point> points) : points_(points) {}
  explicit Tuple(std::vector<Point> points) : points_(std::move(points)) {}
  explicit Tuple(std::span<const Point> points) : points_(points.begin(), points.end()) {}

  std::size_t size() const noexcept { return points_.size(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  std::span<const Point> points() const noexcept { return points_; }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  /// Copy with position `i` (0-based) replaced by `z`.
  Tuple section(std::size_t i, const Point& z) const {
    if (i >= points_.size()) {
      throw Error(Errc::index_out_of_range,
                  "section index " + std::to_string(i) + " out of range for tuple of length " +
                      std::to_string(points_.size()));
    }
    Tuple out = *this;
    out.points_[i] = z;
    return out;
  }

  std::vector<Point> sorted() const {
    std::vector<Point> v = points_;
    std::sort(v.begin(), v.end());
    return v;
  }

  /// Sorted distinct elements.
  std::vector<Point> underlying_set() const {
    std::vector<Point> v = sorted();
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }

  std::size_t distinct_count() const { return underlying_set().size(); }

  friend bool operator==(const Tuple&, const Tuple&) = default;
  friend std::partial_ordering operator<=>(const Tuple& a, const Tuple& b) {
    return std::lexicographical_compare_three_way(a.points_.begin(), a.points_.end(),
                                                  b.points_.begin(), b.points_.end());
  }

 private:
  std::vector<Point> points_;
};

inline std::size_t distinct_count(std::span<const Point> points) {
  std::vector<Point> v(points.begin(), points.end());
  std::sort(v.begin(), v.end());
  return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

/// Per-coordinate sampling box for the continuous spaces.
struct Box {
  double lo = -1.0;
  double hi = 1.0;
  double width() const { return hi - lo; }
  friend bool operator==(const Box&, const Box&) = default;
};

class Space {
 public:
  static Space finite(std::vector<std::string> labels) {
    if (labels.size() < 2) {
      throw Error(Errc::invalid_argument, "finite space needs at least 2 labels");
    }
    Space s(SpaceKind::finite);
    s.labels_ = std::move(labels);
    return s;
  }

  /// Finite space with labels a, b, c, ...
  static Space finite(std::size_t size) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < size; ++i) {
      labels.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "x" + std::to_string(i));
    }
    return finite(std::move(labels));
  }

  static Space real_line(Box box = {}) {
    Space s(SpaceKind::real_line);
    s.box_ = box;
    return s;
  }

  static Space plane(Box box = {}) {
    Space s(SpaceKind::plane);
    s.box_ = box;
    return s;
  }

  SpaceKind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ == SpaceKind::finite; }
  const Box& box() const noexcept { return box_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }

  Point element(std::size_t i) const {
    if (!is_finite() || i >= labels_.size()) {
      throw Error(Errc::index_out_of_range, "no element " + std::to_string(i) + " in space");
    }
    return Point::symbol(i);
  }

  std::vector<Point> elements() const {
    std::vector<Point> out;
    for (std::size_t i = 0; i < labels_.size(); ++i) out.push_back(Point::symbol(i));
    return out;
  }

  std::optional<std::size_t> find_label(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
  }

  bool contains(const Point& p) const {
    if (p.kind() != kind_) return false;
    return !is_finite() || p.as_symbol() < labels_.size();
  }

  /// Number of tuples in X^length, saturating at max size_t.
  std::size_t enumeration_size(std::size_t length) const {
    if (!is_finite()) return static_cast<std::size_t>(-1);
    std::size_t total = 1;
    for (std::size_t i = 0; i < length; ++i) {
      if (total > static_cast<std::size_t>(-1) / labels_.size()) return static_cast<std::size_t>(-1);
      total *= labels_.size();
    }
    return total;
  }

  /// Visits every tuple of X^length in lexicographic order. `visit` may
  /// return false to stop early.
  template <class Visit>
  void for_each_tuple(std::size_t length, Visit&& visit) const {
    if (!is_finite()) throw Error(Errc::space_mismatch, "enumeration requires a finite space");
    std::vector<Point> current(length, Point::symbol(0));
    std::vector<std::size_t> digits(length, 0);
    while (true) {
      if constexpr (std::is_same_v<std::invoke_result_t<Visit, std::span<const Point>>, bool>) {
        if (!visit(std::span<const Point>(current))) return;
      } else {
        visit(std::span<const Point>(current));
      }
      std::size_t pos = length;
      while (pos > 0) {
        --pos;
        if (++digits[pos] < labels_.size()) {
          current[pos] = Point::symbol(digits[pos]);
          break;
        }
        digits[pos] = 0;
        current[pos] = Point::symbol(0);
        if (pos == 0) return;
      }
      if (length == 0) return;
    }
  }

  template <class Rng>
  Point sample(Rng& rng) const {
    switch (kind_) {
      case SpaceKind::finite: {
        std::uniform_int_distribution<std::size_t> pick(0, labels_.size() - 1);
        return Point::symbol(pick(rng));
      }
      case SpaceKind::real_line: {
        std::uniform_real_distribution<double> u(box_.lo, box_.hi);
        return Point::real(u(rng));
      }
      case SpaceKind::plane: {
        std::uniform_real_distribution<double> u(box_.lo, box_.hi);
        double x = u(rng);
        double y = u(rng);
        return Point::planar(x, y);
      }
    }
    return Point::symbol(0);
  }

  /// Small deterministic grid used by structured searches: the whole
  /// alphabet, five equispaced reals, or a 3x3 planar lattice over the box.
  std::vector<Point> grid() const {
    if (is_finite()) return elements();
    const double lo = box_.lo, hi = box_.hi, mid = 0.5 * (lo + hi);
    if (kind_ == SpaceKind::real_line) {
      return {Point::real(lo), Point::real(0.5 * (lo + mid)), Point::real(mid),
              Point::real(0.5 * (mid + hi)), Point::real(hi)};
    }
    std::vector<Point> out;
    for (double x : {lo, mid, hi})
      for (double y : {lo, mid, hi}) out.push_back(Point::planar(x, y));
    return out;
  }

  std::string describe() const {
    if (is_finite()) {
      std::string s = "finite:";
      for (std::size_t i = 0; i < labels_.size(); ++i) s += (i ? "," : "") + labels_[i];
      return s;
    }
    std::string s = to_string(kind_);
    if (!(box_ == Box{})) s += ":" + format_double(box_.lo) + "," + format_double(box_.hi);
    return s;
  }

  std::string format(const Point& p) const {
    switch (p.kind()) {
      case SpaceKind::finite:
        return p.as_symbol() < labels_.size() ? labels_[p.as_symbol()] : "#" + std::to_string(p.as_symbol());
      case SpaceKind::real_line: return format_double(p.as_real());
      case SpaceKind::plane:
        return "(" + format_double(p.as_planar().x) + "," + format_double(p.as_planar().y) + ")";
    }
    return "?";
  }

  std::string format(std::span<const Point> points) const {
    std::string s = "(";
    for (std::size_t i = 0; i < points.size(); ++i) s += (i ? ", " : "") + format(points[i]);
    return s + ")";
  }

 private:
  explicit Space(SpaceKind kind) : kind_(kind) {}

  SpaceKind kind_;
  std::vector<std::string> labels_;
  Box box_;
};

/// Structural facts about a distance; nullopt means "not known".
struct Traits {
  std::optional<bool> standard;
  std::optional<bool> repetition_invariant;
  std::optional<bool> nonincreasing;
};

/// Published two-sided enclosure of K*_n when the exact value is open.
struct ConstantBounds {
  std::optional<double> lower;
  std::optional<double> upper;
  bool upper_strict = false;
};

/// A named symmetric n-ary map X^n -> [0, inf) with optional metadata about
/// its best constants. Immutable once built; evaluation is pure.
class NDistance {
 public:
  using Evaluator = std::function<double(std::span<const Point>)>;

  NDistance(std::string name, std::size_t arity, std::optional<SpaceKind> kind, Evaluator evaluator)
      : name_(std::move(name)), arity_(arity), kind_(kind), evaluator_(std::move(evaluator)) {
    if (arity_ < 2) throw Error(Errc::domain_error, "n-distance arity must be at least 2");
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t arity() const noexcept { return arity_; }
  /// nullopt: accepts points of any single kind.
  std::optional<SpaceKind> space_kind() const noexcept { return kind_; }

  std::optional<double> known_constant() const noexcept { return known_constant_; }
  std::optional<double> known_k_constant(std::size_t k) const {
    if (k == arity_ && known_constant_) return known_constant_;
    auto it = known_k_constants_.find(k);
    if (it == known_k_constants_.end()) return std::nullopt;
    return it->second;
  }
  const std::map<std::size_t, double>& known_k_constants() const noexcept { return known_k_constants_; }
  const Traits& traits() const noexcept { return traits_; }
  const std::optional<ConstantBounds>& bounds() const noexcept { return bounds_; }

  NDistance& set_known_constant(double k) {
    known_constant_ = k;
    return *this;
  }
  NDistance& set_known_k_constant(std::size_t k, double value) {
    known_k_constants_[k] = value;
    return *this;
  }
  NDistance& set_traits(Traits t) {
    traits_ = t;
    return *this;
  }
  NDistance& set_bounds(ConstantBounds b) {
    bounds_ = b;
    return *this;
  }

  bool accepts(const Point& p) const noexcept { return !kind_ || p.kind() == *kind_; }

  double operator()(std::span<const Point> points) const {
    if (points.size() != arity_) {
      throw Error(Errc::arity_mismatch, name_ + " expects " + std::to_string(arity_) + " arguments, got " +
                                            std::to_string(points.size()));
    }
    for (const Point& p : points) {
      if (!accepts(p) || p.kind() != points.front().kind()) {
        throw Error(Errc::space_mismatch, name_ + " does not accept points of kind " + to_string(p.kind()));
      }
    }
    return evaluator_(points);
  }

  double operator()(const Tuple& t) const { return (*this)(t.points()); }

 private:
  std::string name_;
  std::size_t arity_;
  std::optional<SpaceKind> kind_;
  Evaluator evaluator_;
  std::optional<double> known_constant_;
  std::map<std::size_t, double> known_k_constants_;
  Traits traits_;
  std::optional<ConstantBounds> bounds_;
};

/// A search point (x_1..x_n; z).
struct Candidate {
  Tuple tuple;
  Point z = Point::symbol(0);

  friend bool operator==(const Candidate&, const Candidate&) = default;
  friend std::partial_ordering operator<=>(const Candidate& a, const Candidate& b) {
    if (auto c = a.tuple <=> b.tuple; c != 0) return c;
    return a.z <=> b.z;
  }
};

inline double evaluate(const NDistance& d, const Tuple& t) { return d(t); }

inline Tuple section(const Tuple& t, std::size_t i, const Point& z) { return t.section(i, z); }

/// Sum of d over all n sections of `t` at `z`.
inline double simplex_denominator(const NDistance& d, const Tuple& t, const Point& z) {
  if (t.distinct_count() < 2) {
    throw Error(Errc::degenerate_tuple, "simplex denominator is undefined for a constant tuple");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) sum += d(t.section(i, z));
  return sum;
}

}  // namespace simplex_lab
