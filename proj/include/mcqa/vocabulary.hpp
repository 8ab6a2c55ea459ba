#pragma once

#include <array>
#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

namespace mcqa {

/// Difficulty points in half-point units, so every sum is exact.
class HalfPoints {
 public:
  constexpr HalfPoints() = default;
  static constexpr HalfPoints from_units(int units) { return HalfPoints(units); }
  static constexpr HalfPoints whole(int points) { return HalfPoints(points * 2); }

  constexpr int units() const { return units_; }
  constexpr double value() const { return units_ / 2.0; }
  /// "2.5", "29", "0"
  std::string str() const;
  /// Integer JSON number when whole, double otherwise.
  nlohmann::json to_json() const;

  constexpr HalfPoints& operator+=(HalfPoints o) {
    units_ += o.units_;
    return *this;
  }
  friend constexpr HalfPoints operator+(HalfPoints a, HalfPoints b) { return a += b; }
  friend constexpr HalfPoints operator-(HalfPoints a, HalfPoints b) { return from_units(a.units_ - b.units_); }
  friend constexpr bool operator==(HalfPoints, HalfPoints) = default;
  friend constexpr auto operator<=>(HalfPoints, HalfPoints) = default;

 private:
  constexpr explicit HalfPoints(int units) : units_(units) {}
  int units_ = 0;
};

/// The nine model variables, in Scorecard order.
enum class Variable { TOI, TOM, NPhr, NI, NIt, NPar, IC, POD, TOC };
inline constexpr std::array<Variable, 9> kVariables{Variable::TOI, Variable::TOM,  Variable::NPhr,
                                                    Variable::NI,  Variable::NIt,  Variable::NPar,
                                                    Variable::IC,  Variable::POD,  Variable::TOC};
std::string_view to_string(Variable v);
std::optional<Variable> parse_variable(std::string_view s);

/// Closed vocabularies an annotator picks from. TOM has two relation scales
/// (T-Q and T-A) plus the eight combined categories used for scoring.
enum class Scale { toi, tom, tom_tq, tom_ta, nphr, ni, nit, npar, ic, pod, toc };
std::string_view to_string(Scale s);
std::optional<Scale> parse_scale(std::string_view s);
/// The variable a scale contributes to.
Variable variable_of(Scale s);

struct Category {
  std::string_view name;
  HalfPoints points;
  std::string_view description;
};

/// Categories of a scale in table order (ascending points, ties in table row order).
/// Relation scales carry a rank (1..4) in `points`, not difficulty points.
std::span<const Category> vocabulary(Scale s);
const Category* find_category(Scale s, std::string_view name);
/// Row position within vocabulary(s), or -1.
int category_row(Scale s, std::string_view name);

enum class Relation { LM, SM, LLTI, HLTI };
inline constexpr std::array<Relation, 4> kRelations{Relation::LM, Relation::SM, Relation::LLTI, Relation::HLTI};
std::string_view to_string(Relation r);
std::optional<Relation> parse_relation(std::string_view s);

// TOI additions that map onto existing concepts.
struct ToiAlias {
  std::string_view alias;
  std::string_view concept_name;
};
std::span<const ToiAlias> toi_aliases();
/// Canonical concept for a concept or alias name; nullopt if unknown.
std::optional<std::string_view> canonical_toi(std::string_view name);
inline constexpr std::string_view kIndeterminate = "indeterminate";

/// NPhr: 1 -> "1", 2 -> "2", 3 -> "3", 4+ -> "4+".
std::string_view nphr_band(int clauses);
/// NI: 1 -> "1", 2 -> "2", 3-4 -> "3-4", 5+ -> "5+".
std::string_view ni_band(int items);

/// Full vocabulary export shared with the browser workbench.
nlohmann::json vocabulary_json();

}  // namespace mcqa
