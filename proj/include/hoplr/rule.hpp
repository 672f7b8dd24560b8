#pragma once

// Weight sequences and the constructed-rule record with its JSON file format.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hoplr/gfpoly.hpp"

namespace hoplr {

/// Product weights gamma_1, gamma_2, ... > 0.
class WeightSpec {
 public:
  enum class Kind { geometric, polydecay, list };

  /// gamma_j = c^j.
  static WeightSpec geometric(double c);
  /// gamma_j = j^{-2}.
  static WeightSpec polydecay();
  static WeightSpec list(std::vector<double> values);

  /// Parses "geom:C", "polydecay" or "list:v1,v2,...".
  static WeightSpec parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  double ratio() const noexcept { return ratio_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// gamma_1..gamma_s. Throws if an explicit list is shorter than s.
  std::vector<double> materialize(int s) const;
  std::string describe() const;

  friend bool operator==(const WeightSpec&, const WeightSpec&) = default;

 private:
  WeightSpec(Kind kind, double ratio, std::vector<double> values);
  Kind kind_;
  double ratio_;
  std::vector<double> values_;
};

inline constexpr int kRuleSchemaVersion = 1;
inline constexpr const char* kTieBreak = "min-q-code";

struct LatticeRule {
  std::uint32_t b = 2;
  int m = 0;
  int n = 0;
  int alpha = 2;
  gf::PolyCode p = 0;
  gf::PolyCode generator = 0;
  std::vector<gf::PolyCode> q;
  WeightSpec weights = WeightSpec::geometric(0.9);
  std::vector<double> errors;

  int dimension() const noexcept { return static_cast<int>(q.size()); }
  gf::Modulus modulus() const { return gf::Modulus(p, gf::PrimeBase(b)); }

  friend bool operator==(const LatticeRule&, const LatticeRule&) = default;
};

/// Throws std::invalid_argument on an inconsistent rule: reducible p,
/// deg p != n, n != alpha m, q outside the nonzero residues, or an error
/// list whose length differs from the dimension.
void validate(const LatticeRule& rule);

std::string rule_to_json(const LatticeRule& rule);
LatticeRule rule_from_json(std::string_view text);

void write_rule_file(const std::filesystem::path& path, const LatticeRule& rule);
LatticeRule read_rule_file(const std::filesystem::path& path);

}  // namespace hoplr
