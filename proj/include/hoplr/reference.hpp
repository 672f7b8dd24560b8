#pragma once

// Published reference rules (b = 2, gamma_j = 0.9^j, s = 10) and the
// reported worst-case errors, given to three significant digits (truncated).
// Also the digital-net comparison values for m = 5..12.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hoplr::reference {

struct TableRule {
  std::string_view id;
  int m;
  int alpha;
  std::uint64_t p;
  std::array<std::uint64_t, 10> q;
  std::array<double, 10> e;
};

inline constexpr std::array<TableRule, 4> kTableRules{{
    {"2a", 10, 2, 1179649,
     {453270, 920860, 324514, 394664, 106142, 587632, 279628, 676057, 626366, 856775},
     {2.14e-6, 4.55e-5, 6.27e-4, 3.75e-3, 1.30e-2, 3.39e-2, 7.45e-2, 1.43e-1, 2.51e-1, 4.08e-1}},
    {"2b", 12, 2, 28311553,
     {2028384, 13051202, 839202, 14647583, 6874738, 6522492, 13569662, 9821234, 10570369, 406897},
     {1.34e-7, 3.44e-6, 6.58e-5, 4.72e-4, 2.02e-3, 6.09e-3, 1.45e-2, 2.97e-2, 5.46e-2, 9.19e-2}},
    {"3a", 7, 3, 2621441,
     {1492861, 1022044, 1785216, 215936, 1978368, 1197580, 1837814, 485609, 1636853, 48810},
     {2.02e-6, 5.24e-4, 8.20e-3, 4.05e-2, 1.22e-1, 2.82e-1, 5.54e-1, 9.80e-1, 1.60, 2.48}},
    {"3b", 8, 3, 28311553,
     {10844342, 2604270, 5720893, 8141702, 3831799, 3616803, 15701694, 7750425, 2240926, 493873},
     {2.51e-7, 8.85e-5, 2.43e-3, 1.45e-2, 4.95e-2, 1.21e-1, 2.49e-1, 4.54e-1, 7.59e-1, 1.19}},
}};

inline constexpr double kTableRatio = 0.9;

inline std::optional<TableRule> find_table(std::string_view id) {
  for (const auto& t : kTableRules) {
    if (t.id == id) return t;
  }
  return std::nullopt;
}

/// Digital-net comparison, alpha = 2, s = 5, b = 2, m = 5..12.
struct NetComparison {
  std::string_view weights;  // WeightSpec text
  std::array<double, 8> cbc;
  std::array<double, 8> explicit_net;
};

inline constexpr int kNetFirstM = 5;
inline constexpr int kNetDimension = 5;
inline constexpr int kNetAlpha = 2;

inline constexpr std::array<NetComparison, 2> kNetComparisons{{
    {"geom:0.9",
     {.9291, .4085, .1778, .0747, .0312, .0128, .0052, .0020},
     {1.0930, .4259, .1984, .0980, .0403, .0168, .0071, .0027}},
    {"polydecay",
     {.028917, .009912, .003427, .001175, .000406, .000139, .000046, .000014},
     {.096254, .014542, .005895, .002356, .000827, .000290, .000091, .000034}},
}};

/// Truncates x toward zero to `digits` significant digits.
double truncate_significant(double x, int digits);

/// True when `computed`, truncated to `digits` significant digits, equals
/// `published`.
bool matches_truncated(double computed, double published, int digits = 3);

/// Scientific notation with `digits` significant digits, e.g. "2.14e-06".
std::string format_significant(double x, int digits);

}  // namespace hoplr::reference
