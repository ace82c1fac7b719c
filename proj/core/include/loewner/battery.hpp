#pragma once

// The reproduction battery behind `loewner verify-paper`: nine groups of
// checks, each deterministic for a given seed. Verdicts are designed to be
// seed-independent; margins and witnesses are not.

#include <cstdint>
#include <string>
#include <vector>

#include "loewner/serialize.hpp"

namespace loewner {

struct BatteryConfig {
  std::uint64_t seed = 1;
  /// Violation-threshold floor handed to every check. Values outside
  /// (0, kMaxBatteryFloor] are rejected before anything runs.
  double violation_floor = 1e-7;
  unsigned threads = 1;
};

inline constexpr double kMaxBatteryFloor = 1e-6;

struct BatteryItem {
  int group = 0;
  std::string name;
  bool ok = false;
  std::string verdict;  // seed-independent outcome, e.g. "pass" / "violation"
  std::string detail;   // seed-dependent numbers, 6 significant digits
};

struct BatteryReport {
  std::uint64_t seed = 0;
  std::vector<BatteryItem> items;

  bool ok() const;
  bool group_ok(int group) const;
  /// Concatenated names and verdicts; equal across seeds when verdicts agree.
  std::string verdict_signature() const;
};

/// Throws ConfigError ("configuration rejected: ...") for unusable settings.
void validate(const BatteryConfig& cfg);

/// Items of one group (1..9). Validates the config first.
std::vector<BatteryItem> run_battery_group(int group, const BatteryConfig& cfg);

BatteryReport run_battery(const BatteryConfig& cfg);

Json battery_to_json(const BatteryReport& r);
std::string battery_to_text(const BatteryReport& r);

/// "%.6g"
std::string format6(double v);

}  // namespace loewner
