#pragma once

// Reference puncturing schedulers. All of them keep the DRRA RB and power
// allocation and only decide where a given number of mini-slots is punctured.

#include "slicesim/scenario.hpp"
#include "slicesim/types.hpp"

#include <array>
#include <string>
#include <vector>

namespace slicesim {

/// Mini-slots needed to carry zeta L bits at the mean per-mini-slot URLLC
/// capacity of the allocated RBs, capped at B * M.
int demand_from_load(int arrivals, const ScenarioConfig& cfg, const SlotState& slot, const Allocation& alloc);

/// Each mini-slot goes to the allocated RB with the smallest eMBB rate loss.
IntMatrix sum_rate_scheduler(const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg, int demand);

/// Each mini-slot goes where it lowers sum_k log(max(r_k, 1 bit)) the least.
IntMatrix sum_log_scheduler(const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg, int demand);

/// Spectral efficiencies (bit/s/Hz) of the 15 CQI levels of the 4-bit CQI table.
inline constexpr std::array<double, 15> kCqiEfficiency = {0.1523, 0.2344, 0.3770, 0.6016, 0.8770,
                                                          1.1758, 1.4766, 1.9141, 2.4063, 2.7305,
                                                          3.3223, 3.9023, 4.5234, 5.1152, 5.5547};

/// Highest level (1..15) whose efficiency does not exceed `spectral_efficiency`, or 0.
int mcs_index(double spectral_efficiency);

/// MCS index of every user from the mean spectral efficiency over its RBs (0 if none).
std::vector<int> user_mcs(const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg);

/// Fills users in ascending MCS order (ties to the lower index), RBs in index order.
IntMatrix lmcs_scheduler(const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg, int demand);

/// Round robin over the allocated RBs, one mini-slot per RB per pass.
/// Stand-in for a matching-game scheduler; it only spreads the load evenly.
IntMatrix equal_split_scheduler(const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg, int demand);

enum class Scheduler { drra, pgacl, sum_rate, sum_log, lmcs, equal };

/// Parses "drra", "pgacl", "sum-rate", "sum-log", "lmcs" or "equal".
Scheduler parse_scheduler(const std::string& name);
std::string scheduler_name(Scheduler s);

/// Dispatches to the baseline `s` (not drra or pgacl).
IntMatrix run_baseline(Scheduler s, const Allocation& alloc, const SlotState& slot, const ScenarioConfig& cfg,
                       int demand);

}  // namespace slicesim
