#pragma once

#include <string>
#include <vector>

#include "qse/config.hpp"

namespace qse {

struct CheckItem {
    std::string name;
    bool pass = false;
    double value = 0.0;      // measured residual or ratio
    double threshold = 0.0;  // pinned acceptance bound
    std::string detail;
};

struct BatteryOptions {
    // stencil substep as a fraction of the sampled span; overridden by a
    // config-supplied grid substep
    double substep_fraction = 1e-5;
    int n_points = 201;
    double gauge_alpha = 0.3;  // linear-shift rate exercised by the gauge checks
    Tolerances tol;
};

BatteryOptions battery_options_from_config(const RunConfig& cfg);

// The full invariant battery on the standard model set: exchange(1,1,0.1),
// random(2,2,1.0,seed 42), random(2,3,5.0,seed 7). Returns one item per
// named check.
std::vector<CheckItem> run_check_battery(const BatteryOptions& opt = {});

bool all_pass(const std::vector<CheckItem>& items);

std::string battery_report_json(const std::vector<CheckItem>& items,
                                const std::string& config_echo);

}  // namespace qse
