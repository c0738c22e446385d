#pragma once

#include <string>
#include <vector>

#include "diskflow/config.hpp"
#include "diskflow/fields.hpp"

namespace diskflow {

struct PresetInfo {
    std::string name;
    std::string description;
};

const std::vector<PresetInfo>& preset_list();
bool preset_exists(const std::string& name);

/// Default configuration of a preset (grid, time window, experiment kind).
ExperimentConfig preset_config(const std::string& name);

/// Initial decomposition for the preset on the given grid.
ModeDecomposition preset_initial_data(const std::string& name, GridPtr grid, const ExperimentConfig& cfg);

/// Compactly supported bump (1 - s^2)^4 with s = (r - 1) / width, zero for s >= 1.
double compact_bump(double r, double width);

}  // namespace diskflow
