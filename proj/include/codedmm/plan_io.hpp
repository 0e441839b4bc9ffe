#pragma once

#include <iosfwd>
#include <string>

#include "codedmm/hierarchical.hpp"
#include "codedmm/sim.hpp"

namespace codedmm {

/// Everything one config file describes: the problem, the code, the layer
/// strategy, and the simulation settings.
struct AppConfig {
    Cuboid cuboid;
    std::int64_t n_workers = 1;
    Scheme scheme = Scheme::polynomial;
    LayerStrategy strategy;
    SimConfig sim;
};

/// Parse a config document. Throws ValidationError with field context.
AppConfig config_from_json_text(const std::string& text);
AppConfig load_config(const std::string& path);

/// Build the plan a config describes; n_layers_override re-instantiates the
/// strategy with a different layer count (used by sweeps).
HierarchicalPlan plan_from_config(const AppConfig& cfg,
                                  std::int64_t n_layers_override = 0);

/// Plan document: cuboid, workers, per-layer task block / cut / category /
/// dims / thresholds / evaluation points / information blocks, plus the
/// plan-level (K, R) for sum-rate plans. Parsing the document reproduces the
/// plan exactly.
std::string plan_to_json_text(const HierarchicalPlan& plan);
HierarchicalPlan plan_from_json_text(const std::string& text);

}  // namespace codedmm
