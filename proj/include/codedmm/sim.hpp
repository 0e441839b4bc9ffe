#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "codedmm/hierarchical.hpp"

namespace codedmm {

/// Per-job timing. deterministic: time = ops * seconds_per_op.
/// shifted_exponential: time = ops * (shift + X) with X ~ Exp(rate), a fresh
/// draw per job (per-op floor plus a proportional exponential tail).
struct TimeModel {
    enum class Kind { deterministic, shifted_exponential };
    Kind kind = Kind::deterministic;
    double seconds_per_op = 1.0;
    double shift = 1.0;
    double rate = 1.0;

    void validate() const;

    bool operator==(const TimeModel&) const = default;
};

struct SimConfig {
    std::int64_t n_workers = 1;
    double straggler_prob = 0.0;
    double straggler_slowdown = 2.0;  // time multiplier for stragglers, every job
    TimeModel time_model;
    std::uint64_t seed = 1;
    std::int64_t trials = 1;

    void validate() const;

    bool operator==(const SimConfig&) const = default;
};

/// One job completion at the master.
struct SimEvent {
    double time = 0.0;
    std::int64_t worker_id = 1;
    std::int64_t layer_id = 1;

    bool operator==(const SimEvent&) const = default;
};

/// Timestamped completions of one trial, truncated at finishing_time.
struct SimTrace {
    std::vector<SimEvent> events;
    double finishing_time = 0.0;
    std::vector<double> per_layer_done_time;

    bool operator==(const SimTrace&) const = default;
};

/// Basic operations in one encoded job of this layer (one information
/// block's volume).
std::int64_t job_cost(const LayerSpec& layer);

/// When is the master done: per_layer waits for threshold-many results in
/// every layer (hierarchical decode); total_count waits for total_info_dim()
/// completions of any kind (sum-rate decode).
enum class FinishRule { per_layer, total_count };

/// One deterministic trial: straggler flags and job times are drawn from a
/// stream derived from (cfg.seed, trial_index), worker n finishes its layers
/// sequentially, and finishing time follows the rule. Identical inputs give
/// bit-identical traces regardless of host parallelism.
SimTrace simulate_trial(const HierarchicalPlan& plan, const SimConfig& cfg,
                        std::int64_t trial_index, FinishRule rule = FinishRule::per_layer);

/// The no-redundancy baseline: the x axis is split evenly, every worker
/// computes volume/N once, and the run ends when the slowest worker does.
SimTrace simulate_uncoded(const Cuboid& c, const SimConfig& cfg, std::int64_t trial_index);

/// Completion time of a single job of `ops` basic operations per worker,
/// under this trial's straggler flags and time model. Used to order
/// one-job-per-worker (sum-rate encoded) result arrivals.
std::vector<double> worker_single_job_times(std::int64_t ops, const SimConfig& cfg,
                                            std::int64_t trial_index);

struct Summary {
    double mean = 0.0;
    double stderr_of_mean = 0.0;
    std::int64_t trials = 0;
};

/// Mean and standard error of finishing time over cfg.trials independent
/// trials (trial_index 1..trials). Trials may run concurrently; aggregation
/// order is fixed.
Summary average_finishing_time(const std::function<double(std::int64_t)>& finishing_time_of_trial,
                               std::int64_t trials);
Summary average_finishing_time(const HierarchicalPlan& plan, const SimConfig& cfg,
                               FinishRule rule = FinishRule::per_layer);
Summary average_finishing_time_uncoded(const Cuboid& c, const SimConfig& cfg);

}  // namespace codedmm
