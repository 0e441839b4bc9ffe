#include "codedmm/sim.hpp"

#include <algorithm>
#include <cmath>

#include "codedmm/errors.hpp"

namespace codedmm {

void TimeModel::validate() const {
    switch (kind) {
        case Kind::deterministic:
            if (seconds_per_op <= 0.0) throw ValidationError("seconds_per_op must be positive");
            break;
        case Kind::shifted_exponential:
            if (shift < 0.0) throw ValidationError("shift must be non-negative");
            if (rate <= 0.0) throw ValidationError("rate must be positive");
            break;
    }
}

void SimConfig::validate() const {
    if (n_workers < 1) throw ValidationError("simulation needs at least one worker");
    if (straggler_prob < 0.0 || straggler_prob > 1.0) {
        throw ValidationError("straggler probability must be in [0, 1]");
    }
    if (straggler_slowdown < 1.0) throw ValidationError("straggler slowdown must be >= 1");
    if (trials < 1) throw ValidationError("need at least one trial");
    time_model.validate();
}

namespace {

/// splitmix64: tiny, fast, and bit-exact everywhere, which the trace and CSV
/// determinism guarantees rely on.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

std::uint64_t mix_seed(std::uint64_t seed, std::int64_t trial_index) {
    SplitMix64 mixer(seed ^ (0xA5A5A5A55A5A5A5Aull + static_cast<std::uint64_t>(trial_index)));
    mixer.next();
    return mixer.next();
}

struct TrialDraws {
    std::vector<bool> straggler;
    SplitMix64 stream;
};

TrialDraws begin_trial(const SimConfig& cfg, std::int64_t trial_index) {
    TrialDraws draws{std::vector<bool>(static_cast<std::size_t>(cfg.n_workers)),
                     SplitMix64(mix_seed(cfg.seed, trial_index))};
    for (std::int64_t n = 0; n < cfg.n_workers; ++n) {
        draws.straggler[static_cast<std::size_t>(n)] = draws.stream.next_u01() < cfg.straggler_prob;
    }
    return draws;
}

/// Per-job time; draws (if any) must happen in a fixed order, so callers
/// iterate workers then layers.
double job_time(std::int64_t ops, bool straggler, const SimConfig& cfg, SplitMix64& stream) {
    double per_op;
    switch (cfg.time_model.kind) {
        case TimeModel::Kind::deterministic:
            per_op = cfg.time_model.seconds_per_op;
            break;
        case TimeModel::Kind::shifted_exponential: {
            const double u = stream.next_u01();
            per_op = cfg.time_model.shift - std::log(1.0 - u) / cfg.time_model.rate;
            break;
        }
        default:
            throw ValidationError("unknown time model");
    }
    const double slowdown = straggler ? cfg.straggler_slowdown : 1.0;
    return static_cast<double>(ops) * per_op * slowdown;
}

double kth_smallest(std::vector<double> values, std::int64_t k) {
    auto mid = values.begin() + static_cast<std::ptrdiff_t>(k - 1);
    std::nth_element(values.begin(), mid, values.end());
    return *mid;
}

}  // namespace

std::int64_t job_cost(const LayerSpec& layer) {
    const auto& tb = layer.task_block;
    return (tb.x_set.size() / layer.cut.mx) * (tb.z_set.size() / layer.cut.mz) *
           (tb.y_set.size() / layer.cut.my);
}

SimTrace simulate_trial(const HierarchicalPlan& plan, const SimConfig& cfg,
                        std::int64_t trial_index, FinishRule rule) {
    cfg.validate();
    plan.validate();
    if (plan.n_workers != cfg.n_workers) {
        throw ValidationError("plan has " + std::to_string(plan.n_workers) +
                              " workers, simulation config has " + std::to_string(cfg.n_workers));
    }

    const std::int64_t n_layers = plan.n_layers();
    std::vector<std::int64_t> costs;
    costs.reserve(static_cast<std::size_t>(n_layers));
    for (const auto& layer : plan.layers) costs.push_back(job_cost(layer));

    auto draws = begin_trial(cfg, trial_index);

    // completion[n][l]: worker n+1 finishes layer l+1 (sequential prefix sums)
    std::vector<std::vector<double>> completion(
        static_cast<std::size_t>(cfg.n_workers),
        std::vector<double>(static_cast<std::size_t>(n_layers)));
    for (std::int64_t n = 0; n < cfg.n_workers; ++n) {
        double t = 0.0;
        for (std::int64_t l = 0; l < n_layers; ++l) {
            t += job_time(costs[static_cast<std::size_t>(l)],
                          draws.straggler[static_cast<std::size_t>(n)], cfg, draws.stream);
            completion[static_cast<std::size_t>(n)][static_cast<std::size_t>(l)] = t;
        }
    }

    SimTrace trace;
    if (rule == FinishRule::per_layer) {
        trace.per_layer_done_time.resize(static_cast<std::size_t>(n_layers));
        for (std::int64_t l = 0; l < n_layers; ++l) {
            std::vector<double> column(static_cast<std::size_t>(cfg.n_workers));
            for (std::int64_t n = 0; n < cfg.n_workers; ++n) {
                column[static_cast<std::size_t>(n)] =
                    completion[static_cast<std::size_t>(n)][static_cast<std::size_t>(l)];
            }
            trace.per_layer_done_time[static_cast<std::size_t>(l)] =
                kth_smallest(std::move(column), plan.layers[static_cast<std::size_t>(l)].threshold);
        }
        trace.finishing_time = *std::max_element(trace.per_layer_done_time.begin(),
                                                 trace.per_layer_done_time.end());
    } else {
        const std::int64_t need = plan.total_info_dim();
        if (need > cfg.n_workers * n_layers) {
            throw ValidationError("sum-rate needs " + std::to_string(need) +
                                  " completions but only " +
                                  std::to_string(cfg.n_workers * n_layers) + " jobs exist");
        }
        std::vector<double> all;
        all.reserve(static_cast<std::size_t>(cfg.n_workers * n_layers));
        for (const auto& row : completion) all.insert(all.end(), row.begin(), row.end());
        trace.finishing_time = kth_smallest(std::move(all), need);
        trace.per_layer_done_time = {trace.finishing_time};
    }

    for (std::int64_t n = 0; n < cfg.n_workers; ++n) {
        for (std::int64_t l = 0; l < n_layers; ++l) {
            const double t = completion[static_cast<std::size_t>(n)][static_cast<std::size_t>(l)];
            if (t <= trace.finishing_time) trace.events.push_back(SimEvent{t, n + 1, l + 1});
        }
    }
    std::sort(trace.events.begin(), trace.events.end(), [](const SimEvent& a, const SimEvent& b) {
        return std::tie(a.time, a.worker_id, a.layer_id) < std::tie(b.time, b.worker_id, b.layer_id);
    });
    return trace;
}

SimTrace simulate_uncoded(const Cuboid& c, const SimConfig& cfg, std::int64_t trial_index) {
    cfg.validate();
    c.validate();
    if (c.nx % cfg.n_workers != 0) throw DivisibilityError('x', c.nx, cfg.n_workers);
    const std::int64_t ops = c.volume() / cfg.n_workers;

    auto draws = begin_trial(cfg, trial_index);
    SimTrace trace;
    trace.events.reserve(static_cast<std::size_t>(cfg.n_workers));
    for (std::int64_t n = 0; n < cfg.n_workers; ++n) {
        const double t =
            job_time(ops, draws.straggler[static_cast<std::size_t>(n)], cfg, draws.stream);
        trace.events.push_back(SimEvent{t, n + 1, 1});
        trace.finishing_time = std::max(trace.finishing_time, t);
    }
    std::sort(trace.events.begin(), trace.events.end(), [](const SimEvent& a, const SimEvent& b) {
        return std::tie(a.time, a.worker_id) < std::tie(b.time, b.worker_id);
    });
    trace.per_layer_done_time = {trace.finishing_time};
    return trace;
}

std::vector<double> worker_single_job_times(std::int64_t ops, const SimConfig& cfg,
                                            std::int64_t trial_index) {
    cfg.validate();
    if (ops < 1) throw ValidationError("job size must be positive");
    auto draws = begin_trial(cfg, trial_index);
    std::vector<double> times(static_cast<std::size_t>(cfg.n_workers));
    for (std::int64_t n = 0; n < cfg.n_workers; ++n) {
        times[static_cast<std::size_t>(n)] =
            job_time(ops, draws.straggler[static_cast<std::size_t>(n)], cfg, draws.stream);
    }
    return times;
}

Summary average_finishing_time(const std::function<double(std::int64_t)>& finishing_time_of_trial,
                               std::int64_t trials) {
    if (trials < 1) throw ValidationError("need at least one trial");
    std::vector<double> times(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(static)
    for (std::int64_t t = 0; t < trials; ++t) {
        times[static_cast<std::size_t>(t)] = finishing_time_of_trial(t + 1);
    }
    double sum = 0.0;
    for (double v : times) sum += v;
    const double mean = sum / static_cast<double>(trials);
    double sq = 0.0;
    for (double v : times) sq += (v - mean) * (v - mean);
    const double stderr_of_mean =
        trials > 1 ? std::sqrt(sq / static_cast<double>(trials - 1)) /
                         std::sqrt(static_cast<double>(trials))
                   : 0.0;
    return Summary{mean, stderr_of_mean, trials};
}

Summary average_finishing_time(const HierarchicalPlan& plan, const SimConfig& cfg,
                               FinishRule rule) {
    return average_finishing_time(
        [&](std::int64_t trial) { return simulate_trial(plan, cfg, trial, rule).finishing_time; },
        cfg.trials);
}

Summary average_finishing_time_uncoded(const Cuboid& c, const SimConfig& cfg) {
    return average_finishing_time(
        [&](std::int64_t trial) { return simulate_uncoded(c, cfg, trial).finishing_time; },
        cfg.trials);
}

}  // namespace codedmm
