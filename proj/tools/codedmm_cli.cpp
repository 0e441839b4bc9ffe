// codedmm command line: plan inspection, encode-decode roundtrip checks, and
// finishing-time sweeps that write CSV summaries.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "codedmm/codes.hpp"
#include "codedmm/errors.hpp"
#include "codedmm/hierarchical.hpp"
#include "codedmm/matrix.hpp"
#include "codedmm/padding.hpp"
#include "codedmm/plan_io.hpp"
#include "codedmm/sim.hpp"

namespace {

using namespace codedmm;

bool log_debug_enabled() {
    const char* v = std::getenv("CODEDMM_LOG");
    return v != nullptr && std::string(v) == "debug";
}

void log_debug(const std::string& msg) {
    if (log_debug_enabled()) std::cerr << "[codedmm] " << msg << "\n";
}

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Deterministic [-1, 1) matrix fill for roundtrip inputs.
struct Rng {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-52 - 1.0; }
};

Matrix random_matrix(std::int64_t rows, std::int64_t cols, Rng& rng) {
    std::vector<double> data(static_cast<std::size_t>(rows * cols));
    for (auto& v : data) v = rng.next_unit();
    return Matrix(rows, cols, std::move(data));
}

std::int64_t per_layer_info_dim(const AppConfig& cfg) {
    if (const auto* uni = std::get_if<UniformStrategy>(&cfg.strategy)) {
        return uni->cut.info_dim();
    }
    if (const auto* geo = std::get_if<GeometricStrategy>(&cfg.strategy)) {
        return geo->k_per_layer;
    }
    const auto& ex = std::get<ExplicitStrategy>(cfg.strategy);
    std::int64_t total = 0;
    for (const auto& c : ex.cuts) total += c.info_dim();
    const auto n = static_cast<std::int64_t>(ex.cuts.size());
    if (total % n != 0) {
        throw ValidationError("explicit layering has no integer per-layer info dimension");
    }
    return total / n;
}

// Pad the cuboid until the strategy's divisibility constraints hold.
AppConfig fit_cuboid(AppConfig cfg) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        try {
            plan_from_config(cfg);
            return cfg;
        } catch (const DivisibilityError& e) {
            auto round_up = [](std::int64_t n, std::int64_t d) { return (n + d - 1) / d * d; };
            std::int64_t* edge = nullptr;
            if (e.axis() == 'x') edge = &cfg.cuboid.nx;
            else if (e.axis() == 'z') edge = &cfg.cuboid.nz;
            else edge = &cfg.cuboid.ny;
            // Walk the edge upward until the failing divisor fits; the plan
            // is re-validated each attempt, so compound constraints converge.
            const std::int64_t d = e.required_divisor();
            *edge = round_up(*edge + (*edge % d == 0 ? 1 : 0), d);
        }
    }
    throw ValidationError("could not pad the cuboid to satisfy the strategy");
}

int cmd_plan(const std::string& config_path, const std::string& out_path) {
    const auto cfg = load_config(config_path);
    const auto plan = plan_from_config(cfg);
    const auto text = plan_to_json_text(plan);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw ValidationError("cannot write \"" + out_path + "\"");
        out << text;
    }
    return 0;
}

int cmd_roundtrip(const std::string& config_path, std::uint64_t seed, bool seed_given,
                  std::int64_t max_results, bool pad) {
    auto cfg = load_config(config_path);
    if (seed_given) cfg.sim.seed = seed;

    const Cuboid orig = cfg.cuboid;
    if (pad) cfg = fit_cuboid(cfg);
    const auto plan = plan_from_config(cfg);
    log_debug("plan: L=" + std::to_string(plan.n_layers()) +
              " total_info_dim=" + std::to_string(plan.total_info_dim()));

    Rng rng{cfg.sim.seed ^ 0xC0DEDC0DEDull};
    const Matrix a = random_matrix(orig.nx, orig.nz, rng);
    const Matrix b = random_matrix(orig.nz, orig.ny, rng);
    const Matrix direct = multiply(a, b);

    Matrix a_in = a, b_in = b;
    if (pad) {
        auto padded = pad_to_divisible(a, b, cfg.cuboid.nx, cfg.cuboid.nz, cfg.cuboid.ny);
        a_in = std::move(padded.a);
        b_in = std::move(padded.b);
    }

    const auto queues = encode_plan(plan, a_in, b_in);
    Matrix assembled;

    if (plan.scheme == Scheme::sum_rate_polynomial) {
        const auto& job0 = queues.front().jobs.front();
        const std::int64_t ops =
            basic_op_count(job0.a_tilde.rows(), job0.a_tilde.cols(), job0.b_tilde.cols());
        const auto times = worker_single_job_times(ops, cfg.sim, 1);
        std::vector<std::int64_t> order(times.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::int64_t l, std::int64_t r) {
            return std::tie(times[static_cast<std::size_t>(l)], l) <
                   std::tie(times[static_cast<std::size_t>(r)], r);
        });
        std::int64_t take = plan.total_info_dim();
        if (max_results >= 0) take = std::min(take, max_results);
        std::vector<CodedResult> results;
        for (std::int64_t i = 0; i < take; ++i) {
            const auto& q = queues[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
            const auto& job = q.jobs.front();
            results.push_back(
                CodedResult{q.worker_id, job.eval_point, multiply(job.a_tilde, job.b_tilde)});
        }
        assembled = decode_sum_rate(plan, results);
    } else {
        const auto trace = simulate_trial(plan, cfg.sim, 1);
        std::vector<std::vector<CodedResult>> per_layer(
            static_cast<std::size_t>(plan.n_layers()));
        for (const auto& ev : trace.events) {
            auto& bucket = per_layer[static_cast<std::size_t>(ev.layer_id - 1)];
            std::int64_t want = plan.layers[static_cast<std::size_t>(ev.layer_id - 1)].threshold;
            if (max_results >= 0) want = std::min(want, max_results);
            if (static_cast<std::int64_t>(bucket.size()) >= want) continue;
            const auto& job = queues[static_cast<std::size_t>(ev.worker_id - 1)]
                                  .jobs[static_cast<std::size_t>(ev.layer_id - 1)];
            bucket.push_back(
                CodedResult{ev.worker_id, job.eval_point, multiply(job.a_tilde, job.b_tilde)});
        }
        std::vector<std::pair<TaskBlock, Matrix>> products;
        for (std::size_t l = 0; l < per_layer.size(); ++l) {
            products.emplace_back(plan.layers[l].task_block,
                                  decode_layer(per_layer[l], plan.layers[l]));
        }
        assembled = assemble(products, plan.cuboid);
    }

    if (pad) assembled = crop_product(assembled, orig.nx, orig.ny);
    const double err = relative_frobenius_error(assembled, direct);
    const bool ok = err < 1e-6;
    std::cout << "roundtrip scheme=" << scheme_name(plan.scheme) << " L=" << plan.n_layers()
              << " seed=" << cfg.sim.seed << " relative_error=" << fmt_g(err) << " "
              << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 2;
}

int cmd_sweep(const std::string& config_path, const std::string& layers_arg,
              const std::string& out_path, const std::string& trace_path) {
    const auto cfg = load_config(config_path);

    std::vector<std::int64_t> layer_counts;
    std::stringstream ss(layers_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) layer_counts.push_back(std::stoll(tok));
    }
    if (layer_counts.empty()) throw ValidationError("no layer counts given");

    std::ostringstream csv, trace_csv;
    csv << "scheme,L,mean,stderr,trials\n";
    trace_csv << "trial,scheme,L,time_seconds\n";
    const bool want_trace = !trace_path.empty();

    const std::int64_t k_fixed = per_layer_info_dim(cfg);

    for (const auto L : layer_counts) {
        try {
            const auto hier_plan = plan_from_config(cfg, L);
            const auto flat_plan = build_plan(cfg.cuboid, cfg.n_workers,
                                              UniformStrategy{1, CutSpec{k_fixed, 1, 1}},
                                              Scheme::polynomial);
            if (log_debug_enabled()) {
                std::string profile;
                for (const auto& l : hier_plan.layers) {
                    profile += (profile.empty() ? "" : ",") + std::to_string(l.info_dim);
                }
                log_debug("L=" + std::to_string(L) + " profile=[" + profile + "]");
            }

            const auto uncoded = average_finishing_time_uncoded(cfg.cuboid, cfg.sim);
            const auto flat = average_finishing_time(flat_plan, cfg.sim);
            const auto hier = average_finishing_time(hier_plan, cfg.sim);
            const auto sumrate =
                average_finishing_time(hier_plan, cfg.sim, FinishRule::total_count);

            const auto emit = [&](const char* name, const Summary& s) {
                csv << name << "," << L << "," << fmt_g(s.mean) << "," << fmt_g(s.stderr_of_mean)
                    << "," << s.trials << "\n";
            };
            emit("uncoded", uncoded);
            emit("polynomial", flat);
            emit("hierarchical", hier);
            emit("sum_rate", sumrate);

            if (want_trace) {
                for (std::int64_t t = 1; t <= cfg.sim.trials; ++t) {
                    const auto emit_trace = [&](const char* name, double time) {
                        trace_csv << t << "," << name << "," << L << "," << fmt_g(time) << "\n";
                    };
                    emit_trace("uncoded",
                               simulate_uncoded(cfg.cuboid, cfg.sim, t).finishing_time);
                    emit_trace("polynomial", simulate_trial(flat_plan, cfg.sim, t).finishing_time);
                    emit_trace("hierarchical",
                               simulate_trial(hier_plan, cfg.sim, t).finishing_time);
                    emit_trace("sum_rate",
                               simulate_trial(hier_plan, cfg.sim, t, FinishRule::total_count)
                                   .finishing_time);
                }
            }
        } catch (const Error& e) {
            std::cerr << "warning: skipping L=" << L << ": " << e.what() << "\n";
            csv << "# skipped L=" << L << ": " << e.what() << "\n";
        }
    }

    if (out_path.empty() || out_path == "-") {
        std::cout << csv.str();
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw ValidationError("cannot write \"" + out_path + "\"");
        out << csv.str();
    }
    if (want_trace) {
        std::ofstream out(trace_path, std::ios::binary);
        if (!out) throw ValidationError("cannot write \"" + trace_path + "\"");
        out << trace_csv.str();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coded distributed matrix multiplication: plans, roundtrips, sweeps"};
    app.require_subcommand(1);

    std::string config_path, out_path, trace_path, layers_arg = "1,2,4,8,12";
    std::uint64_t seed = 0;
    std::int64_t max_results = -1;
    bool pad = false;

    auto* plan_cmd = app.add_subcommand("plan", "print the layered plan a config describes");
    plan_cmd->add_option("config", config_path, "config JSON path")->required();
    plan_cmd->add_option("--out", out_path, "write the plan document here instead of stdout");

    auto* rt_cmd = app.add_subcommand(
        "roundtrip", "encode random inputs, decode from simulated arrivals, compare");
    rt_cmd->add_option("config", config_path, "config JSON path")->required();
    auto* seed_opt = rt_cmd->add_option("--seed", seed, "override the config seed");
    rt_cmd->add_option("--max-results", max_results,
                       "cap results fed to each decode (exercises failure paths)");
    rt_cmd->add_flag("--pad", pad, "zero-pad the operands when dimensions do not divide");

    auto* sweep_cmd =
        app.add_subcommand("sweep", "finishing-time summary CSV across layer counts");
    sweep_cmd->add_option("config", config_path, "config JSON path")->required();
    sweep_cmd->add_option("--layers", layers_arg, "comma-separated layer counts");
    sweep_cmd->add_option("--out", out_path, "summary CSV path (default stdout)");
    sweep_cmd->add_option("--trace", trace_path, "also write per-trial times here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (plan_cmd->parsed()) return cmd_plan(config_path, out_path);
        if (rt_cmd->parsed()) {
            return cmd_roundtrip(config_path, seed, seed_opt->count() > 0, max_results, pad);
        }
        return cmd_sweep(config_path, layers_arg, out_path, trace_path);
    } catch (const InsufficientResultsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConditioningError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
