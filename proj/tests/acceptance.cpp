// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Needs the CLI binary and the shipped configs for the
// determinism check:
//   codedmm_acceptance --cli <path> --configs <dir> --workdir <dir>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "codedmm/codes.hpp"
#include "codedmm/errors.hpp"
#include "codedmm/hierarchical.hpp"
#include "codedmm/plan_io.hpp"
#include "codedmm/sim.hpp"
#include "test_support.hpp"

using namespace codedmm;
using testsupport::TestRng;

namespace {

std::string g_cli, g_configs, g_workdir;

struct Outcome {
    bool ok = true;
    std::string detail;
};

double elapsed_seconds(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// ---- shared helpers ----

std::vector<CodedResult> run_workers(const std::vector<EncodedJob>& jobs) {
    std::vector<CodedResult> results;
    results.reserve(jobs.size());
    for (const auto& job : jobs) {
        results.push_back(CodedResult{job.worker_id, job.eval_point,
                                      testsupport::oracle_multiply(job.a_tilde, job.b_tilde)});
    }
    return results;
}

std::vector<CodedResult> pick(const std::vector<CodedResult>& all,
                              const std::vector<std::int64_t>& idx) {
    std::vector<CodedResult> out;
    for (auto i : idx) out.push_back(all[static_cast<std::size_t>(i)]);
    return out;
}

struct PolyInstance {
    CodeSpec spec;
    std::vector<Matrix> a_blocks, b_blocks;
    std::vector<CodedResult> results;
};

PolyInstance make_poly_instance(std::int64_t m, std::int64_t n_workers, TestRng& rng) {
    PolyInstance inst;
    inst.spec.scheme = Scheme::polynomial;
    inst.spec.cut = CutSpec{m, 1, m};
    inst.spec.n_workers = n_workers;
    inst.spec.eval_points = chebyshev_points(n_workers);
    inst.spec.validate();
    for (std::int64_t i = 0; i < m; ++i) {
        inst.a_blocks.push_back(testsupport::random_matrix(2, 3, rng));
        inst.b_blocks.push_back(testsupport::random_matrix(3, 2, rng));
    }
    inst.results = run_workers(polynomial_encode(inst.a_blocks, inst.b_blocks, inst.spec));
    return inst;
}

PolyInstance make_matdot_instance(std::int64_t mz, std::int64_t n_workers, TestRng& rng) {
    PolyInstance inst;
    inst.spec.scheme = Scheme::matdot;
    inst.spec.cut = CutSpec{1, mz, 1};
    inst.spec.n_workers = n_workers;
    inst.spec.eval_points = chebyshev_points(n_workers);
    inst.spec.validate();
    for (std::int64_t i = 0; i < mz; ++i) {
        inst.a_blocks.push_back(testsupport::random_matrix(3, 2, rng));
        inst.b_blocks.push_back(testsupport::random_matrix(2, 3, rng));
    }
    inst.results = run_workers(matdot_encode(inst.a_blocks, inst.b_blocks, inst.spec));
    return inst;
}

struct SumRateInstance {
    CodeSpec spec;
    std::vector<LayerBlocks> layers;
    std::vector<Matrix> want;  // per-block oracle products, global order
    std::vector<CodedResult> results;
};

SumRateInstance make_sum_rate_instance(std::int64_t n_layers, std::int64_t n_workers,
                                       TestRng& rng) {
    SumRateInstance inst;
    inst.spec.scheme = Scheme::sum_rate_polynomial;
    inst.spec.n_workers = n_workers;
    inst.spec.eval_points = chebyshev_points(n_workers);
    while (true) {
        inst.spec.sum_rate_layers.clear();
        std::int64_t k_total = 0;
        for (std::int64_t l = 0; l < n_layers; ++l) {
            const auto mx = rng.next_int(1, 2);
            const auto my = rng.next_int(1, 2);
            inst.spec.sum_rate_layers.push_back(SumRateLayerShape{
                mx, my, rng.next_int(1, 3), rng.next_int(1, 3), rng.next_int(1, 3)});
            k_total += mx * my;
        }
        if (k_total <= 8) break;
    }
    inst.spec.validate();
    for (const auto& shape : inst.spec.sum_rate_layers) {
        LayerBlocks lb;
        lb.cut = CutSpec{shape.mx, 1, shape.my};
        for (std::int64_t i = 0; i < shape.mx; ++i) {
            lb.a_blocks.push_back(testsupport::random_matrix(shape.a_rows, shape.z_cols, rng));
        }
        for (std::int64_t i = 0; i < shape.my; ++i) {
            lb.b_blocks.push_back(testsupport::random_matrix(shape.z_cols, shape.b_cols, rng));
        }
        for (std::int64_t bx = 0; bx < shape.mx; ++bx) {
            for (std::int64_t by = 0; by < shape.my; ++by) {
                inst.want.push_back(testsupport::oracle_multiply(
                    lb.a_blocks[static_cast<std::size_t>(bx)],
                    lb.b_blocks[static_cast<std::size_t>(by)]));
            }
        }
        inst.layers.push_back(std::move(lb));
    }
    inst.results = run_workers(
        sum_rate_encode(inst.layers, inst.spec, recovery_threshold(inst.spec)));
    return inst;
}

// ---- the simulation setup shared by criteria 4 and 5 (mirrors configs/sweep.json) ----

constexpr std::int64_t kSimWorkers = 16;
constexpr double kSimStragglerProb = 0.5;
constexpr double kSimSlowdown = 2.0;
constexpr std::int64_t kSimKPerLayer = 11;
constexpr double kSimRatio = 0.75;
constexpr double kSimShift = 1e-8;
constexpr double kSimRate = 3e8;
constexpr std::uint64_t kSimSeed = 20240901;
constexpr std::int64_t kSimTrials = 2000;
const Cuboid kSimCuboid{2640, 100, 300};

SimConfig sim_config() {
    SimConfig cfg;
    cfg.n_workers = kSimWorkers;
    cfg.straggler_prob = kSimStragglerProb;
    cfg.straggler_slowdown = kSimSlowdown;
    cfg.time_model.kind = TimeModel::Kind::shifted_exponential;
    cfg.time_model.shift = kSimShift;
    cfg.time_model.rate = kSimRate;
    cfg.seed = kSimSeed;
    cfg.trials = kSimTrials;
    return cfg;
}

HierarchicalPlan hier_plan(std::int64_t n_layers) {
    return build_plan(kSimCuboid, kSimWorkers,
                      GeometricStrategy{n_layers, kSimKPerLayer, kSimRatio}, Scheme::polynomial);
}

// ---- criteria ----

Outcome criterion1_roundtrip_oracle() {
    const auto start = std::chrono::steady_clock::now();
    TestRng rng(1001);
    std::int64_t decodes = 0;

    const auto check_poly = [&](const PolyInstance& inst) {
        const std::int64_t r = recovery_threshold(inst.spec);
        bool ok = true;
        testsupport::for_each_subset(inst.spec.n_workers, r,
                                     [&](const std::vector<std::int64_t>& idx) {
            const auto blocks = decode(pick(inst.results, idx), inst.spec);
            ++decodes;
            if (inst.spec.scheme == Scheme::matdot) {
                Matrix want(inst.a_blocks.front().rows(), inst.b_blocks.front().cols());
                for (std::size_t j = 0; j < inst.a_blocks.size(); ++j) {
                    want = add(want,
                               testsupport::oracle_multiply(inst.a_blocks[j], inst.b_blocks[j]));
                }
                ok = ok && relative_frobenius_error(blocks[0], want) < 1e-6;
            } else {
                std::size_t at = 0;
                for (const auto& a : inst.a_blocks) {
                    for (const auto& b : inst.b_blocks) {
                        ok = ok && relative_frobenius_error(
                                       blocks[at++], testsupport::oracle_multiply(a, b)) < 1e-6;
                    }
                }
            }
        });
        return ok;
    };

    for (int i = 0; i < 50; ++i) {
        if (!check_poly(make_poly_instance(2, 8, rng))) {
            return {false, "polynomial 2x2 decode mismatch at instance " + std::to_string(i)};
        }
        if (!check_poly(make_poly_instance(3, 10, rng))) {
            return {false, "polynomial 3x3 decode mismatch at instance " + std::to_string(i)};
        }
        if (!check_poly(make_matdot_instance(2, 6, rng))) {
            return {false, "matdot mz=2 decode mismatch at instance " + std::to_string(i)};
        }
        if (!check_poly(make_matdot_instance(3, 8, rng))) {
            return {false, "matdot mz=3 decode mismatch at instance " + std::to_string(i)};
        }
    }
    for (int i = 0; i < 100; ++i) {
        const auto inst = make_sum_rate_instance(2 + i % 3, 10, rng);
        const std::int64_t r = recovery_threshold(inst.spec);
        bool ok = true;
        testsupport::for_each_subset(10, r, [&](const std::vector<std::int64_t>& idx) {
            const auto blocks = decode(pick(inst.results, idx), inst.spec);
            ++decodes;
            for (std::size_t j = 0; j < blocks.size(); ++j) {
                ok = ok && relative_frobenius_error(blocks[j], inst.want[j]) < 1e-6;
            }
        });
        if (!ok) return {false, "sum-rate decode mismatch at instance " + std::to_string(i)};
    }

    const double secs = elapsed_seconds(start);
    if (secs >= 120.0) return {false, "took " + fmt(secs) + " s (budget 120 s)"};
    return {true, std::to_string(decodes) + " subset decodes, all within 1e-6, " + fmt(secs) +
                      " s"};
}

Outcome criterion2_threshold_sharpness() {
    TestRng rng(2002);

    // Decode from r-1 results must throw, and the best a forced degree-(r-2)
    // fit through r-1 points can do must miss the oracle block set: the fit
    // has no estimate for the top coefficient, so the worst per-block error
    // stays large on random inputs.
    const auto sharp = [&](const CodeSpec& spec, const std::vector<CodedResult>& results,
                           const std::vector<Matrix>& want_coeff_blocks) -> std::string {
        const std::int64_t r = recovery_threshold(spec);
        std::vector<CodedResult> short_results(results.begin(), results.begin() + r - 1);
        try {
            decode(short_results, spec);
            return "decode accepted " + std::to_string(r - 1) + " results";
        } catch (const InsufficientResultsError&) {
        }
        std::vector<double> pts;
        for (const auto& res : short_results) pts.push_back(res.eval_point);
        const auto& shape = short_results.front().product;
        std::vector<Matrix> fitted(static_cast<std::size_t>(r),
                                   Matrix(shape.rows(), shape.cols()));
        for (std::int64_t row = 0; row < shape.rows(); ++row) {
            for (std::int64_t col = 0; col < shape.cols(); ++col) {
                std::vector<double> vals;
                for (const auto& res : short_results) vals.push_back(res.product(row, col));
                const auto coeffs = testsupport::vandermonde_fit(pts, vals);
                for (std::int64_t d = 0; d < r - 1; ++d) {
                    fitted[static_cast<std::size_t>(d)](row, col) =
                        coeffs[static_cast<std::size_t>(d)];
                }
            }
        }
        double worst = 0.0;
        for (std::size_t d = 0; d < want_coeff_blocks.size(); ++d) {
            if (want_coeff_blocks[d].rows() == 0) continue;
            worst = std::max(worst, relative_frobenius_error(
                                        submatrix(fitted[d], IndexRange{1, want_coeff_blocks[d].rows()},
                                                  IndexRange{1, want_coeff_blocks[d].cols()}),
                                        want_coeff_blocks[d]));
        }
        if (worst <= 1e-2) return "a forced lower-degree fit still reproduced the oracle";
        return "";
    };

    for (int i = 0; i < 10; ++i) {
        for (std::int64_t m : {2, 3}) {
            const auto inst = make_poly_instance(m, 10, rng);
            // oracle products indexed by coefficient d = (m_x-1) + (m_y-1)*mx
            std::vector<Matrix> by_coeff(static_cast<std::size_t>(m * m));
            for (std::int64_t bx = 0; bx < m; ++bx) {
                for (std::int64_t by = 0; by < m; ++by) {
                    by_coeff[static_cast<std::size_t>(bx + by * m)] = testsupport::oracle_multiply(
                        inst.a_blocks[static_cast<std::size_t>(bx)],
                        inst.b_blocks[static_cast<std::size_t>(by)]);
                }
            }
            const auto msg = sharp(inst.spec, inst.results, by_coeff);
            if (!msg.empty()) return {false, "polynomial m=" + std::to_string(m) + ": " + msg};
        }
        for (std::int64_t mz : {2, 3}) {
            const auto inst = make_matdot_instance(mz, 8, rng);
            Matrix want(inst.a_blocks.front().rows(), inst.b_blocks.front().cols());
            for (std::size_t j = 0; j < inst.a_blocks.size(); ++j) {
                want = add(want, testsupport::oracle_multiply(inst.a_blocks[j], inst.b_blocks[j]));
            }
            std::vector<Matrix> by_coeff(static_cast<std::size_t>(2 * mz - 1));
            by_coeff[static_cast<std::size_t>(mz - 1)] = want;
            const auto msg = sharp(inst.spec, inst.results, by_coeff);
            if (!msg.empty()) return {false, "matdot mz=" + std::to_string(mz) + ": " + msg};
        }
        const auto sr = make_sum_rate_instance(2 + i % 3, 10, rng);
        std::vector<Matrix> by_coeff(static_cast<std::size_t>(recovery_threshold(sr.spec)));
        std::size_t at = 0;
        std::int64_t k_before = 0;
        for (const auto& shape : sr.spec.sum_rate_layers) {
            for (std::int64_t bx = 0; bx < shape.mx; ++bx) {
                for (std::int64_t by = 0; by < shape.my; ++by) {
                    by_coeff[static_cast<std::size_t>(k_before + bx + by * shape.mx)] =
                        sr.want[at++];
                }
            }
            k_before += shape.info_dim();
        }
        const auto msg = sharp(sr.spec, sr.results, by_coeff);
        if (!msg.empty()) return {false, "sum-rate: " + msg};
    }
    return {true, "R-1 results raise insufficient-results; forced fits miss by > 1e-2"};
}

Outcome criterion3_figure_configuration() {
    ExplicitStrategy ex;
    for (auto k : {8, 4, 3, 1}) ex.cuts.push_back(CutSpec{k, 1, 1});
    const auto plan = build_plan(Cuboid{32, 8, 6}, 16, ex, Scheme::polynomial);
    const std::int64_t want[] = {8, 4, 3, 1};
    for (std::size_t l = 0; l < 4; ++l) {
        if (plan.layers[l].info_dim != want[l] || plan.layers[l].threshold != want[l]) {
            return {false, "layer " + std::to_string(l + 1) + " reports (" +
                               std::to_string(plan.layers[l].info_dim) + "," +
                               std::to_string(plan.layers[l].threshold) + ")"};
        }
    }
    const auto sr_plan = build_plan(Cuboid{32, 8, 6}, 16, ex, Scheme::sum_rate_polynomial);
    const auto spec = sum_rate_code_spec(sr_plan);
    const auto k_total = recovery_threshold(spec);
    if (k_total != 16) return {false, "sum-rate counterpart reports K=" + std::to_string(k_total)};
    const auto doc = plan_to_json_text(sr_plan);
    if (doc.find("\"info_dim\": 16") == std::string::npos) {
        return {false, "plan document does not report the (16, 16) sum-rate code"};
    }
    return {true, "(k,r) = (8,8),(4,4),(3,3),(1,1); sum-rate (K,R) = (16,16)"};
}

Outcome criterion4_simulation_ordering() {
    const auto start = std::chrono::steady_clock::now();
    const auto cfg = sim_config();

    const auto flat_plan = build_plan(kSimCuboid, kSimWorkers,
                                      UniformStrategy{1, CutSpec{kSimKPerLayer, 1, 1}},
                                      Scheme::polynomial);
    const auto plan12 = hier_plan(12);

    const auto uncoded = average_finishing_time_uncoded(kSimCuboid, cfg);
    const auto flat = average_finishing_time(flat_plan, cfg);
    const auto hier = average_finishing_time(plan12, cfg);
    const auto sum = average_finishing_time(plan12, cfg, FinishRule::total_count);

    const auto gap_ok = [](const Summary& slow, const Summary& fast) {
        const double gap = slow.mean - fast.mean;
        const double se = std::sqrt(slow.stderr_of_mean * slow.stderr_of_mean +
                                    fast.stderr_of_mean * fast.stderr_of_mean);
        return gap > 3.0 * se;
    };

    std::string detail = "uncoded=" + fmt(uncoded.mean) + " flat=" + fmt(flat.mean) +
                         " hier(12)=" + fmt(hier.mean) + " sum(12)=" + fmt(sum.mean);
    if (!gap_ok(uncoded, flat)) return {false, "uncoded > flat gap too small: " + detail};
    if (!gap_ok(flat, hier)) return {false, "flat > hierarchical gap too small: " + detail};
    if (!gap_ok(hier, sum)) return {false, "hierarchical > sum-rate gap too small: " + detail};

    const double improvement = (flat.mean - hier.mean) / flat.mean;
    detail += " improvement=" + fmt(improvement * 100.0) + "%";
    if (improvement < 0.25 || improvement > 0.50) {
        return {false, "hierarchical improvement outside the 25-50% band: " + detail};
    }
    const double secs = elapsed_seconds(start);
    if (secs >= 300.0) return {false, "took " + fmt(secs) + " s (budget 300 s)"};
    return {true, detail + " (" + fmt(secs) + " s)"};
}

Outcome criterion5_monotone_trend() {
    const auto cfg = sim_config();
    std::string detail;
    double prev_mean = 0.0, prev_se = 0.0;
    bool first = true;
    for (std::int64_t L : {1, 2, 4, 8, 12}) {
        const auto s = average_finishing_time(hier_plan(L), cfg);
        detail += (first ? "" : " ") + ("L" + std::to_string(L) + "=" + fmt(s.mean));
        if (!first) {
            const double allowed = std::sqrt(prev_se * prev_se +
                                             s.stderr_of_mean * s.stderr_of_mean);
            if (s.mean > prev_mean + allowed) {
                return {false, "mean increased from " + fmt(prev_mean) + " to " + fmt(s.mean) +
                                   " at L=" + std::to_string(L) + " (" + detail + ")"};
            }
        }
        prev_mean = s.mean;
        prev_se = s.stderr_of_mean;
        first = false;
    }
    return {true, detail};
}

Outcome criterion6_conditioning() {
    TestRng rng(6006);
    CodeSpec spec;
    spec.scheme = Scheme::polynomial;
    spec.cut = CutSpec{4, 1, 6};  // R = 24
    spec.n_workers = 24;
    spec.eval_points = chebyshev_points(24);
    spec.validate();

    std::vector<Matrix> a_blocks, b_blocks;
    for (int i = 0; i < 4; ++i) a_blocks.push_back(testsupport::random_matrix(3, 4, rng));
    for (int i = 0; i < 6; ++i) b_blocks.push_back(testsupport::random_matrix(4, 3, rng));
    const auto results = run_workers(polynomial_encode(a_blocks, b_blocks, spec));
    const auto blocks = decode(results, spec);
    double worst = 0.0;
    std::size_t at = 0;
    for (const auto& a : a_blocks) {
        for (const auto& b : b_blocks) {
            worst = std::max(worst, relative_frobenius_error(
                                        blocks[at++], testsupport::oracle_multiply(a, b)));
        }
    }
    if (worst >= 1e-6) return {false, "chebyshev R=24 error " + fmt(worst)};

    CodeSpec bad = spec;
    bad.eval_points.clear();
    for (int i = 1; i <= 24; ++i) bad.eval_points.push_back(static_cast<double>(i));
    bad.validate();
    const auto bad_results = run_workers(polynomial_encode(a_blocks, b_blocks, bad));
    try {
        decode(bad_results, bad);
        return {false, "integer points 1..24 were not rejected"};
    } catch (const ConditioningError&) {
    }
    return {true, "chebyshev R=24 error " + fmt(worst) + "; integer points trip the guard"};
}

Outcome criterion7_sweep_determinism() {
    const std::string config = g_configs + "/sweep.json";
    const std::string out1 = g_workdir + "/sweep_run1.csv";
    const std::string out2 = g_workdir + "/sweep_run2.csv";
    for (const auto& out : {out1, out2}) {
        const std::string cmd =
            g_cli + " sweep " + config + " --layers 1,2,4,8,12 --out " + out;
        if (std::system(cmd.c_str()) != 0) return {false, "sweep failed: " + cmd};
    }
    const auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const auto c1 = slurp(out1), c2 = slurp(out2);
    if (c1.empty()) return {false, "sweep produced no output"};
    if (c1 != c2) return {false, "the two sweep CSVs differ"};
    if (c1.find("scheme,L,mean,stderr,trials") != 0) {
        return {false, "unexpected CSV header"};
    }
    return {true, std::to_string(c1.size()) + " bytes, byte-identical across runs"};
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        if (flag == "--cli") g_cli = argv[i + 1];
        else if (flag == "--configs") g_configs = argv[i + 1];
        else if (flag == "--workdir") g_workdir = argv[i + 1];
    }
    if (g_workdir.empty()) g_workdir = ".";

    struct Entry {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Entry> criteria = {
        {1, "decode-roundtrip oracle equivalence", criterion1_roundtrip_oracle},
        {2, "threshold sharpness", criterion2_threshold_sharpness},
        {3, "figure configuration fidelity", criterion3_figure_configuration},
        {4, "simulation ordering and improvement band", criterion4_simulation_ordering},
        {5, "monotone finishing-time trend in L", criterion5_monotone_trend},
        {6, "evaluation-point conditioning", criterion6_conditioning},
        {7, "sweep determinism", criterion7_sweep_determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        Outcome outcome;
        try {
            if ((c.id == 7) && g_cli.empty()) {
                outcome = {false, "no --cli path given"};
            } else {
                outcome = c.run();
            }
        } catch (const std::exception& e) {
            outcome = {false, std::string("unexpected exception: ") + e.what()};
        }
        std::cout << (outcome.ok ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.name
                  << " :: " << outcome.detail << "\n";
        if (!outcome.ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
