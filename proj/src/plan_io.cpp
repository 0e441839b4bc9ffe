#include "codedmm/plan_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "codedmm/errors.hpp"

namespace codedmm {

using nlohmann::json;

namespace {

json range_to_json(const IndexRange& r) { return json::array({r.first, r.last}); }

IndexRange range_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ValidationError("index range must be [first, last]");
    return IndexRange{j[0].get<std::int64_t>(), j[1].get<std::int64_t>()};
}

json cut_to_json(const CutSpec& cut) {
    return json{{"mx", cut.mx}, {"mz", cut.mz}, {"my", cut.my}};
}

CutSpec cut_from_json(const json& j) {
    CutSpec cut{j.at("mx").get<std::int64_t>(), j.at("mz").get<std::int64_t>(),
                j.at("my").get<std::int64_t>()};
    cut.validate();
    return cut;
}

Cuboid cuboid_from_json(const json& j) {
    Cuboid c{j.at("nx").get<std::int64_t>(), j.at("nz").get<std::int64_t>(),
             j.at("ny").get<std::int64_t>()};
    c.validate();
    return c;
}

TimeModel time_model_from_json(const json& j) {
    TimeModel tm;
    const auto type = j.at("type").get<std::string>();
    if (type == "deterministic") {
        tm.kind = TimeModel::Kind::deterministic;
        tm.seconds_per_op = j.at("seconds_per_op").get<double>();
    } else if (type == "shifted_exponential") {
        tm.kind = TimeModel::Kind::shifted_exponential;
        tm.shift = j.at("shift").get<double>();
        tm.rate = j.at("rate").get<double>();
    } else {
        throw ValidationError("unknown time model \"" + type + "\"");
    }
    tm.validate();
    return tm;
}

}  // namespace

AppConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        AppConfig cfg;
        cfg.cuboid = cuboid_from_json(j.at("cuboid"));
        cfg.n_workers = j.at("n_workers").get<std::int64_t>();
        cfg.scheme = scheme_from_name(j.at("scheme").get<std::string>());

        const auto& s = j.at("strategy");
        const auto type = s.at("type").get<std::string>();
        if (type == "uniform") {
            cfg.strategy = UniformStrategy{s.at("layers").get<std::int64_t>(),
                                           cut_from_json(s.at("cut"))};
        } else if (type == "explicit") {
            ExplicitStrategy ex;
            for (const auto& c : s.at("cuts")) ex.cuts.push_back(cut_from_json(c));
            if (s.contains("x_spans")) {
                for (const auto& v : s.at("x_spans")) ex.x_spans.push_back(v.get<std::int64_t>());
            }
            if (s.contains("task_blocks")) {
                for (const auto& tb : s.at("task_blocks")) {
                    ex.task_blocks.push_back(TaskBlock{range_from_json(tb.at("x")),
                                                       range_from_json(tb.at("z")),
                                                       range_from_json(tb.at("y")), 1});
                }
            }
            cfg.strategy = std::move(ex);
        } else if (type == "geometric") {
            cfg.strategy = GeometricStrategy{s.at("layers").get<std::int64_t>(),
                                             s.at("k_per_layer").get<std::int64_t>(),
                                             s.value("ratio", 1.0)};
        } else {
            throw ValidationError("unknown strategy \"" + type + "\"");
        }

        const auto& sim = j.at("sim");
        cfg.sim.n_workers = cfg.n_workers;
        cfg.sim.straggler_prob = sim.at("straggler_prob").get<double>();
        cfg.sim.straggler_slowdown = sim.value("slowdown", 2.0);
        cfg.sim.seed = sim.value("seed", std::uint64_t{1});
        cfg.sim.trials = sim.value("trials", std::int64_t{1});
        cfg.sim.time_model = time_model_from_json(sim.at("time_model"));
        cfg.sim.validate();
        return cfg;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad config field: ") + e.what());
    }
}

AppConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file \"" + path + "\"");
    std::stringstream buf;
    buf << in.rdbuf();
    return config_from_json_text(buf.str());
}

HierarchicalPlan plan_from_config(const AppConfig& cfg, std::int64_t n_layers_override) {
    LayerStrategy strategy = cfg.strategy;
    if (n_layers_override > 0) {
        if (auto* uni = std::get_if<UniformStrategy>(&strategy)) {
            uni->n_layers = n_layers_override;
        } else if (auto* geo = std::get_if<GeometricStrategy>(&strategy)) {
            geo->n_layers = n_layers_override;
        } else if (auto* ex = std::get_if<ExplicitStrategy>(&strategy)) {
            if (static_cast<std::int64_t>(ex->cuts.size()) != n_layers_override) {
                throw ValidationError("explicit strategy fixes " +
                                      std::to_string(ex->cuts.size()) +
                                      " layers, cannot sweep L = " +
                                      std::to_string(n_layers_override));
            }
        }
    }
    return build_plan(cfg.cuboid, cfg.n_workers, strategy, cfg.scheme);
}

std::string plan_to_json_text(const HierarchicalPlan& plan) {
    plan.validate();
    json j;
    j["cuboid"] = {{"nx", plan.cuboid.nx}, {"nz", plan.cuboid.nz}, {"ny", plan.cuboid.ny}};
    j["n_workers"] = plan.n_workers;
    j["scheme"] = scheme_name(plan.scheme);
    j["layers"] = json::array();
    for (const auto& layer : plan.layers) {
        json jl;
        jl["layer_id"] = layer.task_block.layer_id;
        jl["task_block"] = {{"x", range_to_json(layer.task_block.x_set)},
                            {"z", range_to_json(layer.task_block.z_set)},
                            {"y", range_to_json(layer.task_block.y_set)}};
        jl["cut"] = cut_to_json(layer.cut);
        jl["category"] = classify(layer.cut).label();
        jl["info_dim"] = layer.info_dim;
        jl["threshold"] = layer.threshold;
        jl["code_scheme"] = scheme_name(layer.code.scheme);
        jl["eval_points"] = layer.code.eval_points;
        jl["information_blocks"] = json::array();
        for (const auto& ib : partition_task_block(layer.task_block, layer.cut)) {
            jl["information_blocks"].push_back(json{{"index", {ib.bx, ib.bz, ib.by}},
                                                    {"x", range_to_json(ib.x_range)},
                                                    {"z", range_to_json(ib.z_range)},
                                                    {"y", range_to_json(ib.y_range)}});
        }
        j["layers"].push_back(std::move(jl));
    }
    if (plan.scheme == Scheme::sum_rate_polynomial) {
        const auto spec = sum_rate_code_spec(plan);
        j["sum_rate"] = {{"info_dim", recovery_threshold(spec)},
                         {"threshold", recovery_threshold(spec)}};
    }
    return j.dump(2) + "\n";
}

HierarchicalPlan plan_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("plan document is not valid JSON: ") + e.what());
    }
    try {
        HierarchicalPlan plan;
        plan.cuboid = cuboid_from_json(j.at("cuboid"));
        plan.n_workers = j.at("n_workers").get<std::int64_t>();
        plan.scheme = scheme_from_name(j.at("scheme").get<std::string>());
        for (const auto& jl : j.at("layers")) {
            LayerSpec layer;
            const auto& tb = jl.at("task_block");
            layer.task_block = TaskBlock{range_from_json(tb.at("x")), range_from_json(tb.at("z")),
                                         range_from_json(tb.at("y")),
                                         jl.at("layer_id").get<std::int64_t>()};
            layer.cut = cut_from_json(jl.at("cut"));
            layer.info_dim = jl.at("info_dim").get<std::int64_t>();
            layer.threshold = jl.at("threshold").get<std::int64_t>();
            layer.code.scheme = scheme_from_name(jl.at("code_scheme").get<std::string>());
            layer.code.cut = layer.cut;
            layer.code.n_workers = plan.n_workers;
            layer.code.eval_points = jl.at("eval_points").get<std::vector<double>>();
            plan.layers.push_back(std::move(layer));
        }
        plan.validate();
        return plan;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad plan field: ") + e.what());
    }
}

}  // namespace codedmm
