#include "eigenemo/experiment.hpp"

#include <algorithm>
#include <optional>

#include <json.hpp>

#include "eigenemo/errors.hpp"
#include "eigenemo/parallel.hpp"

namespace eigenemo::eval {

using nlohmann::json;

EpChoice parse_ep_choice(std::string_view text) {
    if (text == "eep" || text == "EEP") return EpChoice::EEP;
    if (text == "bep" || text == "BEP") return EpChoice::BEP;
    if (text == "eep+bep" || text == "both" || text == "EEP⊕BEP") return EpChoice::Both;
    throw ConfigError("unknown EP choice '" + std::string(text) + "' (expected eep, bep or eep+bep)");
}

std::string_view to_string(EpChoice ep) {
    switch (ep) {
        case EpChoice::EEP: return "EEP";
        case EpChoice::BEP: return "BEP";
        case EpChoice::Both: return "EEP⊕BEP";
    }
    return "?";
}

std::string Cell::method_label() const {
    std::string s = method.descriptor();
    if (plus_avg) s += "⊕avg";
    return s;
}

std::string Cell::label() const { return method_label() + " & " + std::string(to_string(ep)); }

std::size_t Cell::length(std::size_t eep_dim, std::size_t bep_dim) const {
    auto one = [&](std::size_t dim) { return method.length(dim) + (plus_avg ? dim : 0); };
    switch (ep) {
        case EpChoice::EEP: return one(eep_dim);
        case EpChoice::BEP: return one(bep_dim);
        case EpChoice::Both: return one(eep_dim) + one(bep_dim);
    }
    return 0;
}

Representation cell_representation(const Cell& cell, const EpSequence* eep, const EpSequence* bep) {
    std::vector<Representation> parts;
    auto add = [&](const EpSequence* seq) {
        if (!seq) throw ConfigError("cell '" + cell.label() + "' needs a missing EP stream");
        parts.push_back(summarize_sequence(*seq, cell.method));
        if (cell.plus_avg) parts.push_back(summarize::average(*seq));
    };
    if (cell.ep != EpChoice::BEP) add(eep);
    if (cell.ep != EpChoice::EEP) add(bep);
    return summarize::concat(parts);
}

namespace {

std::vector<std::size_t> parse_variant(const json& v) {
    if (v.is_number_unsigned() || v.is_number_integer()) {
        const auto x = v.get<long long>();
        if (x < 1) throw ConfigError("parameter values must be >= 1");
        return {static_cast<std::size_t>(x)};
    }
    if (v.is_string()) return parse_index_list(v.get<std::string>());
    if (v.is_array()) {
        std::vector<std::size_t> out;
        for (const auto& e : v) {
            if (!e.is_number_integer() || e.get<long long>() < 1) {
                throw ConfigError("parameter list entries must be integers >= 1");
            }
            out.push_back(static_cast<std::size_t>(e.get<long long>()));
        }
        if (out.empty()) throw ConfigError("empty parameter list");
        if (!std::is_sorted(out.begin(), out.end()) ||
            std::adjacent_find(out.begin(), out.end()) != out.end()) {
            throw ConfigError("parameter lists must be strictly ascending");
        }
        return out;
    }
    throw ConfigError("parameter must be an integer, a range string or an array");
}

// A grid entry lists variants: [1, 2, "1-3", [1, 6]]. A bare scalar is one variant.
std::vector<std::vector<std::size_t>> parse_variants(const json& v) {
    if (!v.is_array()) return {parse_variant(v)};
    std::vector<std::vector<std::size_t>> out;
    for (const auto& e : v) out.push_back(parse_variant(e));
    if (out.empty()) throw ConfigError("empty variant list");
    return out;
}

MethodSpec with_params(Method method, const std::vector<std::size_t>& params) {
    MethodSpec spec;
    spec.method = method;
    switch (method) {
        case Method::PMeans:
            spec.pmeans.powers.clear();
            for (auto p : params) spec.pmeans.powers.push_back(static_cast<int>(p));
            break;
        case Method::Dct:
            if (params.size() != 1) throw ConfigError("dct takes a single k per variant");
            spec.dct.k = params[0];
            break;
        case Method::Dmd: spec.d_set = dmd::make_order_set(params); break;
        default: break;
    }
    spec.check();
    return spec;
}

const char* param_key(Method method) {
    switch (method) {
        case Method::PMeans: return "powers";
        case Method::Dct: return "k";
        case Method::Dmd: return "d";
        default: return nullptr;
    }
}

std::vector<MethodSpec> parse_method_entry(const json& j, bool grid) {
    if (!j.is_object() || !j.contains("method") || !j["method"].is_string()) {
        throw ConfigError("method entry needs a string 'method'");
    }
    const Method method = parse_method(j["method"].get<std::string>());
    const char* key = param_key(method);
    if (!key) return {with_params(method, {})};
    if (!j.contains(key)) throw ConfigError(std::string("method '") + std::string(to_string(method)) +
                                            "' needs '" + key + "'");
    std::vector<MethodSpec> out;
    if (grid) {
        for (const auto& v : parse_variants(j[key])) out.push_back(with_params(method, v));
    } else {
        out.push_back(with_params(method, parse_variant(j[key])));
    }
    return out;
}

Cell make_cell(MethodSpec spec, EpChoice ep, bool plus_avg) {
    if (plus_avg && spec.method == Method::Avg) throw ConfigError("avg⊕avg is not a meaningful cell");
    return Cell{std::move(spec), ep, plus_avg};
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j[key].is_null()) return fallback;
    return j[key].get<T>();
}

}  // namespace

ExperimentConfig parse_experiment(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("experiment config: malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");

    ExperimentConfig cfg;
    try {
        if (j.contains("grid")) {
            const json& g = j["grid"];
            if (!g.contains("methods") || !g["methods"].is_array()) throw ConfigError("grid needs a 'methods' array");
            std::vector<EpChoice> eps;
            for (const auto& e : g.value("ep", json::array({"eep"}))) eps.push_back(parse_ep_choice(e.get<std::string>()));
            std::vector<bool> avg_flags;
            const json avg = g.value("plus_avg", json::array({false}));
            if (avg.is_boolean()) {
                avg_flags.push_back(avg.get<bool>());
            } else {
                for (const auto& a : avg) avg_flags.push_back(a.get<bool>());
            }
            for (const auto& m : g["methods"]) {
                for (const auto& spec : parse_method_entry(m, true)) {
                    for (EpChoice ep : eps) {
                        for (bool plus : avg_flags) cfg.cells.push_back(make_cell(spec, ep, plus));
                    }
                }
            }
        }
        if (j.contains("cells")) {
            for (const auto& c : j["cells"]) {
                const EpChoice ep = parse_ep_choice(c.value("ep", std::string("eep")));
                const bool plus = c.value("plus_avg", false);
                cfg.cells.push_back(make_cell(parse_method_entry(c, false).front(), ep, plus));
            }
        }
        if (j.contains("cv")) {
            const json& c = j["cv"];
            cfg.cv.folds = get_or<std::size_t>(c, "folds", cfg.cv.folds);
            cfg.cv.seed = get_or<std::uint64_t>(c, "seed", cfg.cv.seed);
            cfg.cv.stratified = get_or<bool>(c, "stratified", cfg.cv.stratified);
        }
        if (j.contains("forest")) {
            const json& f = j["forest"];
            cfg.forest.trees = get_or<std::size_t>(f, "trees", cfg.forest.trees);
            if (f.contains("max_features") && !f["max_features"].is_null()) {
                cfg.forest.max_features = f["max_features"].get<std::size_t>();
            }
            cfg.forest.min_samples_leaf = get_or<std::size_t>(f, "min_samples_leaf", cfg.forest.min_samples_leaf);
            cfg.forest.bootstrap = get_or<bool>(f, "bootstrap", cfg.forest.bootstrap);
            cfg.forest.seed = get_or<std::uint64_t>(f, "seed", cfg.forest.seed);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("experiment config: ") + e.what());
    }
    if (cfg.cells.empty()) throw ConfigError("experiment grid is empty");
    if (cfg.cv.folds < 2) throw ConfigError("cv.folds must be >= 2");
    if (cfg.forest.trees < 1) throw ConfigError("forest.trees must be >= 1");
    return cfg;
}

std::vector<std::pair<std::string, EvalReport>> run_experiment(const ExperimentConfig& cfg, const Dataset& eep,
                                                               const Dataset& bep, std::size_t jobs) {
    if (cfg.cells.empty()) throw ConfigError("experiment grid is empty");
    const auto pairs = pair_eep_bep(eep, bep);
    if (eep.class_set != bep.class_set) throw PairingError("EEP and BEP datasets have different class sets");

    std::vector<std::pair<std::string, EvalReport>> out;
    out.reserve(cfg.cells.size());
    for (const Cell& cell : cfg.cells) {
        cell.method.check();
        const std::size_t need = cell.method.min_frames();
        std::vector<const EpPair*> usable;
        std::vector<Skipped> skipped;
        for (const auto& p : pairs) {
            const bool short_eep = cell.ep != EpChoice::BEP && p.eep->length() < need;
            const bool short_bep = cell.ep != EpChoice::EEP && p.bep->length() < need;
            if (short_eep || short_bep) {
                const std::size_t n = short_eep ? p.eep->length() : p.bep->length();
                skipped.push_back({p.eep->id, "N=" + std::to_string(n) + " frames <= max order d=" +
                                                  std::to_string(need - 1)});
            } else {
                usable.push_back(&p);
            }
        }

        std::vector<Representation> reps(usable.size());
        parallel_for(usable.size(), jobs, [&](std::size_t i) {
            reps[i] = cell_representation(cell, usable[i]->eep, usable[i]->bep);
        });

        EvalReport report = cross_validate(reps, eep.class_set, cfg.cv, cfg.forest, jobs);
        report.label = cell.label();
        report.skipped = std::move(skipped);
        out.emplace_back(report.label, std::move(report));
    }
    return out;
}

}  // namespace eigenemo::eval
