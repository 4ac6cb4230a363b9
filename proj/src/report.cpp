#include "eigenemo/report.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "eigenemo/errors.hpp"

namespace eigenemo::report {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::pair<std::string, std::string> split_label(const std::string& label) {
    const auto at = label.rfind(" & ");
    if (at == std::string::npos) return {label, ""};
    return {label.substr(0, at), label.substr(at + 3)};
}

// Display width in code points (labels contain the multi-byte "⊕").
std::size_t width(const std::string& s) {
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
        return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
    }));
}

std::string pad(const std::string& s, std::size_t w, bool right_align) {
    const std::size_t n = width(s);
    if (n >= w) return s;
    const std::string fill(w - n, ' ');
    return right_align ? fill + s : s + fill;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", fraction * 100.0);
    return buf;
}

std::string to_json(const CellReports& reports, const eval::ExperimentConfig& cfg) {
    ordered_json root;
    root["cv"] = {{"folds", cfg.cv.folds}, {"seed", cfg.cv.seed}, {"stratified", cfg.cv.stratified}};
    root["forest"] = {{"trees", cfg.forest.trees},
                      {"max_features", cfg.forest.max_features ? ordered_json(*cfg.forest.max_features)
                                                               : ordered_json(nullptr)},
                      {"min_samples_leaf", cfg.forest.min_samples_leaf},
                      {"bootstrap", cfg.forest.bootstrap},
                      {"seed", cfg.forest.seed}};
    auto& cells = root["cells"] = ordered_json::array();
    for (const auto& [label, r] : reports) {
        const auto [method, ep] = split_label(label);
        ordered_json c;
        c["label"] = label;
        c["method"] = method;
        c["ep"] = ep;
        c["feature_length"] = r.feature_length;
        c["wa"] = r.wa;
        c["ua"] = r.ua;
        c["class_set"] = r.class_set;
        auto conf = ordered_json::array();
        for (Eigen::Index i = 0; i < r.confusion.rows(); ++i) {
            auto row = ordered_json::array();
            for (Eigen::Index j = 0; j < r.confusion.cols(); ++j) row.push_back(r.confusion(i, j));
            conf.push_back(std::move(row));
        }
        c["confusion"] = std::move(conf);
        auto folds = ordered_json::array();
        for (const auto& f : r.per_fold) folds.push_back({{"wa", f.wa}, {"ua", f.ua}});
        c["per_fold"] = std::move(folds);
        auto skipped = ordered_json::array();
        for (const auto& s : r.skipped) skipped.push_back({{"id", s.id}, {"reason", s.reason}});
        c["skipped"] = std::move(skipped);
        cells.push_back(std::move(c));
    }
    return root.dump(2) + "\n";
}

CellReports from_json(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("report: malformed JSON: ") + e.what());
    }
    CellReports out;
    try {
        for (const auto& c : root.at("cells")) {
            eval::EvalReport r;
            r.label = c.at("label").get<std::string>();
            r.feature_length = c.value("feature_length", std::size_t{0});
            r.wa = c.at("wa").get<double>();
            r.ua = c.at("ua").get<double>();
            r.class_set = c.at("class_set").get<std::vector<std::string>>();
            const auto rows = c.at("confusion").get<std::vector<std::vector<std::int64_t>>>();
            const auto k = static_cast<Eigen::Index>(rows.size());
            r.confusion = eval::ConfusionMatrix::Zero(k, k);
            for (Eigen::Index i = 0; i < k; ++i) {
                if (rows[static_cast<std::size_t>(i)].size() != rows.size()) {
                    throw ValidationError("report: confusion matrix of '" + r.label + "' is not square");
                }
                for (Eigen::Index j = 0; j < k; ++j) {
                    r.confusion(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                }
            }
            for (const auto& f : c.value("per_fold", json::array())) {
                r.per_fold.push_back({f.at("wa").get<double>(), f.at("ua").get<double>()});
            }
            for (const auto& s : c.value("skipped", json::array())) {
                r.skipped.push_back({s.at("id").get<std::string>(), s.at("reason").get<std::string>()});
            }
            out.emplace_back(r.label, std::move(r));
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("report: ") + e.what());
    }
    return out;
}

std::string render_table(const CellReports& reports) {
    std::vector<std::string> methods;
    std::vector<std::string> eps;
    for (const auto& [label, r] : reports) {
        const auto [m, e] = split_label(label);
        if (std::find(methods.begin(), methods.end(), m) == methods.end()) methods.push_back(m);
        if (std::find(eps.begin(), eps.end(), e) == eps.end()) eps.push_back(e);
    }
    auto find = [&](const std::string& m, const std::string& e) -> const eval::EvalReport* {
        for (const auto& [label, r] : reports) {
            const auto [lm, le] = split_label(label);
            if (lm == m && le == e) return &r;
        }
        return nullptr;
    };

    std::size_t method_w = width(std::string("Method"));
    for (const auto& m : methods) method_w = std::max(method_w, width(m));
    constexpr std::size_t kNumW = 6;  // "100.00"
    std::vector<std::size_t> ep_w;
    for (const auto& e : eps) ep_w.push_back(std::max(width(e), 2 * kNumW + 3));

    std::string out = pad("", method_w, false);
    for (std::size_t i = 0; i < eps.size(); ++i) out += " | " + pad(eps[i], ep_w[i], false);
    out += "\n" + pad("Method", method_w, false);
    for (std::size_t i = 0; i < eps.size(); ++i) {
        out += " | " + pad(pad("WA", kNumW, true) + " | " + pad("UA", kNumW, true), ep_w[i], false);
    }
    out += "\n" + std::string(method_w, '-');
    for (std::size_t i = 0; i < eps.size(); ++i) out += "-+-" + std::string(ep_w[i], '-');
    out += "\n";
    for (const auto& m : methods) {
        out += pad(m, method_w, false);
        for (std::size_t i = 0; i < eps.size(); ++i) {
            const auto* r = find(m, eps[i]);
            const std::string wa = r ? percent(r->wa) : "-";
            const std::string ua = r ? percent(r->ua) : "-";
            out += " | " + pad(pad(wa, kNumW, true) + " | " + pad(ua, kNumW, true), ep_w[i], false);
        }
        out += "\n";
    }
    return out;
}

std::string render_confusion_csv(const CellReports& reports) {
    std::string out;
    for (const auto& [label, r] : reports) {
        out += "cell,true_label";
        for (const auto& c : r.class_set) out += "," + csv_field(c);
        out += "\n";
        for (Eigen::Index i = 0; i < r.confusion.rows(); ++i) {
            out += csv_field(label) + "," + csv_field(r.class_set[static_cast<std::size_t>(i)]);
            for (Eigen::Index j = 0; j < r.confusion.cols(); ++j) out += "," + std::to_string(r.confusion(i, j));
            out += "\n";
        }
    }
    return out;
}

}  // namespace eigenemo::report
