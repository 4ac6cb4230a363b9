#include "eigenemo/ep_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "eigenemo/errors.hpp"
#include "eigenemo/io.hpp"

namespace eigenemo {

using nlohmann::json;

std::string_view to_string(EpKind kind) { return kind == EpKind::EEP ? "eep" : "bep"; }

EpKind parse_ep_kind(std::string_view text) {
    if (text == "eep" || text == "EEP") return EpKind::EEP;
    if (text == "bep" || text == "BEP") return EpKind::BEP;
    throw ValidationError("unknown EP kind '" + std::string(text) + "' (expected eep or bep)");
}

void validate(const EpSequence& seq) {
    const std::string who = "utterance '" + seq.id + "': ";
    if (seq.id.empty()) throw ValidationError("utterance with empty id");
    if (seq.frames.rows() < 1) throw ValidationError(who + "no frames");
    if (seq.frames.cols() < 1) throw ValidationError(who + "zero-dimensional frames");
    if (!seq.frames.allFinite()) throw ValidationError(who + "non-finite entry");
    if (seq.kind != EpKind::EEP) return;
    for (Eigen::Index i = 0; i < seq.frames.rows(); ++i) {
        const auto row = seq.frames.row(i);
        if (row.minCoeff() < 0.0 || row.maxCoeff() > 1.0) {
            throw ValidationError(who + "EEP frame " + std::to_string(i) +
                                  " has an entry outside [0, 1]");
        }
        const double sum = row.sum();
        if (std::abs(sum - 1.0) > kSimplexTolerance) {
            throw ValidationError(who + "EEP frame " + std::to_string(i) + " sums to " +
                                  io::format_double(sum) + ", not 1");
        }
    }
}

std::size_t Dataset::class_index(std::string_view label) const {
    const auto it = std::lower_bound(class_set.begin(), class_set.end(), label);
    if (it == class_set.end() || *it != label) {
        throw ValidationError("label '" + std::string(label) + "' not in class set");
    }
    return static_cast<std::size_t>(it - class_set.begin());
}

Dataset make_dataset(EpKind kind, std::vector<EpSequence> sequences) {
    std::unordered_set<std::string> ids;
    std::set<std::string> labels;
    std::optional<Eigen::Index> dim;
    for (const auto& seq : sequences) {
        if (seq.kind != kind) {
            throw ValidationError("utterance '" + seq.id + "': kind " +
                                  std::string(to_string(seq.kind)) + " in a " +
                                  std::string(to_string(kind)) + " dataset");
        }
        validate(seq);
        if (!ids.insert(seq.id).second) throw ValidationError("duplicate utterance id '" + seq.id + "'");
        if (dim && *dim != seq.frames.cols()) {
            throw ValidationError("utterance '" + seq.id + "': dimension " +
                                  std::to_string(seq.frames.cols()) + " differs from dataset dimension " +
                                  std::to_string(*dim));
        }
        dim = seq.frames.cols();
        labels.insert(seq.label);
    }
    Dataset out;
    out.kind = kind;
    out.sequences = std::move(sequences);
    out.class_set.assign(labels.begin(), labels.end());
    return out;
}

namespace {

EpSequence parse_sequence(const json& j, std::size_t line) {
    if (!j.is_object()) throw ParseError("expected a JSON object", line);
    for (const char* key : {"id", "label", "kind", "frames"}) {
        if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'", line);
    }
    if (!j["id"].is_string() || !j["label"].is_string() || !j["kind"].is_string()) {
        throw ParseError("'id', 'label' and 'kind' must be strings", line);
    }
    const json& frames = j["frames"];
    if (!frames.is_array() || frames.empty()) throw ParseError("'frames' must be a nonempty array", line);

    EpSequence seq;
    seq.id = j["id"].get<std::string>();
    seq.label = j["label"].get<std::string>();
    try {
        seq.kind = parse_ep_kind(j["kind"].get<std::string>());
    } catch (const ValidationError& e) {
        throw ParseError(e.what(), line);
    }

    const std::size_t n = frames.size();
    if (!frames[0].is_array() || frames[0].empty()) throw ParseError("frame 0 must be a nonempty array", line);
    const std::size_t m = frames[0].size();
    seq.frames.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < n; ++i) {
        const json& row = frames[i];
        if (!row.is_array()) throw ParseError("frame " + std::to_string(i) + " is not an array", line);
        if (row.size() != m) {
            throw ValidationError("utterance '" + seq.id + "': frame " + std::to_string(i) +
                                  " has dimension " + std::to_string(row.size()) + ", expected " +
                                  std::to_string(m));
        }
        for (std::size_t c = 0; c < m; ++c) {
            if (!row[c].is_number()) {
                throw ParseError("frame " + std::to_string(i) + " entry " + std::to_string(c) +
                                     " is not a number",
                                 line);
            }
            seq.frames(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = row[c].get<double>();
        }
    }
    return seq;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        ++line_no;
        std::string_view line = text.substr(pos, end - pos);
        if (line.find_first_not_of(" \t\r") != std::string_view::npos) fn(line, line_no);
        if (end == text.size()) break;
        pos = end + 1;
    }
}

json parse_line(std::string_view line, std::size_t line_no) {
    try {
        return json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), line_no);
    }
}

std::string json_string(const std::string& s) { return json(s).dump(); }

}  // namespace

Dataset parse_dataset(std::string_view jsonl, EpKind kind) {
    std::vector<EpSequence> seqs;
    for_each_line(jsonl, [&](std::string_view line, std::size_t line_no) {
        seqs.push_back(parse_sequence(parse_line(line, line_no), line_no));
    });
    if (seqs.empty()) throw ValidationError("dataset is empty");
    return make_dataset(kind, std::move(seqs));
}

Dataset load_dataset(const std::filesystem::path& path, EpKind kind) {
    return parse_dataset(io::read_file(path), kind);
}

EpKind detect_kind(const std::filesystem::path& path) {
    const std::string text = io::read_file(path);
    std::optional<EpKind> kind;
    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        if (kind) return;
        const json j = parse_line(line, line_no);
        if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
            throw ParseError("missing string field 'kind'", line_no);
        }
        kind = parse_ep_kind(j["kind"].get<std::string>());
    });
    if (!kind) throw ValidationError(path.string() + ": dataset is empty");
    return *kind;
}

std::string dump_dataset(const Dataset& dataset) {
    std::string out;
    for (const auto& seq : dataset.sequences) {
        out += "{\"id\": " + json_string(seq.id) + ", \"label\": " + json_string(seq.label) +
               ", \"kind\": \"" + std::string(to_string(seq.kind)) + "\", \"frames\": [";
        for (Eigen::Index i = 0; i < seq.frames.rows(); ++i) {
            if (i) out += ", ";
            out += '[';
            for (Eigen::Index c = 0; c < seq.frames.cols(); ++c) {
                if (c) out += ", ";
                out += io::format_double(seq.frames(i, c));
            }
            out += ']';
        }
        out += "]}\n";
    }
    return out;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
    io::write_atomic(path, dump_dataset(dataset));
}

std::string dump_representations(std::span<const Representation> reps) {
    if (reps.empty()) throw ValidationError("no representations to save");
    std::map<std::string, std::size_t> lengths;
    for (const auto& r : reps) {
        auto [it, inserted] = lengths.emplace(r.method, r.values.size());
        if (!inserted && it->second != r.values.size()) {
            throw ValidationError("representation '" + r.id + "' has length " +
                                  std::to_string(r.values.size()) + " but method '" + r.method +
                                  "' produced length " + std::to_string(it->second));
        }
        for (double v : r.values) {
            if (!std::isfinite(v)) throw ValidationError("representation '" + r.id + "' has a non-finite value");
        }
    }
    std::string out;
    for (const auto& r : reps) {
        out += "{\"id\": " + json_string(r.id) + ", \"label\": " + json_string(r.label) +
               ", \"method\": " + json_string(r.method) + ", \"values\": [";
        for (std::size_t i = 0; i < r.values.size(); ++i) {
            if (i) out += ", ";
            out += io::format_double(r.values[i]);
        }
        out += "]}\n";
    }
    return out;
}

void save_representations(std::span<const Representation> reps, const std::filesystem::path& path) {
    io::write_atomic(path, dump_representations(reps));
}

std::vector<Representation> parse_representations(std::string_view jsonl) {
    std::vector<Representation> reps;
    for_each_line(jsonl, [&](std::string_view line, std::size_t line_no) {
        const json j = parse_line(line, line_no);
        if (!j.is_object() || !j.contains("id") || !j.contains("label") || !j.contains("method") ||
            !j.contains("values") || !j["values"].is_array()) {
            throw ParseError("expected {id, label, method, values}", line_no);
        }
        Representation r;
        r.id = j["id"].get<std::string>();
        r.label = j["label"].get<std::string>();
        r.method = j["method"].get<std::string>();
        for (const auto& v : j["values"]) {
            if (!v.is_number()) throw ParseError("non-numeric value", line_no);
            r.values.push_back(v.get<double>());
        }
        reps.push_back(std::move(r));
    });
    return reps;
}

std::vector<Representation> load_representations(const std::filesystem::path& path) {
    return parse_representations(io::read_file(path));
}

std::vector<EpPair> pair_eep_bep(const Dataset& eep, const Dataset& bep) {
    std::unordered_map<std::string_view, const EpSequence*> by_id;
    for (const auto& s : bep.sequences) by_id.emplace(s.id, &s);

    std::vector<EpPair> pairs;
    std::vector<std::string> missing_bep;
    std::unordered_set<std::string_view> matched;
    for (const auto& s : eep.sequences) {
        const auto it = by_id.find(s.id);
        if (it == by_id.end()) {
            missing_bep.push_back(s.id);
            continue;
        }
        matched.insert(s.id);
        pairs.push_back({&s, it->second});
    }
    std::vector<std::string> missing_eep;
    for (const auto& s : bep.sequences) {
        if (!matched.count(s.id)) missing_eep.push_back(s.id);
    }
    if (!missing_bep.empty() || !missing_eep.empty()) {
        auto join = [](const std::vector<std::string>& v) {
            std::string s;
            for (const auto& x : v) s += (s.empty() ? "" : ", ") + ("\"" + x + "\"");
            return s;
        };
        std::string msg = "EEP/BEP datasets do not cover the same ids;";
        if (!missing_bep.empty()) msg += " missing from BEP: " + join(missing_bep) + ";";
        if (!missing_eep.empty()) msg += " missing from EEP: " + join(missing_eep) + ";";
        throw PairingError(msg);
    }
    for (const auto& p : pairs) {
        if (p.eep->label != p.bep->label) {
            throw PairingError("utterance '" + p.eep->id + "' has label '" + p.eep->label +
                               "' in EEP but '" + p.bep->label + "' in BEP");
        }
    }
    return pairs;
}

}  // namespace eigenemo
