#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace eigenemo {

/// Estimate-level (class posteriors) or bottleneck-feature-level profile.
enum class EpKind { EEP, BEP };

std::string_view to_string(EpKind kind);
EpKind parse_ep_kind(std::string_view text);

/// Maximum deviation of an EEP frame's sum from 1.
inline constexpr double kSimplexTolerance = 1e-4;

/// One utterance: N frames (rows) of dimension m (columns).
struct EpSequence {
    std::string id;
    std::string label;
    EpKind kind = EpKind::BEP;
    Eigen::MatrixXd frames;

    std::size_t length() const { return static_cast<std::size_t>(frames.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(frames.cols()); }
};

/// Throws ValidationError naming the utterance when an invariant fails.
void validate(const EpSequence& seq);

struct Representation {
    std::string id;
    std::string label;
    std::string method;
    std::vector<double> values;
};

struct Dataset {
    EpKind kind = EpKind::BEP;
    std::vector<EpSequence> sequences;
    std::vector<std::string> class_set;  // sorted, distinct

    std::size_t size() const { return sequences.size(); }
    std::size_t class_index(std::string_view label) const;
};

/// Validates every sequence, checks ids are unique and derives class_set.
Dataset make_dataset(EpKind kind, std::vector<EpSequence> sequences);

Dataset load_dataset(const std::filesystem::path& path, EpKind kind);
Dataset parse_dataset(std::string_view jsonl, EpKind kind);
/// Kind of the first non-blank line of a dataset file.
EpKind detect_kind(const std::filesystem::path& path);

std::string dump_dataset(const Dataset& dataset);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

std::string dump_representations(std::span<const Representation> reps);
void save_representations(std::span<const Representation> reps, const std::filesystem::path& path);
std::vector<Representation> parse_representations(std::string_view jsonl);
std::vector<Representation> load_representations(const std::filesystem::path& path);

struct EpPair {
    const EpSequence* eep;
    const EpSequence* bep;
};

/// Matches sequences by id, in eep order. Throws PairingError listing every
/// id present on only one side.
std::vector<EpPair> pair_eep_bep(const Dataset& eep, const Dataset& bep);

}  // namespace eigenemo
