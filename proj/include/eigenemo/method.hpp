#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "eigenemo/dmd.hpp"
#include "eigenemo/ep_model.hpp"
#include "eigenemo/summarizers.hpp"

namespace eigenemo {

enum class Method { Avg, PMeans, Functionals, Dct, Dmd };

Method parse_method(std::string_view name);
std::string_view to_string(Method method);

/// A summarizer together with its parameters.
struct MethodSpec {
    Method method = Method::Avg;
    summarize::PMeansConfig pmeans{{1}};
    summarize::DctConfig dct{1};
    std::vector<dmd::OrderParam> d_set{dmd::OrderParam{1}};

    std::string descriptor() const;
    /// Output length for frames of dimension `dim`.
    std::size_t length(std::size_t dim) const;
    /// Minimum number of frames the method accepts.
    std::size_t min_frames() const;
    void check() const;
};

Representation summarize_sequence(const EpSequence& seq, const MethodSpec& spec);

/// Parses "1,2,6", "1-3" or a mix such as "1-3,6" into an ascending list.
std::vector<std::size_t> parse_index_list(std::string_view text);

}  // namespace eigenemo
