#include "eigenemo/method.hpp"

#include <algorithm>
#include <charconv>

#include "eigenemo/errors.hpp"

namespace eigenemo {

Method parse_method(std::string_view name) {
    if (name == "avg") return Method::Avg;
    if (name == "pmeans") return Method::PMeans;
    if (name == "functionals") return Method::Functionals;
    if (name == "dct") return Method::Dct;
    if (name == "dmd") return Method::Dmd;
    throw ConfigError("unknown method '" + std::string(name) +
                      "' (expected avg, pmeans, functionals, dct or dmd)");
}

std::string_view to_string(Method method) {
    switch (method) {
        case Method::Avg: return "avg";
        case Method::PMeans: return "pmeans";
        case Method::Functionals: return "functionals";
        case Method::Dct: return "dct";
        case Method::Dmd: return "dmd";
    }
    return "?";
}

void MethodSpec::check() const {
    switch (method) {
        case Method::PMeans: summarize::check(pmeans); break;
        case Method::Dct: summarize::check(dct); break;
        case Method::Dmd: dmd::check_order_set(d_set); break;
        default: break;
    }
}

std::string MethodSpec::descriptor() const {
    switch (method) {
        case Method::PMeans: {
            std::string s = "pmeans:p=";
            for (std::size_t i = 0; i < pmeans.powers.size(); ++i) {
                if (i) s += ',';
                s += std::to_string(pmeans.powers[i]);
            }
            return s;
        }
        case Method::Dct: return "dct:k=" + std::to_string(dct.k);
        case Method::Dmd: return dmd::descriptor(d_set);
        default: return std::string(to_string(method));
    }
}

std::size_t MethodSpec::length(std::size_t dim) const {
    switch (method) {
        case Method::Avg: return dim;
        case Method::PMeans: return dim * pmeans.powers.size();
        case Method::Functionals: return 6 * dim;
        case Method::Dct: return dim * dct.k;
        case Method::Dmd: return dmd::representation_length(dim, d_set);
    }
    return 0;
}

std::size_t MethodSpec::min_frames() const {
    if (method != Method::Dmd || d_set.empty()) return 1;
    return d_set.back().value() + 1;
}

Representation summarize_sequence(const EpSequence& seq, const MethodSpec& spec) {
    switch (spec.method) {
        case Method::Avg: return summarize::average(seq);
        case Method::PMeans: return summarize::p_means(seq, spec.pmeans);
        case Method::Functionals: return summarize::functionals(seq);
        case Method::Dct: return summarize::dct_summary(seq, spec.dct);
        case Method::Dmd: return dmd::representation(seq, spec.d_set);
    }
    throw ConfigError("unhandled method");
}

std::vector<std::size_t> parse_index_list(std::string_view text) {
    auto parse_num = [&](std::string_view s) {
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
            throw ConfigError("bad integer '" + std::string(s) + "' in list '" + std::string(text) + "'");
        }
        return v;
    };
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find(',', pos), text.size());
        const std::string_view item = text.substr(pos, end - pos);
        const std::size_t dash = item.find('-');
        if (dash == std::string_view::npos) {
            out.push_back(parse_num(item));
        } else {
            const std::size_t lo = parse_num(item.substr(0, dash));
            const std::size_t hi = parse_num(item.substr(dash + 1));
            if (hi < lo) throw ConfigError("empty range '" + std::string(item) + "'");
            for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
        }
        if (end == text.size()) break;
        pos = end + 1;
    }
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
        throw ConfigError("duplicate entry in list '" + std::string(text) + "'");
    }
    return out;
}

}  // namespace eigenemo
