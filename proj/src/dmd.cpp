#include "eigenemo/dmd.hpp"

#include <numeric>

#include "eigenemo/errors.hpp"

namespace eigenemo::dmd {

OrderParam::OrderParam(std::size_t d) : d_(d) {
    if (d < 1) throw ConfigError("order parameter d must be >= 1");
}

Snapshots stack(const Eigen::MatrixXd& frames, OrderParam order) {
    const auto n = static_cast<std::size_t>(frames.rows());
    const std::size_t d = order.value();
    if (n <= d) throw TooShortError(n, d);

    const Eigen::Index m = frames.cols();
    const auto di = static_cast<Eigen::Index>(d);
    const auto cols = static_cast<Eigen::Index>(n - d);
    Snapshots s{RealMatrix(di * m, cols), RealMatrix(di * m, cols)};
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index lag = 0; lag < di; ++lag) {
            s.x.block(lag * m, j, m, 1) = frames.row(j + lag).transpose();
            s.y.block(lag * m, j, m, 1) = frames.row(j + lag + 1).transpose();
        }
    }
    return s;
}

Snapshots stack(const EpSequence& seq, OrderParam d) { return stack(seq.frames, d); }

KoopmanFit fit_koopman(const Eigen::MatrixXd& frames, OrderParam d) {
    const Snapshots s = stack(frames, d);
    RealMatrix op = s.y * numerics::pseudoinverse(s.x);
    if (!op.allFinite()) throw NumericError("Koopman fit produced non-finite entries");
    const double residual = (s.y - op * s.x).norm();
    auto pairs = numerics::eig(op);
    return KoopmanFit{d, std::move(op), std::move(pairs), residual};
}

KoopmanFit fit_koopman(const EpSequence& seq, OrderParam d) { return fit_koopman(seq.frames, d); }

void check_order_set(std::span<const OrderParam> d_set) {
    if (d_set.empty()) throw ConfigError("order set must be nonempty");
    for (std::size_t i = 1; i < d_set.size(); ++i) {
        if (!(d_set[i - 1] < d_set[i])) throw ConfigError("order set must be strictly ascending");
    }
}

std::vector<OrderParam> make_order_set(std::span<const std::size_t> ds) {
    std::vector<OrderParam> out;
    out.reserve(ds.size());
    for (std::size_t d : ds) out.emplace_back(d);
    check_order_set(out);
    return out;
}

std::string descriptor(std::span<const OrderParam> d_set) {
    std::string s = "dmd:d=";
    for (std::size_t i = 0; i < d_set.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(d_set[i].value());
    }
    return s;
}

std::size_t representation_length(std::size_t dim, std::span<const OrderParam> d_set) {
    std::size_t total = 0;
    for (auto d : d_set) total += d.value();
    return 2 * dim * total;
}

Representation representation(const EpSequence& seq, std::span<const OrderParam> d_set) {
    check_order_set(d_set);
    Representation rep{seq.id, seq.label, descriptor(d_set), {}};
    rep.values.reserve(representation_length(seq.dim(), d_set));
    for (OrderParam d : d_set) {
        const KoopmanFit fit = fit_koopman(seq.frames, d);
        const numerics::ComplexVector& top = fit.eigenpairs.front().vector;
        for (Eigen::Index i = 0; i < top.size(); ++i) rep.values.push_back(top(i).real());
        for (Eigen::Index i = 0; i < top.size(); ++i) rep.values.push_back(top(i).imag());
    }
    return rep;
}

}  // namespace eigenemo::dmd
