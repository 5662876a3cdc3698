#include "emofrnn/frnn.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "emofrnn/error.hpp"
#include "emofrnn/parallel.hpp"

namespace emofrnn {

Label argmax_lowest(const ClassArray& values)
{
    const double top = *std::max_element(values.begin(), values.end());
    Label c = 0;
    while (values[static_cast<std::size_t>(c)] < top - kTieTolerance)
        ++c;
    return c;
}

ClassArray normalize_confidence(const ClassArray& mean_membership)
{
    double total = 0.0;
    for (double m : mean_membership)
        total += m;
    if (!(total > 0.0))
        throw std::domain_error("confidence: memberships sum to zero");
    ClassArray out{};
    for (std::size_t c = 0; c < out.size(); ++c)
        out[c] = mean_membership[c] / total;
    return out;
}

ClassScores scores_from_neighbours(const ClassNeighbours& neighbours,
                                   const std::array<std::size_t, kNumClasses>& class_sizes,
                                   const FrnnConfig& cfg)
{
    if (cfg.k == 0)
        throw std::invalid_argument("FRNN: k must be positive");

    ClassScores s;
    std::vector<double> values;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        const std::size_t p_up = std::min(cfg.k, class_sizes[c]);
        if (neighbours[c].size() < p_up)
            throw std::invalid_argument("FRNN: neighbour list shallower than k");
        const auto w_up = make_weights(cfg.upper, Bound::upper, p_up);
        s.upper[c] = owa_aggregate_sorted(std::span(neighbours[c]).first(p_up), w_up.weights);

        // k nearest outside c: merge the heads of the other classes' lists.
        std::size_t outside = 0;
        for (std::size_t o = 0; o < kNumClasses; ++o)
            if (o != c)
                outside += class_sizes[o];
        const std::size_t p_low = std::min(cfg.k, outside);
        values.clear();
        std::array<std::size_t, kNumClasses> head{};
        for (std::size_t taken = 0; taken < p_low; ++taken) {
            std::size_t best = kNumClasses;
            for (std::size_t o = 0; o < kNumClasses; ++o) {
                if (o == c || head[o] >= neighbours[o].size())
                    continue;
                if (best == kNumClasses || neighbours[o][head[o]] > neighbours[best][head[best]])
                    best = o;
            }
            if (best == kNumClasses)
                throw std::invalid_argument("FRNN: neighbour list shallower than k");
            values.push_back(neighbours[best][head[best]++]);
        }
        // Similarities come out descending, so 1 - R ascends; flip to descending.
        std::reverse(values.begin(), values.end());
        for (double& v : values)
            v = 1.0 - v;
        const auto w_low = make_weights(cfg.lower, Bound::lower, p_low);
        s.lower[c] = owa_aggregate_sorted(values, w_low.weights);

        s.mean_membership[c] = (s.lower[c] + s.upper[c]) / 2.0;
    }
    s.confidence = normalize_confidence(s.mean_membership);
    return s;
}

Label predicted_label(const ClassScores& scores)
{
    ClassArray sum{};
    for (std::size_t c = 0; c < kNumClasses; ++c)
        sum[c] = scores.lower[c] + scores.upper[c];
    return argmax_lowest(sum);
}

FrnnModel FrnnModel::fit(const VectorDataset& ds, const FrnnConfig& cfg)
{
    if (cfg.k == 0)
        throw std::invalid_argument("FRNN: k must be positive");
    std::array<std::vector<Vector>, kNumClasses> rows;
    for (const auto& inst : ds.instances) {
        if (!is_valid_label(inst.label))
            throw DataError("instance " + inst.id + " has label outside 0-3");
        if (inst.vector.size() != ds.dimension)
            throw DataError("instance " + inst.id + " has dimension "
                            + std::to_string(inst.vector.size()) + ", expected "
                            + std::to_string(ds.dimension));
        rows[static_cast<std::size_t>(inst.label)].push_back(inst.vector);
    }

    FrnnModel model;
    model.cfg_ = cfg;
    model.dimension_ = ds.dimension;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        if (rows[c].empty())
            throw DataError("training data has no instance of class " + std::to_string(c));
        model.sizes_[c] = rows[c].size();
        model.pools_[c] = VectorPool(rows[c]);
    }
    return model;
}

ClassNeighbours FrnnModel::neighbours(std::span<const double> query, std::size_t depth) const
{
    ClassNeighbours out;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        std::vector<double> sims = pools_[c].similarities(query);
        const std::size_t keep = std::min(depth, sims.size());
        std::partial_sort(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(keep), sims.end(),
                          std::greater<>{});
        sims.resize(keep);
        out[c] = std::move(sims);
    }
    return out;
}

ClassScores FrnnModel::approximations(std::span<const double> query) const
{
    return scores_from_neighbours(neighbours(query, cfg_.k), sizes_, cfg_);
}

Label FrnnModel::predict(std::span<const double> query) const
{
    return predicted_label(approximations(query));
}

ClassArray FrnnModel::confidence_vector(std::span<const double> query) const
{
    return normalize_confidence(approximations(query).mean_membership);
}

std::vector<ClassScores> FrnnModel::approximations(const std::vector<Vector>& queries) const
{
    std::vector<ClassScores> out(queries.size());
    parallel_for(queries.size(), [&](std::size_t i) { out[i] = approximations(queries[i]); });
    return out;
}

}  // namespace emofrnn
