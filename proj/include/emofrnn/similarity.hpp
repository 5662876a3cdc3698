#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "emofrnn/types.hpp"

namespace emofrnn {

/// Cosine of the angle between `a` and `b`, clamped to [-1, 1].
/// Throws std::invalid_argument on a dimension mismatch or a zero-norm input.
double cosine(std::span<const double> a, std::span<const double> b);

/// Cosine rescaled to [0, 1]: (1 + cos) / 2.
double cos_similarity(std::span<const double> a, std::span<const double> b);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

struct Neighbour {
    std::size_t index = 0;
    double similarity = 0.0;

    friend bool operator==(const Neighbour&, const Neighbour&) = default;
};

/// Ordering used for neighbour lists: higher similarity first, lower index on ties.
constexpr bool closer(const Neighbour& a, const Neighbour& b)
{
    return a.similarity > b.similarity || (a.similarity == b.similarity && a.index < b.index);
}

using NeighbourList = std::vector<Neighbour>;

/// Dense row-major matrix of L2-normalised vectors. Similarity queries are
/// exact brute force with double accumulation.
class VectorPool {
public:
    VectorPool() = default;
    /// Throws std::invalid_argument on zero-norm or mismatched rows.
    explicit VectorPool(const std::vector<Vector>& rows);

    std::size_t size() const { return rows_; }
    std::size_t dimension() const { return dim_; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }

    /// cos_similarity of `query` against every row, written to `out`.
    void similarities(std::span<const double> query, std::span<double> out) const;
    std::vector<double> similarities(std::span<const double> query) const;

private:
    std::size_t rows_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

/// The min(k, pool size) rows most similar to `query`, ordered by `closer`.
/// Indices refer to the row order of `pool`.
NeighbourList k_nearest(std::span<const double> query, const VectorPool& pool, std::size_t k);

/// Same, over an explicit list of (index, vector) pairs.
NeighbourList k_nearest(std::span<const double> query,
                        const std::vector<std::pair<std::size_t, Vector>>& pool, std::size_t k);

/// Selects the k best entries of `candidates` by `closer`, sorted.
NeighbourList top_k(NeighbourList candidates, std::size_t k);

}  // namespace emofrnn
