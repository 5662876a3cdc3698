#include "emofrnn/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace emofrnn {

double dot(std::span<const double> a, std::span<const double> b)
{
    // Four independent partial sums let the loop pipeline without
    // reassociation flags.
    const std::size_t n = a.size();
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    for (; i < n; ++i)
        s0 += a[i] * b[i];
    return (s0 + s1) + (s2 + s3);
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double cosine(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("cosine: vectors of unequal dimension");
    const double na = norm(a);
    const double nb = norm(b);
    if (na == 0.0 || nb == 0.0)
        throw std::invalid_argument("cosine: zero-norm vector");
    return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

double cos_similarity(std::span<const double> a, std::span<const double> b)
{
    return (1.0 + cosine(a, b)) / 2.0;
}

VectorPool::VectorPool(const std::vector<Vector>& rows)
    : rows_(rows.size()), dim_(rows.empty() ? 0 : rows.front().size())
{
    data_.resize(rows_ * dim_);
    for (std::size_t r = 0; r < rows_; ++r) {
        if (rows[r].size() != dim_)
            throw std::invalid_argument("VectorPool: rows of unequal dimension");
        const double n = norm(rows[r]);
        if (n == 0.0)
            throw std::invalid_argument("VectorPool: zero-norm row " + std::to_string(r));
        for (std::size_t c = 0; c < dim_; ++c)
            data_[r * dim_ + c] = rows[r][c] / n;
    }
}

void VectorPool::similarities(std::span<const double> query, std::span<double> out) const
{
    if (query.size() != dim_)
        throw std::invalid_argument("similarities: query has dimension "
                                    + std::to_string(query.size()) + ", pool has "
                                    + std::to_string(dim_));
    if (out.size() != rows_)
        throw std::invalid_argument("similarities: output size mismatch");
    const double qn = norm(query);
    if (qn == 0.0)
        throw std::invalid_argument("similarities: zero-norm query");
    for (std::size_t r = 0; r < rows_; ++r) {
        const double c = std::clamp(dot(row(r), query) / qn, -1.0, 1.0);
        out[r] = (1.0 + c) / 2.0;
    }
}

std::vector<double> VectorPool::similarities(std::span<const double> query) const
{
    std::vector<double> out(rows_);
    similarities(query, out);
    return out;
}

NeighbourList top_k(NeighbourList candidates, std::size_t k)
{
    if (k < candidates.size()) {
        std::nth_element(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                         candidates.end(), closer);
        candidates.resize(k);
    }
    std::sort(candidates.begin(), candidates.end(), closer);
    return candidates;
}

NeighbourList k_nearest(std::span<const double> query, const VectorPool& pool, std::size_t k)
{
    if (pool.size() == 0)
        throw std::invalid_argument("k_nearest: empty pool");
    if (k == 0)
        throw std::invalid_argument("k_nearest: k must be positive");
    const auto sims = pool.similarities(query);
    NeighbourList all(sims.size());
    for (std::size_t i = 0; i < sims.size(); ++i)
        all[i] = {i, sims[i]};
    return top_k(std::move(all), k);
}

NeighbourList k_nearest(std::span<const double> query,
                        const std::vector<std::pair<std::size_t, Vector>>& pool, std::size_t k)
{
    if (pool.empty())
        throw std::invalid_argument("k_nearest: empty pool");
    if (k == 0)
        throw std::invalid_argument("k_nearest: k must be positive");
    NeighbourList all;
    all.reserve(pool.size());
    for (const auto& [index, v] : pool)
        all.push_back({index, cos_similarity(query, v)});
    return top_k(std::move(all), k);
}

}  // namespace emofrnn
