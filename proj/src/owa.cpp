#include "emofrnn/owa.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace emofrnn {

std::string_view to_string(OwaScheme scheme)
{
    switch (scheme) {
    case OwaScheme::strict: return "strict";
    case OwaScheme::exp: return "exp";
    case OwaScheme::add: return "add";
    case OwaScheme::invadd: return "invadd";
    case OwaScheme::mean: return "mean";
    }
    return "?";
}

std::optional<OwaScheme> parse_owa_scheme(std::string_view token)
{
    for (OwaScheme s : kAllOwaSchemes)
        if (token == to_string(s))
            return s;
    return std::nullopt;
}

OwaWeights make_weights(OwaScheme scheme, Bound bound, std::size_t p)
{
    if (p == 0)
        throw std::invalid_argument("make_weights: p must be positive");

    const double pd = static_cast<double>(p);
    std::vector<double> w(p);
    switch (scheme) {
    case OwaScheme::strict:
        w[0] = 1.0;
        break;
    case OwaScheme::exp: {
        // 2^(p-i) / (2^p - 1) rewritten as 2^-i / (1 - 2^-p) to stay finite for large p.
        const double denom = 1.0 - std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(p, 2000)));
        for (std::size_t i = 1; i <= p; ++i)
            w[i - 1] = std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(i, 2000))) / denom;
        break;
    }
    case OwaScheme::add:
        for (std::size_t i = 1; i <= p; ++i)
            w[i - 1] = 2.0 * (pd + 1.0 - static_cast<double>(i)) / (pd * (pd + 1.0));
        break;
    case OwaScheme::invadd: {
        double harmonic = 0.0;
        for (std::size_t i = p; i >= 1; --i)
            harmonic += 1.0 / static_cast<double>(i);
        for (std::size_t i = 1; i <= p; ++i)
            w[i - 1] = 1.0 / (static_cast<double>(i) * harmonic);
        break;
    }
    case OwaScheme::mean:
        std::fill(w.begin(), w.end(), 1.0 / pd);
        break;
    }
    if (bound == Bound::lower)
        std::reverse(w.begin(), w.end());
    return {std::move(w), bound, scheme};
}

double owa_aggregate_sorted(std::span<const double> descending, std::span<const double> weights)
{
    if (descending.size() != weights.size())
        throw std::invalid_argument("owa_aggregate: " + std::to_string(descending.size())
                                    + " values for " + std::to_string(weights.size()) + " weights");
    double sum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
        sum += weights[i] * descending[i];
    return sum;
}

double owa_aggregate(std::span<const double> values, const OwaWeights& weights)
{
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>{});
    return owa_aggregate_sorted(sorted, weights.weights);
}

std::size_t default_k(std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("default_k: n must be positive");
    const auto k = static_cast<std::size_t>(std::round(std::sqrt(static_cast<double>(n)) / 2.0));
    return std::max<std::size_t>(k, 1);
}

}  // namespace emofrnn
