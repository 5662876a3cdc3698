#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace emofrnn {

/// Weight families for ordered weighted averaging.
enum class OwaScheme { strict, exp, add, invadd, mean };

inline constexpr OwaScheme kAllOwaSchemes[] = {OwaScheme::strict, OwaScheme::exp, OwaScheme::add,
                                               OwaScheme::invadd, OwaScheme::mean};

std::string_view to_string(OwaScheme scheme);
std::optional<OwaScheme> parse_owa_scheme(std::string_view token);

/// Which approximation a weight vector serves. Upper weights emphasise the
/// largest values, lower weights the smallest.
enum class Bound { lower, upper };

struct OwaWeights {
    std::vector<double> weights;
    Bound bound = Bound::upper;
    OwaScheme scheme = OwaScheme::mean;

    std::size_t size() const { return weights.size(); }
};

/// Weight vector of length p. Position i multiplies the i-th largest value.
///
///   strict  upper <1,0,...,0>
///   exp     upper w_i = 2^(p-i) / (2^p - 1)
///   add     upper w_i = 2(p+1-i) / (p(p+1))
///   invadd  upper w_i = 1 / (i * H_p), H_p the p-th harmonic number
///   mean    w_i = 1/p
///
/// Lower weights are the upper weights reversed. Throws std::invalid_argument
/// for p = 0.
OwaWeights make_weights(OwaScheme scheme, Bound bound, std::size_t p);

/// Sum of w_i * v_(i) with v_(1) >= v_(2) >= ... Throws on a length mismatch.
double owa_aggregate(std::span<const double> values, const OwaWeights& weights);

/// Same, for values already sorted in non-increasing order.
double owa_aggregate_sorted(std::span<const double> descending, std::span<const double> weights);

/// round(sqrt(n) / 2), half away from zero, at least 1.
std::size_t default_k(std::size_t n);

}  // namespace emofrnn
