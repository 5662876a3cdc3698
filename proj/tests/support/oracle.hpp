#pragma once

// Independent reference implementations used by the tests. Nothing here
// calls into the library except for plain types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "emofrnn/owa.hpp"
#include "emofrnn/rng.hpp"
#include "emofrnn/types.hpp"

namespace oracle {

using emofrnn::ClassArray;
using emofrnn::Label;
using emofrnn::OwaScheme;
using emofrnn::Vector;

// Upper weights by the closed forms, position i = 1..p.
inline std::vector<double> upper_weights(OwaScheme s, std::size_t p)
{
    std::vector<double> w(p);
    double harmonic = 0.0;
    for (std::size_t j = 1; j <= p; ++j)
        harmonic += 1.0 / static_cast<double>(j);
    for (std::size_t i = 1; i <= p; ++i) {
        const double di = static_cast<double>(i), dp = static_cast<double>(p);
        switch (s) {
        case OwaScheme::strict: w[i - 1] = i == 1 ? 1.0 : 0.0; break;
        case OwaScheme::exp: w[i - 1] = std::pow(2.0, dp - di) / (std::pow(2.0, dp) - 1.0); break;
        case OwaScheme::add: w[i - 1] = 2.0 * (dp + 1.0 - di) / (dp * (dp + 1.0)); break;
        case OwaScheme::invadd: w[i - 1] = 1.0 / (di * harmonic); break;
        case OwaScheme::mean: w[i - 1] = 1.0 / dp; break;
        }
    }
    return w;
}

inline std::vector<double> lower_weights(OwaScheme s, std::size_t p)
{
    auto w = upper_weights(s, p);
    std::reverse(w.begin(), w.end());
    return w;
}

// Weighted sum against the values sorted in non-increasing order.
inline double owa(std::vector<double> values, const std::vector<double>& w)
{
    std::sort(values.begin(), values.end(), std::greater<>{});
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        s += w[i] * values[i];
    return s;
}

inline double similarity(const Vector& a, const Vector& b)
{
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    const double c = std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0);
    return (1.0 + c) / 2.0;
}

struct Scores {
    ClassArray lower{};
    ClassArray upper{};
    Label label = 0;
};

// Loop-by-loop approximations: for each class, every training instance is
// visited, its similarity computed, and the k best taken.
inline Scores frnn(const std::vector<Vector>& xs, const std::vector<Label>& ys, const Vector& query,
                   std::size_t k, OwaScheme lower, OwaScheme upper)
{
    Scores out;
    for (Label c = 0; c < emofrnn::kNumClasses; ++c) {
        std::vector<double> inside, outside;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double r = similarity(xs[i], query);
            (ys[i] == c ? inside : outside).push_back(r);
        }
        std::sort(inside.begin(), inside.end(), std::greater<>{});
        std::sort(outside.begin(), outside.end(), std::greater<>{});
        inside.resize(std::min(k, inside.size()));
        outside.resize(std::min(k, outside.size()));
        std::vector<double> complement;
        for (double r : outside)
            complement.push_back(1.0 - r);
        const auto cu = static_cast<std::size_t>(c);
        out.upper[cu] = owa(inside, upper_weights(upper, inside.size()));
        out.lower[cu] = owa(complement, lower_weights(lower, complement.size()));
    }
    // Lowest label within 1e-12 of the best sum.
    double best = -1.0;
    for (std::size_t c = 0; c < 4; ++c)
        best = std::max(best, out.lower[c] + out.upper[c]);
    out.label = 0;
    while (out.lower[static_cast<std::size_t>(out.label)] + out.upper[static_cast<std::size_t>(out.label)]
           < best - 1e-12)
        ++out.label;
    return out;
}

// Two-pass sample correlation.
inline double pcc(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

// Random dataset with all four classes present.
struct Synthetic {
    std::vector<Vector> xs;
    std::vector<Label> ys;
};

inline Synthetic random_dataset(emofrnn::SplitMix64& rng, std::size_t n, std::size_t dim)
{
    Synthetic d;
    for (std::size_t i = 0; i < n; ++i) {
        Vector v(dim);
        bool zero = true;
        while (zero) {
            for (auto& x : v) {
                x = rng.normal();
                zero = zero && x == 0.0;
            }
        }
        d.xs.push_back(std::move(v));
        d.ys.push_back(i < 4 ? static_cast<Label>(i) : static_cast<Label>(rng.uniform(4)));
    }
    return d;
}

// Gaussian clusters on the unit sphere: one random mean direction per class,
// isotropic noise of the given spread, then normalisation.
inline Synthetic sphere_clusters(emofrnn::SplitMix64& rng, std::size_t n, std::size_t dim, double spread)
{
    std::vector<Vector> centres;
    for (int c = 0; c < emofrnn::kNumClasses; ++c) {
        Vector v(dim);
        double nn = 0.0;
        for (auto& x : v) {
            x = rng.normal();
            nn += x * x;
        }
        for (auto& x : v)
            x /= std::sqrt(nn);
        centres.push_back(v);
    }
    Synthetic d;
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<Label>(i % emofrnn::kNumClasses);
        Vector v = centres[static_cast<std::size_t>(c)];
        double nn = 0.0;
        for (auto& x : v) {
            x += spread * rng.normal();
            nn += x * x;
        }
        for (auto& x : v)
            x /= std::sqrt(nn);
        d.xs.push_back(std::move(v));
        d.ys.push_back(c);
    }
    return d;
}

}  // namespace oracle
