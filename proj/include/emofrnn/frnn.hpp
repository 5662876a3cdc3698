#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "emofrnn/dataset.hpp"
#include "emofrnn/owa.hpp"
#include "emofrnn/similarity.hpp"
#include "emofrnn/types.hpp"

namespace emofrnn {

struct FrnnConfig {
    std::size_t k = 1;
    OwaScheme lower = OwaScheme::add;
    OwaScheme upper = OwaScheme::add;
};

/// Fuzzy-rough memberships of one query in each class.
struct ClassScores {
    ClassArray lower{};
    ClassArray upper{};
    /// (lower + upper) / 2
    ClassArray mean_membership{};
    /// mean_membership normalised to sum to 1
    ClassArray confidence{};
};

/// Similarities of one query to its nearest training instances, per class,
/// sorted non-increasing. Each list holds min(depth, class size) entries.
using ClassNeighbours = std::array<std::vector<double>, kNumClasses>;

/// Lower and upper approximations from precomputed neighbour lists:
///
///   upper(C) = OWA_upper { R(x,y) : x among the k nearest of y in C }
///   lower(C) = OWA_lower { 1 - R(x,y) : x among the k nearest of y outside C }
///
/// When fewer than k candidates exist the weights are built for the actual
/// count. Lists must be at least min(k, class size) deep.
ClassScores scores_from_neighbours(const ClassNeighbours& neighbours,
                                   const std::array<std::size_t, kNumClasses>& class_sizes,
                                   const FrnnConfig& cfg);

/// Scores closer than this count as tied. Weight vectors of different
/// lengths sum to 1 only up to rounding, so exact ties in degenerate data
/// (duplicate or antipodal vectors) would otherwise be broken by noise.
inline constexpr double kTieTolerance = 1e-12;

/// Lowest label whose value is within kTieTolerance of the largest.
Label argmax_lowest(const ClassArray& values);

/// mean memberships divided by their sum. Throws std::domain_error when the
/// sum is not positive.
ClassArray normalize_confidence(const ClassArray& mean_membership);

/// Lazy fuzzy-rough nearest-neighbour classifier with OWA approximations.
/// Immutable after fit; all queries are safe to run concurrently.
class FrnnModel {
public:
    /// Throws DataError if any of the four labels has no instance, and
    /// std::invalid_argument for k = 0 or zero vectors.
    static FrnnModel fit(const VectorDataset& ds, const FrnnConfig& cfg);

    const FrnnConfig& config() const { return cfg_; }
    std::size_t dimension() const { return dimension_; }
    const std::array<std::size_t, kNumClasses>& class_sizes() const { return sizes_; }

    /// Per-class neighbour similarity lists of depth `depth`.
    ClassNeighbours neighbours(std::span<const double> query, std::size_t depth) const;

    ClassScores approximations(std::span<const double> query) const;
    /// argmax over labels of lower + upper.
    Label predict(std::span<const double> query) const;
    ClassArray confidence_vector(std::span<const double> query) const;

    /// Batch form of approximations(); evaluated in parallel, output in query order.
    std::vector<ClassScores> approximations(const std::vector<Vector>& queries) const;

private:
    FrnnConfig cfg_;
    std::size_t dimension_ = 0;
    std::array<VectorPool, kNumClasses> pools_;
    std::array<std::size_t, kNumClasses> sizes_{};
};

/// Label from already computed scores (argmax of lower + upper).
Label predicted_label(const ClassScores& scores);

}  // namespace emofrnn
