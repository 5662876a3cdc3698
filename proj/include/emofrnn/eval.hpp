#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emofrnn/dataset.hpp"
#include "emofrnn/frnn.hpp"
#include "emofrnn/types.hpp"

namespace emofrnn {

/// Pearson correlation coefficient. Throws std::invalid_argument for unequal
/// lengths or fewer than two points, and std::domain_error ("undefined
/// correlation") when either input is constant.
double pcc(std::span<const double> x, std::span<const double> y);

/// pcc, with an undefined correlation scored as -infinity.
double pcc_or_neg_inf(std::span<const double> x, std::span<const double> y);

/// Stratified fold membership. Within each class the instances are shuffled
/// by SplitMix64 seeded from (seed, label) and dealt round-robin; the dealing
/// position carries over between classes so overall fold sizes differ by at
/// most one as well.
struct FoldAssignment {
    std::uint64_t seed = 0;
    std::size_t folds = 5;
    std::vector<std::size_t> fold_of;

    std::vector<std::size_t> test_indices(std::size_t fold) const;
    std::vector<std::size_t> train_indices(std::size_t fold) const;
};

/// Throws DataError when a class has fewer than `folds` members.
FoldAssignment make_folds(const std::vector<Label>& labels, std::uint64_t seed, std::size_t folds = 5);
FoldAssignment make_folds(const VectorDataset& ds, std::uint64_t seed, std::size_t folds = 5);

struct ScoreReport {
    std::vector<double> per_fold;
    double mean_pcc = 0.0;
    std::string config_digest;
    std::vector<std::string> warnings;
};

/// Predictions for `test` after fitting on `train` (indices into the dataset).
using FoldPredictor = std::function<std::vector<double>(const std::vector<std::size_t>& train,
                                                        const std::vector<std::size_t>& test)>;

/// Runs every fold (in parallel), scoring each with pcc against `truth`.
/// A fold whose correlation is undefined scores -infinity and adds a warning.
ScoreReport cross_validate(const std::vector<Label>& truth, const FoldAssignment& folds,
                           const FoldPredictor& predictor, std::string config_digest = {});

/// Single FRNN model, scored on its predicted labels.
ScoreReport cross_validate(const VectorDataset& ds, const FrnnConfig& cfg,
                           const FoldAssignment& folds, std::string config_digest = {});

/// Cross-validates several FRNN configurations on the same folds. Each test
/// instance's neighbour lists are computed once, at the largest k, and
/// shared by all configurations; report r belongs to configs[r].
std::vector<ScoreReport> cross_validate_grid(const VectorDataset& ds,
                                             const std::vector<FrnnConfig>& configs,
                                             const FoldAssignment& folds);

/// Welch two-sample two-sided t-test p-value. Throws std::invalid_argument for
/// samples smaller than two and std::domain_error when both samples have zero
/// variance.
double t_test_two_sided(std::span<const double> a, std::span<const double> b);

/// Mean over the four emotions; throws std::invalid_argument unless all four
/// are present.
double average_emotions(const std::map<Emotion, double>& scores);

/// FNV-1a 64-bit digest as 16 hex digits.
std::string config_digest(std::string_view canonical_text);

/// `config_digest<TAB>fold0 ... foldN<TAB>mean`
void write_score_report(std::ostream& out, const ScoreReport& report);

}  // namespace emofrnn
