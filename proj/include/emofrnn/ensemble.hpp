#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emofrnn/dataset.hpp"
#include "emofrnn/eval.hpp"
#include "emofrnn/frnn.hpp"
#include "emofrnn/types.hpp"

namespace emofrnn {

/// What one member model says about one query.
struct ModelOutput {
    std::string model_id;
    Label predicted_label = 0;
    ClassArray confidence{};
    ClassArray mean_membership{};

    static ModelOutput from_scores(std::string model_id, const ClassScores& scores);
};

enum class VotingKind {
    majority,
    mean,
    rounded_mean,
    median,
    maximum,
    minimum,
    cs_majority,
    cs_weighted_average,
    cs_wa_rounded,
    rescaled_wa,
    rescaled_wa_rounded,
};

inline constexpr VotingKind kAllVotingKinds[] = {
    VotingKind::majority,    VotingKind::mean,          VotingKind::rounded_mean,
    VotingKind::median,      VotingKind::maximum,       VotingKind::minimum,
    VotingKind::cs_majority, VotingKind::cs_weighted_average, VotingKind::cs_wa_rounded,
    VotingKind::rescaled_wa, VotingKind::rescaled_wa_rounded};

/// Config tokens: majority|mean|rounded_mean|median|max|min|cs_majority|
/// cs_wa|cs_wa_rounded|rescaled_wa|rescaled_wa_rounded
std::string_view to_string(VotingKind kind);
std::optional<VotingKind> parse_voting_kind(std::string_view token);

bool needs_alpha(VotingKind kind);
bool is_label_vote(VotingKind kind);

/// Scores fed to the rescaled softmax: the raw mean memberships
/// (lower + upper) / 2, or the per-model normalised confidences.
enum class RescaleInput { membership, confidence };

std::string_view to_string(RescaleInput input);
std::optional<RescaleInput> parse_rescale_input(std::string_view token);

struct VotingSpec {
    VotingKind kind = VotingKind::mean;
    std::optional<double> alpha;
    RescaleInput rescale_input = RescaleInput::membership;
};

/// Throws std::invalid_argument when alpha is missing for a rescaled vote,
/// present for any other vote, or outside (0, 1).
void validate(const VotingSpec& spec);

/// Nearest label, halves rounded up, clamped to [0, 3].
double round_label(double value);

/// Label-level votes over member predictions. `weights` (one per output,
/// empty for all ones) scale each member's say in majority and mean votes;
/// median, maximum and minimum ignore members of weight zero. Majority ties
/// go to the lowest label; median of an even count averages the middle pair.
double vote_labels(std::span<const ModelOutput> outputs, VotingKind kind,
                   std::span<const double> weights = {});

/// Label with the largest summed confidence; ties to the lowest label.
Label cs_majority(std::span<const ModelOutput> outputs);

/// Members' own labels averaged with their confidence in that label as weight.
double cs_weighted_average(std::span<const ModelOutput> outputs);

/// Temperature softmax of the 0.5-centred scores summed over members:
///
///   C_i = exp(sum_j (S_ij - 0.5) / alpha) / sum_k exp(sum_j (S_kj - 0.5) / alpha)
///
/// Evaluated with the maximum exponent subtracted first.
ClassArray rescale_confidences(std::span<const ModelOutput> outputs, double alpha,
                               RescaleInput input = RescaleInput::membership);

/// Expected label under rescale_confidences.
double rescaled_wa_predict(std::span<const ModelOutput> outputs, double alpha,
                           RescaleInput input = RescaleInput::membership);

/// Applies any voting function. Result lies in [0, 3].
double vote(std::span<const ModelOutput> outputs, const VotingSpec& spec,
            std::span<const double> weights = {});

/// A member model: its tweet vectors for the training data and its FRNN setup.
struct MemberModel {
    std::string id;
    VectorDataset data;
    FrnnConfig config;
};

/// Out-of-fold outputs of candidate models: outputs[m][i] is model m's
/// output for instance i, produced by the model fitted on the folds that
/// exclude i. Every ensemble score below is computed from this table, which
/// makes it identical to a full cross-validation of that ensemble.
struct OutOfFoldTable {
    std::vector<std::string> model_ids;
    std::vector<std::vector<ModelOutput>> outputs;
    std::vector<Label> truth;
    FoldAssignment folds;

    std::size_t index_of(std::string_view model_id) const;
};

/// Fits and predicts every (model, fold) pair. All members must describe the
/// same instances in the same order with the same labels.
OutOfFoldTable out_of_fold_outputs(const std::vector<MemberModel>& members,
                                   const FoldAssignment& folds);

/// Cross-validated score of the ensemble formed by `members` (indices into
/// the table): mean over folds of the PCC between gold labels and votes.
ScoreReport ensemble_cv_score(const OutOfFoldTable& table, std::span<const std::size_t> members,
                              const VotingSpec& spec, std::span<const double> weights = {});

struct AlphaChoice {
    double alpha = 0.0;
    double pcc = 0.0;
    /// Score of every grid value, in grid order.
    std::vector<double> scores;
};

/// Grid search for the rescaled weighted-average temperature, scored
/// unrounded. Ties go to the smaller alpha; undefined scores count as -inf.
AlphaChoice tune_alpha(const OutOfFoldTable& table, std::span<const std::size_t> members,
                       std::span<const double> grid,
                       RescaleInput input = RescaleInput::membership);

/// 0.002, 0.004, ..., 0.100
std::vector<double> default_alpha_grid();

struct SubsetChoice {
    std::vector<std::size_t> members;
    double pcc = 0.0;
};

/// Exhaustive search over the non-empty subsets of `candidates` (at most 16).
/// Ties go to the smaller subset, then to the lexicographically first one in
/// candidate order.
SubsetChoice select_models(const OutOfFoldTable& table, std::span<const std::size_t> candidates,
                           const VotingSpec& spec);

/// Fits every member on its full data and votes on the queries (one vector
/// list per member, aligned by query). Returns unrounded votes.
std::vector<double> ensemble_predict(const std::vector<MemberModel>& members,
                                     const std::vector<std::vector<Vector>>& queries,
                                     const VotingSpec& spec, std::span<const double> weights = {});

}  // namespace emofrnn
