#include "emofrnn/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "emofrnn/error.hpp"
#include "emofrnn/parallel.hpp"

namespace emofrnn {

ModelOutput ModelOutput::from_scores(std::string model_id, const ClassScores& scores)
{
    return {std::move(model_id), emofrnn::predicted_label(scores), scores.confidence, scores.mean_membership};
}

std::string_view to_string(VotingKind kind)
{
    switch (kind) {
    case VotingKind::majority: return "majority";
    case VotingKind::mean: return "mean";
    case VotingKind::rounded_mean: return "rounded_mean";
    case VotingKind::median: return "median";
    case VotingKind::maximum: return "max";
    case VotingKind::minimum: return "min";
    case VotingKind::cs_majority: return "cs_majority";
    case VotingKind::cs_weighted_average: return "cs_wa";
    case VotingKind::cs_wa_rounded: return "cs_wa_rounded";
    case VotingKind::rescaled_wa: return "rescaled_wa";
    case VotingKind::rescaled_wa_rounded: return "rescaled_wa_rounded";
    }
    return "?";
}

std::optional<VotingKind> parse_voting_kind(std::string_view token)
{
    for (VotingKind k : kAllVotingKinds)
        if (token == to_string(k))
            return k;
    return std::nullopt;
}

bool needs_alpha(VotingKind kind)
{
    return kind == VotingKind::rescaled_wa || kind == VotingKind::rescaled_wa_rounded;
}

bool is_label_vote(VotingKind kind)
{
    switch (kind) {
    case VotingKind::majority:
    case VotingKind::mean:
    case VotingKind::rounded_mean:
    case VotingKind::median:
    case VotingKind::maximum:
    case VotingKind::minimum:
        return true;
    default:
        return false;
    }
}

std::string_view to_string(RescaleInput input)
{
    return input == RescaleInput::membership ? "membership" : "confidence";
}

std::optional<RescaleInput> parse_rescale_input(std::string_view token)
{
    if (token == "membership")
        return RescaleInput::membership;
    if (token == "confidence")
        return RescaleInput::confidence;
    return std::nullopt;
}

namespace {

void check_alpha(double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must lie in (0, 1), got " + std::to_string(alpha));
}

void check_outputs(std::span<const ModelOutput> outputs)
{
    if (outputs.empty())
        throw std::invalid_argument("voting over zero model outputs");
}

double weight_at(std::span<const double> weights, std::size_t j)
{
    return weights.empty() ? 1.0 : weights[j];
}

}  // namespace

void validate(const VotingSpec& spec)
{
    if (needs_alpha(spec.kind)) {
        if (!spec.alpha)
            throw std::invalid_argument(std::string(to_string(spec.kind)) + " voting needs alpha");
        check_alpha(*spec.alpha);
    } else if (spec.alpha) {
        throw std::invalid_argument(std::string(to_string(spec.kind)) + " voting takes no alpha");
    }
}

double round_label(double value)
{
    return std::clamp(std::floor(value + 0.5), 0.0, static_cast<double>(kNumClasses - 1));
}

double vote_labels(std::span<const ModelOutput> outputs, VotingKind kind, std::span<const double> weights)
{
    check_outputs(outputs);
    if (!weights.empty() && weights.size() != outputs.size())
        throw std::invalid_argument("vote_labels: one weight per output expected");
    for (std::size_t j = 0; j < weights.size(); ++j)
        if (!(weights[j] >= 0.0))
            throw std::invalid_argument("vote_labels: weights must be non-negative");

    std::vector<double> present;
    for (std::size_t j = 0; j < outputs.size(); ++j)
        if (weight_at(weights, j) > 0.0)
            present.push_back(outputs[j].predicted_label);
    if (present.empty())
        throw std::invalid_argument("vote_labels: all weights are zero");

    switch (kind) {
    case VotingKind::majority: {
        ClassArray counts{};
        for (std::size_t j = 0; j < outputs.size(); ++j)
            counts[static_cast<std::size_t>(outputs[j].predicted_label)] += weight_at(weights, j);
        return argmax_lowest(counts);
    }
    case VotingKind::mean:
    case VotingKind::rounded_mean: {
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < outputs.size(); ++j) {
            num += weight_at(weights, j) * outputs[j].predicted_label;
            den += weight_at(weights, j);
        }
        const double mean = num / den;
        return kind == VotingKind::mean ? mean : round_label(mean);
    }
    case VotingKind::median: {
        std::sort(present.begin(), present.end());
        const std::size_t n = present.size();
        return n % 2 == 1 ? present[n / 2] : (present[n / 2 - 1] + present[n / 2]) / 2.0;
    }
    case VotingKind::maximum:
        return *std::max_element(present.begin(), present.end());
    case VotingKind::minimum:
        return *std::min_element(present.begin(), present.end());
    default:
        throw std::invalid_argument("vote_labels: " + std::string(to_string(kind))
                                    + " is not a label-level vote");
    }
}

Label cs_majority(std::span<const ModelOutput> outputs)
{
    check_outputs(outputs);
    ClassArray sums{};
    for (const auto& o : outputs)
        for (std::size_t c = 0; c < kNumClasses; ++c)
            sums[c] += o.confidence[c];
    return argmax_lowest(sums);
}

double cs_weighted_average(std::span<const ModelOutput> outputs)
{
    check_outputs(outputs);
    double num = 0.0, den = 0.0;
    for (const auto& o : outputs) {
        const double c = o.confidence[static_cast<std::size_t>(o.predicted_label)];
        num += c * o.predicted_label;
        den += c;
    }
    if (!(den > 0.0))
        throw std::domain_error("cs_weighted_average: confidences sum to zero");
    return num / den;
}

ClassArray rescale_confidences(std::span<const ModelOutput> outputs, double alpha, RescaleInput input)
{
    check_alpha(alpha);
    check_outputs(outputs);
    ClassArray z{};
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        double sum = 0.0;
        for (const auto& o : outputs) {
            const double s = input == RescaleInput::membership ? o.mean_membership[c] : o.confidence[c];
            sum += s - 0.5;
        }
        z[c] = sum / alpha;
    }
    const double top = *std::max_element(z.begin(), z.end());
    double total = 0.0;
    for (double& v : z) {
        v = std::exp(v - top);
        total += v;
    }
    for (double& v : z)
        v /= total;
    return z;
}

double rescaled_wa_predict(std::span<const ModelOutput> outputs, double alpha, RescaleInput input)
{
    const ClassArray p = rescale_confidences(outputs, alpha, input);
    double expected = 0.0;
    for (std::size_t c = 0; c < kNumClasses; ++c)
        expected += static_cast<double>(c) * p[c];
    return std::clamp(expected, 0.0, static_cast<double>(kNumClasses - 1));
}

double vote(std::span<const ModelOutput> outputs, const VotingSpec& spec, std::span<const double> weights)
{
    switch (spec.kind) {
    case VotingKind::cs_majority:
        return cs_majority(outputs);
    case VotingKind::cs_weighted_average:
        return cs_weighted_average(outputs);
    case VotingKind::cs_wa_rounded:
        return round_label(cs_weighted_average(outputs));
    case VotingKind::rescaled_wa:
    case VotingKind::rescaled_wa_rounded: {
        if (!spec.alpha)
            throw std::invalid_argument("rescaled voting needs alpha");
        const double v = rescaled_wa_predict(outputs, *spec.alpha, spec.rescale_input);
        return spec.kind == VotingKind::rescaled_wa ? v : round_label(v);
    }
    default:
        return vote_labels(outputs, spec.kind, weights);
    }
}

std::size_t OutOfFoldTable::index_of(std::string_view model_id) const
{
    for (std::size_t m = 0; m < model_ids.size(); ++m)
        if (model_ids[m] == model_id)
            return m;
    throw std::invalid_argument("unknown model '" + std::string(model_id) + "'");
}

namespace {

void check_aligned(const std::vector<MemberModel>& members)
{
    if (members.empty())
        throw std::invalid_argument("ensemble without members");
    const auto& ref = members.front().data;
    for (const auto& m : members) {
        if (m.data.size() != ref.size())
            throw DataError("model " + m.id + " has " + std::to_string(m.data.size())
                            + " instances, model " + members.front().id + " has "
                            + std::to_string(ref.size()));
        for (std::size_t i = 0; i < ref.size(); ++i)
            if (m.data.instances[i].id != ref.instances[i].id
                || m.data.instances[i].label != ref.instances[i].label)
                throw DataError("model " + m.id + " disagrees with model " + members.front().id
                                + " at instance " + std::to_string(i));
    }
}

}  // namespace

OutOfFoldTable out_of_fold_outputs(const std::vector<MemberModel>& members, const FoldAssignment& folds)
{
    check_aligned(members);
    OutOfFoldTable table;
    table.truth = members.front().data.labels();
    table.folds = folds;
    if (folds.fold_of.size() != table.truth.size())
        throw std::invalid_argument("fold assignment does not match the dataset");
    for (const auto& m : members) {
        table.model_ids.push_back(m.id);
        table.outputs.emplace_back(table.truth.size());
    }

    std::vector<std::vector<std::size_t>> train(folds.folds), test(folds.folds);
    for (std::size_t f = 0; f < folds.folds; ++f) {
        train[f] = folds.train_indices(f);
        test[f] = folds.test_indices(f);
    }

    // One task per (model, fold); each fills disjoint slots of the table.
    parallel_for(members.size() * folds.folds, [&](std::size_t task) {
        const std::size_t m = task / folds.folds;
        const std::size_t f = task % folds.folds;
        const auto& member = members[m];
        const auto model = FrnnModel::fit(member.data.select(train[f]), member.config);
        for (std::size_t i : test[f])
            table.outputs[m][i] =
                ModelOutput::from_scores(member.id, model.approximations(member.data.instances[i].vector));
    });
    return table;
}

ScoreReport ensemble_cv_score(const OutOfFoldTable& table, std::span<const std::size_t> members,
                              const VotingSpec& spec, std::span<const double> weights)
{
    validate(spec);
    if (members.empty())
        throw std::invalid_argument("ensemble without members");
    for (std::size_t m : members)
        if (m >= table.outputs.size())
            throw std::invalid_argument("ensemble member index out of range");

    return cross_validate(table.truth, table.folds,
                          [&](const std::vector<std::size_t>&, const std::vector<std::size_t>& test) {
                              std::vector<double> out;
                              out.reserve(test.size());
                              std::vector<ModelOutput> row(members.size());
                              for (std::size_t i : test) {
                                  for (std::size_t j = 0; j < members.size(); ++j)
                                      row[j] = table.outputs[members[j]][i];
                                  out.push_back(vote(row, spec, weights));
                              }
                              return out;
                          });
}

AlphaChoice tune_alpha(const OutOfFoldTable& table, std::span<const std::size_t> members,
                       std::span<const double> grid, RescaleInput input)
{
    if (grid.empty())
        throw std::invalid_argument("tune_alpha: empty grid");
    for (double a : grid)
        check_alpha(a);

    AlphaChoice choice;
    choice.scores.assign(grid.size(), 0.0);
    parallel_for(grid.size(), [&](std::size_t g) {
        const VotingSpec spec{VotingKind::rescaled_wa, grid[g], input};
        choice.scores[g] = ensemble_cv_score(table, members, spec).mean_pcc;
    });

    std::size_t best = 0;
    for (std::size_t g = 1; g < grid.size(); ++g) {
        const double s = choice.scores[g];
        const double b = choice.scores[best];
        if (s > b || (s == b && grid[g] < grid[best]))
            best = g;
    }
    choice.alpha = grid[best];
    choice.pcc = choice.scores[best];
    return choice;
}

std::vector<double> default_alpha_grid()
{
    std::vector<double> grid;
    for (int i = 1; i <= 50; ++i)
        grid.push_back(0.002 * i);
    return grid;
}

SubsetChoice select_models(const OutOfFoldTable& table, std::span<const std::size_t> candidates,
                           const VotingSpec& spec)
{
    validate(spec);
    const std::size_t n = candidates.size();
    if (n == 0)
        throw std::invalid_argument("select_models: no candidates");
    if (n > 16)
        throw std::invalid_argument("select_models: at most 16 candidates");

    // Positions within `candidates`, ordered by size then lexicographically.
    std::vector<std::vector<std::size_t>> subsets;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<std::size_t> s;
        for (std::size_t b = 0; b < n; ++b)
            if (mask & (1u << b))
                s.push_back(b);
        subsets.push_back(std::move(s));
    }
    std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });

    std::vector<double> scores(subsets.size());
    parallel_for(subsets.size(), [&](std::size_t s) {
        std::vector<std::size_t> members;
        for (std::size_t pos : subsets[s])
            members.push_back(candidates[pos]);
        scores[s] = ensemble_cv_score(table, members, spec).mean_pcc;
    });

    std::size_t best = 0;
    for (std::size_t s = 1; s < subsets.size(); ++s)
        if (scores[s] > scores[best])
            best = s;

    SubsetChoice choice;
    for (std::size_t pos : subsets[best])
        choice.members.push_back(candidates[pos]);
    choice.pcc = scores[best];
    return choice;
}

std::vector<double> ensemble_predict(const std::vector<MemberModel>& members,
                                     const std::vector<std::vector<Vector>>& queries,
                                     const VotingSpec& spec, std::span<const double> weights)
{
    validate(spec);
    if (members.empty())
        throw std::invalid_argument("ensemble without members");
    if (queries.size() != members.size())
        throw std::invalid_argument("ensemble_predict: one query list per member expected");
    const std::size_t n = queries.front().size();
    for (const auto& q : queries)
        if (q.size() != n)
            throw std::invalid_argument("ensemble_predict: query lists of unequal length");

    std::vector<std::vector<ModelOutput>> outputs(members.size());
    for (std::size_t m = 0; m < members.size(); ++m) {
        const auto model = FrnnModel::fit(members[m].data, members[m].config);
        const auto scores = model.approximations(queries[m]);
        outputs[m].reserve(n);
        for (const auto& s : scores)
            outputs[m].push_back(ModelOutput::from_scores(members[m].id, s));
    }

    std::vector<double> votes(n);
    std::vector<ModelOutput> row(members.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t m = 0; m < members.size(); ++m)
            row[m] = outputs[m][i];
        votes[i] = vote(row, spec, weights);
    }
    return votes;
}

}  // namespace emofrnn
