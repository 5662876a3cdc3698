#include "emofrnn/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

#include "emofrnn/error.hpp"
#include "emofrnn/parallel.hpp"
#include "emofrnn/rng.hpp"

namespace emofrnn {

double pcc(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("pcc: vectors of unequal length");
    if (x.size() < 2)
        throw std::invalid_argument("pcc: need at least two points");

    // Welford-style co-moments.
    double mean_x = 0.0, mean_y = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double n = static_cast<double>(i + 1);
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        mean_x += dx / n;
        mean_y += dy / n;
        const double ex = x[i] - mean_x;
        const double ey = y[i] - mean_y;
        sxx += dx * ex;
        syy += dy * ey;
        sxy += dx * ey;
    }
    if (!(sxx > 0.0) || !(syy > 0.0))
        throw std::domain_error("undefined correlation (constant input)");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pcc_or_neg_inf(std::span<const double> x, std::span<const double> y)
{
    try {
        return pcc(x, y);
    } catch (const std::domain_error&) {
        return -std::numeric_limits<double>::infinity();
    }
}

std::vector<std::size_t> FoldAssignment::test_indices(std::size_t fold) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i)
        if (fold_of[i] == fold)
            out.push_back(i);
    return out;
}

std::vector<std::size_t> FoldAssignment::train_indices(std::size_t fold) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i)
        if (fold_of[i] != fold)
            out.push_back(i);
    return out;
}

FoldAssignment make_folds(const std::vector<Label>& labels, std::uint64_t seed, std::size_t folds)
{
    if (folds < 2)
        throw std::invalid_argument("make_folds: need at least two folds");
    std::array<std::vector<std::size_t>, kNumClasses> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!is_valid_label(labels[i]))
            throw DataError("make_folds: label outside 0-3");
        members[static_cast<std::size_t>(labels[i])].push_back(i);
    }

    FoldAssignment out;
    out.seed = seed;
    out.folds = folds;
    out.fold_of.assign(labels.size(), 0);
    std::size_t offset = 0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
        if (members[c].size() < folds)
            throw DataError("class " + std::to_string(c) + " has " + std::to_string(members[c].size())
                            + " instances, fewer than " + std::to_string(folds) + " folds");
        SplitMix64 rng(mix_seed(seed, c));
        rng.shuffle(members[c]);
        for (std::size_t j = 0; j < members[c].size(); ++j)
            out.fold_of[members[c][j]] = (offset + j) % folds;
        offset += members[c].size();
    }
    return out;
}

FoldAssignment make_folds(const VectorDataset& ds, std::uint64_t seed, std::size_t folds)
{
    return make_folds(ds.labels(), seed, folds);
}

ScoreReport cross_validate(const std::vector<Label>& truth, const FoldAssignment& folds,
                           const FoldPredictor& predictor, std::string digest)
{
    if (folds.fold_of.size() != truth.size())
        throw std::invalid_argument("cross_validate: fold assignment does not match the dataset");

    ScoreReport report;
    report.config_digest = std::move(digest);
    report.per_fold.assign(folds.folds, 0.0);
    std::vector<std::string> fold_warning(folds.folds);

    parallel_for(folds.folds, [&](std::size_t f) {
        const auto train = folds.train_indices(f);
        const auto test = folds.test_indices(f);
        const std::vector<double> predicted = predictor(train, test);
        if (predicted.size() != test.size())
            throw std::logic_error("cross_validate: predictor returned wrong number of values");
        std::vector<double> gold;
        gold.reserve(test.size());
        for (std::size_t i : test)
            gold.push_back(truth[i]);
        try {
            report.per_fold[f] = pcc(gold, predicted);
        } catch (const std::exception& e) {
            report.per_fold[f] = -std::numeric_limits<double>::infinity();
            fold_warning[f] = "fold " + std::to_string(f) + ": " + e.what();
        }
    });

    for (auto& w : fold_warning)
        if (!w.empty())
            report.warnings.push_back(std::move(w));
    double sum = 0.0;
    for (double s : report.per_fold)
        sum += s;
    report.mean_pcc = sum / static_cast<double>(report.per_fold.size());
    return report;
}

ScoreReport cross_validate(const VectorDataset& ds, const FrnnConfig& cfg,
                           const FoldAssignment& folds, std::string digest)
{
    const auto truth = ds.labels();
    return cross_validate(
        truth, folds,
        [&](const std::vector<std::size_t>& train, const std::vector<std::size_t>& test) {
            const auto model = FrnnModel::fit(ds.select(train), cfg);
            std::vector<double> out(test.size());
            parallel_for(test.size(), [&](std::size_t i) {
                out[i] = model.predict(ds.instances[test[i]].vector);
            });
            return out;
        },
        std::move(digest));
}

std::vector<ScoreReport> cross_validate_grid(const VectorDataset& ds,
                                             const std::vector<FrnnConfig>& configs,
                                             const FoldAssignment& folds)
{
    if (configs.empty())
        return {};
    if (folds.fold_of.size() != ds.size())
        throw std::invalid_argument("cross_validate_grid: fold assignment does not match the dataset");
    std::size_t depth = 0;
    for (const auto& c : configs)
        depth = std::max(depth, c.k);

    // predictions[r][i]: label for instance i under configs[r], from the fold holding i out.
    std::vector<std::vector<double>> predictions(configs.size(), std::vector<double>(ds.size()));
    for (std::size_t f = 0; f < folds.folds; ++f) {
        const auto test = folds.test_indices(f);
        const auto model = FrnnModel::fit(ds.select(folds.train_indices(f)), FrnnConfig{depth});
        parallel_for(test.size(), [&](std::size_t t) {
            const std::size_t i = test[t];
            const auto lists = model.neighbours(ds.instances[i].vector, depth);
            for (std::size_t r = 0; r < configs.size(); ++r)
                predictions[r][i] =
                    predicted_label(scores_from_neighbours(lists, model.class_sizes(), configs[r]));
        });
    }

    const auto truth = ds.labels();
    std::vector<ScoreReport> reports(configs.size());
    for (std::size_t r = 0; r < configs.size(); ++r)
        reports[r] = cross_validate(
            truth, folds,
            [&](const std::vector<std::size_t>&, const std::vector<std::size_t>& test) {
                std::vector<double> out;
                out.reserve(test.size());
                for (std::size_t i : test)
                    out.push_back(predictions[r][i]);
                return out;
            });
    return reports;
}

double t_test_two_sided(std::span<const double> a, std::span<const double> b)
{
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("t_test: each sample needs at least two values");

    const auto moments = [](std::span<const double> s) {
        double mean = 0.0;
        for (double v : s)
            mean += v;
        mean /= static_cast<double>(s.size());
        double ss = 0.0;
        for (double v : s)
            ss += (v - mean) * (v - mean);
        return std::pair{mean, ss / static_cast<double>(s.size() - 1)};
    };
    const auto [mean_a, var_a] = moments(a);
    const auto [mean_b, var_b] = moments(b);
    if (var_a == 0.0 && var_b == 0.0)
        throw std::domain_error("t_test: both samples have zero variance");

    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double qa = var_a / na;
    const double qb = var_b / nb;
    const double se2 = qa + qb;
    const double t = (mean_a - mean_b) / std::sqrt(se2);
    const double df = se2 * se2 / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));

    // Two-sided tail of Student's t: I_{df/(df+t^2)}(df/2, 1/2).
    const double x = df / (df + t * t);
    if (x >= 1.0)
        return 1.0;
    return boost::math::ibeta(df / 2.0, 0.5, x);
}

double average_emotions(const std::map<Emotion, double>& scores)
{
    double sum = 0.0;
    for (Emotion e : kAllEmotions) {
        const auto it = scores.find(e);
        if (it == scores.end())
            throw std::invalid_argument("average_emotions: missing " + std::string(to_string(e)));
        sum += it->second;
    }
    if (scores.size() != kAllEmotions.size())
        throw std::invalid_argument("average_emotions: expected exactly four emotions");
    return sum / static_cast<double>(kAllEmotions.size());
}

std::string config_digest(std::string_view canonical_text)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canonical_text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream ss;
    ss << std::hex << std::setw(16) << std::setfill('0') << h;
    return ss.str();
}

void write_score_report(std::ostream& out, const ScoreReport& report)
{
    const auto old_precision = out.precision();
    out << std::setprecision(6) << report.config_digest;
    for (double s : report.per_fold)
        out << '\t' << s;
    out << '\t' << report.mean_pcc << '\n';
    out.precision(old_precision);
}

}  // namespace emofrnn
