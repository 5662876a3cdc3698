#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "emofrnn/ensemble.hpp"
#include "emofrnn/owa.hpp"
#include "emofrnn/preprocess.hpp"
#include "emofrnn/types.hpp"

namespace emofrnn {

/// Task files. Paths may contain the placeholder {emotion}.
struct DataSection {
    std::string train;
    std::string dev;
    std::string test;
    std::vector<Emotion> emotions{kAllEmotions.begin(), kAllEmotions.end()};
};

/// One embedding model. Exactly one of `vectors` (one vector per tweet id)
/// and `word_vectors` (one vector per word, tweets pooled by mean after
/// cleaning) is set. `vectors` may use the placeholders {emotion}, {prep}
/// and {split}.
struct ModelSection {
    std::string id;
    std::string vectors;
    std::string word_vectors;
    PrepLevel prep = PrepLevel::standard;
    /// Empty selects default_k of the training-set size.
    std::optional<std::size_t> k;
    OwaScheme lower = OwaScheme::add;
    OwaScheme upper = OwaScheme::add;

    /// Whether vectors exist for preparation levels other than `prep`.
    bool supports_prep_sweep() const;
};

struct EnsembleSection {
    std::vector<std::string> members;
    VotingSpec voting;
    std::vector<double> alpha_grid = default_alpha_grid();
    bool subset_search = false;
    /// Per-member weights for label-level votes; absent members weigh 1.
    std::map<std::string, double> weights;
};

struct EvalSection {
    std::uint64_t seed = 42;
    std::size_t folds = 5;
};

struct SweepSection {
    std::vector<OwaScheme> schemes{OwaScheme::strict, OwaScheme::add, OwaScheme::exp, OwaScheme::mean};
    std::vector<std::size_t> ks{5, 7, 9, 11, 13, 15, 17, 19, 21, 23};
    std::vector<PrepLevel> preps{PrepLevel::raw, PrepLevel::standard, PrepLevel::stopwords};
};

/// A full experiment description, read from a sectioned key = value file:
///
///     [data]            train, dev, test, emotions
///     [model <id>]      vectors | word_vectors, prep, k, lower, upper
///     [ensemble]        members, voting, alpha, alpha_grid, rescale_input,
///                       subset_search, weights
///     [eval]            seed, folds
///     [sweep]           schemes, k, preps
///
/// Lists are comma separated; numeric grids also accept `start:stop:step`.
/// Lines starting with '#' or ';' are comments. Relative paths resolve
/// against the directory of the config file.
struct ExperimentConfig {
    std::filesystem::path base_dir;
    DataSection data;
    std::vector<ModelSection> models;
    std::optional<EnsembleSection> ensemble;
    EvalSection eval;
    SweepSection sweep;

    /// Throws ConfigError with the offending line number.
    static ExperimentConfig parse(std::istream& in, const std::filesystem::path& base_dir = {});
    static ExperimentConfig load(const std::filesystem::path& path);

    const ModelSection& model(const std::string& id) const;

    /// Path with placeholders substituted, resolved against base_dir.
    std::filesystem::path resolve(const std::string& pattern, std::optional<Emotion> emotion = {},
                                  std::optional<PrepLevel> prep = {},
                                  std::string_view split = {}) const;

    /// Deterministic normalised rendering, the input of the config digest.
    std::string canonical() const;
    std::string digest() const;
};

}  // namespace emofrnn
