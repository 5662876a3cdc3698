#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "emofrnn/config.hpp"
#include "emofrnn/dataset.hpp"
#include "emofrnn/ensemble.hpp"
#include "emofrnn/eval.hpp"
#include "emofrnn/preprocess.hpp"

namespace emofrnn {

/// Loads and caches task files and vector tables referenced by a config.
class Workspace {
public:
    explicit Workspace(const ExperimentConfig& cfg);

    const ExperimentConfig& config() const { return cfg_; }

    /// Train and dev records merged, train first.
    const std::vector<TextRecord>& training_records(Emotion emotion);
    /// Test records; labels optional. Throws ConfigError when [data] has no test file.
    const std::vector<TextRecord>& test_records(Emotion emotion);

    /// Merged train+dev dataset as seen by `model` at preparation `prep`.
    const VectorDataset& training_data(const ModelSection& model, Emotion emotion, PrepLevel prep);
    const VectorDataset& training_data(const ModelSection& model, Emotion emotion)
    {
        return training_data(model, emotion, model.prep);
    }
    /// Test vectors for `model`, aligned with test_records().
    std::vector<Vector> test_vectors(const ModelSection& model, Emotion emotion);

    /// FRNN setup of `model` for `emotion`; k = auto becomes default_k(N).
    FrnnConfig frnn_config(const ModelSection& model, Emotion emotion);

    /// Fails with DataError if any file needed by `models` at `preps` is missing.
    void check_files(const std::vector<const ModelSection*>& models,
                     const std::vector<Emotion>& emotions, const std::vector<PrepLevel>& preps,
                     bool need_test) const;

private:
    const VectorTable& table(const std::filesystem::path& path);
    std::vector<Vector> vectors_for(const ModelSection& model, Emotion emotion, PrepLevel prep,
                                    const std::vector<TextRecord>& records, std::string_view split);

    const ExperimentConfig& cfg_;
    std::map<std::filesystem::path, VectorTable> tables_;
    std::map<Emotion, std::vector<TextRecord>> training_records_;
    std::map<Emotion, std::vector<TextRecord>> test_records_;
    std::map<std::string, VectorDataset> datasets_;
};

struct PreprocessOptions {
    PrepLevel level = PrepLevel::standard;
    const EmojiTable* emoji = &EmojiTable::bundled();
    const StopList* stoplist = &StopList::bundled();
};

/// Rewrites the tweet column of a task file with clean_tweet output.
void cmd_preprocess(std::istream& in, std::ostream& out, const PreprocessOptions& opts);

/// Class balance of the merged train+dev data per emotion:
/// `emotion total n0 n1 n2 n3 smallest ir`.
std::map<Emotion, ClassStats> cmd_stats(const ExperimentConfig& cfg,
                                        const std::vector<Emotion>& emotions, std::ostream& out);

struct SweepRow {
    Emotion emotion = Emotion::anger;
    std::string model;
    PrepLevel prep = PrepLevel::standard;
    OwaScheme scheme = OwaScheme::add;
    std::size_t k = 1;
    ScoreReport report;
};

/// Every (model, preparation, scheme, k) of the sweep grid, with the same
/// scheme for both approximations. Rows are sorted by mean PCC, best first,
/// within each emotion. Models whose vectors exist for one preparation only
/// are swept at that preparation.
std::vector<SweepRow> cmd_sweep(const ExperimentConfig& cfg, const std::vector<Emotion>& emotions,
                                std::ostream& out, std::ostream& log);

struct EnsembleResult {
    Emotion emotion = Emotion::anger;
    ScoreReport report;
    /// Present when a test file was scored.
    std::vector<std::pair<std::string, Label>> predictions;
    std::optional<double> test_pcc;
};

/// Cross-validated score of the configured ensemble per emotion. With
/// `test_file`, also fits on all of train+dev and writes rounded test
/// predictions (`id<TAB>label`) to `predictions_out`.
std::vector<EnsembleResult> cmd_ensemble(const ExperimentConfig& cfg,
                                         const std::vector<Emotion>& emotions, std::ostream& out,
                                         std::ostream& log,
                                         const std::optional<std::filesystem::path>& test_file = {},
                                         std::ostream* predictions_out = nullptr);

struct TuneResult {
    Emotion emotion = Emotion::anger;
    AlphaChoice alpha;
    std::vector<std::string> members;
    double pcc = 0.0;
};

/// Alpha grid search over all configured members, then (with subset_search)
/// the best member subset under the rounded rescaled weighted average.
std::vector<TuneResult> cmd_tune(const ExperimentConfig& cfg, const std::vector<Emotion>& emotions,
                                 std::ostream& out, std::ostream& log);

/// Fits the configured ensemble on train+dev and writes rounded predictions
/// for the [data] test file of each emotion to `out_pattern` ({emotion} is
/// substituted). Labeled test files are also scored.
std::vector<EnsembleResult> cmd_predict(const ExperimentConfig& cfg,
                                        const std::vector<Emotion>& emotions,
                                        const std::string& out_pattern, std::ostream& report,
                                        std::ostream& log);

/// Comment line recording command, seed and config digest.
std::string output_header(std::string_view command, const ExperimentConfig& cfg);

}  // namespace emofrnn
