#pragma once

// Writes a complete synthetic experiment on disk: task files, tweet vector
// files for three models and a word vector table, plus config files.
//
//   strong   clustered tweet vectors
//   weaker   the same clusters with extra noise
//   decoy    strong's vectors dealt to the wrong tweets
//   words    word vectors; tweets are embedded by mean pooling

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "emofrnn/dataset.hpp"
#include "emofrnn/rng.hpp"
#include "emofrnn/types.hpp"

namespace synth {

struct Spec {
    std::size_t n_train = 320;
    std::size_t n_dev = 80;
    std::size_t n_test = 60;
    std::size_t dim = 16;
    double spread = 0.35;
    std::uint64_t seed = 1;
    bool labeled_test = true;
    std::vector<emofrnn::Emotion> emotions{emofrnn::kAllEmotions.begin(), emofrnn::kAllEmotions.end()};
};

namespace detail {

inline emofrnn::Vector unit(emofrnn::SplitMix64& rng, std::size_t dim)
{
    emofrnn::Vector v(dim);
    double nn = 0.0;
    for (auto& x : v) {
        x = rng.normal();
        nn += x * x;
    }
    for (auto& x : v)
        x /= std::sqrt(nn);
    return v;
}

inline emofrnn::Vector around(emofrnn::SplitMix64& rng, const emofrnn::Vector& centre, double spread)
{
    emofrnn::Vector v = centre;
    for (auto& x : v)
        x += spread * rng.normal();
    return v;
}

// Class words are letters only so cleaning leaves them intact: "qab" is
// word 1 of class 0.
inline std::string class_word(int label, std::uint64_t j)
{
    return std::string("q") + static_cast<char>('a' + label) + static_cast<char>('a' + j);
}

inline const char* label_text(int label)
{
    static const char* names[] = {"0: no emotion can be inferred", "1: low amount of emotion can be inferred",
                                  "2: moderate amount of emotion can be inferred",
                                  "3: high amount of emotion can be inferred"};
    return names[label];
}

inline void write_vectors(const std::filesystem::path& p, const std::vector<std::string>& ids,
                          const std::vector<emofrnn::Vector>& vs)
{
    emofrnn::VectorTable t;
    t.dimension = vs.empty() ? 1 : vs.front().size();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        t.order.push_back(ids[i]);
        t.vectors.emplace(ids[i], vs[i]);
    }
    emofrnn::save_vectors(p, t);
}

}  // namespace detail

inline void write_workspace(const std::filesystem::path& dir, const Spec& spec)
{
    using namespace emofrnn;
    std::filesystem::create_directories(dir);
    SplitMix64 rng(spec.seed);

    // Word vocabulary: eight words per class near the class centre, plus
    // shared filler words spread at random.
    std::vector<Vector> centres;
    for (int c = 0; c < kNumClasses; ++c)
        centres.push_back(detail::unit(rng, spec.dim));
    std::vector<std::string> words;
    std::vector<Vector> word_vecs;
    for (int c = 0; c < kNumClasses; ++c)
        for (int j = 0; j < 8; ++j) {
            words.push_back(detail::class_word(c, static_cast<std::uint64_t>(j)));
            word_vecs.push_back(detail::around(rng, centres[static_cast<std::size_t>(c)], 0.3));
        }
    for (const char* f : {"the", "a", "today", "so", "very", "really", "just", "is"}) {
        words.emplace_back(f);
        word_vecs.push_back(detail::unit(rng, spec.dim));
    }
    detail::write_vectors(dir / "words.vec", words, word_vecs);
    const char* fillers[] = {"the", "a", "today", "so", "very", "really", "just", "is"};
    const char* decorations[] = {"@someone", "#mood", ":)", "!!!", "2day", "&", "😡", ""};

    for (Emotion e : spec.emotions) {
        const std::string en(to_string(e));
        const std::pair<const char*, std::size_t> splits[] = {
            {"train", spec.n_train}, {"dev", spec.n_dev}, {"test", spec.n_test}};
        for (const auto& [split, n] : splits) {
            std::ofstream task(dir / (en + "-" + split + ".tsv"), std::ios::binary);
            task << "ID\tTweet\tAffect Dimension\tIntensity Class\n";
            std::vector<std::string> ids;
            std::vector<Vector> strong, weaker;
            for (std::size_t i = 0; i < n; ++i) {
                const int label = static_cast<int>((i + rng.uniform(2)) % kNumClasses);
                const std::string id = "2018-En-" + en + "-" + split + "-" + std::to_string(i);
                std::string text;
                const auto n_words = 3 + rng.uniform(4);
                for (std::uint64_t w = 0; w < n_words; ++w) {
                    if (!text.empty())
                        text += ' ';
                    if (w > 0 && rng.uniform(3) == 0)
                        text += fillers[rng.uniform(8)];
                    else
                        text += detail::class_word(label, rng.uniform(8));
                }
                text += std::string(" ") + decorations[rng.uniform(8)];
                task << id << '\t' << text << '\t' << en << '\t'
                     << (split == std::string("test") && !spec.labeled_test ? "NONE" : detail::label_text(label))
                     << '\n';
                ids.push_back(id);
                strong.push_back(detail::around(rng, centres[static_cast<std::size_t>(label)], spec.spread));
                weaker.push_back(detail::around(rng, strong.back(), spec.spread));
            }
            auto decoy = strong;
            rng.shuffle(decoy);
            detail::write_vectors(dir / ("strong." + en + "." + split + ".vec"), ids, strong);
            detail::write_vectors(dir / ("weaker." + en + "." + split + ".vec"), ids, weaker);
            detail::write_vectors(dir / ("decoy." + en + "." + split + ".vec"), ids, decoy);
        }
    }

    std::string emotions;
    for (Emotion e : spec.emotions)
        emotions += (emotions.empty() ? "" : ",") + std::string(to_string(e));
    const std::string data = "[data]\ntrain = {emotion}-train.tsv\ndev = {emotion}-dev.tsv\n"
                             "test = {emotion}-test.tsv\nemotions = " + emotions + "\n\n";
    const std::string models = "[model strong]\nvectors = strong.{emotion}.{split}.vec\nk = 7\n\n"
                               "[model weaker]\nvectors = weaker.{emotion}.{split}.vec\nk = 7\n\n"
                               "[model decoy]\nvectors = decoy.{emotion}.{split}.vec\nk = 7\n\n";
    const std::string eval = "[eval]\nseed = " + std::to_string(spec.seed) + "\nfolds = 5\n";

    std::ofstream(dir / "tune.ini") << "# synthetic tuning run\n" << data << models
        << "[ensemble]\nmembers = strong, weaker, decoy\nvoting = rescaled_wa_rounded\n"
           "subset_search = true\n\n" << eval;
    std::ofstream(dir / "ensemble.ini") << data << models
        << "[ensemble]\nmembers = strong, weaker\nvoting = rescaled_wa_rounded\nalpha = 0.04\n\n" << eval;
    std::ofstream(dir / "single.ini") << data << models
        << "[ensemble]\nmembers = strong\nvoting = mean\n\n" << eval;
    std::ofstream(dir / "sweep.ini") << data
        << "[model words]\nword_vectors = words.vec\nprep = standard\n\n" << eval;
}

}  // namespace synth
