#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emofrnn/config.hpp"
#include "emofrnn/error.hpp"
#include "emofrnn/experiment.hpp"
#include "emofrnn/parallel.hpp"

using namespace emofrnn;

namespace {

struct Options {
    std::string config;
    std::string emotion;
    std::optional<std::uint64_t> seed;
    std::string test;
    std::string out;
    unsigned threads = 0;

    // preprocess
    std::string in;
    std::string level = "standard";
    bool raw = false;
    bool stopwords = false;
    std::string emoji_file;
    std::string emoticon_file;
    std::string stopword_file;
};

ExperimentConfig load_config(const Options& o)
{
    auto cfg = ExperimentConfig::load(o.config);
    if (o.seed)
        cfg.eval.seed = *o.seed;
    return cfg;
}

std::vector<Emotion> pick_emotions(const Options& o, const ExperimentConfig& cfg)
{
    if (o.emotion.empty())
        return cfg.data.emotions;
    const auto e = parse_emotion(o.emotion);
    if (!e)
        throw ConfigError("unknown emotion '" + o.emotion + "'");
    return {*e};
}

// Output stream for --out, stdout when absent.
class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_)
                throw DataError("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

int run_preprocess(const Options& o)
{
    PreprocessOptions opts;
    if (o.raw && o.stopwords)
        throw ConfigError("--raw and --stopwords are exclusive");
    const auto level = o.raw ? PrepLevel::raw : o.stopwords ? PrepLevel::stopwords : parse_prep_level(o.level);
    if (!level)
        throw ConfigError("unknown preprocessing level '" + o.level + "'");
    opts.level = *level;

    std::optional<EmojiTable> emoji;
    if (!o.emoji_file.empty()) {
        emoji = EmojiTable::load(o.emoticon_file, o.emoji_file);
        opts.emoji = &*emoji;
    }
    std::optional<StopList> stop;
    if (!o.stopword_file.empty()) {
        stop = StopList::load(o.stopword_file);
        opts.stoplist = &*stop;
    }

    Output out(o.out);
    if (o.in.empty() || o.in == "-") {
        cmd_preprocess(std::cin, out.stream(), opts);
    } else {
        std::ifstream in(o.in, std::ios::binary);
        if (!in)
            throw DataError("cannot read " + o.in);
        cmd_preprocess(in, out.stream(), opts);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    Options o;
    CLI::App app{"Fuzzy-rough nearest-neighbour emotion intensity classifier"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    const auto add_common = [&](CLI::App* sub, bool with_test) {
        sub->add_option("--config", o.config, "experiment config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--emotion", o.emotion, "restrict to one emotion")
            ->check(CLI::IsMember({"anger", "joy", "sadness", "fear"}));
        sub->add_option("--seed", o.seed, "override the [eval] seed");
        sub->add_option("--out", o.out, "output file (default stdout)");
        sub->add_option("--threads", o.threads, "worker threads (0 = hardware)");
        if (with_test)
            sub->add_option("--test", o.test, "task file to predict")->check(CLI::ExistingFile);
    };

    auto* pre = app.add_subcommand("preprocess", "clean the tweet column of a task file");
    pre->add_option("--in", o.in, "input task file (default stdin)");
    pre->add_option("--out", o.out, "output file (default stdout)");
    pre->add_option("--level", o.level, "raw, standard or stopwords")
        ->check(CLI::IsMember({"raw", "standard", "stopwords"}));
    pre->add_flag("--raw", o.raw, "leave text untouched");
    pre->add_flag("--stopwords", o.stopwords, "also remove stop words");
    auto* emoji_opt = pre->add_option("--emoji-table", o.emoji_file, "emoji descriptions (TSV)");
    auto* emoticon_opt = pre->add_option("--emoticon-table", o.emoticon_file, "emoticon descriptions (TSV)");
    emoji_opt->needs(emoticon_opt);
    emoticon_opt->needs(emoji_opt);
    pre->add_option("--stopword-list", o.stopword_file, "stop word list, one per line");
    pre->add_option("--threads", o.threads, "ignored");

    auto* stats = app.add_subcommand("stats", "class balance per emotion");
    add_common(stats, false);
    auto* sweep = app.add_subcommand("sweep", "cross-validated grid of OWA schemes, k and preprocessing");
    add_common(sweep, false);
    auto* ensemble = app.add_subcommand("ensemble", "cross-validate the configured ensemble");
    add_common(ensemble, true);
    auto* tune = app.add_subcommand("tune", "choose alpha and members of the ensemble");
    add_common(tune, false);
    auto* predict = app.add_subcommand("predict", "write test predictions; --out may contain {emotion}");
    add_common(predict, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (o.threads > 0)
            set_thread_count(o.threads);
        if (pre->parsed())
            return run_preprocess(o);

        const auto cfg = load_config(o);
        const auto emotions = pick_emotions(o, cfg);
        if (stats->parsed()) {
            Output out(o.out);
            cmd_stats(cfg, emotions, out.stream());
        } else if (sweep->parsed()) {
            Output out(o.out);
            cmd_sweep(cfg, emotions, out.stream(), std::cerr);
        } else if (ensemble->parsed()) {
            if (o.test.empty()) {
                Output out(o.out);
                cmd_ensemble(cfg, emotions, out.stream(), std::cerr);
            } else {
                // Report to stdout, predictions to --out.
                Output preds(o.out);
                cmd_ensemble(cfg, emotions, std::cout, std::cerr, std::filesystem::path(o.test),
                             &preds.stream());
            }
        } else if (tune->parsed()) {
            Output out(o.out);
            cmd_tune(cfg, emotions, out.stream(), std::cerr);
        } else if (predict->parsed()) {
            const std::string pattern = o.out.empty() ? "predictions_{emotion}.tsv" : o.out;
            cmd_predict(cfg, emotions, pattern, std::cout, std::cerr);
        }
        std::cout.flush();
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
