#include "emofrnn/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "emofrnn/error.hpp"
#include "emofrnn/parallel.hpp"

namespace emofrnn {

namespace {

std::string fmt(double v)
{
    if (std::isinf(v))
        return v < 0 ? "-inf" : "inf";
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(6) << v;
    return ss.str();
}

std::vector<TextRecord> for_emotion(std::vector<TextRecord> records, Emotion emotion,
                                    const std::filesystem::path& path)
{
    std::erase_if(records, [&](const TextRecord& r) { return r.emotion != emotion; });
    if (records.empty())
        throw DataError(path.string() + ": no " + std::string(to_string(emotion)) + " records");
    return records;
}

std::vector<std::size_t> iota_indices(std::size_t n)
{
    std::vector<std::size_t> out(n);
    std::iota(out.begin(), out.end(), std::size_t{0});
    return out;
}

std::vector<double> member_weights(const EnsembleSection& e)
{
    std::vector<double> w;
    for (const auto& id : e.members) {
        const auto it = e.weights.find(id);
        w.push_back(it == e.weights.end() ? 1.0 : it->second);
    }
    return w;
}

const EnsembleSection& require_ensemble(const ExperimentConfig& cfg)
{
    if (!cfg.ensemble)
        throw ConfigError("config has no [ensemble] section");
    return *cfg.ensemble;
}

VotingSpec require_voting(const EnsembleSection& e)
{
    if (needs_alpha(e.voting.kind) && !e.voting.alpha)
        throw ConfigError(std::string(to_string(e.voting.kind))
                          + " voting needs alpha in [ensemble] (run tune to choose one)");
    return e.voting;
}

std::vector<const ModelSection*> member_sections(const ExperimentConfig& cfg,
                                                 const EnsembleSection& e)
{
    std::vector<const ModelSection*> out;
    for (const auto& id : e.members)
        out.push_back(&cfg.model(id));
    return out;
}

}  // namespace

std::string output_header(std::string_view command, const ExperimentConfig& cfg)
{
    std::ostringstream ss;
    ss << "# emofrnn " << command << " seed=" << cfg.eval.seed << " folds=" << cfg.eval.folds
       << " config=" << cfg.digest();
    return ss.str();
}

Workspace::Workspace(const ExperimentConfig& cfg) : cfg_(cfg) {}

const std::vector<TextRecord>& Workspace::training_records(Emotion emotion)
{
    auto it = training_records_.find(emotion);
    if (it != training_records_.end())
        return it->second;
    if (cfg_.data.train.empty())
        throw ConfigError("[data] has no train file");
    const auto train_path = cfg_.resolve(cfg_.data.train, emotion);
    auto records = for_emotion(load_task_tsv(train_path), emotion, train_path);
    if (!cfg_.data.dev.empty()) {
        const auto dev_path = cfg_.resolve(cfg_.data.dev, emotion);
        auto dev = for_emotion(load_task_tsv(dev_path), emotion, dev_path);
        records.insert(records.end(), std::make_move_iterator(dev.begin()),
                       std::make_move_iterator(dev.end()));
    }
    return training_records_.emplace(emotion, std::move(records)).first->second;
}

const std::vector<TextRecord>& Workspace::test_records(Emotion emotion)
{
    auto it = test_records_.find(emotion);
    if (it != test_records_.end())
        return it->second;
    if (cfg_.data.test.empty())
        throw ConfigError("[data] has no test file");
    const auto path = cfg_.resolve(cfg_.data.test, emotion);
    auto records = for_emotion(load_task_tsv(path, false), emotion, path);
    return test_records_.emplace(emotion, std::move(records)).first->second;
}

const VectorTable& Workspace::table(const std::filesystem::path& path)
{
    auto it = tables_.find(path);
    if (it == tables_.end())
        it = tables_.emplace(path, load_vectors(path)).first;
    return it->second;
}

std::vector<Vector> Workspace::vectors_for(const ModelSection& model, Emotion emotion, PrepLevel prep,
                                           const std::vector<TextRecord>& records,
                                           std::string_view split)
{
    if (!model.word_vectors.empty()) {
        const auto& words = table(cfg_.resolve(model.word_vectors, emotion, prep, split));
        std::vector<Vector> out;
        out.reserve(records.size());
        for (const auto& rec : records) {
            try {
                out.push_back(embed_by_mean(clean_tweet(rec.text, CleanOptions(prep)), words.vectors));
            } catch (const DataError& e) {
                throw DataError("model " + model.id + ", tweet " + rec.id + ": " + e.what());
            }
            if (std::all_of(out.back().begin(), out.back().end(), [](double x) { return x == 0.0; }))
                throw DataError("model " + model.id + ", tweet " + rec.id + ": zero vector");
        }
        return out;
    }
    const auto& t = table(cfg_.resolve(model.vectors, emotion, prep, split));
    try {
        return lookup_vectors(records, t);
    } catch (const DataError& e) {
        throw DataError("model " + model.id + ": " + e.what());
    }
}

const VectorDataset& Workspace::training_data(const ModelSection& model, Emotion emotion, PrepLevel prep)
{
    const std::string key =
        model.id + '\t' + std::string(to_string(emotion)) + '\t' + std::string(to_string(prep));
    auto it = datasets_.find(key);
    if (it != datasets_.end())
        return it->second;

    const auto& records = training_records(emotion);
    // Train and dev may live in different vector files ({split}); the dev
    // records follow the train records.
    const auto train_path = cfg_.resolve(cfg_.data.train, emotion);
    const std::size_t n_train = for_emotion(load_task_tsv(train_path), emotion, train_path).size();
    const std::vector<TextRecord> train(records.begin(), records.begin() + static_cast<std::ptrdiff_t>(n_train));
    const std::vector<TextRecord> dev(records.begin() + static_cast<std::ptrdiff_t>(n_train), records.end());

    const auto to_dataset = [&](const std::vector<TextRecord>& recs, std::string_view split) {
        VectorTable t;
        const auto vecs = vectors_for(model, emotion, prep, recs, split);
        t.dimension = vecs.empty() ? 0 : vecs.front().size();
        for (std::size_t i = 0; i < recs.size(); ++i)
            t.vectors.emplace(recs[i].id, vecs[i]);
        for (const auto& v : vecs)
            if (v.size() != t.dimension)
                throw DataError("model " + model.id + ": vectors of unequal dimension");
        return join(recs, t);
    };
    VectorDataset ds = to_dataset(train, "train");
    if (!dev.empty())
        ds = merge(ds, to_dataset(dev, "dev"));
    return datasets_.emplace(key, std::move(ds)).first->second;
}

std::vector<Vector> Workspace::test_vectors(const ModelSection& model, Emotion emotion)
{
    return vectors_for(model, emotion, model.prep, test_records(emotion), "test");
}

FrnnConfig Workspace::frnn_config(const ModelSection& model, Emotion emotion)
{
    const std::size_t k = model.k ? *model.k : default_k(training_records(emotion).size());
    return {k, model.lower, model.upper};
}

void Workspace::check_files(const std::vector<const ModelSection*>& models,
                            const std::vector<Emotion>& emotions, const std::vector<PrepLevel>& preps,
                            bool need_test) const
{
    std::vector<std::string> missing;
    const auto check = [&](const std::filesystem::path& p) {
        if (!std::filesystem::exists(p))
            missing.push_back(p.string());
    };
    std::vector<std::pair<std::string, const std::string*>> splits{{"train", &cfg_.data.train}};
    if (!cfg_.data.dev.empty())
        splits.emplace_back("dev", &cfg_.data.dev);
    if (need_test)
        splits.emplace_back("test", &cfg_.data.test);

    for (Emotion e : emotions) {
        for (const auto& [split, pattern] : splits) {
            if (pattern->empty())
                throw ConfigError("[data] has no " + split + " file");
            check(cfg_.resolve(*pattern, e));
            for (const auto* m : models) {
                const auto model_preps = m->supports_prep_sweep() ? preps : std::vector{m->prep};
                for (PrepLevel p : model_preps)
                    check(cfg_.resolve(m->vectors.empty() ? m->word_vectors : m->vectors, e, p, split));
            }
        }
    }
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    if (!missing.empty()) {
        std::string msg = "missing input files:";
        for (const auto& m : missing)
            msg += "\n  " + m;
        throw DataError(msg);
    }
}

void cmd_preprocess(std::istream& in, std::ostream& out, const PreprocessOptions& opts)
{
    auto records = read_task_tsv(in, false);
    for (auto& r : records)
        r.text = clean_tweet(r.text, CleanOptions(opts.level), *opts.emoji, *opts.stoplist);
    write_task_tsv(out, records);
}

std::map<Emotion, ClassStats> cmd_stats(const ExperimentConfig& cfg, const std::vector<Emotion>& emotions,
                                        std::ostream& out)
{
    Workspace ws(cfg);
    std::map<Emotion, ClassStats> result;
    out << "emotion\ttotal\tclass0\tclass1\tclass2\tclass3\tsmallest\tir\n";
    for (Emotion e : emotions) {
        std::vector<Label> labels;
        for (const auto& r : ws.training_records(e))
            labels.push_back(*r.label);
        const auto stats = class_stats(labels);
        out << to_string(e) << '\t' << stats.total;
        for (auto c : stats.counts)
            out << '\t' << c;
        out << '\t' << stats.smallest_class << '\t' << std::fixed << std::setprecision(4) << stats.ir
            << std::defaultfloat << '\n';
        result.emplace(e, stats);
    }
    return result;
}

std::vector<SweepRow> cmd_sweep(const ExperimentConfig& cfg, const std::vector<Emotion>& emotions,
                                std::ostream& out, std::ostream& log)
{
    if (cfg.models.empty())
        throw ConfigError("sweep needs at least one [model] section");
    Workspace ws(cfg);
    std::vector<const ModelSection*> models;
    for (const auto& m : cfg.models)
        models.push_back(&m);
    ws.check_files(models, emotions, cfg.sweep.preps, false);

    std::vector<FrnnConfig> grid;
    for (OwaScheme s : cfg.sweep.schemes)
        for (std::size_t k : cfg.sweep.ks)
            grid.push_back({k, s, s});

    std::vector<SweepRow> rows;
    for (Emotion e : emotions) {
        std::vector<SweepRow> emotion_rows;
        for (const auto* m : models) {
            std::vector<PrepLevel> preps = cfg.sweep.preps;
            if (!m->supports_prep_sweep()) {
                if (preps.size() != 1 || preps.front() != m->prep)
                    log << "note: model " << m->id << " has vectors for prep=" << to_string(m->prep)
                        << " only; sweeping that level\n";
                preps = {m->prep};
            }
            for (PrepLevel p : preps) {
                const auto& ds = ws.training_data(*m, e, p);
                const auto folds = make_folds(ds, cfg.eval.seed, cfg.eval.folds);
                const auto reports = cross_validate_grid(ds, grid, folds);
                for (std::size_t g = 0; g < grid.size(); ++g) {
                    for (const auto& w : reports[g].warnings)
                        log << "warning: " << to_string(e) << ' ' << m->id << ' ' << to_string(p) << ' '
                            << to_string(grid[g].upper) << " k=" << grid[g].k << ": " << w << '\n';
                    emotion_rows.push_back({e, m->id, p, grid[g].upper, grid[g].k, reports[g]});
                }
            }
        }
        std::stable_sort(emotion_rows.begin(), emotion_rows.end(), [](const SweepRow& a, const SweepRow& b) {
            return a.report.mean_pcc > b.report.mean_pcc;
        });
        rows.insert(rows.end(), emotion_rows.begin(), emotion_rows.end());
    }

    out << output_header("sweep", cfg) << '\n';
    out << "emotion\tmodel\tprep\tscheme\tk\tmean_pcc\n";
    for (const auto& r : rows)
        out << to_string(r.emotion) << '\t' << r.model << '\t' << to_string(r.prep) << '\t'
            << to_string(r.scheme) << '\t' << r.k << '\t' << fmt(r.report.mean_pcc) << '\n';
    return rows;
}

namespace {

std::vector<MemberModel> build_members(Workspace& ws, const EnsembleSection& e, Emotion emotion)
{
    std::vector<MemberModel> members;
    for (const auto& id : e.members) {
        const auto& section = ws.config().model(id);
        members.push_back({id, ws.training_data(section, emotion), ws.frnn_config(section, emotion)});
    }
    return members;
}

std::vector<Label> rounded(const std::vector<double>& votes)
{
    std::vector<Label> out;
    out.reserve(votes.size());
    for (double v : votes)
        out.push_back(static_cast<Label>(round_label(v)));
    return out;
}

// Rounded ensemble predictions for `records`, plus their PCC if all are labeled.
void predict_records(Workspace& ws, const EnsembleSection& e, const VotingSpec& spec, Emotion emotion,
                     const std::vector<TextRecord>& records,
                     const std::vector<std::vector<Vector>>& queries, EnsembleResult& result)
{
    const auto members = build_members(ws, e, emotion);
    const auto labels = rounded(ensemble_predict(members, queries, spec, member_weights(e)));
    bool labeled = records.size() >= 2;
    std::vector<double> gold, predicted;
    for (std::size_t i = 0; i < records.size(); ++i) {
        result.predictions.emplace_back(records[i].id, labels[i]);
        if (records[i].label) {
            gold.push_back(*records[i].label);
            predicted.push_back(labels[i]);
        } else {
            labeled = false;
        }
    }
    if (labeled)
        result.test_pcc = pcc_or_neg_inf(gold, predicted);
}

void write_predictions(std::ostream& out, const ExperimentConfig& cfg, const EnsembleResult& result)
{
    out << output_header("predictions", cfg) << " emotion=" << to_string(result.emotion) << '\n';
    for (const auto& [id, label] : result.predictions)
        out << id << '\t' << label << '\n';
}

}  // namespace

std::vector<EnsembleResult> cmd_ensemble(const ExperimentConfig& cfg, const std::vector<Emotion>& emotions,
                                         std::ostream& out, std::ostream& log,
                                         const std::optional<std::filesystem::path>& test_file,
                                         std::ostream* predictions_out)
{
    const auto& e = require_ensemble(cfg);
    const VotingSpec spec = require_voting(e);
    if (test_file && emotions.size() != 1)
        throw ConfigError("--test scores one emotion; pick it with --emotion");
    Workspace ws(cfg);
    const auto sections = member_sections(cfg, e);
    ws.check_files(sections, emotions, {}, false);

    std::vector<EnsembleResult> results;
    for (Emotion emotion : emotions) {
        const auto members = build_members(ws, e, emotion);
        const auto folds = make_folds(members.front().data, cfg.eval.seed, cfg.eval.folds);
        const auto table = out_of_fold_outputs(members, folds);
        const auto all = iota_indices(members.size());
        const auto weights = member_weights(e);

        EnsembleResult result;
        result.emotion = emotion;
        result.report = ensemble_cv_score(table, all, spec, weights);
        result.report.config_digest = cfg.digest();
        for (const auto& w : result.report.warnings)
            log << "warning: " << to_string(emotion) << ": " << w << '\n';

        if (test_file) {
            const auto records = for_emotion(load_task_tsv(*test_file, false), emotion, *test_file);
            std::vector<std::vector<Vector>> queries;
            for (const auto* section : sections) {
                if (!section->word_vectors.empty()) {
                    const auto& words = load_vectors(cfg.resolve(section->word_vectors, emotion,
                                                                 section->prep, "test"));
                    std::vector<Vector> q;
                    for (const auto& r : records)
                        q.push_back(embed_by_mean(clean_tweet(r.text, CleanOptions(section->prep)),
                                                  words.vectors));
                    queries.push_back(std::move(q));
                } else {
                    queries.push_back(lookup_vectors(
                        records, load_vectors(cfg.resolve(section->vectors, emotion, section->prep, "test"))));
                }
            }
            predict_records(ws, e, spec, emotion, records, queries, result);
        }
        results.push_back(std::move(result));
    }

    out << output_header("ensemble", cfg) << '\n';
    out << "# voting=" << to_string(spec.kind);
    if (spec.alpha)
        out << " alpha=" << *spec.alpha;
    out << " members=";
    for (std::size_t i = 0; i < e.members.size(); ++i)
        out << (i ? "/" : "") << e.members[i];
    out << '\n';
    std::map<Emotion, double> means;
    for (const auto& r : results) {
        out << "# " << to_string(r.emotion) << '\n';
        write_score_report(out, r.report);
        if (r.test_pcc)
            out << "# " << to_string(r.emotion) << " test_pcc=" << fmt(*r.test_pcc) << '\n';
        means[r.emotion] = r.report.mean_pcc;
    }
    if (means.size() == kAllEmotions.size())
        out << "# average mean_pcc=" << fmt(average_emotions(means)) << '\n';

    if (test_file && predictions_out)
        write_predictions(*predictions_out, cfg, results.front());
    return results;
}

std::vector<TuneResult> cmd_tune(const ExperimentConfig& cfg, const std::vector<Emotion>& emotions,
                                 std::ostream& out, std::ostream& log)
{
    const auto& e = require_ensemble(cfg);
    Workspace ws(cfg);
    ws.check_files(member_sections(cfg, e), emotions, {}, false);

    std::vector<TuneResult> results;
    for (Emotion emotion : emotions) {
        const auto members = build_members(ws, e, emotion);
        const auto folds = make_folds(members.front().data, cfg.eval.seed, cfg.eval.folds);
        const auto table = out_of_fold_outputs(members, folds);
        const auto all = iota_indices(members.size());

        TuneResult result;
        result.emotion = emotion;
        result.alpha = tune_alpha(table, all, e.alpha_grid, e.voting.rescale_input);
        const VotingSpec rounded_spec{VotingKind::rescaled_wa_rounded, result.alpha.alpha,
                                      e.voting.rescale_input};
        if (e.subset_search) {
            const auto choice = select_models(table, all, rounded_spec);
            for (std::size_t m : choice.members)
                result.members.push_back(table.model_ids[m]);
            result.pcc = choice.pcc;
        } else {
            result.members = e.members;
            result.pcc = ensemble_cv_score(table, all, rounded_spec).mean_pcc;
        }
        if (std::isinf(result.pcc))
            log << "warning: " << to_string(emotion) << ": every candidate ensemble has a constant fold\n";
        results.push_back(std::move(result));
    }

    out << output_header("tune", cfg) << '\n';
    out << "emotion\tmembers\talpha\talpha_cv_pcc\tcv_pcc\n";
    std::map<Emotion, double> means;
    for (const auto& r : results) {
        out << to_string(r.emotion) << '\t';
        for (std::size_t i = 0; i < r.members.size(); ++i)
            out << (i ? "/" : "") << r.members[i];
        out << '\t' << std::setprecision(6) << r.alpha.alpha << '\t' << fmt(r.alpha.pcc) << '\t'
            << fmt(r.pcc) << '\n';
        means[r.emotion] = r.pcc;
    }
    if (means.size() == kAllEmotions.size())
        out << "average\t\t\t\t" << fmt(average_emotions(means)) << '\n';
    return results;
}

std::vector<EnsembleResult> cmd_predict(const ExperimentConfig& cfg, const std::vector<Emotion>& emotions,
                                        const std::string& out_pattern, std::ostream& report,
                                        std::ostream& log)
{
    const auto& e = require_ensemble(cfg);
    const VotingSpec spec = require_voting(e);
    if (emotions.size() > 1 && out_pattern.find("{emotion}") == std::string::npos)
        throw ConfigError("--out must contain {emotion} when predicting several emotions");
    Workspace ws(cfg);
    const auto sections = member_sections(cfg, e);
    ws.check_files(sections, emotions, {}, true);

    std::vector<EnsembleResult> results;
    for (Emotion emotion : emotions) {
        EnsembleResult result;
        result.emotion = emotion;
        std::vector<std::vector<Vector>> queries;
        for (const auto* section : sections)
            queries.push_back(ws.test_vectors(*section, emotion));
        predict_records(ws, e, spec, emotion, ws.test_records(emotion), queries, result);

        std::string path = out_pattern;
        if (const auto pos = path.find("{emotion}"); pos != std::string::npos)
            path.replace(pos, 9, to_string(emotion));
        std::ofstream file(path, std::ios::binary);
        if (!file)
            throw DataError("cannot write " + path);
        write_predictions(file, cfg, result);
        log << "wrote " << result.predictions.size() << " predictions to " << path << '\n';
        results.push_back(std::move(result));
    }

    report << output_header("predict", cfg) << '\n';
    report << "emotion\tn\ttest_pcc\n";
    std::map<Emotion, double> scores;
    for (const auto& r : results) {
        report << to_string(r.emotion) << '\t' << r.predictions.size() << '\t'
               << (r.test_pcc ? fmt(*r.test_pcc) : "NA") << '\n';
        if (r.test_pcc)
            scores[r.emotion] = *r.test_pcc;
    }
    if (scores.size() == kAllEmotions.size())
        report << "average\t\t" << fmt(average_emotions(scores)) << '\n';
    return results;
}

}  // namespace emofrnn
