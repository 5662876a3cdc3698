#include "emofrnn/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "emofrnn/error.hpp"
#include "emofrnn/eval.hpp"

namespace emofrnn {

bool ModelSection::supports_prep_sweep() const
{
    return !word_vectors.empty() || vectors.find("{prep}") != std::string::npos;
}

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view value)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = value.find(',', start);
        auto item = trim(value.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                              : comma - start));
        if (!item.empty())
            out.push_back(std::move(item));
        if (comma == std::string_view::npos)
            return out;
        start = comma + 1;
    }
}

class LineError {
public:
    explicit LineError(std::size_t line) : line_(line) {}
    [[noreturn]] void operator()(const std::string& what) const
    {
        throw ConfigError("config line " + std::to_string(line_) + ": " + what);
    }

private:
    std::size_t line_;
};

double parse_double(const std::string& s, const LineError& fail)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        fail("expected a number, got '" + s + "'");
    return v;
}

long long parse_int(const std::string& s, const LineError& fail)
{
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        fail("expected an integer, got '" + s + "'");
    return v;
}

bool parse_bool(const std::string& s, const LineError& fail)
{
    if (s == "true" || s == "yes" || s == "1" || s == "on")
        return true;
    if (s == "false" || s == "no" || s == "0" || s == "off")
        return false;
    fail("expected true or false, got '" + s + "'");
}

std::size_t parse_k(const std::string& s, const LineError& fail)
{
    const long long k = parse_int(s, fail);
    if (k < 1)
        fail("k must be at least 1");
    return static_cast<std::size_t>(k);
}

std::vector<std::size_t> parse_k_grid(const std::string& value, const LineError& fail)
{
    std::vector<std::size_t> out;
    for (const auto& item : split_list(value)) {
        if (item.find(':') == std::string::npos) {
            out.push_back(parse_k(item, fail));
            continue;
        }
        std::istringstream ss(item);
        std::string a, b, c;
        std::getline(ss, a, ':');
        std::getline(ss, b, ':');
        std::getline(ss, c);
        const std::size_t lo = parse_k(trim(a), fail);
        const std::size_t hi = parse_k(trim(b), fail);
        const std::size_t step = c.empty() ? 1 : parse_k(trim(c), fail);
        if (hi < lo)
            fail("empty range '" + item + "'");
        for (std::size_t k = lo; k <= hi; k += step)
            out.push_back(k);
    }
    if (out.empty())
        fail("empty k grid");
    return out;
}

std::vector<double> parse_real_grid(const std::string& value, const LineError& fail)
{
    std::vector<double> out;
    for (const auto& item : split_list(value)) {
        if (item.find(':') == std::string::npos) {
            out.push_back(parse_double(item, fail));
            continue;
        }
        std::istringstream ss(item);
        std::string a, b, c;
        std::getline(ss, a, ':');
        std::getline(ss, b, ':');
        std::getline(ss, c);
        const double lo = parse_double(trim(a), fail);
        const double hi = parse_double(trim(b), fail);
        const double step = parse_double(trim(c), fail);
        if (!(step > 0.0) || hi < lo)
            fail("bad range '" + item + "'");
        const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
    if (out.empty())
        fail("empty grid");
    return out;
}

OwaScheme parse_scheme(const std::string& s, const LineError& fail)
{
    const auto scheme = parse_owa_scheme(s);
    if (!scheme)
        fail("unknown OWA scheme '" + s + "' (strict|exp|add|invadd|mean)");
    return *scheme;
}

PrepLevel parse_prep(const std::string& s, const LineError& fail)
{
    const auto level = parse_prep_level(s);
    if (!level)
        fail("unknown preparation level '" + s + "' (raw|standard|stopwords)");
    return *level;
}

void replace_all(std::string& s, std::string_view what, std::string_view with)
{
    for (auto pos = s.find(what); pos != std::string::npos; pos = s.find(what, pos + with.size()))
        s.replace(pos, what.size(), with);
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::istream& in, const std::filesystem::path& base_dir)
{
    ExperimentConfig cfg;
    cfg.base_dir = base_dir;

    enum class Section { none, data, model, ensemble, eval, sweep };
    Section section = Section::none;
    std::set<std::string> seen_sections;
    std::set<std::string> seen_keys;
    std::optional<double> alpha;
    std::size_t alpha_line = 0;

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const LineError fail(line_no);
        const std::string line = trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';')
            continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                fail("unterminated section header");
            const std::string header = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!seen_sections.insert(header).second)
                fail("duplicate section [" + header + "]");
            seen_keys.clear();
            if (header == "data") {
                section = Section::data;
            } else if (header == "ensemble") {
                section = Section::ensemble;
                cfg.ensemble.emplace();
            } else if (header == "eval") {
                section = Section::eval;
            } else if (header == "sweep") {
                section = Section::sweep;
            } else if (header.rfind("model", 0) == 0 && header.size() > 5
                       && (header[5] == ' ' || header[5] == '\t')) {
                section = Section::model;
                ModelSection m;
                m.id = trim(std::string_view(header).substr(6));
                if (m.id.empty() || m.id.find_first_of(" \t,:") != std::string::npos)
                    fail("model ids must be single words");
                cfg.models.push_back(std::move(m));
            } else {
                fail("unknown section [" + header + "]");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail("expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (!seen_keys.insert(key).second)
            fail("duplicate key '" + key + "'");
        const auto unknown = [&] { fail("unknown key '" + key + "'"); };

        switch (section) {
        case Section::none:
            fail("key outside of any section");
        case Section::data:
            if (key == "train")
                cfg.data.train = value;
            else if (key == "dev")
                cfg.data.dev = value;
            else if (key == "test")
                cfg.data.test = value;
            else if (key == "emotions") {
                cfg.data.emotions.clear();
                for (const auto& item : split_list(value)) {
                    const auto e = parse_emotion(item);
                    if (!e)
                        fail("unknown emotion '" + item + "'");
                    cfg.data.emotions.push_back(*e);
                }
                if (cfg.data.emotions.empty())
                    fail("empty emotion list");
            } else
                unknown();
            break;
        case Section::model: {
            auto& m = cfg.models.back();
            if (key == "vectors")
                m.vectors = value;
            else if (key == "word_vectors")
                m.word_vectors = value;
            else if (key == "prep")
                m.prep = parse_prep(value, fail);
            else if (key == "k")
                m.k = value == "auto" ? std::nullopt : std::optional(parse_k(value, fail));
            else if (key == "lower")
                m.lower = parse_scheme(value, fail);
            else if (key == "upper")
                m.upper = parse_scheme(value, fail);
            else
                unknown();
            break;
        }
        case Section::ensemble: {
            auto& e = *cfg.ensemble;
            if (key == "members")
                e.members = split_list(value);
            else if (key == "voting") {
                const auto kind = parse_voting_kind(value);
                if (!kind)
                    fail("unknown voting function '" + value + "'");
                e.voting.kind = *kind;
            } else if (key == "alpha") {
                alpha = parse_double(value, fail);
                alpha_line = line_no;
            } else if (key == "alpha_grid") {
                e.alpha_grid = parse_real_grid(value, fail);
                for (double a : e.alpha_grid)
                    if (!(a > 0.0 && a < 1.0))
                        fail("alpha grid values must lie in (0, 1)");
            } else if (key == "rescale_input") {
                const auto input = parse_rescale_input(value);
                if (!input)
                    fail("unknown rescale input '" + value + "' (membership|confidence)");
                e.voting.rescale_input = *input;
            } else if (key == "subset_search")
                e.subset_search = parse_bool(value, fail);
            else if (key == "weights") {
                for (const auto& item : split_list(value)) {
                    const auto colon = item.find(':');
                    if (colon == std::string::npos)
                        fail("weights are written model:weight");
                    const double w = parse_double(trim(item.substr(colon + 1)), fail);
                    if (!(w >= 0.0))
                        fail("weights must be non-negative");
                    e.weights[trim(item.substr(0, colon))] = w;
                }
            } else
                unknown();
            break;
        }
        case Section::eval:
            if (key == "seed") {
                const long long s = parse_int(value, fail);
                if (s < 0)
                    fail("seed must be non-negative");
                cfg.eval.seed = static_cast<std::uint64_t>(s);
            } else if (key == "folds") {
                const long long f = parse_int(value, fail);
                if (f < 2)
                    fail("folds must be at least 2");
                cfg.eval.folds = static_cast<std::size_t>(f);
            } else
                unknown();
            break;
        case Section::sweep:
            if (key == "schemes") {
                cfg.sweep.schemes.clear();
                for (const auto& item : split_list(value))
                    cfg.sweep.schemes.push_back(parse_scheme(item, fail));
                if (cfg.sweep.schemes.empty())
                    fail("empty scheme list");
            } else if (key == "k")
                cfg.sweep.ks = parse_k_grid(value, fail);
            else if (key == "preps") {
                cfg.sweep.preps.clear();
                for (const auto& item : split_list(value))
                    cfg.sweep.preps.push_back(parse_prep(item, fail));
                if (cfg.sweep.preps.empty())
                    fail("empty preparation list");
            } else
                unknown();
            break;
        }
    }

    std::set<std::string> ids;
    for (const auto& m : cfg.models) {
        if (!ids.insert(m.id).second)
            throw ConfigError("duplicate model id '" + m.id + "'");
        if (m.vectors.empty() == m.word_vectors.empty())
            throw ConfigError("model " + m.id + ": set exactly one of vectors and word_vectors");
    }
    if (cfg.ensemble) {
        auto& e = *cfg.ensemble;
        if (alpha) {
            if (!needs_alpha(e.voting.kind))
                throw ConfigError("config line " + std::to_string(alpha_line) + ": "
                                  + std::string(to_string(e.voting.kind)) + " voting takes no alpha");
            if (!(*alpha > 0.0 && *alpha < 1.0))
                throw ConfigError("config line " + std::to_string(alpha_line)
                                  + ": alpha must lie in (0, 1)");
            e.voting.alpha = alpha;
        }
        if (e.members.empty())
            throw ConfigError("[ensemble] needs members");
        std::set<std::string> distinct;
        for (const auto& id : e.members) {
            if (!ids.contains(id))
                throw ConfigError("ensemble member '" + id + "' has no [model " + id + "] section");
            if (!distinct.insert(id).second)
                throw ConfigError("ensemble member '" + id + "' listed twice");
        }
        for (const auto& [id, w] : e.weights)
            if (!distinct.contains(id))
                throw ConfigError("weight given for non-member '" + id + "'");
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config " + path.string());
    try {
        return parse(in, path.parent_path());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

const ModelSection& ExperimentConfig::model(const std::string& id) const
{
    for (const auto& m : models)
        if (m.id == id)
            return m;
    throw ConfigError("no [model " + id + "] section");
}

std::filesystem::path ExperimentConfig::resolve(const std::string& pattern, std::optional<Emotion> emotion,
                                                std::optional<PrepLevel> prep, std::string_view split) const
{
    std::string s = pattern;
    if (emotion)
        replace_all(s, "{emotion}", to_string(*emotion));
    if (prep)
        replace_all(s, "{prep}", to_string(*prep));
    if (!split.empty())
        replace_all(s, "{split}", split);
    if (s.find('{') != std::string::npos && s.find('}') != std::string::npos)
        for (std::string_view ph : {"{emotion}", "{prep}", "{split}"})
            if (s.find(ph) != std::string::npos)
                throw ConfigError("unresolved placeholder " + std::string(ph) + " in " + pattern);
    std::filesystem::path p(s);
    return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
}

std::string ExperimentConfig::canonical() const
{
    std::ostringstream out;
    out << std::setprecision(17);
    out << "[data]\ntrain=" << data.train << "\ndev=" << data.dev << "\ntest=" << data.test
        << "\nemotions=";
    for (std::size_t i = 0; i < data.emotions.size(); ++i)
        out << (i ? "," : "") << to_string(data.emotions[i]);
    out << '\n';
    for (const auto& m : models) {
        out << "[model " << m.id << "]\nvectors=" << m.vectors << "\nword_vectors=" << m.word_vectors
            << "\nprep=" << to_string(m.prep) << "\nk=";
        if (m.k)
            out << *m.k;
        else
            out << "auto";
        out << "\nlower=" << to_string(m.lower) << "\nupper=" << to_string(m.upper) << '\n';
    }
    if (ensemble) {
        out << "[ensemble]\nmembers=";
        for (std::size_t i = 0; i < ensemble->members.size(); ++i)
            out << (i ? "," : "") << ensemble->members[i];
        out << "\nvoting=" << to_string(ensemble->voting.kind) << "\nalpha=";
        if (ensemble->voting.alpha)
            out << *ensemble->voting.alpha;
        out << "\nrescale_input=" << to_string(ensemble->voting.rescale_input) << "\nalpha_grid=";
        for (std::size_t i = 0; i < ensemble->alpha_grid.size(); ++i)
            out << (i ? "," : "") << ensemble->alpha_grid[i];
        out << "\nsubset_search=" << (ensemble->subset_search ? "true" : "false") << "\nweights=";
        bool first = true;
        for (const auto& [id, w] : ensemble->weights) {
            out << (first ? "" : ",") << id << ':' << w;
            first = false;
        }
        out << '\n';
    }
    out << "[eval]\nseed=" << eval.seed << "\nfolds=" << eval.folds << '\n';
    out << "[sweep]\nschemes=";
    for (std::size_t i = 0; i < sweep.schemes.size(); ++i)
        out << (i ? "," : "") << to_string(sweep.schemes[i]);
    out << "\nk=";
    for (std::size_t i = 0; i < sweep.ks.size(); ++i)
        out << (i ? "," : "") << sweep.ks[i];
    out << "\npreps=";
    for (std::size_t i = 0; i < sweep.preps.size(); ++i)
        out << (i ? "," : "") << to_string(sweep.preps[i]);
    out << '\n';
    return out.str();
}

std::string ExperimentConfig::digest() const { return config_digest(canonical()); }

}  // namespace emofrnn
