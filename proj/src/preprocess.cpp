#include "emofrnn/preprocess.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "emofrnn/error.hpp"
#include "emofrnn/unicode.hpp"

namespace emofrnn {

std::string_view to_string(PrepLevel level)
{
    switch (level) {
    case PrepLevel::raw: return "raw";
    case PrepLevel::standard: return "standard";
    case PrepLevel::stopwords: return "stopwords";
    }
    return "?";
}

std::optional<PrepLevel> parse_prep_level(std::string_view token)
{
    for (PrepLevel l : {PrepLevel::raw, PrepLevel::standard, PrepLevel::stopwords})
        if (token == to_string(l))
            return l;
    return std::nullopt;
}

namespace {

std::vector<std::string_view> data_lines(std::string_view text)
{
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

bool is_skippable(std::string_view line)
{
    return line.empty() || line.front() == '#'
        || line.find_first_not_of(" \t") == std::string_view::npos;
}

bool is_lowercase_words(std::string_view s)
{
    if (s.empty() || s.front() == ' ' || s.back() == ' ')
        return false;
    char prev = 'a';
    for (char c : s) {
        if (c == ' ') {
            if (prev == ' ')
                return false;
        } else if (c < 'a' || c > 'z') {
            return false;
        }
        prev = c;
    }
    return true;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::u32string> split_tokens(const std::u32string& text)
{
    std::vector<std::u32string> tokens;
    std::u32string current;
    for (char32_t cp : text) {
        if (unicode::is_space(cp)) {
            if (!current.empty())
                tokens.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(cp);
        }
    }
    if (!current.empty())
        tokens.push_back(std::move(current));
    return tokens;
}

std::u32string join_tokens(const std::vector<std::u32string>& tokens)
{
    std::u32string out;
    for (const auto& t : tokens) {
        if (!out.empty())
            out.push_back(U' ');
        out += t;
    }
    return out;
}

// One application of the general cleaning steps.
std::string clean_pass(std::string_view text, const EmojiTable& table)
{
    const std::u32string replaced = unicode::decode(table.replace(text));

    std::vector<std::u32string> tokens = split_tokens(replaced);
    std::erase_if(tokens, [](const std::u32string& t) { return t.front() == U'@'; });

    std::u32string out;
    for (const auto& token : tokens) {
        out.push_back(U' ');
        for (char32_t cp : token) {
            if (cp == U'#')
                continue;
            if (cp == U'&') {
                out += U" and ";
                continue;
            }
            if (unicode::is_deleted(cp))
                continue;
            out.push_back(cp);
        }
    }
    return unicode::encode(join_tokens(split_tokens(out)));
}

}  // namespace

EmojiTable EmojiTable::parse(std::string_view emoticons_tsv, std::string_view emoji_tsv)
{
    EmojiTable table;
    std::size_t line_no = 0;
    for (auto line : data_lines(emoticons_tsv)) {
        ++line_no;
        if (is_skippable(line))
            continue;
        const auto tab = line.find('\t');
        if (tab == std::string_view::npos || tab == 0)
            throw DataError("emoticon table: malformed row at line " + std::to_string(line_no));
        const std::string key(line.substr(0, tab));
        const std::string desc(line.substr(tab + 1));
        if (!is_lowercase_words(desc))
            throw DataError("emoticon table: description '" + desc + "' is not lowercase words at line "
                            + std::to_string(line_no));
        const auto cps = unicode::decode(key);
        bool removable = false;
        for (char32_t cp : cps) {
            if (unicode::is_space(cp))
                throw DataError("emoticon table: key contains whitespace at line "
                                + std::to_string(line_no));
            removable = removable || unicode::is_deleted(cp) || cp == U'@' || cp == U'#'
                || cp == U'&';
        }
        if (!removable)
            throw DataError("emoticon table: key '" + key
                            + "' has no punctuation or digit (cleaning could recreate it) at line "
                            + std::to_string(line_no));
        if (!table.emoticons_.emplace(key, desc).second)
            throw DataError("emoticon table: duplicate key '" + key + "' at line "
                            + std::to_string(line_no));
    }

    line_no = 0;
    for (auto line : data_lines(emoji_tsv)) {
        ++line_no;
        if (is_skippable(line))
            continue;
        const auto tab = line.find('\t');
        if (tab == std::string_view::npos || tab == 0)
            throw DataError("emoji table: malformed row at line " + std::to_string(line_no));
        std::u32string sequence;
        std::istringstream hex{std::string(line.substr(0, tab))};
        std::string token;
        while (hex >> token) {
            unsigned long cp = 0;
            const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), cp, 16);
            if (ec != std::errc{} || ptr != token.data() + token.size() || cp > 0x10FFFF)
                throw DataError("emoji table: bad codepoint '" + token + "' at line "
                                + std::to_string(line_no));
            sequence.push_back(static_cast<char32_t>(cp));
        }
        std::string desc(line.substr(tab + 1));
        if (sequence.empty() || !is_lowercase_words(desc))
            throw DataError("emoji table: malformed row at line " + std::to_string(line_no));
        table.add_emoji(sequence, std::move(desc));
    }
    return table;
}

EmojiTable EmojiTable::load(const std::filesystem::path& emoticons, const std::filesystem::path& emoji)
{
    return parse(read_file(emoticons), read_file(emoji));
}

const EmojiTable& EmojiTable::bundled()
{
    static const EmojiTable table = parse(bundled::emoticons_tsv, bundled::emoji_tsv);
    return table;
}

void EmojiTable::add_emoji(const std::u32string& sequence, std::string description)
{
    std::size_t node = 0;
    for (char32_t cp : sequence) {
        auto it = trie_[node].children.find(cp);
        if (it == trie_[node].children.end()) {
            trie_.push_back(Node{});
            it = trie_[node].children.emplace(cp, trie_.size() - 1).first;
        }
        node = it->second;
    }
    if (trie_[node].terminal)
        throw DataError("emoji table: duplicate sequence");
    trie_[node].terminal = true;
    trie_[node].description = std::move(description);
    ++emoji_count_;
}

const std::string* EmojiTable::find_emoticon(std::string_view token) const
{
    const auto it = emoticons_.find(std::string(token));
    return it == emoticons_.end() ? nullptr : &it->second;
}

std::string EmojiTable::replace_emoji(std::string_view text) const
{
    const std::u32string cps = unicode::decode(text);
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < cps.size()) {
        std::size_t node = 0;
        std::size_t match_len = 0;
        const std::string* match = nullptr;
        for (std::size_t j = i; j < cps.size(); ++j) {
            const auto it = trie_[node].children.find(cps[j]);
            if (it == trie_[node].children.end())
                break;
            node = it->second;
            if (trie_[node].terminal) {
                match_len = j - i + 1;
                match = &trie_[node].description;
            }
        }
        if (match) {
            out += ' ';
            out += *match;
            out += ' ';
            i += match_len;
        } else {
            unicode::append(out, cps[i]);
            ++i;
        }
    }
    return out;
}

std::string EmojiTable::replace(std::string_view text) const
{
    const std::string with_emoji = replace_emoji(text);
    if (emoticons_.empty())
        return with_emoji;

    // Emoticons are matched as whole tokens; separators are kept verbatim.
    std::string out;
    out.reserve(with_emoji.size());
    std::size_t i = 0;
    const auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
    while (i < with_emoji.size()) {
        if (is_sep(with_emoji[i])) {
            out += with_emoji[i++];
            continue;
        }
        std::size_t j = i;
        while (j < with_emoji.size() && !is_sep(with_emoji[j]))
            ++j;
        const std::string_view token(with_emoji.data() + i, j - i);
        if (const auto* desc = find_emoticon(token))
            out += *desc;
        else
            out += token;
        i = j;
    }
    return out;
}

StopList::StopList(std::vector<std::string> words)
{
    for (auto& w : words)
        words_.insert(unicode::to_lower(w));
}

StopList StopList::parse(std::string_view text)
{
    std::vector<std::string> words;
    for (auto line : data_lines(text)) {
        if (is_skippable(line))
            continue;
        const auto first = line.find_first_not_of(" \t");
        const auto last = line.find_last_not_of(" \t");
        words.emplace_back(line.substr(first, last - first + 1));
    }
    return StopList(std::move(words));
}

StopList StopList::load(const std::filesystem::path& path) { return parse(read_file(path)); }

const StopList& StopList::bundled()
{
    static const StopList list = parse(bundled::stopwords_txt);
    return list;
}

bool StopList::contains(std::string_view word) const
{
    return words_.contains(unicode::to_lower(word));
}

std::string remove_stopwords(std::string_view text, const StopList& stoplist)
{
    std::vector<std::u32string> kept;
    for (auto& token : split_tokens(unicode::decode(text)))
        if (!stoplist.contains(unicode::encode(token)))
            kept.push_back(std::move(token));
    return unicode::encode(join_tokens(kept));
}

std::string clean_tweet(std::string_view text, CleanOptions opts, const EmojiTable& table,
                        const StopList& stoplist)
{
    if (!opts.general())
        return std::string(text);

    // Deleting punctuation can bring emoji fragments together into a new
    // sequence; repeating the pass until nothing changes makes cleaning
    // idempotent. Replacements only emit ASCII words, so this settles within
    // a few rounds.
    std::string current = clean_pass(text, table);
    for (int round = 0; round < 8; ++round) {
        std::string next = clean_pass(current, table);
        if (next == current)
            break;
        current = std::move(next);
    }

    if (opts.stopwords())
        current = remove_stopwords(current, stoplist);
    return current;
}

Vector pool_mean(const std::vector<Vector>& word_vectors)
{
    if (word_vectors.empty())
        throw DataError("no known tokens");
    const std::size_t dim = word_vectors.front().size();
    Vector mean(dim, 0.0);
    for (const auto& v : word_vectors) {
        if (v.size() != dim)
            throw std::invalid_argument("pool_mean: vectors of unequal dimension");
        for (std::size_t i = 0; i < dim; ++i)
            mean[i] += v[i];
    }
    const double n = static_cast<double>(word_vectors.size());
    for (auto& x : mean)
        x /= n;
    return mean;
}

Vector embed_by_mean(std::string_view text, const std::unordered_map<std::string, Vector>& words)
{
    std::vector<Vector> found;
    for (const auto& token : split_tokens(unicode::decode(text))) {
        const std::string utf8 = unicode::encode(token);
        auto it = words.find(utf8);
        if (it == words.end())
            it = words.find(unicode::to_lower(utf8));
        if (it != words.end())
            found.push_back(it->second);
    }
    return pool_mean(found);
}

}  // namespace emofrnn
