#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "emofrnn/types.hpp"

namespace emofrnn {

/// Preparation level applied to tweets before embedding.
enum class PrepLevel {
    raw,        ///< text untouched
    standard,   ///< general cleaning
    stopwords,  ///< general cleaning followed by stop-word removal
};

std::string_view to_string(PrepLevel level);
std::optional<PrepLevel> parse_prep_level(std::string_view token);

/// Cleaning switches. Stop-word removal only runs on generally cleaned text,
/// so the only valid combinations are the three preparation levels.
class CleanOptions {
public:
    constexpr CleanOptions() = default;
    constexpr explicit CleanOptions(PrepLevel level) : level_(level) {}

    constexpr bool general() const { return level_ != PrepLevel::raw; }
    constexpr bool stopwords() const { return level_ == PrepLevel::stopwords; }
    constexpr PrepLevel level() const { return level_; }

private:
    PrepLevel level_ = PrepLevel::standard;
};

/// Emoji and emoticon descriptions used to verbalise pictographs.
class EmojiTable {
public:
    /// Parses `emoticon<TAB>description` and `hex codepoints<TAB>description`
    /// tables. Lines starting with '#' are comments. Throws DataError on
    /// malformed rows, on descriptions that are not lowercase words, and on
    /// emoticons that contain no character removed by cleaning.
    static EmojiTable parse(std::string_view emoticons_tsv, std::string_view emoji_tsv);
    static EmojiTable load(const std::filesystem::path& emoticons, const std::filesystem::path& emoji);
    /// Tables compiled into the library from data/.
    static const EmojiTable& bundled();

    std::size_t emoticon_count() const { return emoticons_.size(); }
    std::size_t emoji_count() const { return emoji_count_; }

    const std::string* find_emoticon(std::string_view token) const;

    /// Replaces every known emoji sequence (longest match) by its
    /// description surrounded by spaces, and every whitespace-delimited
    /// emoticon token by its description.
    std::string replace(std::string_view text) const;

private:
    struct Node {
        std::map<char32_t, std::size_t> children;
        std::string description;
        bool terminal = false;
    };

    std::string replace_emoji(std::string_view text) const;
    void add_emoji(const std::u32string& sequence, std::string description);

    std::unordered_map<std::string, std::string> emoticons_;
    std::vector<Node> trie_{Node{}};
    std::size_t emoji_count_ = 0;
};

/// Case-insensitive stop-word set.
class StopList {
public:
    StopList() = default;
    explicit StopList(std::vector<std::string> words);
    /// One word per line; '#' comments and blank lines are ignored.
    static StopList parse(std::string_view text);
    static StopList load(const std::filesystem::path& path);
    /// The bundled 127-word English list.
    static const StopList& bundled();

    bool contains(std::string_view word) const;
    std::size_t size() const { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

/// Applies, in order: emoji and emoticon replacement, removal of tokens that
/// start with '@', '#' stripping, '&' to "and", digit deletion, punctuation
/// deletion, whitespace collapsing and trimming, then optional stop-word
/// removal. With opts.general() false the input is returned unchanged.
std::string clean_tweet(std::string_view text, CleanOptions opts,
                        const EmojiTable& table = EmojiTable::bundled(),
                        const StopList& stoplist = StopList::bundled());

/// Drops whitespace-delimited tokens whose lowercase form is in `stoplist`.
/// Surviving tokens keep their casing and order and are joined by single spaces.
std::string remove_stopwords(std::string_view text, const StopList& stoplist);

/// Component-wise arithmetic mean of equally sized vectors.
Vector pool_mean(const std::vector<Vector>& word_vectors);

/// Tweet vector as the mean of the vectors of its whitespace tokens. Tokens
/// missing from `words` are skipped; a lowercase lookup is tried before
/// giving up on a token. Throws DataError("no known tokens") when nothing
/// matches.
Vector embed_by_mean(std::string_view text, const std::unordered_map<std::string, Vector>& words);

namespace bundled {
extern const std::string_view emoticons_tsv;
extern const std::string_view emoji_tsv;
extern const std::string_view stopwords_txt;
}  // namespace bundled

}  // namespace emofrnn
