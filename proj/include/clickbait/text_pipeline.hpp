#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "clickbait/data_ingest.hpp"

namespace clickbait {

using Tokens = std::vector<std::string>;

/// Lowercased whitespace tokens with hashtags, mentions and URLs dropped and
/// punctuation stripped. Total; idempotent under re-joining.
Tokens clean(std::string_view text);

/// Frequency-ranked word index. Index 0 is the padding slot and maps to no word.
class Vocabulary {
public:
    static constexpr std::size_t default_max_words = 10000;

    Vocabulary() = default;

    std::size_t max_words() const { return max_words_; }
    std::size_t size() const { return words_.size(); }
    /// 1-based index, or nullopt when out of vocabulary.
    std::optional<int> index_of(const std::string& word) const;
    const std::string& word_at(int index) const;

    void save(std::ostream& out) const;
    static Vocabulary load(std::istream& in, std::size_t max_words = default_max_words);

    friend Vocabulary fit_vocabulary(std::span<const Tokens> corpus, std::size_t max_words);

private:
    std::size_t max_words_ = default_max_words;
    std::vector<std::string> words_;  // words_[i] has index i + 1
    std::unordered_map<std::string, int> index_;
};

/// Ranks words by descending frequency (ties: first occurrence) and keeps
/// the top max_words.
Vocabulary fit_vocabulary(std::span<const Tokens> corpus,
                          std::size_t max_words = Vocabulary::default_max_words);

/// Out-of-vocabulary tokens are skipped.
std::vector<int> to_sequence(std::span<const std::string> tokens, const Vocabulary& vocab);

/// Left-pads with zeros or keeps the last `length` entries.
std::vector<int> pad(std::span<const int> seq, std::size_t length = 100);

enum class DocumentSource { tweet, article, tweet_article };

DocumentSource parse_document_source(std::string_view s);
const char* to_string(DocumentSource s);

std::string assemble_document(const Post& post, DocumentSource source);

}  // namespace clickbait
