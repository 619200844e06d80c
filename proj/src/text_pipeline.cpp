#include "clickbait/text_pipeline.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>

#include "clickbait/error.hpp"

namespace clickbait {

namespace {

// Typographic punctuation that shows up in tweets and article bodies.
constexpr std::array<std::string_view, 10> kUtf8Punct{
    "‘", "’", "“", "”", "–", "—", "…", "«", "»", "¡",
};

std::string strip_punct(std::string_view tok) {
    std::string out;
    out.reserve(tok.size());
    std::size_t i = 0;
    while (i < tok.size()) {
        const auto c = static_cast<unsigned char>(tok[i]);
        if (c < 0x80) {
            if (!std::ispunct(c)) out += static_cast<char>(c);
            ++i;
            continue;
        }
        bool matched = false;
        for (std::string_view p : kUtf8Punct) {
            if (tok.substr(i, p.size()) == p) {
                i += p.size();
                matched = true;
                break;
            }
        }
        if (!matched) out += tok[i++];
    }
    return out;
}

void join_into(std::string& out, std::string_view piece) {
    if (piece.empty()) return;
    if (!out.empty()) out += ' ';
    out += piece;
}

}  // namespace

Tokens clean(std::string_view text) {
    Tokens out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j == i) break;
        std::string tok(text.substr(i, j - i));
        i = j;
        for (char& c : tok)
            if (static_cast<unsigned char>(c) < 0x80) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (tok.front() == '#' || tok.front() == '@') continue;
        if (tok.find("://") != std::string::npos || tok.rfind("www.", 0) == 0) continue;
        std::string stripped = strip_punct(tok);
        if (!stripped.empty()) out.push_back(std::move(stripped));
    }
    return out;
}

std::optional<int> Vocabulary::index_of(const std::string& word) const {
    auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const std::string& Vocabulary::word_at(int index) const {
    if (index < 1 || static_cast<std::size_t>(index) > words_.size())
        throw Error("vocabulary index " + std::to_string(index) + " out of range");
    return words_[static_cast<std::size_t>(index - 1)];
}

void Vocabulary::save(std::ostream& out) const {
    for (std::size_t i = 0; i < words_.size(); ++i) out << words_[i] << '\t' << (i + 1) << '\n';
}

Vocabulary Vocabulary::load(std::istream& in, std::size_t max_words) {
    Vocabulary v;
    v.max_words_ = max_words;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw Error("vocabulary line " + std::to_string(line_no) + ": missing tab");
        std::string word = line.substr(0, tab);
        int index = 0;
        try {
            index = std::stoi(line.substr(tab + 1));
        } catch (const std::exception&) {
            throw Error("vocabulary line " + std::to_string(line_no) + ": bad index");
        }
        if (static_cast<std::size_t>(index) != v.words_.size() + 1)
            throw Error("vocabulary indices must be dense and sorted (line " + std::to_string(line_no) + ")");
        if (!v.index_.emplace(word, index).second) throw Error("duplicate vocabulary word " + word);
        v.words_.push_back(std::move(word));
    }
    if (v.words_.size() > max_words) throw Error("vocabulary larger than max_words");
    return v;
}

Vocabulary fit_vocabulary(std::span<const Tokens> corpus, std::size_t max_words) {
    struct Entry {
        std::size_t count = 0;
        std::size_t first = 0;
    };
    std::unordered_map<std::string, Entry> counts;
    std::vector<std::string> order;
    for (const Tokens& doc : corpus)
        for (const std::string& w : doc) {
            auto [it, inserted] = counts.try_emplace(w, Entry{0, order.size()});
            if (inserted) order.push_back(w);
            ++it->second.count;
        }
    if (order.empty()) throw Error("cannot fit a vocabulary on an empty corpus");

    std::stable_sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
        return counts[a].count > counts[b].count;
    });
    if (order.size() > max_words) order.resize(max_words);

    Vocabulary v;
    v.max_words_ = max_words;
    v.words_ = std::move(order);
    for (std::size_t i = 0; i < v.words_.size(); ++i) v.index_.emplace(v.words_[i], static_cast<int>(i + 1));
    return v;
}

std::vector<int> to_sequence(std::span<const std::string> tokens, const Vocabulary& vocab) {
    std::vector<int> out;
    out.reserve(tokens.size());
    for (const std::string& t : tokens)
        if (auto idx = vocab.index_of(t)) out.push_back(*idx);
    return out;
}

std::vector<int> pad(std::span<const int> seq, std::size_t length) {
    if (length == 0) throw Error("pad length must be positive");
    std::vector<int> out(length, 0);
    if (seq.size() >= length) {
        std::copy(seq.end() - static_cast<std::ptrdiff_t>(length), seq.end(), out.begin());
    } else {
        std::copy(seq.begin(), seq.end(), out.begin() + static_cast<std::ptrdiff_t>(length - seq.size()));
    }
    return out;
}

DocumentSource parse_document_source(std::string_view s) {
    if (s == "tweet") return DocumentSource::tweet;
    if (s == "article") return DocumentSource::article;
    if (s == "both" || s == "tweet+article") return DocumentSource::tweet_article;
    throw Error("unknown text source '" + std::string(s) + "' (expected tweet, article or both)");
}

const char* to_string(DocumentSource s) {
    switch (s) {
        case DocumentSource::tweet: return "tweet";
        case DocumentSource::article: return "article";
        case DocumentSource::tweet_article: return "both";
    }
    return "?";
}

std::string assemble_document(const Post& post, DocumentSource source) {
    std::string out;
    if (source != DocumentSource::article)
        for (const auto& s : post.post_text) join_into(out, s);
    if (source != DocumentSource::tweet) {
        join_into(out, post.target_title);
        join_into(out, post.target_keywords);
        join_into(out, post.target_description);
        for (const auto& s : post.target_paragraphs) join_into(out, s);
    }
    return out;
}

}  // namespace clickbait
