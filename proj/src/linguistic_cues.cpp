#include "clickbait/linguistic_cues.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>

#include "clickbait/error.hpp"
#include "clickbait/text_pipeline.hpp"

namespace clickbait {

namespace {

Lexicon read_family(const std::filesystem::path& file, const char* family) {
    std::ifstream in(file);
    if (!in) throw Error(std::string(family) + " lexicon missing (" + file.string() + ")");
    Lexicon lex;
    std::set<std::vector<std::string>> phrases;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        Tokens toks = clean(line);
        if (toks.empty()) continue;
        if (toks.size() == 1)
            lex.words.insert(std::move(toks.front()));
        else
            phrases.insert(std::move(toks));
    }
    lex.phrases.assign(phrases.begin(), phrases.end());
    // Longest phrases first so the scanner prefers the longest match.
    std::stable_sort(lex.phrases.begin(), lex.phrases.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
    if (lex.entries() == 0) throw Error(std::string(family) + " lexicon is empty (" + file.string() + ")");
    return lex;
}

std::size_t count_family(std::span<const std::string> tokens, const Lexicon& lex) {
    std::size_t hits = 0;
    std::size_t i = 0;
    while (i < tokens.size()) {
        std::size_t advance = 0;
        for (const auto& phrase : lex.phrases) {
            if (phrase.size() > tokens.size() - i) continue;
            if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
                advance = phrase.size();
                break;
            }
        }
        if (advance == 0 && lex.words.count(tokens[i])) advance = 1;
        if (advance > 0) {
            ++hits;
            i += advance;
        } else {
            ++i;
        }
    }
    return hits;
}

}  // namespace

std::uint64_t CueLexicons::fingerprint() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        h ^= 0xff;
        h *= 1099511628211ULL;
    };
    for (std::size_t f = 0; f < kCueFamilies; ++f) {
        mix(kCueFamilyNames[f]);
        std::vector<std::string> entries(families[f].words.begin(), families[f].words.end());
        for (const auto& p : families[f].phrases) {
            std::string joined;
            for (const auto& t : p) joined += (joined.empty() ? "" : " ") + t;
            entries.push_back(std::move(joined));
        }
        std::sort(entries.begin(), entries.end());
        for (const auto& e : entries) mix(e);
    }
    return h;
}

CueNormalization parse_cue_normalization(const std::string& s) {
    if (s == "per_token") return CueNormalization::per_token;
    if (s == "raw_count" || s == "raw") return CueNormalization::raw_count;
    throw Error("unknown cue normalization '" + s + "'");
}

const char* to_string(CueNormalization n) {
    return n == CueNormalization::per_token ? "per_token" : "raw_count";
}

CueLexicons load_lexicons(const std::filesystem::path& directory) {
    CueLexicons lex;
    for (std::size_t f = 0; f < kCueFamilies; ++f) {
        const char* name = kCueFamilyNames[f];
        lex.families[f] = read_family(directory / (std::string(name) + ".txt"), name);
        std::clog << "lexicon " << name << ": " << lex.families[f].entries() << " entries\n";
    }
    return lex;
}

CueVector extract_cues(std::span<const std::string> tokens, const CueLexicons& lexicons,
                       CueNormalization normalization) {
    CueVector out;
    out.normalization = normalization;
    const double denom = std::max<std::size_t>(1, tokens.size());
    for (std::size_t f = 0; f < kCueFamilies; ++f) {
        const auto hits = static_cast<double>(count_family(tokens, lexicons.families[f]));
        out.values[f] = normalization == CueNormalization::per_token ? hits / denom : hits;
    }
    return out;
}

}  // namespace clickbait
