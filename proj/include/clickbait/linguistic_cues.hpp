#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace clickbait {

enum class CueFamily { assertive = 0, factive, hedges, implicative, report };

inline constexpr std::size_t kCueFamilies = 5;
inline constexpr std::array<const char*, kCueFamilies> kCueFamilyNames{
    "assertive", "factive", "hedges", "implicative", "report"};

struct Lexicon {
    std::unordered_set<std::string> words;
    // Multi-word entries, stored as cleaned token runs.
    std::vector<std::vector<std::string>> phrases;

    std::size_t entries() const { return words.size() + phrases.size(); }
};

/// The five bias-lexicon families, indexed by CueFamily.
struct CueLexicons {
    std::array<Lexicon, kCueFamilies> families;

    const Lexicon& operator[](CueFamily f) const { return families[static_cast<std::size_t>(f)]; }
    /// FNV-1a over the sorted entries of every family.
    std::uint64_t fingerprint() const;
};

enum class CueNormalization { raw_count, per_token };

CueNormalization parse_cue_normalization(const std::string& s);
const char* to_string(CueNormalization n);

/// Values ordered [assertive, factive, hedges, implicative, report].
struct CueVector {
    std::array<double, kCueFamilies> values{};
    CueNormalization normalization = CueNormalization::per_token;
};

/// Reads <dir>/{assertive,factive,hedges,implicative,report}.txt. Entries are
/// cleaned like document text so apostrophes and case match tokenization.
CueLexicons load_lexicons(const std::filesystem::path& directory);

/// Counts family hits in already-cleaned tokens. Phrases are matched as
/// contiguous runs, longest first, and each occurrence counts once.
CueVector extract_cues(std::span<const std::string> tokens, const CueLexicons& lexicons,
                       CueNormalization normalization = CueNormalization::per_token);

}  // namespace clickbait
