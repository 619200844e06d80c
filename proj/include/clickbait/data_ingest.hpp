#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace clickbait {

/// One challenge instance: the tweet plus the linked article fields.
/// Absent fields in the source file become empty values.
struct Post {
    std::string id;
    std::vector<std::string> post_text;
    std::vector<std::string> media_paths;
    std::string timestamp;
    std::string target_title;
    std::string target_description;
    std::string target_keywords;
    std::vector<std::string> target_paragraphs;
    std::vector<std::string> target_captions;

    bool operator==(const Post&) const = default;
};

enum class TruthClass { clickbait, no_clickbait };

struct TruthAnnotation {
    std::string id;
    std::vector<double> judgments;
    double truth_mean = 0.0;
    TruthClass truth_class = TruthClass::no_clickbait;
    // Set for pseudo-labels produced by a model rather than annotators.
    bool synthetic = false;
};

struct Dataset {
    std::string name;
    std::vector<Post> posts;
    std::optional<std::map<std::string, TruthAnnotation>> truths;

    std::size_t size() const { return posts.size(); }
    /// Truth for a post; throws when truths are absent or the id is missing.
    const TruthAnnotation& truth_for(const std::string& id) const;
};

struct RatioStat {
    std::size_t n_posts = 0;
    std::size_t n_clickbait = 0;
    std::size_t n_not = 0;
    // Not-a-number when there are no clickbait posts (see `defined`).
    double ratio_not_per_clickbait = 0.0;
    bool defined = false;

    /// "1:2.23" style display string, or "1:?" when undefined.
    std::string display() const;
};

enum class JudgmentScale {
    // {0.0, 0.3, 0.66, 1.0} as written in the task description.
    strict,
    // Also accepts 1/3 and 2/3, which is how the released corpus stores them.
    corpus,
};

TruthClass class_for_score(double score);
const char* to_string(TruthClass c);

Dataset parse_instances(std::istream& in, std::string name = {});
Dataset read_instances(const std::string& path);
std::map<std::string, TruthAnnotation> parse_truth(std::istream& in,
                                                   JudgmentScale scale = JudgmentScale::corpus);
std::map<std::string, TruthAnnotation> read_truth(const std::string& path,
                                                  JudgmentScale scale = JudgmentScale::corpus);

void write_instances(std::ostream& out, const Dataset& dataset);
void write_truth(std::ostream& out, const Dataset& dataset);

/// Attaches truths to a dataset. Every truth id must name a post.
void attach_truth(Dataset& dataset, std::map<std::string, TruthAnnotation> truths);

RatioStat class_ratio(const Dataset& dataset);

/// Splits into (train, validation); validation gets round(val_fraction * n)
/// posts. The partition depends only on the id set and the seed.
std::pair<Dataset, Dataset> train_val_split(const Dataset& dataset, double val_fraction,
                                            std::uint64_t seed);

/// Index form of the split, shared with the model trainer.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    const std::vector<std::string>& ids, double val_fraction, std::uint64_t seed);

}  // namespace clickbait
