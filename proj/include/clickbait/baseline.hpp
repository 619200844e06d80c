#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>

#include "clickbait/adaboost.hpp"
#include "clickbait/data_ingest.hpp"
#include "clickbait/linguistic_cues.hpp"
#include "clickbait/model.hpp"
#include "clickbait/tfidf.hpp"

namespace clickbait {

/// tf-idf over the chosen text, optionally followed by five cue columns
/// computed over the same text, scored by a boosted stump ensemble.
struct BaselineConfig {
    DocumentSource text = DocumentSource::tweet;
    bool with_cues = false;
    CueNormalization normalization = CueNormalization::per_token;
    AdaBoostOptions boost;
};

struct BaselineModel {
    BaselineConfig config;
    TfidfModel tfidf;
    StumpEnsemble ensemble;
    std::uint64_t lexicon_fingerprint = 0;

    /// Feature row for one post; cue columns follow the tf-idf block.
    SparseVector features(const Post& post, const CueLexicons* lexicons) const;
};

/// Needs truths for every post; lexicons are required when with_cues is set.
BaselineModel baseline_fit(const Dataset& train, const BaselineConfig& config, const CueLexicons* lexicons);
std::vector<Prediction> baseline_predict(const BaselineModel& model, const Dataset& data,
                                         const CueLexicons* lexicons);

void save_baseline(const BaselineModel& model, const std::filesystem::path& path);
BaselineModel load_baseline(const std::filesystem::path& path);

}  // namespace clickbait
