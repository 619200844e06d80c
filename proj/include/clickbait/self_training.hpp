#pragma once

#include <optional>
#include <string>

#include "clickbait/data_ingest.hpp"
#include "clickbait/model.hpp"

namespace clickbait {

/// Copies the posts and attaches synthetic truths: truth_mean is the model's
/// score, the class follows the 0.5 threshold, and judgments are empty.
Dataset pseudo_label(const TrainedModel& model, const Dataset& unlabelled, const FeatureEncoder& encoder);

/// Labels from already-computed predictions (same order as the posts).
Dataset pseudo_label(const Dataset& unlabelled, const std::vector<Prediction>& predictions);

/// Concatenates labelled then noisy records; truths keep their synthetic flag.
Dataset merge_noisy(const Dataset& labelled, const Dataset& noisy);

struct SelfTrainingReport {
    std::size_t labelled = 0;
    std::size_t noisy = 0;
    std::size_t merged = 0;
    RatioStat noisy_ratio;
    RatioStat merged_ratio;
    // Set when the counts match the published corpus sizes, whose combined
    // total was reported as 99,551 rather than the exact 99,550.
    std::optional<std::string> note;
};

SelfTrainingReport self_training_report(const Dataset& labelled, const Dataset& noisy, const Dataset& merged);

}  // namespace clickbait
