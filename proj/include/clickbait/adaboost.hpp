#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "clickbait/tfidf.hpp"

namespace clickbait {

/// Depth-1 regression tree: x[feature] <= threshold -> left, else right.
struct Stump {
    std::uint32_t feature = 0;
    double threshold = 0.0;
    double left = 0.0;
    double right = 0.0;
    // No split was possible; the stump predicts `left` everywhere.
    bool constant = false;

    double predict(const SparseVector& x) const;
    bool operator==(const Stump&) const = default;
};

enum class BoostLoss { linear, square, exponential };

BoostLoss parse_boost_loss(const std::string& s);
const char* to_string(BoostLoss l);

struct StumpEnsemble {
    std::vector<Stump> stumps;
    std::vector<double> weights;
    BoostLoss loss = BoostLoss::linear;

    nlohmann::json to_json() const;
    static StumpEnsemble from_json(const nlohmann::json& j);
};

struct AdaBoostOptions {
    std::size_t n_estimators = 50;
    BoostLoss loss = BoostLoss::linear;
    std::uint64_t seed = 0;
    bool parallel = true;
};

/// Everything one boosting round computed, for auditing the recurrence.
struct AdaBoostRound {
    std::vector<double> weights_before;
    std::vector<std::size_t> sample;  // bootstrap draw, row indices
    Stump stump;
    std::vector<double> losses;       // per-example loss in [0,1]
    double average_loss = 0.0;
    double beta = 0.0;
    double stump_weight = 0.0;
    std::vector<double> weights_after;  // normalized
    bool kept = true;                   // false: round discarded (average loss >= 0.5)
};

/// Column-major copy of a feature matrix for the stump search.
struct ColumnIndex {
    struct Entry {
        std::uint32_t row;
        double value;
    };
    std::vector<std::vector<Entry>> columns;

    explicit ColumnIndex(const FeatureMatrix& x);
};

/// Least-squares stump on a bootstrap sample (row indices with repetition).
/// Ties resolve to the lowest feature, then the lowest threshold.
namespace stump_search {
Stump serial(const ColumnIndex& cols, std::span<const double> y, std::span<const std::size_t> sample);
Stump omp(const ColumnIndex& cols, std::span<const double> y, std::span<const std::size_t> sample);
}  // namespace stump_search

/// AdaBoost.R2 with bootstrap resampling from the example weights. Stops
/// early on a perfect round (kept with weight 1) or when the average loss
/// reaches 0.5 (discarded unless it is the first round, which is kept with
/// weight 1).
StumpEnsemble ab_fit(const FeatureMatrix& x, std::span<const double> y, const AdaBoostOptions& options,
                     std::vector<AdaBoostRound>* transcript = nullptr);

/// Lower weighted median of the stump outputs, clamped to [0,1].
double ab_predict(const StumpEnsemble& ensemble, const SparseVector& x);
/// The median before clamping.
double ab_predict_raw(const StumpEnsemble& ensemble, const SparseVector& x);

}  // namespace clickbait
