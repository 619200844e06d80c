#pragma once

#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "clickbait/data_ingest.hpp"
#include "clickbait/model.hpp"

namespace clickbait {

struct RegressionMetrics {
    double mse = 0.0;
    double rmse = 0.0;
    double mae = 0.0;
    // NaN when the truth has zero variance (see r2_defined).
    double r2 = 0.0;
    bool r2_defined = true;
};

struct ClassificationMetrics {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    // Set when the corresponding denominator was zero and the value is 0 by convention.
    bool precision_undefined = false;
    bool recall_undefined = false;
    bool f1_undefined = false;
};

RegressionMetrics regression_metrics(std::span<const double> pred, std::span<const double> truth);

/// Clickbait iff score >= threshold.
TruthClass binarize(double score, double threshold = 0.5);

ClassificationMetrics classification_metrics(std::span<const double> pred_scores,
                                             std::span<const TruthClass> truth_classes,
                                             double threshold = 0.5);

double mean_judgment(std::span<const double> judgments);

struct MetricsReport {
    std::size_t n = 0;
    RegressionMetrics regression;
    ClassificationMetrics classification;
    RatioStat ratio;  // class balance of the truth

    nlohmann::json to_json() const;
    void print_table(std::ostream& out) const;
};

/// Pairs predictions with truths by id. Every truth id needs exactly one
/// prediction and every prediction must have a truth.
MetricsReport evaluate(std::span<const Prediction> predictions,
                       const std::map<std::string, TruthAnnotation>& truths, double threshold = 0.5);

}  // namespace clickbait
