#include "clickbait/evaluation.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <unordered_map>

#include "clickbait/error.hpp"

namespace clickbait {

RegressionMetrics regression_metrics(std::span<const double> pred, std::span<const double> truth) {
    if (pred.size() != truth.size()) throw Error("prediction and truth lengths differ");
    if (pred.empty()) throw Error("no predictions to evaluate");
    const double n = static_cast<double>(pred.size());

    double sse = 0.0, sae = 0.0, tsum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - truth[i];
        sse += d * d;
        sae += std::abs(d);
        tsum += truth[i];
    }
    const double tmean = tsum / n;
    double sst = 0.0;
    for (double t : truth) sst += (t - tmean) * (t - tmean);

    RegressionMetrics m;
    m.mse = sse / n;
    m.rmse = std::sqrt(m.mse);
    m.mae = sae / n;
    // Exact comparison: a rounded mean leaves a spurious nonzero sst for constant truths.
    bool constant = true;
    for (double t : truth) constant = constant && t == truth[0];
    if (!constant) {
        m.r2 = 1.0 - sse / sst;
    } else {
        m.r2 = std::numeric_limits<double>::quiet_NaN();
        m.r2_defined = false;
    }
    return m;
}

TruthClass binarize(double score, double threshold) {
    return score >= threshold ? TruthClass::clickbait : TruthClass::no_clickbait;
}

ClassificationMetrics classification_metrics(std::span<const double> pred_scores,
                                             std::span<const TruthClass> truth_classes, double threshold) {
    if (pred_scores.size() != truth_classes.size()) throw Error("prediction and truth lengths differ");
    ClassificationMetrics m;
    for (std::size_t i = 0; i < pred_scores.size(); ++i) {
        const bool p = binarize(pred_scores[i], threshold) == TruthClass::clickbait;
        const bool t = truth_classes[i] == TruthClass::clickbait;
        if (p && t) ++m.tp;
        else if (p) ++m.fp;
        else if (t) ++m.fn;
        else ++m.tn;
    }
    if (m.tp + m.fp > 0) m.precision = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
    else m.precision_undefined = true;
    if (m.tp + m.fn > 0) m.recall = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
    else m.recall_undefined = true;
    if (m.precision + m.recall > 0.0) m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    else m.f1_undefined = true;
    return m;
}

double mean_judgment(std::span<const double> judgments) {
    if (judgments.empty()) throw Error("mean of no judgments");
    double s = 0.0;
    for (double j : judgments) s += j;
    return s / static_cast<double>(judgments.size());
}

MetricsReport evaluate(std::span<const Prediction> predictions,
                       const std::map<std::string, TruthAnnotation>& truths, double threshold) {
    std::unordered_map<std::string, double> by_id;
    for (const Prediction& p : predictions) {
        if (!by_id.emplace(p.id, p.clickbait_score).second) throw Error("duplicate prediction for post " + p.id);
        if (!truths.count(p.id)) throw Error("prediction for post " + p.id + " has no truth");
    }
    std::vector<double> pred, truth;
    std::vector<TruthClass> classes;
    RatioStat ratio;
    for (const auto& [id, t] : truths) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw Error("no prediction for post " + id);
        pred.push_back(it->second);
        truth.push_back(t.truth_mean);
        classes.push_back(class_for_score(t.truth_mean));
        ++ratio.n_posts;
        if (classes.back() == TruthClass::clickbait) ++ratio.n_clickbait;
        else ++ratio.n_not;
    }
    ratio.defined = ratio.n_clickbait > 0;
    ratio.ratio_not_per_clickbait = ratio.defined ? static_cast<double>(ratio.n_not) / ratio.n_clickbait
                                                  : std::numeric_limits<double>::quiet_NaN();

    MetricsReport r;
    r.n = pred.size();
    r.regression = regression_metrics(pred, truth);
    r.classification = classification_metrics(pred, classes, threshold);
    r.ratio = ratio;
    return r;
}

namespace {

nlohmann::json number_or_null(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json MetricsReport::to_json() const {
    // nlohmann::json objects keep keys sorted, so the layout is fixed.
    return {
        {"n", n},
        {"mse", regression.mse},
        {"rmse", regression.rmse},
        {"mae", regression.mae},
        {"r2", number_or_null(regression.r2)},
        {"r2_defined", regression.r2_defined},
        {"precision", classification.precision},
        {"recall", classification.recall},
        {"f1", classification.f1},
        {"precision_undefined", classification.precision_undefined},
        {"recall_undefined", classification.recall_undefined},
        {"f1_undefined", classification.f1_undefined},
        {"tp", classification.tp},
        {"fp", classification.fp},
        {"fn", classification.fn},
        {"tn", classification.tn},
        {"n_clickbait", ratio.n_clickbait},
        {"n_no_clickbait", ratio.n_not},
        {"ratio", ratio.display()},
    };
}

void MetricsReport::print_table(std::ostream& out) const {
    const auto flags = out.flags();
    out << std::fixed << std::setprecision(4);
    out << "metric      value\n";
    out << "n           " << n << '\n';
    out << "mse         " << regression.mse << '\n';
    out << "rmse        " << regression.rmse << '\n';
    out << "mae         " << regression.mae << '\n';
    out << "r2          ";
    if (regression.r2_defined) out << regression.r2 << '\n';
    else out << "undefined (constant truth)\n";
    out << "precision   " << classification.precision << (classification.precision_undefined ? " (undefined)" : "")
        << '\n';
    out << "recall      " << classification.recall << (classification.recall_undefined ? " (undefined)" : "") << '\n';
    out << "f1          " << classification.f1 << (classification.f1_undefined ? " (undefined)" : "") << '\n';
    out << "ratio       " << ratio.display() << '\n';
    out.flags(flags);
}

}  // namespace clickbait
