#include "clickbait/adaboost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "clickbait/error.hpp"
#include "clickbait/rng.hpp"

namespace clickbait {

namespace {

// Best split on one feature; score is S_L^2/n_L + S_R^2/n_R (larger is better).
// A later candidate must beat the incumbent by more than rounding noise, so
// identical partitions reached via different features resolve to the lowest.
bool beats(double score, double best) { return score > best + 1e-12 * std::max(1.0, std::abs(best)); }

struct Candidate {
    bool valid = false;
    double score = -std::numeric_limits<double>::infinity();
    double threshold = 0.0;
    double left = 0.0;
    double right = 0.0;
};

struct SampleStats {
    std::vector<double> counts;  // multiplicity of each row in the sample
    double n = 0.0;
    double sum = 0.0;
};

SampleStats sample_stats(std::size_t rows, std::span<const double> y, std::span<const std::size_t> sample) {
    SampleStats s;
    s.counts.assign(rows, 0.0);
    for (std::size_t r : sample) s.counts[r] += 1.0;
    s.n = static_cast<double>(sample.size());
    for (std::size_t r = 0; r < rows; ++r) s.sum += s.counts[r] * y[r];
    return s;
}

Candidate best_split(const std::vector<ColumnIndex::Entry>& column, std::span<const double> y,
                     const SampleStats& st) {
    struct Group {
        double value, n, sum;
    };
    std::vector<Group> groups;
    groups.reserve(column.size() + 1);
    double nz_n = 0.0, nz_sum = 0.0;
    for (const auto& e : column) {
        const double c = st.counts[e.row];
        if (c == 0.0) continue;
        groups.push_back({e.value, c, c * y[e.row]});
        nz_n += c;
        nz_sum += c * y[e.row];
    }
    const double zero_n = st.n - nz_n;
    if (zero_n > 0.0) groups.push_back({0.0, zero_n, st.sum - nz_sum});
    std::stable_sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) { return a.value < b.value; });

    // Merge equal values.
    std::vector<Group> merged;
    for (const Group& g : groups) {
        if (!merged.empty() && merged.back().value == g.value) {
            merged.back().n += g.n;
            merged.back().sum += g.sum;
        } else {
            merged.push_back(g);
        }
    }

    Candidate best;
    double left_n = 0.0, left_sum = 0.0;
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        left_n += merged[i].n;
        left_sum += merged[i].sum;
        const double right_n = st.n - left_n;
        const double right_sum = st.sum - left_sum;
        const double score = left_sum * left_sum / left_n + right_sum * right_sum / right_n;
        if (!best.valid || beats(score, best.score)) {
            best.valid = true;
            best.score = score;
            best.threshold = 0.5 * (merged[i].value + merged[i + 1].value);
            best.left = left_sum / left_n;
            best.right = right_sum / right_n;
        }
    }
    return best;
}

Stump pick(const std::vector<Candidate>& per_feature, const SampleStats& st) {
    Stump s;
    bool found = false;
    double best = 0.0;
    for (std::size_t f = 0; f < per_feature.size(); ++f) {
        const Candidate& c = per_feature[f];
        if (!c.valid) continue;
        if (!found || beats(c.score, best)) {
            found = true;
            best = c.score;
            s = Stump{static_cast<std::uint32_t>(f), c.threshold, c.left, c.right, false};
        }
    }
    if (!found) {
        const double mean = st.n > 0.0 ? st.sum / st.n : 0.0;
        s = Stump{0, 0.0, mean, mean, true};
    }
    return s;
}

double feature_value(const SparseVector& x, std::uint32_t feature) {
    auto it = std::lower_bound(x.index.begin(), x.index.end(), feature);
    if (it == x.index.end() || *it != feature) return 0.0;
    return x.value[static_cast<std::size_t>(it - x.index.begin())];
}

double round_loss(double scaled, BoostLoss loss) {
    switch (loss) {
        case BoostLoss::linear: return scaled;
        case BoostLoss::square: return scaled * scaled;
        case BoostLoss::exponential: return 1.0 - std::exp(-scaled);
    }
    return scaled;
}

}  // namespace

double Stump::predict(const SparseVector& x) const {
    if (constant) return left;
    return feature_value(x, feature) <= threshold ? left : right;
}

BoostLoss parse_boost_loss(const std::string& s) {
    if (s == "linear") return BoostLoss::linear;
    if (s == "square") return BoostLoss::square;
    if (s == "exponential") return BoostLoss::exponential;
    throw Error("unknown boosting loss '" + s + "'");
}

const char* to_string(BoostLoss l) {
    switch (l) {
        case BoostLoss::linear: return "linear";
        case BoostLoss::square: return "square";
        case BoostLoss::exponential: return "exponential";
    }
    return "?";
}

ColumnIndex::ColumnIndex(const FeatureMatrix& x) : columns(x.cols) {
    for (std::size_t r = 0; r < x.rows.size(); ++r) {
        const SparseVector& row = x.rows[r];
        for (std::size_t k = 0; k < row.index.size(); ++k) {
            if (row.index[k] >= x.cols) throw Error("feature index outside the matrix width");
            columns[row.index[k]].push_back({static_cast<std::uint32_t>(r), row.value[k]});
        }
    }
}

namespace stump_search {

Stump serial(const ColumnIndex& cols, std::span<const double> y, std::span<const std::size_t> sample) {
    const SampleStats st = sample_stats(y.size(), y, sample);
    std::vector<Candidate> per_feature(cols.columns.size());
    for (std::size_t f = 0; f < cols.columns.size(); ++f) per_feature[f] = best_split(cols.columns[f], y, st);
    return pick(per_feature, st);
}

Stump omp(const ColumnIndex& cols, std::span<const double> y, std::span<const std::size_t> sample) {
    const SampleStats st = sample_stats(y.size(), y, sample);
    const std::size_t nf = cols.columns.size();
    std::vector<Candidate> per_feature(nf);
    #pragma omp parallel for schedule(dynamic, 64)
    for (std::size_t f = 0; f < nf; ++f) per_feature[f] = best_split(cols.columns[f], y, st);
    return pick(per_feature, st);
}

}  // namespace stump_search

StumpEnsemble ab_fit(const FeatureMatrix& x, std::span<const double> y, const AdaBoostOptions& options,
                     std::vector<AdaBoostRound>* transcript) {
    const std::size_t n = x.size();
    if (n != y.size()) throw Error("feature rows and targets differ in length");
    if (n < 2) throw Error("AdaBoost needs at least two examples");
    if (options.n_estimators == 0) throw Error("n_estimators must be positive");
    for (double v : y)
        if (!(v >= 0.0 && v <= 1.0)) throw Error("AdaBoost targets must lie in [0,1]");

    const ColumnIndex cols(x);
    StumpEnsemble ens;
    ens.loss = options.loss;
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    Rng rng(options.seed);
    if (transcript) transcript->clear();

    for (std::size_t round = 0; round < options.n_estimators; ++round) {
        AdaBoostRound rec;
        rec.weights_before = w;

        // Bootstrap draw from the weight distribution.
        std::vector<double> cdf(n);
        std::partial_sum(w.begin(), w.end(), cdf.begin());
        const double total = cdf.back();
        rec.sample.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = rng.uniform() * total;
            auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            rec.sample[i] = std::min<std::size_t>(n - 1, static_cast<std::size_t>(it - cdf.begin()));
        }

        rec.stump = options.parallel ? stump_search::omp(cols, y, rec.sample)
                                     : stump_search::serial(cols, y, rec.sample);

        std::vector<double> err(n);
        double max_err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            err[i] = std::abs(rec.stump.predict(x.rows[i]) - y[i]);
            max_err = std::max(max_err, err[i]);
        }
        rec.losses.assign(n, 0.0);
        if (max_err > 0.0)
            for (std::size_t i = 0; i < n; ++i) rec.losses[i] = round_loss(err[i] / max_err, options.loss);
        for (std::size_t i = 0; i < n; ++i) rec.average_loss += w[i] * rec.losses[i];

        bool stop = false;
        if (rec.average_loss <= 0.0) {
            rec.beta = 0.0;
            rec.stump_weight = 1.0;
            rec.weights_after = w;
            stop = true;
        } else if (rec.average_loss >= 0.5) {
            rec.kept = ens.stumps.empty();
            rec.beta = rec.average_loss / (1.0 - rec.average_loss);
            rec.stump_weight = 1.0;
            rec.weights_after = w;
            stop = true;
        } else {
            rec.beta = rec.average_loss / (1.0 - rec.average_loss);
            rec.stump_weight = std::log(1.0 / rec.beta);
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                w[i] *= std::pow(rec.beta, 1.0 - rec.losses[i]);
                sum += w[i];
            }
            for (double& v : w) v /= sum;
            rec.weights_after = w;
        }
        if (rec.kept) {
            ens.stumps.push_back(rec.stump);
            ens.weights.push_back(rec.stump_weight);
        }
        if (transcript) transcript->push_back(std::move(rec));
        if (stop) break;
    }
    return ens;
}

double ab_predict_raw(const StumpEnsemble& ensemble, const SparseVector& x) {
    if (ensemble.stumps.empty()) throw Error("ensemble has no stumps");
    std::vector<std::pair<double, double>> pw;  // (prediction, weight)
    pw.reserve(ensemble.stumps.size());
    double total = 0.0;
    for (std::size_t i = 0; i < ensemble.stumps.size(); ++i) {
        pw.emplace_back(ensemble.stumps[i].predict(x), ensemble.weights[i]);
        total += ensemble.weights[i];
    }
    std::stable_sort(pw.begin(), pw.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    double cum = 0.0;
    for (const auto& [p, wt] : pw) {
        cum += wt;
        if (cum >= 0.5 * total) return p;
    }
    return pw.back().first;
}

double ab_predict(const StumpEnsemble& ensemble, const SparseVector& x) {
    return std::clamp(ab_predict_raw(ensemble, x), 0.0, 1.0);
}

nlohmann::json StumpEnsemble::to_json() const {
    nlohmann::json stumps_j = nlohmann::json::array();
    for (const Stump& s : stumps)
        stumps_j.push_back({{"feature", s.feature},
                            {"threshold", s.threshold},
                            {"left", s.left},
                            {"right", s.right},
                            {"constant", s.constant}});
    return {{"loss", to_string(loss)}, {"stumps", stumps_j}, {"weights", weights}};
}

StumpEnsemble StumpEnsemble::from_json(const nlohmann::json& j) {
    StumpEnsemble e;
    try {
        e.loss = parse_boost_loss(j.at("loss").get<std::string>());
        for (const auto& s : j.at("stumps"))
            e.stumps.push_back(Stump{s.at("feature").get<std::uint32_t>(), s.at("threshold").get<double>(),
                                     s.at("left").get<double>(), s.at("right").get<double>(),
                                     s.at("constant").get<bool>()});
        e.weights = j.at("weights").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& ex) {
        throw Error(std::string("malformed ensemble: ") + ex.what());
    }
    if (e.stumps.size() != e.weights.size() || e.stumps.empty())
        throw Error("ensemble stumps and weights must be non-empty and equal in length");
    for (double w : e.weights)
        if (!(w > 0.0) || !std::isfinite(w)) throw Error("ensemble weights must be finite and positive");
    return e;
}

}  // namespace clickbait
