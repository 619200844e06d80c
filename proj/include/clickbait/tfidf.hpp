#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "clickbait/text_pipeline.hpp"

namespace clickbait {

/// Sparse row, indices strictly increasing.
struct SparseVector {
    std::vector<std::uint32_t> index;
    std::vector<double> value;

    double l2_norm() const;
};

/// Rows over a fixed column count.
struct FeatureMatrix {
    std::size_t cols = 0;
    std::vector<SparseVector> rows;

    std::size_t size() const { return rows.size(); }
};

/// Unigram tf-idf with smoothed idf = ln((1 + n) / (1 + df)) + 1 and raw
/// term counts as tf; rows are L2-normalized. Columns are the fitted terms in
/// lexicographic order.
class TfidfModel {
public:
    std::size_t dim() const { return terms_.size(); }
    std::size_t n_docs() const { return n_docs_; }
    const std::vector<std::string>& terms() const { return terms_; }
    const std::vector<double>& idf() const { return idf_; }
    /// Column of a term, or -1 when the term was not seen at fit time.
    long column_of(const std::string& term) const;

    /// Unseen terms are ignored; an empty document maps to the zero vector.
    SparseVector transform(std::span<const std::string> doc) const;

    nlohmann::json to_json() const;
    static TfidfModel from_json(const nlohmann::json& j);

    friend TfidfModel tfidf_fit(std::span<const Tokens> corpus);

private:
    std::vector<std::string> terms_;
    std::vector<double> idf_;
    std::unordered_map<std::string, std::uint32_t> column_;
    std::size_t n_docs_ = 0;
};

TfidfModel tfidf_fit(std::span<const Tokens> corpus);

}  // namespace clickbait
