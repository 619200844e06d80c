#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "clickbait/data_ingest.hpp"

namespace clickbait {

inline constexpr std::size_t kImageVectorDim = 2048;
inline constexpr std::size_t kCategoryCount = 11;

/// Precomputed image feature vectors keyed by post id.
class ImageVectorStore {
public:
    explicit ImageVectorStore(std::size_t dim = kImageVectorDim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return vectors_.size(); }
    /// nullptr when the post has no vector.
    const std::vector<double>* find(const std::string& id) const;
    /// Throws on wrong dimension, non-finite values or a duplicate id.
    void insert(const std::string& id, std::vector<double> vector);
    const std::map<std::string, std::vector<double>>& entries() const { return vectors_; }

private:
    std::size_t dim_;
    std::map<std::string, std::vector<double>> vectors_;
};

/// One {"id": ..., "vector": [...]} object per line.
ImageVectorStore parse_image_vectors(std::istream& in, std::size_t dim = kImageVectorDim);
ImageVectorStore load_image_vectors(const std::filesystem::path& path, std::size_t dim = kImageVectorDim);
void write_image_vectors(std::ostream& out, const ImageVectorStore& store);

/// Deterministic stand-in vectors (uniform in [0,1), like pooled rectifier
/// activations) for running the fusion path without the extractor.
ImageVectorStore synthetic_image_vectors(const std::vector<std::string>& ids, std::uint64_t seed,
                                         std::size_t dim = kImageVectorDim);

struct Detection {
    std::string label;
    double confidence = 0.0;
};

struct ObjectTagRecord {
    std::string id;
    std::vector<Detection> detections;
};

/// One {"id": ..., "detections": [{"label": ..., "score": r}]} object per line.
std::vector<ObjectTagRecord> parse_object_tags(std::istream& in);
std::vector<ObjectTagRecord> load_object_tags(const std::filesystem::path& path);
void write_object_tags(std::ostream& out, const std::vector<ObjectTagRecord>& tags);

/// The detector's 80-label inventory.
const std::vector<std::string>& object_labels();

/// Total map from object label to one of eleven categories.
class CategoryMap {
public:
    /// Two-column "label<TAB>category" text; '#' comments allowed.
    static CategoryMap parse(std::istream& in);
    static CategoryMap load(const std::filesystem::path& path);

    /// Category index for a label; throws for labels outside the inventory.
    std::size_t category_of(const std::string& label) const;
    /// Categories in first-appearance order.
    const std::vector<std::string>& categories() const { return categories_; }

private:
    std::unordered_map<std::string, std::size_t> label_to_category_;
    std::vector<std::string> categories_;
};

struct ProportionRow {
    std::string group;
    std::size_t detections = 0;
    std::vector<double> proportions;  // indexed like CategoryMap::categories()
    bool empty = false;               // no detections: all-zero row
};

struct ProportionTable {
    std::vector<std::string> categories;
    std::vector<ProportionRow> rows;
};

/// Share of each category among the detections of each class (clickbait,
/// no-clickbait). Detections below min_confidence are ignored.
ProportionTable category_proportions(const std::vector<ObjectTagRecord>& tags,
                                     const std::map<std::string, TruthClass>& classes, const CategoryMap& cmap,
                                     double min_confidence = 0.5);

struct TrendBin {
    double center = 0.0;
    std::size_t posts = 0;
    std::size_t detections = 0;
    std::vector<double> proportions;
};

struct TrendTable {
    std::vector<std::string> categories;
    std::vector<TrendBin> bins;              // populated bins only
    std::vector<double> empty_bin_centers;   // omitted bins, reported as flags
};

/// Category shares per equal-width clickbait-score bin over [0,1].
TrendTable proportion_trend(const std::vector<ObjectTagRecord>& tags, const std::map<std::string, double>& scores,
                            const CategoryMap& cmap, std::size_t bins, double min_confidence = 0.5);

/// CSV "bin_center,category,proportion".
void write_trend_csv(std::ostream& out, const TrendTable& table);

}  // namespace clickbait
