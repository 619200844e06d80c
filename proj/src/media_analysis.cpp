#include "clickbait/media_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "clickbait/error.hpp"
#include "clickbait/rng.hpp"

namespace clickbait {

using nlohmann::json;

namespace {

template <class F>
void for_each_json_line(std::istream& in, F&& f) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw Error("line " + std::to_string(line_no) + ": malformed JSON (" + e.what() + ")");
        }
        if (!obj.is_object() || !obj.contains("id"))
            throw Error("line " + std::to_string(line_no) + ": expected an object with an id");
        f(obj, line_no);
    }
}

std::string json_id(const json& obj) {
    const json& id = obj.at("id");
    return id.is_string() ? id.get<std::string>() : id.dump();
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return in;
}

// Accumulates detection counts per category for one group of posts.
struct Tally {
    std::vector<std::size_t> counts;
    std::size_t total = 0;
    std::size_t posts = 0;

    explicit Tally(std::size_t n) : counts(n, 0) {}

    void add(const ObjectTagRecord& rec, const CategoryMap& cmap, double min_confidence) {
        ++posts;
        for (const Detection& d : rec.detections) {
            const std::size_t k = cmap.category_of(d.label);
            if (d.confidence < min_confidence) continue;
            ++counts[k];
            ++total;
        }
    }

    std::vector<double> proportions() const {
        std::vector<double> p(counts.size(), 0.0);
        if (total == 0) return p;
        for (std::size_t k = 0; k < counts.size(); ++k)
            p[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
        return p;
    }
};

}  // namespace

const std::vector<double>* ImageVectorStore::find(const std::string& id) const {
    auto it = vectors_.find(id);
    return it == vectors_.end() ? nullptr : &it->second;
}

void ImageVectorStore::insert(const std::string& id, std::vector<double> vector) {
    if (vector.size() != dim_)
        throw Error("image vector for " + id + " has " + std::to_string(vector.size()) + " values, expected " +
                    std::to_string(dim_));
    for (double v : vector)
        if (!std::isfinite(v)) throw Error("image vector for " + id + " contains a non-finite value");
    if (!vectors_.emplace(id, std::move(vector)).second) throw Error("duplicate image vector id " + id);
}

ImageVectorStore parse_image_vectors(std::istream& in, std::size_t dim) {
    ImageVectorStore store(dim);
    for_each_json_line(in, [&](const json& obj, std::size_t line_no) {
        auto it = obj.find("vector");
        if (it == obj.end() || !it->is_array())
            throw Error("line " + std::to_string(line_no) + ": missing vector array");
        std::vector<double> v;
        v.reserve(it->size());
        for (const auto& x : *it) {
            if (!x.is_number()) throw Error("line " + std::to_string(line_no) + ": non-numeric vector entry");
            v.push_back(x.get<double>());
        }
        store.insert(json_id(obj), std::move(v));
    });
    return store;
}

ImageVectorStore load_image_vectors(const std::filesystem::path& path, std::size_t dim) {
    auto in = open_or_throw(path);
    return parse_image_vectors(in, dim);
}

void write_image_vectors(std::ostream& out, const ImageVectorStore& store) {
    for (const auto& [id, v] : store.entries()) out << json{{"id", id}, {"vector", v}}.dump() << '\n';
}

ImageVectorStore synthetic_image_vectors(const std::vector<std::string>& ids, std::uint64_t seed, std::size_t dim) {
    ImageVectorStore store(dim);
    Rng rng(seed);
    for (const auto& id : ids) {
        std::vector<double> v(dim);
        for (double& x : v) x = rng.uniform();
        store.insert(id, std::move(v));
    }
    return store;
}

std::vector<ObjectTagRecord> parse_object_tags(std::istream& in) {
    std::vector<ObjectTagRecord> out;
    std::set<std::string> seen;
    for_each_json_line(in, [&](const json& obj, std::size_t line_no) {
        ObjectTagRecord rec;
        rec.id = json_id(obj);
        if (!seen.insert(rec.id).second) throw Error("duplicate object-tag id " + rec.id);
        if (auto it = obj.find("detections"); it != obj.end() && it->is_array())
            for (const auto& d : *it) {
                Detection det;
                det.label = d.value("label", std::string{});
                det.confidence = d.value("score", d.value("confidence", -1.0));
                if (det.label.empty()) throw Error("line " + std::to_string(line_no) + ": detection without label");
                if (!(det.confidence >= 0.0 && det.confidence <= 1.0))
                    throw Error("line " + std::to_string(line_no) + ": detection confidence outside [0,1]");
                rec.detections.push_back(std::move(det));
            }
        out.push_back(std::move(rec));
    });
    return out;
}

std::vector<ObjectTagRecord> load_object_tags(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return parse_object_tags(in);
}

void write_object_tags(std::ostream& out, const std::vector<ObjectTagRecord>& tags) {
    for (const auto& rec : tags) {
        json dets = json::array();
        for (const auto& d : rec.detections) dets.push_back({{"label", d.label}, {"score", d.confidence}});
        out << json{{"id", rec.id}, {"detections", dets}}.dump() << '\n';
    }
}

const std::vector<std::string>& object_labels() {
    static const std::vector<std::string> labels{
        "person",        "bicycle",      "car",           "motorcycle",    "airplane",     "bus",
        "train",         "truck",        "boat",          "traffic light", "fire hydrant", "stop sign",
        "parking meter", "bench",        "bird",          "cat",           "dog",          "horse",
        "sheep",         "cow",          "elephant",      "bear",          "zebra",        "giraffe",
        "backpack",      "umbrella",     "handbag",       "tie",           "suitcase",     "frisbee",
        "skis",          "snowboard",    "sports ball",   "kite",          "baseball bat", "baseball glove",
        "skateboard",    "surfboard",    "tennis racket", "bottle",        "wine glass",   "cup",
        "fork",          "knife",        "spoon",         "bowl",          "banana",       "apple",
        "sandwich",      "orange",       "broccoli",      "carrot",        "hot dog",      "pizza",
        "donut",         "cake",         "chair",         "couch",         "potted plant", "bed",
        "dining table",  "toilet",       "tv",            "laptop",        "mouse",        "remote",
        "keyboard",      "cell phone",   "microwave",     "oven",          "toaster",      "sink",
        "refrigerator",  "book",         "clock",         "vase",          "scissors",     "teddy bear",
        "hair drier",    "toothbrush",
    };
    return labels;
}

CategoryMap CategoryMap::parse(std::istream& in) {
    CategoryMap cmap;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw Error("category map line " + std::to_string(line_no) + ": expected label<TAB>category");
        const std::string label = line.substr(0, tab);
        const std::string category = line.substr(tab + 1);
        auto pos = std::find(cmap.categories_.begin(), cmap.categories_.end(), category);
        if (pos == cmap.categories_.end()) {
            cmap.categories_.push_back(category);
            pos = cmap.categories_.end() - 1;
        }
        const auto index = static_cast<std::size_t>(pos - cmap.categories_.begin());
        if (!cmap.label_to_category_.emplace(label, index).second)
            throw Error("category map lists label '" + label + "' twice");
    }
    for (const auto& label : object_labels())
        if (!cmap.label_to_category_.count(label)) throw Error("category map has no entry for '" + label + "'");
    if (cmap.label_to_category_.size() != object_labels().size())
        throw Error("category map contains labels outside the 80-label inventory");
    if (cmap.categories_.size() != kCategoryCount)
        throw Error("category map must use exactly eleven categories, found " +
                    std::to_string(cmap.categories_.size()));
    return cmap;
}

CategoryMap CategoryMap::load(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return parse(in);
}

std::size_t CategoryMap::category_of(const std::string& label) const {
    auto it = label_to_category_.find(label);
    if (it == label_to_category_.end()) throw Error("object label '" + label + "' is not in the category map");
    return it->second;
}

ProportionTable category_proportions(const std::vector<ObjectTagRecord>& tags,
                                     const std::map<std::string, TruthClass>& classes, const CategoryMap& cmap,
                                     double min_confidence) {
    const std::size_t n = cmap.categories().size();
    Tally clickbait(n), other(n);
    for (const auto& rec : tags) {
        auto it = classes.find(rec.id);
        if (it == classes.end()) throw Error("no class for tagged post " + rec.id);
        (it->second == TruthClass::clickbait ? clickbait : other).add(rec, cmap, min_confidence);
    }
    ProportionTable table;
    table.categories = cmap.categories();
    for (auto [name, tally] : {std::pair{"clickbait", &clickbait}, std::pair{"no-clickbait", &other}}) {
        ProportionRow row;
        row.group = name;
        row.detections = tally->total;
        row.proportions = tally->proportions();
        row.empty = tally->total == 0;
        table.rows.push_back(std::move(row));
    }
    return table;
}

TrendTable proportion_trend(const std::vector<ObjectTagRecord>& tags, const std::map<std::string, double>& scores,
                            const CategoryMap& cmap, std::size_t bins, double min_confidence) {
    if (bins < 2) throw Error("proportion trend needs at least two bins");
    const std::size_t n = cmap.categories().size();
    std::vector<Tally> tallies(bins, Tally(n));
    for (const auto& rec : tags) {
        auto it = scores.find(rec.id);
        if (it == scores.end()) throw Error("no clickbait score for tagged post " + rec.id);
        const double s = it->second;
        if (!(s >= 0.0 && s <= 1.0)) throw Error("clickbait score outside [0,1] for post " + rec.id);
        const auto b = std::min(bins - 1, static_cast<std::size_t>(s * static_cast<double>(bins)));
        tallies[b].add(rec, cmap, min_confidence);
    }
    TrendTable table;
    table.categories = cmap.categories();
    for (std::size_t b = 0; b < bins; ++b) {
        const double center = (static_cast<double>(b) + 0.5) / static_cast<double>(bins);
        if (tallies[b].total == 0) {
            table.empty_bin_centers.push_back(center);
            continue;
        }
        table.bins.push_back(TrendBin{center, tallies[b].posts, tallies[b].total, tallies[b].proportions()});
    }
    return table;
}

void write_trend_csv(std::ostream& out, const TrendTable& table) {
    out << "bin_center,category,proportion\n";
    for (const auto& bin : table.bins)
        for (std::size_t k = 0; k < table.categories.size(); ++k) {
            std::ostringstream row;
            row << std::setprecision(17) << bin.center << ',' << table.categories[k] << ',' << bin.proportions[k];
            out << row.str() << '\n';
        }
}

}  // namespace clickbait
