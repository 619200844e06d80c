#include "clickbait/data_ingest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "clickbait/error.hpp"
#include "clickbait/rng.hpp"

namespace clickbait {

using nlohmann::json;

namespace {

std::string id_of(const json& obj, std::size_t line_no) {
    auto it = obj.find("id");
    if (it == obj.end()) throw Error("line " + std::to_string(line_no) + ": missing id field");
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer()) return std::to_string(it->get<long long>());
    throw Error("line " + std::to_string(line_no) + ": id must be a string");
}

std::string string_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return {};
    if (it->is_string()) return it->get<std::string>();
    // Some dumps store single-string fields as one-element lists.
    if (it->is_array()) {
        std::string out;
        for (const auto& v : *it) {
            if (!v.is_string()) continue;
            if (!out.empty()) out += ' ';
            out += v.get<std::string>();
        }
        return out;
    }
    return {};
}

std::vector<std::string> list_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return {};
    if (it->is_string()) return {it->get<std::string>()};
    std::vector<std::string> out;
    if (it->is_array())
        for (const auto& v : *it)
            if (v.is_string()) out.push_back(v.get<std::string>());
    return out;
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

json parse_line(const std::string& line, std::size_t line_no) {
    json obj;
    try {
        obj = json::parse(line);
    } catch (const json::parse_error& e) {
        throw Error("line " + std::to_string(line_no) + ": malformed JSON (" + e.what() + ")");
    }
    if (!obj.is_object()) throw Error("line " + std::to_string(line_no) + ": expected a JSON object");
    return obj;
}

bool on_scale(double v, JudgmentScale scale) {
    static constexpr std::array<double, 4> paper{0.0, 0.3, 0.66, 1.0};
    static constexpr std::array<double, 2> thirds{1.0 / 3.0, 2.0 / 3.0};
    for (double s : paper)
        if (std::abs(v - s) <= 1e-6) return true;
    if (scale == JudgmentScale::corpus)
        for (double s : thirds)
            if (std::abs(v - s) <= 1e-6) return true;
    return false;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return in;
}

}  // namespace

const TruthAnnotation& Dataset::truth_for(const std::string& id) const {
    if (!truths) throw Error("dataset '" + name + "' has no truth annotations");
    auto it = truths->find(id);
    if (it == truths->end()) throw Error("no truth annotation for post " + id);
    return it->second;
}

std::string RatioStat::display() const {
    if (!defined) return "1:?";
    std::ostringstream os;
    os << "1:" << std::fixed << std::setprecision(2) << ratio_not_per_clickbait;
    return os.str();
}

TruthClass class_for_score(double score) {
    return score >= 0.5 ? TruthClass::clickbait : TruthClass::no_clickbait;
}

const char* to_string(TruthClass c) {
    return c == TruthClass::clickbait ? "clickbait" : "no-clickbait";
}

Dataset parse_instances(std::istream& in, std::string name) {
    Dataset ds;
    ds.name = std::move(name);
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        const json obj = parse_line(line, line_no);
        Post p;
        p.id = id_of(obj, line_no);
        if (p.id.empty()) throw Error("line " + std::to_string(line_no) + ": empty id");
        if (!seen.insert(p.id).second) throw Error("duplicate post id " + p.id);
        p.post_text = list_field(obj, "postText");
        p.media_paths = list_field(obj, "postMedia");
        p.timestamp = string_field(obj, "postTimestamp");
        p.target_title = string_field(obj, "targetTitle");
        p.target_description = string_field(obj, "targetDescription");
        p.target_keywords = string_field(obj, "targetKeywords");
        p.target_paragraphs = list_field(obj, "targetParagraphs");
        p.target_captions = list_field(obj, "targetCaptions");
        ds.posts.push_back(std::move(p));
    }
    return ds;
}

Dataset read_instances(const std::string& path) {
    auto in = open_or_throw(path);
    return parse_instances(in, path);
}

std::map<std::string, TruthAnnotation> parse_truth(std::istream& in, JudgmentScale scale) {
    std::map<std::string, TruthAnnotation> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        const json obj = parse_line(line, line_no);
        const std::string where = "line " + std::to_string(line_no);
        TruthAnnotation t;
        t.id = id_of(obj, line_no);
        t.synthetic = obj.value("synthetic", false);
        if (auto it = obj.find("truthJudgments"); it != obj.end() && it->is_array())
            for (const auto& v : *it) {
                if (!v.is_number()) throw Error(where + ": non-numeric judgment");
                t.judgments.push_back(v.get<double>());
            }
        for (double j : t.judgments)
            if (!on_scale(j, scale))
                throw Error(where + ": judgment " + std::to_string(j) + " is not on the 4-point scale");

        auto mean_it = obj.find("truthMean");
        if (t.synthetic) {
            if (mean_it == obj.end() || !mean_it->is_number())
                throw Error(where + ": synthetic record without truthMean");
            t.truth_mean = mean_it->get<double>();
            if (!(t.truth_mean >= 0.0 && t.truth_mean <= 1.0))
                throw Error(where + ": truthMean outside [0,1]");
        } else {
            if (t.judgments.size() < 5)
                throw Error(where + ": fewer than five judgments for post " + t.id);
            t.truth_mean = std::accumulate(t.judgments.begin(), t.judgments.end(), 0.0) /
                           static_cast<double>(t.judgments.size());
            if (mean_it != obj.end()) {
                if (!mean_it->is_number()) throw Error(where + ": non-numeric truthMean");
                if (std::abs(mean_it->get<double>() - t.truth_mean) > 1e-6)
                    throw Error(where + ": truthMean does not match the mean of the judgments for post " +
                                t.id);
            }
        }
        t.truth_class = class_for_score(t.truth_mean);
        if (auto c = obj.find("truthClass"); c != obj.end() && c->is_string()) {
            if (c->get<std::string>() != to_string(t.truth_class))
                throw Error(where + ": truthClass disagrees with truthMean for post " + t.id);
        }
        const std::string id = t.id;
        if (!out.emplace(id, std::move(t)).second) throw Error("duplicate truth id " + id);
    }
    return out;
}

std::map<std::string, TruthAnnotation> read_truth(const std::string& path, JudgmentScale scale) {
    auto in = open_or_throw(path);
    return parse_truth(in, scale);
}

void write_instances(std::ostream& out, const Dataset& dataset) {
    for (const Post& p : dataset.posts) {
        json obj = {
            {"id", p.id},
            {"postText", p.post_text},
            {"postMedia", p.media_paths},
            {"postTimestamp", p.timestamp},
            {"targetTitle", p.target_title},
            {"targetDescription", p.target_description},
            {"targetKeywords", p.target_keywords},
            {"targetParagraphs", p.target_paragraphs},
            {"targetCaptions", p.target_captions},
        };
        out << obj.dump() << '\n';
    }
}

void write_truth(std::ostream& out, const Dataset& dataset) {
    for (const Post& p : dataset.posts) {
        const TruthAnnotation& t = dataset.truth_for(p.id);
        json obj = {
            {"id", t.id},
            {"truthJudgments", t.judgments},
            {"truthMean", t.truth_mean},
            {"truthClass", to_string(t.truth_class)},
        };
        if (t.synthetic) obj["synthetic"] = true;
        out << obj.dump() << '\n';
    }
}

void attach_truth(Dataset& dataset, std::map<std::string, TruthAnnotation> truths) {
    std::unordered_set<std::string> ids;
    for (const Post& p : dataset.posts) ids.insert(p.id);
    for (const auto& [id, t] : truths)
        if (!ids.count(id)) throw Error("truth id " + id + " has no matching post");
    dataset.truths = std::move(truths);
}

RatioStat class_ratio(const Dataset& dataset) {
    RatioStat r;
    for (const Post& p : dataset.posts) {
        const TruthAnnotation& t = dataset.truth_for(p.id);
        ++r.n_posts;
        if (class_for_score(t.truth_mean) == TruthClass::clickbait)
            ++r.n_clickbait;
        else
            ++r.n_not;
    }
    r.defined = r.n_clickbait > 0;
    r.ratio_not_per_clickbait =
        r.defined ? static_cast<double>(r.n_not) / static_cast<double>(r.n_clickbait)
                  : std::nan("");
    return r;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    const std::vector<std::string>& ids, double val_fraction, std::uint64_t seed) {
    const std::size_t n = ids.size();
    if (n < 2) throw Error("cannot split fewer than two posts");
    if (!(val_fraction > 0.0 && val_fraction < 1.0))
        throw Error("validation fraction must lie strictly between 0 and 1");

    // Order by id first so the split does not depend on input order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(order));

    const auto n_val = static_cast<std::size_t>(std::llround(val_fraction * static_cast<double>(n)));
    std::vector<std::size_t> val(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
    std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
    std::sort(val.begin(), val.end());
    std::sort(train.begin(), train.end());
    return {std::move(train), std::move(val)};
}

std::pair<Dataset, Dataset> train_val_split(const Dataset& dataset, double val_fraction,
                                            std::uint64_t seed) {
    std::vector<std::string> ids;
    ids.reserve(dataset.size());
    for (const Post& p : dataset.posts) ids.push_back(p.id);
    auto [train_idx, val_idx] = split_indices(ids, val_fraction, seed);

    auto take = [&](const std::vector<std::size_t>& idx, const std::string& suffix) {
        Dataset out;
        out.name = dataset.name + suffix;
        if (dataset.truths) out.truths.emplace();
        for (std::size_t i : idx) {
            const Post& p = dataset.posts[i];
            out.posts.push_back(p);
            if (dataset.truths) {
                auto it = dataset.truths->find(p.id);
                if (it != dataset.truths->end()) out.truths->emplace(it->first, it->second);
            }
        }
        return out;
    };
    return {take(train_idx, "/train"), take(val_idx, "/validation")};
}

}  // namespace clickbait
