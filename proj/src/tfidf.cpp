#include "clickbait/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "clickbait/error.hpp"

namespace clickbait {

double SparseVector::l2_norm() const {
    double s = 0.0;
    for (double v : value) s += v * v;
    return std::sqrt(s);
}

long TfidfModel::column_of(const std::string& term) const {
    auto it = column_.find(term);
    return it == column_.end() ? -1 : static_cast<long>(it->second);
}

TfidfModel tfidf_fit(std::span<const Tokens> corpus) {
    if (corpus.empty()) throw Error("tf-idf needs a non-empty corpus");
    std::map<std::string, std::size_t> df;
    for (const Tokens& doc : corpus) {
        std::set<std::string> uniq(doc.begin(), doc.end());
        for (const auto& t : uniq) ++df[t];
    }
    TfidfModel m;
    m.n_docs_ = corpus.size();
    const double n = static_cast<double>(m.n_docs_);
    for (const auto& [term, count] : df) {
        m.column_.emplace(term, static_cast<std::uint32_t>(m.terms_.size()));
        m.terms_.push_back(term);
        m.idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
    }
    return m;
}

SparseVector TfidfModel::transform(std::span<const std::string> doc) const {
    std::map<std::uint32_t, double> tf;
    for (const auto& t : doc) {
        auto it = column_.find(t);
        if (it != column_.end()) tf[it->second] += 1.0;
    }
    SparseVector v;
    for (const auto& [col, count] : tf) {
        v.index.push_back(col);
        v.value.push_back(count * idf_[col]);
    }
    const double norm = v.l2_norm();
    if (norm > 0.0)
        for (double& x : v.value) x /= norm;
    return v;
}

nlohmann::json TfidfModel::to_json() const {
    return {{"terms", terms_}, {"idf", idf_}, {"n_docs", n_docs_}};
}

TfidfModel TfidfModel::from_json(const nlohmann::json& j) {
    TfidfModel m;
    try {
        m.terms_ = j.at("terms").get<std::vector<std::string>>();
        m.idf_ = j.at("idf").get<std::vector<double>>();
        m.n_docs_ = j.at("n_docs").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed tf-idf table: ") + e.what());
    }
    if (m.terms_.size() != m.idf_.size()) throw Error("tf-idf terms and idf table differ in length");
    for (std::size_t i = 0; i < m.terms_.size(); ++i)
        if (!m.column_.emplace(m.terms_[i], static_cast<std::uint32_t>(i)).second)
            throw Error("duplicate tf-idf term " + m.terms_[i]);
    return m;
}

}  // namespace clickbait
