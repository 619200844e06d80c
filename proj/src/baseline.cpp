#include "clickbait/baseline.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "clickbait/error.hpp"
#include "clickbait/text_pipeline.hpp"

namespace clickbait {

namespace {

const CueLexicons& need_lexicons(const BaselineConfig& config, const CueLexicons* lexicons) {
    if (config.with_cues && !lexicons) throw Error("baseline with cue columns needs lexicons");
    return *lexicons;
}

}  // namespace

SparseVector BaselineModel::features(const Post& post, const CueLexicons* lexicons) const {
    const Tokens tokens = clean(assemble_document(post, config.text));
    SparseVector row = tfidf.transform(tokens);
    if (config.with_cues) {
        const CueLexicons& lex = need_lexicons(config, lexicons);
        const CueVector cues = extract_cues(tokens, lex, config.normalization);
        for (std::size_t k = 0; k < kCueFamilies; ++k) {
            if (cues.values[k] == 0.0) continue;
            row.index.push_back(static_cast<std::uint32_t>(tfidf.dim() + k));
            row.value.push_back(cues.values[k]);
        }
    }
    return row;
}

BaselineModel baseline_fit(const Dataset& train, const BaselineConfig& config, const CueLexicons* lexicons) {
    if (train.posts.empty()) throw Error("baseline training set is empty");
    if (!train.truths) throw Error("baseline training set has no truth labels");
    if (config.with_cues) need_lexicons(config, lexicons);

    std::vector<Tokens> corpus;
    corpus.reserve(train.size());
    for (const Post& p : train.posts) corpus.push_back(clean(assemble_document(p, config.text)));

    BaselineModel model;
    model.config = config;
    model.tfidf = tfidf_fit(corpus);
    if (lexicons) model.lexicon_fingerprint = lexicons->fingerprint();

    FeatureMatrix x;
    x.cols = model.tfidf.dim() + (config.with_cues ? kCueFamilies : 0);
    std::vector<double> y;
    for (const Post& p : train.posts) {
        x.rows.push_back(model.features(p, lexicons));
        y.push_back(train.truth_for(p.id).truth_mean);
    }
    std::clog << "baseline: " << x.size() << " rows, " << x.cols << " columns, " << config.boost.n_estimators
              << " estimators\n";
    model.ensemble = ab_fit(x, y, config.boost);
    return model;
}

std::vector<Prediction> baseline_predict(const BaselineModel& model, const Dataset& data,
                                         const CueLexicons* lexicons) {
    if (model.config.with_cues) {
        need_lexicons(model.config, lexicons);
        if (lexicons->fingerprint() != model.lexicon_fingerprint)
            throw Error("lexicons differ from the ones the baseline was trained with");
    }
    std::vector<Prediction> out;
    out.reserve(data.size());
    for (const Post& p : data.posts) out.push_back({p.id, ab_predict(model.ensemble, model.features(p, lexicons))});
    return out;
}

void save_baseline(const BaselineModel& model, const std::filesystem::path& path) {
    nlohmann::json j;
    j["kind"] = "adaboost-r2-baseline";
    j["text"] = to_string(model.config.text);
    j["with_cues"] = model.config.with_cues;
    j["cue_normalization"] = to_string(model.config.normalization);
    j["n_estimators"] = model.config.boost.n_estimators;
    j["seed"] = model.config.boost.seed;
    j["lexicon_fingerprint"] = std::to_string(model.lexicon_fingerprint);
    j["tfidf"] = model.tfidf.to_json();
    j["ensemble"] = model.ensemble.to_json();
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump() << '\n';
    if (!out) throw Error("failed writing " + path.string());
}

BaselineModel load_baseline(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    BaselineModel m;
    try {
        const nlohmann::json j = nlohmann::json::parse(in);
        if (j.at("kind").get<std::string>() != "adaboost-r2-baseline")
            throw Error(path.string() + " is not a baseline model");
        m.config.text = parse_document_source(j.at("text").get<std::string>());
        m.config.with_cues = j.at("with_cues").get<bool>();
        m.config.normalization = parse_cue_normalization(j.at("cue_normalization").get<std::string>());
        m.config.boost.n_estimators = j.at("n_estimators").get<std::size_t>();
        m.config.boost.seed = j.at("seed").get<std::uint64_t>();
        m.lexicon_fingerprint = std::stoull(j.at("lexicon_fingerprint").get<std::string>());
        m.tfidf = TfidfModel::from_json(j.at("tfidf"));
        m.ensemble = StumpEnsemble::from_json(j.at("ensemble"));
        m.config.boost.loss = m.ensemble.loss;
    } catch (const nlohmann::json::exception& e) {
        throw Error(path.string() + ": malformed baseline model: " + e.what());
    }
    return m;
}

}  // namespace clickbait
