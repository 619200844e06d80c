#include "clickbait/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "clickbait/adam.hpp"
#include "clickbait/checkpoint.hpp"
#include "clickbait/error.hpp"
#include "clickbait/ops.hpp"
#include "clickbait/rng.hpp"

namespace clickbait {

using nlohmann::json;

namespace {

std::filesystem::path sidecar(const std::filesystem::path& path, const char* suffix) {
    return std::filesystem::path(path.string() + suffix);
}

double clamp_score(double s) {
    if (!std::isfinite(s)) throw Error("model produced a non-finite score");
    return std::clamp(s, 0.0, 1.0);
}

}  // namespace

TrainingSet make_training_set(const Dataset& dataset, const FeatureEncoder& encoder) {
    TrainingSet set;
    set.examples = encoder.encode(dataset);
    for (const Post& p : dataset.posts) {
        set.ids.push_back(p.id);
        set.targets.push_back(dataset.truth_for(p.id).truth_mean);
    }
    return set;
}

std::vector<EpochRecord> fit(FusionNetwork& network, const TrainingSet& data, const EpochCallback& on_epoch) {
    const ModelConfig& cfg = network.config();
    cfg.validate();
    if (data.examples.empty()) throw Error("cannot train on an empty dataset");
    if (data.examples.size() != data.targets.size() || data.ids.size() != data.targets.size())
        throw Error("training set ids, examples and targets differ in length");

    std::vector<std::size_t> train_idx, val_idx;
    if (cfg.val_fraction > 0.0 && data.examples.size() >= 2) {
        std::tie(train_idx, val_idx) = split_indices(data.ids, cfg.val_fraction, cfg.seed);
    } else {
        train_idx.resize(data.examples.size());
        std::iota(train_idx.begin(), train_idx.end(), std::size_t{0});
    }
    if (train_idx.empty()) throw Error("validation split left no training examples");
    // Canonical id order: the schedule then depends only on ids and seed.
    std::sort(train_idx.begin(), train_idx.end(),
              [&](std::size_t a, std::size_t b) { return data.ids[a] < data.ids[b]; });

    std::vector<EncodedExample> val_examples;
    std::vector<double> val_targets;
    for (std::size_t i : val_idx) {
        val_examples.push_back(data.examples[i]);
        val_targets.push_back(data.targets[i]);
    }

    Adam optimizer(AdamHyper{cfg.learning_rate, 0.9, 0.999, 1e-8});
    for (auto& [name, p] : network.parameters()) p.zero_grad();
    Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<EpochRecord> history;

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::vector<std::size_t> order = train_idx;
        rng.shuffle(std::span<std::size_t>(order));
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            std::span<const std::size_t> idx(order.data() + start, end - start);
            Batch batch = make_batch(data.examples, idx);
            Tensor target({idx.size(), 1});
            for (std::size_t r = 0; r < idx.size(); ++r) target[r] = data.targets[idx[r]];

            Tape tape;
            Var pred = network.forward(tape, batch);
            Var loss = ops::mse(tape, pred, target);
            tape.backward(loss);
            network.mask_padding_gradient();
            optimizer.step(network.parameters());
            loss_sum += tape.value(loss).item() * static_cast<double>(idx.size());
        }
        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_loss = loss_sum / static_cast<double>(order.size());
        rec.val_loss = std::numeric_limits<double>::quiet_NaN();
        if (!val_examples.empty()) {
            const auto s = score(network, val_examples, std::max<std::size_t>(cfg.batch_size, 64));
            double acc = 0.0;
            for (std::size_t i = 0; i < s.size(); ++i) acc += (s[i] - val_targets[i]) * (s[i] - val_targets[i]);
            rec.val_loss = acc / static_cast<double>(s.size());
        }
        history.push_back(rec);
        if (on_epoch) on_epoch(rec);
    }
    return history;
}

std::vector<double> score(const FusionNetwork& network, const std::vector<EncodedExample>& examples,
                          std::size_t batch_size) {
    std::vector<double> out(examples.size());
    if (examples.empty()) return out;
    batch_size = std::max<std::size_t>(1, batch_size);
    const std::size_t chunks = (examples.size() + batch_size - 1) / batch_size;
    std::vector<std::string> errors(chunks);
    #pragma omp parallel for schedule(dynamic)
    for (std::size_t c = 0; c < chunks; ++c) {
        try {
            const std::size_t start = c * batch_size;
            const std::size_t end = std::min(examples.size(), start + batch_size);
            std::vector<std::size_t> idx(end - start);
            std::iota(idx.begin(), idx.end(), start);
            Batch batch = make_batch(examples, idx);
            Tape tape(false);
            const Tensor& s = tape.value(network.forward(tape, batch));
            for (std::size_t r = 0; r < idx.size(); ++r) out[start + r] = clamp_score(s[r]);
        } catch (const std::exception& e) {
            errors[c] = e.what();
        }
    }
    for (const auto& e : errors)
        if (!e.empty()) throw Error(e);
    return out;
}

TrainedModel train(FusionNetwork network, const Dataset& dataset, const FeatureEncoder& encoder, Vocabulary vocab,
                   std::uint64_t lexicon_fingerprint, const EpochCallback& on_epoch) {
    if (dataset.size() == 0) throw Error("cannot train on an empty dataset");
    const TrainingSet data = make_training_set(dataset, encoder);
    auto history = fit(network, data, on_epoch);
    return TrainedModel{std::move(network), std::move(vocab), lexicon_fingerprint, std::move(history)};
}

std::vector<Prediction> predict(const TrainedModel& model, const Dataset& posts, const FeatureEncoder& encoder) {
    const auto examples = encoder.encode(posts);
    const auto scores = score(model.network, examples);
    std::vector<Prediction> out;
    out.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) out.push_back({posts.posts[i].id, scores[i]});
    return out;
}

void write_predictions(std::ostream& out, const std::vector<Prediction>& predictions) {
    // Insertion-ordered so lines read {"id", "clickbaitScore"} as in the challenge format.
    for (const auto& p : predictions)
        out << nlohmann::ordered_json{{"id", p.id}, {"clickbaitScore", p.clickbait_score}}.dump() << '\n';
}

std::vector<Prediction> parse_predictions(std::istream& in) {
    std::vector<Prediction> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json obj = json::parse(line);
            const json& id = obj.at("id");
            out.push_back({id.is_string() ? id.get<std::string>() : id.dump(), obj.at("clickbaitScore").get<double>()});
        } catch (const json::exception& e) {
            throw Error("prediction line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return parse_predictions(in);
}

void save_model(const std::filesystem::path& path, const TrainedModel& model) {
    save_checkpoint(path, model.network.parameters());
    json history = json::array();
    for (const auto& r : model.history)
        history.push_back({{"epoch", r.epoch},
                           {"train_loss", r.train_loss},
                           {"val_loss", std::isnan(r.val_loss) ? json(nullptr) : json(r.val_loss)}});
    json meta = {{"config", to_json(model.config())},
                 {"lexicon_fingerprint", std::to_string(model.lexicon_fingerprint)},
                 {"history", history}};
    std::ofstream m(sidecar(path, ".meta.json"));
    if (!m) throw Error("cannot write model metadata next to " + path.string());
    m << meta.dump(2) << '\n';
    std::ofstream v(sidecar(path, ".vocab.tsv"));
    if (!v) throw Error("cannot write vocabulary next to " + path.string());
    model.vocab.save(v);
}

TrainedModel load_model(const std::filesystem::path& path) {
    ParameterSet params = load_checkpoint(path);
    std::ifstream m(sidecar(path, ".meta.json"));
    if (!m) throw Error("missing model metadata " + sidecar(path, ".meta.json").string());
    json meta;
    try {
        meta = json::parse(m);
    } catch (const json::exception& e) {
        throw Error(std::string("malformed model metadata: ") + e.what());
    }
    ModelConfig config = model_config_from_json(meta.at("config"));
    std::ifstream v(sidecar(path, ".vocab.tsv"));
    if (!v) throw Error("missing vocabulary " + sidecar(path, ".vocab.tsv").string());
    Vocabulary vocab = Vocabulary::load(v, config.vocab_size);
    TrainedModel model{FusionNetwork(config, std::move(params)), std::move(vocab),
                       std::stoull(meta.value("lexicon_fingerprint", std::string("0"))), {}};
    for (const auto& r : meta.value("history", json::array()))
        model.history.push_back({r.at("epoch").get<std::size_t>(), r.at("train_loss").get<double>(),
                                 r.at("val_loss").is_null() ? std::nan("") : r.at("val_loss").get<double>()});
    return model;
}

}  // namespace clickbait
