#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "clickbait/data_ingest.hpp"
#include "clickbait/embeddings.hpp"
#include "clickbait/features.hpp"
#include "clickbait/network.hpp"

namespace clickbait {

struct EpochRecord {
    std::size_t epoch = 0;
    double train_loss = 0.0;  // mean squared error over the epoch's mini-batches
    double val_loss = 0.0;    // NaN when no validation split is used
};

struct TrainedModel {
    FusionNetwork network;
    Vocabulary vocab;
    std::uint64_t lexicon_fingerprint = 0;
    std::vector<EpochRecord> history;

    const ModelConfig& config() const { return network.config(); }
};

struct Prediction {
    std::string id;
    double clickbait_score = 0.0;
};

/// Encoded training inputs with their regression targets.
struct TrainingSet {
    std::vector<std::string> ids;
    std::vector<EncodedExample> examples;
    std::vector<double> targets;
};

TrainingSet make_training_set(const Dataset& dataset, const FeatureEncoder& encoder);

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Mini-batch ADAM on MSE for config.epochs epochs. A val_fraction share of
/// the examples (chosen by id and seed) is held out for validation loss.
/// Deterministic for a fixed seed.
std::vector<EpochRecord> fit(FusionNetwork& network, const TrainingSet& data, const EpochCallback& on_epoch = {});

/// Scores in [0,1], one per example, in order. Batches are scored in
/// parallel; each example's score does not depend on its batch mates.
std::vector<double> score(const FusionNetwork& network, const std::vector<EncodedExample>& examples,
                          std::size_t batch_size = 64);

/// Trains a built network on a labelled dataset.
TrainedModel train(FusionNetwork network, const Dataset& dataset, const FeatureEncoder& encoder, Vocabulary vocab,
                   std::uint64_t lexicon_fingerprint = 0, const EpochCallback& on_epoch = {});

std::vector<Prediction> predict(const TrainedModel& model, const Dataset& posts, const FeatureEncoder& encoder);

/// One {"id": ..., "clickbaitScore": ...} object per line.
void write_predictions(std::ostream& out, const std::vector<Prediction>& predictions);
std::vector<Prediction> parse_predictions(std::istream& in);
std::vector<Prediction> read_predictions(const std::filesystem::path& path);

/// Saves `<path>` (parameter checkpoint), `<path>.meta.json` (config,
/// history, lexicon fingerprint) and `<path>.vocab.tsv`.
void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace clickbait
