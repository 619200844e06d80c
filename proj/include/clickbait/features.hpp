#pragma once

#include <string>
#include <vector>

#include "clickbait/data_ingest.hpp"
#include "clickbait/linguistic_cues.hpp"
#include "clickbait/media_analysis.hpp"
#include "clickbait/model_config.hpp"
#include "clickbait/tensor.hpp"
#include "clickbait/text_pipeline.hpp"

namespace clickbait {

/// Model inputs for one post.
struct EncodedExample {
    std::vector<int> sequence;   // padded, seq_length entries
    std::vector<double> vector;  // vector_width entries
};

/// Mini-batch in the layout the network consumes.
struct Batch {
    std::size_t size = 0;
    std::vector<int> tokens;  // size x seq_length, row-major
    Tensor vectors;           // [size, vector_width], empty when unused
};

Batch make_batch(const std::vector<EncodedExample>& examples, std::span<const std::size_t> indices);

/// Turns posts into sequences and fusion vectors for one model config.
/// The vocabulary, lexicons and image store are borrowed and must outlive it.
class FeatureEncoder {
public:
    FeatureEncoder(const ModelConfig& config, const Vocabulary& vocab, const CueLexicons* lexicons,
                   const ImageVectorStore* images);

    EncodedExample encode(const Post& post) const;
    std::vector<EncodedExample> encode(const Dataset& dataset) const;

    /// Cue block for a post as configured (5 or 10 values).
    std::vector<double> cue_features(const Post& post) const;

private:
    ModelConfig config_;
    const Vocabulary& vocab_;
    const CueLexicons* lexicons_;
    const ImageVectorStore* images_;
};

/// Cleaned tokens of every post for the given text source (vocabulary fitting).
std::vector<Tokens> corpus_tokens(const Dataset& dataset, DocumentSource source);

}  // namespace clickbait
