#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "clickbait/linguistic_cues.hpp"
#include "clickbait/media_analysis.hpp"
#include "clickbait/text_pipeline.hpp"

namespace clickbait {

enum class Branch { cnn, lstm };

Branch parse_branch(const std::string& s);
const char* to_string(Branch b);

/// Vector blocks fed to the fusion sub-network, always concatenated in the
/// order [cues_tweet, cues_article, image].
struct VectorInputs {
    bool cues_tweet = false;
    bool cues_article = false;
    bool image = false;

    bool any() const { return cues_tweet || cues_article || image; }
    bool any_cues() const { return cues_tweet || cues_article; }
    /// Parses "cues", "cues_tweet", "cues_article", "image" (comma separated); "" or "none" is empty.
    static VectorInputs parse(const std::string& s);
    std::string to_string() const;
};

/// How tweet and article cue vectors are combined when both are requested.
enum class CueCombine { concat, sum };

enum class MissingImage { zeros, error };

struct CnnConfig {
    std::size_t filters_1 = 64;
    std::size_t kernel_1 = 3;
    std::size_t filters_2 = 64;
    std::size_t kernel_2 = 3;
    // 0 pools over the whole sequence; otherwise non-overlapping windows of
    // this size followed by flattening.
    std::size_t pool = 0;
};

struct ModelConfig {
    Branch branch = Branch::lstm;
    bool use_text = true;
    DocumentSource text_source = DocumentSource::tweet;
    VectorInputs vector_inputs;

    std::size_t seq_length = 100;
    std::size_t vocab_size = Vocabulary::default_max_words;
    std::size_t embed_dim = 200;
    std::size_t lstm_units = 56;
    CnnConfig cnn;
    std::size_t dense_units = 32;
    std::size_t fusion_units = 32;
    std::size_t image_dim = kImageVectorDim;

    CueNormalization cue_normalization = CueNormalization::per_token;
    CueCombine cue_combine = CueCombine::concat;
    MissingImage missing_image = MissingImage::zeros;

    std::size_t epochs = 3;
    std::size_t batch_size = 32;
    double learning_rate = 0.001;
    double val_fraction = 0.2;
    std::uint64_t seed = 1;

    /// Width of the concatenated vector input (0 without vector inputs).
    std::size_t vector_width() const;
    /// Throws clickbait::Error describing the first invalid field.
    void validate() const;
};

nlohmann::json to_json(const ModelConfig& c);
ModelConfig model_config_from_json(const nlohmann::json& j);

}  // namespace clickbait
