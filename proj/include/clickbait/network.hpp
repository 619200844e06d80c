#pragma once

#include <cstdint>

#include "clickbait/autodiff.hpp"
#include "clickbait/features.hpp"
#include "clickbait/model_config.hpp"

namespace clickbait {

/// Late-fusion regressor.
///
/// Text branch: embedding, then either two valid 1-D convolutions with a
/// max-pool (CNN) or a single LSTM layer whose last hidden state is used
/// (LSTM), then a rectifier dense layer. Vector branch: one rectifier dense
/// layer over the concatenated cue/image blocks. The two branch outputs are
/// concatenated and mapped by a final dense layer and a sigmoid to a score.
///
/// Parameter names: embedding; conv1/{kernel,bias}, conv2/{kernel,bias} or
/// lstm/{kernel,recurrent,bias} (gate order input, forget, cell, output);
/// text_dense/{kernel,bias}; fusion/{kernel,bias}; output/{kernel,bias}.
class FusionNetwork {
public:
    /// Builds with freshly initialized weights.
    FusionNetwork(const ModelConfig& config, std::uint64_t seed);
    /// Adopts existing parameters; shapes must match the config.
    FusionNetwork(const ModelConfig& config, ParameterSet params);

    const ModelConfig& config() const { return config_; }
    ParameterSet& parameters() { return params_; }
    const ParameterSet& parameters() const { return params_; }
    std::size_t parameter_count() const;

    /// Replaces the embedding table (e.g. with pretrained rows).
    void set_embedding(const Tensor& table);

    /// Scores [batch, 1] in (0, 1); gradients reach the parameters.
    Var forward(Tape& tape, const Batch& batch);
    /// Inference-only forward pass.
    Var forward(Tape& tape, const Batch& batch) const;

    /// Clears the gradient of the padding row so it stays at zero.
    void mask_padding_gradient();

private:
    template <class Params>
    static Var forward_impl(Tape& tape, const Batch& batch, const ModelConfig& config, Params& params);

    void init(std::uint64_t seed);
    void check_shapes() const;

    ModelConfig config_;
    ParameterSet params_;
};

/// Expected parameter shapes for a config, by name.
std::map<std::string, Shape> parameter_shapes(const ModelConfig& config);

}  // namespace clickbait
