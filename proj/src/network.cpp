#include "clickbait/network.hpp"

#include <cmath>

#include "clickbait/error.hpp"
#include "clickbait/ops.hpp"
#include "clickbait/rng.hpp"

namespace clickbait {

namespace {

// Output width of the CNN text trunk before the dense layer.
std::size_t cnn_features(const ModelConfig& c) {
    const std::size_t conv_out = c.seq_length - c.cnn.kernel_1 - c.cnn.kernel_2 + 2;
    if (c.cnn.pool == 0) return c.cnn.filters_2;
    return (conv_out / c.cnn.pool) * c.cnn.filters_2;
}

void glorot(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& v : t.data()) v = rng.uniform(-limit, limit);
}

template <class Params>
auto& param_at(Params& params, const char* name) {
    auto it = params.find(name);
    if (it == params.end()) throw Error(std::string("network is missing parameter ") + name);
    return it->second;
}

}  // namespace

std::map<std::string, Shape> parameter_shapes(const ModelConfig& c) {
    std::map<std::string, Shape> s;
    std::size_t head_in = 0;
    if (c.use_text) {
        s["embedding"] = {c.vocab_size + 1, c.embed_dim};
        std::size_t trunk = 0;
        if (c.branch == Branch::lstm) {
            s["lstm/kernel"] = {c.embed_dim, 4 * c.lstm_units};
            s["lstm/recurrent"] = {c.lstm_units, 4 * c.lstm_units};
            s["lstm/bias"] = {4 * c.lstm_units};
            trunk = c.lstm_units;
        } else {
            s["conv1/kernel"] = {c.cnn.kernel_1, c.embed_dim, c.cnn.filters_1};
            s["conv1/bias"] = {c.cnn.filters_1};
            s["conv2/kernel"] = {c.cnn.kernel_2, c.cnn.filters_1, c.cnn.filters_2};
            s["conv2/bias"] = {c.cnn.filters_2};
            trunk = cnn_features(c);
        }
        s["text_dense/kernel"] = {trunk, c.dense_units};
        s["text_dense/bias"] = {c.dense_units};
        head_in += c.dense_units;
    }
    if (c.vector_inputs.any()) {
        s["fusion/kernel"] = {c.vector_width(), c.fusion_units};
        s["fusion/bias"] = {c.fusion_units};
        head_in += c.fusion_units;
    }
    s["output/kernel"] = {head_in, 1};
    s["output/bias"] = {1};
    return s;
}

FusionNetwork::FusionNetwork(const ModelConfig& config, std::uint64_t seed) : config_(config) {
    config_.validate();
    init(seed);
}

FusionNetwork::FusionNetwork(const ModelConfig& config, ParameterSet params)
    : config_(config), params_(std::move(params)) {
    config_.validate();
    check_shapes();
    for (auto& [name, p] : params_)
        if (p.grad.shape() != p.value.shape()) p.grad = Tensor(p.value.shape());
}

void FusionNetwork::check_shapes() const {
    const auto expected = parameter_shapes(config_);
    if (expected.size() != params_.size())
        throw Error("parameter set has " + std::to_string(params_.size()) + " entries, config needs " +
                    std::to_string(expected.size()));
    for (const auto& [name, shape] : expected) {
        auto it = params_.find(name);
        if (it == params_.end()) throw Error("missing parameter " + name);
        if (it->second.value.shape() != shape)
            throw Error("parameter " + name + " has shape " + shape_string(it->second.value.shape()) +
                        ", expected " + shape_string(shape));
    }
}

void FusionNetwork::init(std::uint64_t seed) {
    Rng rng(seed);
    const auto shapes = parameter_shapes(config_);
    const ModelConfig& c = config_;
    // Fixed initialization order keeps weights reproducible per seed.
    const char* order[] = {"embedding",   "conv1/kernel",   "conv2/kernel",  "lstm/kernel",
                           "lstm/recurrent", "text_dense/kernel", "fusion/kernel", "output/kernel"};
    for (const auto& [name, shape] : shapes) params_.emplace(name, Parameter(Tensor(shape)));
    for (const char* name : order) {
        auto it = params_.find(name);
        if (it == params_.end()) continue;
        Tensor& t = it->second.value;
        const std::string n = name;
        if (n == "embedding") {
            for (std::size_t i = c.embed_dim; i < t.size(); ++i) t[i] = rng.uniform(-0.05, 0.05);
        } else if (n == "conv1/kernel" || n == "conv2/kernel") {
            glorot(t, t.dim(0) * t.dim(1), t.dim(0) * t.dim(2), rng);
        } else {
            glorot(t, t.dim(0), t.dim(1), rng);
        }
    }
}

std::size_t FusionNetwork::parameter_count() const {
    std::size_t n = 0;
    for (const auto& [name, p] : params_) n += p.value.size();
    return n;
}

void FusionNetwork::set_embedding(const Tensor& table) {
    Parameter& e = param_at(params_, "embedding");
    require_same_shape(e.value, table, "set_embedding");
    e.value = table;
    for (std::size_t d = 0; d < config_.embed_dim; ++d) e.value[d] = 0.0;
}

void FusionNetwork::mask_padding_gradient() {
    auto it = params_.find("embedding");
    if (it == params_.end()) return;
    for (std::size_t d = 0; d < config_.embed_dim; ++d) it->second.grad[d] = 0.0;
}

Var FusionNetwork::forward(Tape& tape, const Batch& batch) { return forward_impl(tape, batch, config_, params_); }

Var FusionNetwork::forward(Tape& tape, const Batch& batch) const {
    return forward_impl(tape, batch, config_, params_);
}

template <class Params>
Var FusionNetwork::forward_impl(Tape& tape, const Batch& batch, const ModelConfig& c, Params& params) {
    if (batch.size == 0) throw Error("forward on an empty batch");
    auto P = [&](const char* name) { return tape.param(param_at(params, name)); };
    auto dense_relu = [&](Var x, const char* kernel, const char* bias) {
        return ops::relu(tape, ops::add_bias(tape, ops::matmul(tape, x, P(kernel)), P(bias)));
    };
    const std::size_t n = batch.size;
    std::vector<Var> head;

    if (c.use_text) {
        if (batch.tokens.size() != n * c.seq_length) throw Error("batch token count does not match seq_length");
        Var emb = ops::embedding(tape, P("embedding"), batch.tokens, n, c.seq_length);
        Var trunk;
        if (c.branch == Branch::cnn) {
            Var h1 = ops::relu(tape, ops::conv1d(tape, emb, P("conv1/kernel"), P("conv1/bias")));
            Var h2 = ops::relu(tape, ops::conv1d(tape, h1, P("conv2/kernel"), P("conv2/bias")));
            if (c.cnn.pool == 0) {
                trunk = ops::global_max_pool(tape, h2);
            } else {
                Var pooled = ops::max_pool1d(tape, h2, c.cnn.pool);
                const Shape& ps = tape.value(pooled).shape();
                trunk = ops::reshape(tape, pooled, {n, ps[1] * ps[2]});
            }
        } else {
            const std::size_t units = c.lstm_units, len = c.seq_length;
            // Input projections for all steps in one product.
            Var flat = ops::reshape(tape, emb, {n * len, c.embed_dim});
            Var proj = ops::reshape(tape, ops::matmul(tape, flat, P("lstm/kernel")), {n, len, 4 * units});
            Var recurrent = P("lstm/recurrent");
            Var bias = P("lstm/bias");
            Var h = tape.constant(Tensor({n, units}));
            Var cell = tape.constant(Tensor({n, units}));
            for (std::size_t t = 0; t < len; ++t) {
                Var z = ops::add_bias(
                    tape, ops::add(tape, ops::time_step(tape, proj, t), ops::matmul(tape, h, recurrent)), bias);
                Var in_gate = ops::sigmoid(tape, ops::slice_cols(tape, z, 0, units));
                Var forget_gate = ops::sigmoid(tape, ops::slice_cols(tape, z, units, 2 * units));
                Var candidate = ops::tanh(tape, ops::slice_cols(tape, z, 2 * units, 3 * units));
                Var out_gate = ops::sigmoid(tape, ops::slice_cols(tape, z, 3 * units, 4 * units));
                cell = ops::add(tape, ops::mul(tape, forget_gate, cell), ops::mul(tape, in_gate, candidate));
                h = ops::mul(tape, out_gate, ops::tanh(tape, cell));
            }
            trunk = h;
        }
        head.push_back(dense_relu(trunk, "text_dense/kernel", "text_dense/bias"));
    }

    if (c.vector_inputs.any()) {
        if (batch.vectors.empty() || batch.vectors.shape() != Shape{n, c.vector_width()})
            throw Error("batch vector block does not match the configured vector width " +
                        std::to_string(c.vector_width()));
        Var v = tape.constant(batch.vectors);
        head.push_back(dense_relu(v, "fusion/kernel", "fusion/bias"));
    }

    Var joined = head.size() == 1 ? head.front() : ops::concat_cols(tape, head);
    Var logit = ops::add_bias(tape, ops::matmul(tape, joined, P("output/kernel")), P("output/bias"));
    return ops::sigmoid(tape, logit);
}

}  // namespace clickbait
