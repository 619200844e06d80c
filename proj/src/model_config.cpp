#include "clickbait/model_config.hpp"

#include <sstream>

#include "clickbait/error.hpp"

namespace clickbait {

Branch parse_branch(const std::string& s) {
    if (s == "lstm" || s == "LSTM") return Branch::lstm;
    if (s == "cnn" || s == "CNN") return Branch::cnn;
    throw Error("unknown architecture '" + s + "' (expected lstm or cnn)");
}

const char* to_string(Branch b) { return b == Branch::lstm ? "lstm" : "cnn"; }

VectorInputs VectorInputs::parse(const std::string& s) {
    VectorInputs v;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty() || item == "none") continue;
        if (item == "cues") {
            v.cues_tweet = v.cues_article = true;
        } else if (item == "cues_tweet") {
            v.cues_tweet = true;
        } else if (item == "cues_article") {
            v.cues_article = true;
        } else if (item == "image") {
            v.image = true;
        } else {
            throw Error("unknown vector input '" + item + "' (expected cues, cues_tweet, cues_article, image)");
        }
    }
    return v;
}

std::string VectorInputs::to_string() const {
    std::string out;
    auto add = [&out](const char* s) { out += (out.empty() ? "" : ",") + std::string(s); };
    if (cues_tweet) add("cues_tweet");
    if (cues_article) add("cues_article");
    if (image) add("image");
    return out.empty() ? "none" : out;
}

std::size_t ModelConfig::vector_width() const {
    std::size_t w = 0;
    if (cue_combine == CueCombine::sum && vector_inputs.any_cues()) {
        w += kCueFamilies;
    } else {
        if (vector_inputs.cues_tweet) w += kCueFamilies;
        if (vector_inputs.cues_article) w += kCueFamilies;
    }
    if (vector_inputs.image) w += image_dim;
    return w;
}

void ModelConfig::validate() const {
    auto fail = [](const std::string& msg) { throw Error("invalid model config: " + msg); };
    if (!use_text && !vector_inputs.any()) fail("a vector-only model needs at least one vector input");
    if (seq_length == 0) fail("seq_length must be positive");
    if (vocab_size == 0) fail("vocab_size must be positive");
    if (embed_dim == 0) fail("embed_dim must be positive");
    if (branch == Branch::lstm && lstm_units == 0) fail("lstm_units must be positive");
    if (branch == Branch::cnn) {
        if (cnn.filters_1 == 0 || cnn.filters_2 == 0) fail("cnn filter counts must be positive");
        if (cnn.kernel_1 == 0 || cnn.kernel_2 == 0) fail("cnn kernel sizes must be positive");
        if (cnn.kernel_1 + cnn.kernel_2 - 1 > seq_length) fail("cnn kernels are longer than the sequence");
        const std::size_t conv_out = seq_length - cnn.kernel_1 - cnn.kernel_2 + 2;
        if (cnn.pool > conv_out) fail("cnn pool window exceeds the convolution output length");
    }
    if (dense_units == 0) fail("dense_units must be positive");
    if (vector_inputs.any() && fusion_units == 0) fail("fusion_units must be positive");
    if (vector_inputs.image && image_dim == 0) fail("image_dim must be positive");
    if (epochs < 1) fail("epochs must be at least 1");
    if (batch_size < 1) fail("batch_size must be at least 1");
    if (!(learning_rate > 0.0)) fail("learning_rate must be positive");
    if (!(val_fraction >= 0.0 && val_fraction < 1.0)) fail("val_fraction must lie in [0,1)");
}

nlohmann::json to_json(const ModelConfig& c) {
    return {
        {"branch", to_string(c.branch)},
        {"use_text", c.use_text},
        {"text_source", to_string(c.text_source)},
        {"vector_inputs", c.vector_inputs.to_string()},
        {"seq_length", c.seq_length},
        {"vocab_size", c.vocab_size},
        {"embed_dim", c.embed_dim},
        {"lstm_units", c.lstm_units},
        {"cnn",
         {{"filters_1", c.cnn.filters_1},
          {"kernel_1", c.cnn.kernel_1},
          {"filters_2", c.cnn.filters_2},
          {"kernel_2", c.cnn.kernel_2},
          {"pool", c.cnn.pool}}},
        {"dense_units", c.dense_units},
        {"fusion_units", c.fusion_units},
        {"image_dim", c.image_dim},
        {"cue_normalization", to_string(c.cue_normalization)},
        {"cue_combine", c.cue_combine == CueCombine::concat ? "concat" : "sum"},
        {"missing_image", c.missing_image == MissingImage::zeros ? "zeros" : "error"},
        {"epochs", c.epochs},
        {"batch_size", c.batch_size},
        {"learning_rate", c.learning_rate},
        {"val_fraction", c.val_fraction},
        {"seed", c.seed},
    };
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
    ModelConfig c;
    try {
        c.branch = parse_branch(j.at("branch").get<std::string>());
        c.use_text = j.at("use_text").get<bool>();
        c.text_source = parse_document_source(j.at("text_source").get<std::string>());
        c.vector_inputs = VectorInputs::parse(j.at("vector_inputs").get<std::string>());
        c.seq_length = j.at("seq_length").get<std::size_t>();
        c.vocab_size = j.at("vocab_size").get<std::size_t>();
        c.embed_dim = j.at("embed_dim").get<std::size_t>();
        c.lstm_units = j.at("lstm_units").get<std::size_t>();
        const auto& cnn = j.at("cnn");
        c.cnn.filters_1 = cnn.at("filters_1").get<std::size_t>();
        c.cnn.kernel_1 = cnn.at("kernel_1").get<std::size_t>();
        c.cnn.filters_2 = cnn.at("filters_2").get<std::size_t>();
        c.cnn.kernel_2 = cnn.at("kernel_2").get<std::size_t>();
        c.cnn.pool = cnn.at("pool").get<std::size_t>();
        c.dense_units = j.at("dense_units").get<std::size_t>();
        c.fusion_units = j.at("fusion_units").get<std::size_t>();
        c.image_dim = j.at("image_dim").get<std::size_t>();
        c.cue_normalization = parse_cue_normalization(j.at("cue_normalization").get<std::string>());
        c.cue_combine = j.at("cue_combine").get<std::string>() == "sum" ? CueCombine::sum : CueCombine::concat;
        c.missing_image = j.at("missing_image").get<std::string>() == "error" ? MissingImage::error : MissingImage::zeros;
        c.epochs = j.at("epochs").get<std::size_t>();
        c.batch_size = j.at("batch_size").get<std::size_t>();
        c.learning_rate = j.at("learning_rate").get<double>();
        c.val_fraction = j.at("val_fraction").get<double>();
        c.seed = j.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed model config: ") + e.what());
    }
    c.validate();
    return c;
}

}  // namespace clickbait
