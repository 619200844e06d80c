#include "clickbait/features.hpp"

#include <algorithm>

#include "clickbait/error.hpp"

namespace clickbait {

Batch make_batch(const std::vector<EncodedExample>& examples, std::span<const std::size_t> indices) {
    Batch b;
    b.size = indices.size();
    if (b.size == 0) return b;
    const std::size_t seq = examples[indices.front()].sequence.size();
    const std::size_t width = examples[indices.front()].vector.size();
    b.tokens.reserve(b.size * seq);
    for (std::size_t i : indices) b.tokens.insert(b.tokens.end(), examples[i].sequence.begin(), examples[i].sequence.end());
    if (width > 0) {
        b.vectors = Tensor({b.size, width});
        for (std::size_t r = 0; r < b.size; ++r)
            std::copy(examples[indices[r]].vector.begin(), examples[indices[r]].vector.end(), b.vectors.ptr() + r * width);
    }
    return b;
}

FeatureEncoder::FeatureEncoder(const ModelConfig& config, const Vocabulary& vocab, const CueLexicons* lexicons,
                               const ImageVectorStore* images)
    : config_(config), vocab_(vocab), lexicons_(lexicons), images_(images) {
    if (config_.vector_inputs.any_cues() && lexicons_ == nullptr)
        throw Error("cue vector inputs requested but no lexicons were loaded");
    if (config_.vector_inputs.image && images_ == nullptr && config_.missing_image == MissingImage::error)
        throw Error("image vector input requested but no image vectors were loaded");
    if (images_ && images_->dim() != config_.image_dim)
        throw Error("image vectors have dimension " + std::to_string(images_->dim()) + ", model expects " +
                    std::to_string(config_.image_dim));
}

std::vector<double> FeatureEncoder::cue_features(const Post& post) const {
    std::vector<double> out;
    const auto& vi = config_.vector_inputs;
    if (!vi.any_cues()) return out;
    auto cues_for = [&](DocumentSource src) {
        const Tokens toks = clean(assemble_document(post, src));
        return extract_cues(toks, *lexicons_, config_.cue_normalization).values;
    };
    if (config_.cue_combine == CueCombine::sum) {
        std::array<double, kCueFamilies> total{};
        if (vi.cues_tweet) {
            auto v = cues_for(DocumentSource::tweet);
            for (std::size_t f = 0; f < kCueFamilies; ++f) total[f] += v[f];
        }
        if (vi.cues_article) {
            auto v = cues_for(DocumentSource::article);
            for (std::size_t f = 0; f < kCueFamilies; ++f) total[f] += v[f];
        }
        out.assign(total.begin(), total.end());
        return out;
    }
    if (vi.cues_tweet) {
        auto v = cues_for(DocumentSource::tweet);
        out.insert(out.end(), v.begin(), v.end());
    }
    if (vi.cues_article) {
        auto v = cues_for(DocumentSource::article);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

EncodedExample FeatureEncoder::encode(const Post& post) const {
    EncodedExample ex;
    if (config_.use_text) {
        const Tokens toks = clean(assemble_document(post, config_.text_source));
        std::vector<int> seq = to_sequence(toks, vocab_);
        for (int idx : seq)
            if (static_cast<std::size_t>(idx) > config_.vocab_size)
                throw Error("vocabulary index exceeds the model's vocab_size");
        ex.sequence = pad(seq, config_.seq_length);
    } else {
        ex.sequence.assign(config_.seq_length, 0);
    }
    ex.vector = cue_features(post);
    if (config_.vector_inputs.image) {
        const std::vector<double>* v = images_ ? images_->find(post.id) : nullptr;
        if (v) {
            ex.vector.insert(ex.vector.end(), v->begin(), v->end());
        } else if (config_.missing_image == MissingImage::zeros) {
            ex.vector.insert(ex.vector.end(), config_.image_dim, 0.0);
        } else {
            throw Error("no image vector for post " + post.id);
        }
    }
    return ex;
}

std::vector<EncodedExample> FeatureEncoder::encode(const Dataset& dataset) const {
    std::vector<EncodedExample> out;
    out.reserve(dataset.size());
    for (const Post& p : dataset.posts) out.push_back(encode(p));
    return out;
}

std::vector<Tokens> corpus_tokens(const Dataset& dataset, DocumentSource source) {
    std::vector<Tokens> out;
    out.reserve(dataset.size());
    for (const Post& p : dataset.posts) out.push_back(clean(assemble_document(p, source)));
    return out;
}

}  // namespace clickbait
