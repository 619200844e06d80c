#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "clickbait/tensor.hpp"
#include "clickbait/text_pipeline.hpp"

namespace clickbait {

/// Initial embedding table: (rows) x embed_dim, row 0 all zeros for padding.
struct EmbeddingMatrix {
    Tensor table;
    std::size_t found = 0;      // vocabulary words present in the pretrained file
    double coverage = 0.0;      // found / vocabulary size
};

/// Random table: row 0 zero, every other row uniform(-0.05, 0.05) from `seed`.
EmbeddingMatrix random_embeddings(std::size_t rows, std::size_t embed_dim, std::uint64_t seed);

/// Reads whitespace-delimited "word v1 ... vD" lines (GloVe text format).
/// Rows for vocabulary words found in the file are copied verbatim; the rest
/// keep their seeded random values. `rows` must exceed the vocabulary size.
EmbeddingMatrix load_pretrained_embeddings(std::istream& in, const Vocabulary& vocab, std::size_t rows,
                                           std::size_t embed_dim, std::uint64_t seed);
EmbeddingMatrix load_pretrained_embeddings(const std::filesystem::path& path, const Vocabulary& vocab,
                                           std::size_t rows, std::size_t embed_dim, std::uint64_t seed);

}  // namespace clickbait
