#include "clickbait/embeddings.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <vector>

#include "clickbait/error.hpp"
#include "clickbait/rng.hpp"

namespace clickbait {

EmbeddingMatrix random_embeddings(std::size_t rows, std::size_t embed_dim, std::uint64_t seed) {
    EmbeddingMatrix m;
    m.table = Tensor({rows, embed_dim});
    Rng rng(seed);
    for (std::size_t i = embed_dim; i < m.table.size(); ++i) m.table[i] = rng.uniform(-0.05, 0.05);
    return m;
}

EmbeddingMatrix load_pretrained_embeddings(std::istream& in, const Vocabulary& vocab, std::size_t rows,
                                           std::size_t embed_dim, std::uint64_t seed) {
    if (vocab.size() >= rows) throw Error("embedding table has fewer rows than the vocabulary needs");
    EmbeddingMatrix m = random_embeddings(rows, embed_dim, seed);
    std::vector<bool> seen(rows, false);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto sp = line.find(' ');
        if (sp == std::string::npos) continue;
        const std::string word = line.substr(0, sp);
        const auto idx = vocab.index_of(word);
        // Parsing every vector is the expensive part; dimension is checked on
        // the first line and on every line we actually use.
        if (!idx && line_no > 1) continue;
        std::vector<double> values;
        values.reserve(embed_dim);
        const char* p = line.data() + sp;
        const char* end = line.data() + line.size();
        while (p < end) {
            while (p < end && (*p == ' ' || *p == '\t')) ++p;
            if (p >= end) break;
            double v = 0.0;
            auto [next, ec] = std::from_chars(p, end, v);
            if (ec != std::errc()) throw Error("embedding line " + std::to_string(line_no) + ": bad number");
            values.push_back(v);
            p = next;
        }
        if (values.size() != embed_dim)
            throw Error("embedding line " + std::to_string(line_no) + " has dimension " +
                        std::to_string(values.size()) + ", expected " + std::to_string(embed_dim));
        if (!idx) continue;
        const auto row = static_cast<std::size_t>(*idx);
        if (seen[row]) continue;  // first occurrence wins
        seen[row] = true;
        std::copy(values.begin(), values.end(), m.table.ptr() + row * embed_dim);
        ++m.found;
    }
    m.coverage = vocab.size() == 0 ? 0.0 : static_cast<double>(m.found) / static_cast<double>(vocab.size());
    std::clog << "pretrained embeddings: " << m.found << " of " << vocab.size() << " vocabulary words found ("
              << m.coverage * 100.0 << "% coverage)\n";
    return m;
}

EmbeddingMatrix load_pretrained_embeddings(const std::filesystem::path& path, const Vocabulary& vocab,
                                           std::size_t rows, std::size_t embed_dim, std::uint64_t seed) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read embeddings file " + path.string());
    return load_pretrained_embeddings(in, vocab, rows, embed_dim, seed);
}

}  // namespace clickbait
