#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "clickbait/data_ingest.hpp"
#include "clickbait/linguistic_cues.hpp"
#include "clickbait/model_config.hpp"

namespace fixtures {

/// Small hand-built lexicons: assertive {claim, insist}, factive {know,
/// realize}, hedges {maybe, might, sort of}, implicative {manage, forget},
/// report {say, report}.
clickbait::CueLexicons tiny_lexicons();

/// Posts whose label is decided by the words they use: clickbait posts mix
/// hype words with hedges and assertives, the others mix news words with
/// report verbs. Truth means are 0.792 / 0.12 (both judgment-based).
clickbait::Dataset separable_corpus(std::size_t n = 64, std::uint64_t seed = 7);

/// Tiny network config used for learnability and determinism checks.
clickbait::ModelConfig tiny_config(clickbait::Branch branch, bool with_cues);

/// Writes instances.jsonl and truth.jsonl for a dataset into `dir`.
void write_corpus(const std::filesystem::path& dir, const clickbait::Dataset& data);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace fixtures
