#include "fixtures.hpp"

#include <fstream>
#include <vector>

#include "clickbait/rng.hpp"
#include "clickbait/text_pipeline.hpp"

namespace fixtures {

using namespace clickbait;

CueLexicons tiny_lexicons() {
    CueLexicons lex;
    auto fam = [&](CueFamily f) -> Lexicon& { return lex.families[static_cast<std::size_t>(f)]; };
    fam(CueFamily::assertive).words = {"claim", "insist"};
    fam(CueFamily::factive).words = {"know", "realize"};
    fam(CueFamily::hedges).words = {"maybe", "might"};
    fam(CueFamily::hedges).phrases = {{"sort", "of"}};
    fam(CueFamily::implicative).words = {"manage", "forget"};
    fam(CueFamily::report).words = {"say", "report"};
    return lex;
}

Dataset separable_corpus(std::size_t n, std::uint64_t seed) {
    const std::vector<std::string> hype{"shocking", "unbelievable", "secret", "trick", "insane", "wow"};
    const std::vector<std::string> news{"senate", "budget", "court", "election", "minister", "economy"};
    const std::vector<std::string> cb_cues{"maybe", "might", "claim", "insist"};
    const std::vector<std::string> news_cues{"say", "report", "know"};
    const std::vector<std::string> filler{"the", "a", "today", "people", "city", "video", "new", "of"};

    Rng rng(seed);
    auto pick = [&](const std::vector<std::string>& v) { return v[rng.below(v.size())]; };

    Dataset d;
    d.name = "separable";
    std::map<std::string, TruthAnnotation> truths;
    for (std::size_t i = 0; i < n; ++i) {
        const bool cb = i % 2 == 0;
        std::string text;
        for (int w = 0; w < 7; ++w) {
            std::string word;
            if (w == 1 || w == 4) word = pick(cb ? hype : news);
            else if (w == 5) word = pick(cb ? cb_cues : news_cues);
            else word = pick(filler);
            text += (text.empty() ? "" : " ") + word;
        }
        Post p;
        p.id = "s" + std::to_string(1000 + i);
        p.post_text = {text};
        p.timestamp = "Mon Jun 27 15:16:19 +0000 2016";
        p.target_title = text;
        p.target_description = cb ? "you will " + pick(cb_cues) + " love it" : "officials " + pick(news_cues);
        p.target_keywords = cb ? "viral" : "politics";
        p.target_paragraphs = {cb ? "maybe it is the " + pick(hype) + " thing" : "the " + pick(news) + " said"};
        d.posts.push_back(p);

        TruthAnnotation t;
        t.id = p.id;
        t.judgments = cb ? std::vector<double>{1.0, 1.0, 1.0, 0.66, 0.3} : std::vector<double>{0.0, 0.0, 0.0, 0.3, 0.3};
        double s = 0.0;
        for (double j : t.judgments) s += j;
        t.truth_mean = s / 5.0;
        t.truth_class = class_for_score(t.truth_mean);
        truths[p.id] = t;
    }
    attach_truth(d, std::move(truths));
    return d;
}

ModelConfig tiny_config(Branch branch, bool with_cues) {
    ModelConfig c;
    c.branch = branch;
    c.text_source = DocumentSource::tweet;
    c.vector_inputs.cues_tweet = with_cues;
    c.seq_length = 12;
    c.vocab_size = 50;
    c.embed_dim = 8;
    c.lstm_units = 8;
    c.cnn = CnnConfig{8, 3, 8, 3, 0};
    c.dense_units = 8;
    c.fusion_units = 8;
    c.epochs = 200;
    c.batch_size = 16;
    c.learning_rate = 0.01;
    c.val_fraction = 0.0;
    c.seed = 11;
    return c;
}

void write_corpus(const std::filesystem::path& dir, const Dataset& data) {
    std::filesystem::create_directories(dir);
    std::ofstream inst(dir / "instances.jsonl");
    write_instances(inst, data);
    if (data.truths) {
        std::ofstream truth(dir / "truth.jsonl");
        write_truth(truth, data);
    }
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("clickbait-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace fixtures
