#include "clickbait/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "clickbait/baseline.hpp"
#include "clickbait/data_ingest.hpp"
#include "clickbait/embeddings.hpp"
#include "clickbait/error.hpp"
#include "clickbait/evaluation.hpp"
#include "clickbait/features.hpp"
#include "clickbait/kernels.hpp"
#include "clickbait/linguistic_cues.hpp"
#include "clickbait/media_analysis.hpp"
#include "clickbait/model.hpp"
#include "clickbait/model_config.hpp"
#include "clickbait/network.hpp"
#include "clickbait/self_training.hpp"

#ifdef CLICKBAIT_HAVE_OPENMP
#include <omp.h>
#endif

#ifndef CLICKBAIT_BUNDLED_DATA_DIR
#define CLICKBAIT_BUNDLED_DATA_DIR "data"
#endif

namespace clickbait::cli {

namespace {

// Bad flag values that only show up after parsing (e.g. an invalid model
// config); reported like parse errors with exit code 2.
struct UsageError : Error {
    using Error::Error;
};

// Training corpus (the "20k" set), test corpus (the "2k" set) and the
// unlabelled corpus, relative to $CLICKBAIT_CORPUS_DIR.
constexpr const char* kTrainSet = "clickbait17-train-170630";
constexpr const char* kTestSet = "clickbait16-train-170331";
constexpr const char* kUnlabelledSet = "clickbait17-unlabeled-170429";

const CLI::Validator kAtLeastOne(
    [](std::string& v) {
        try {
            if (std::stod(v) >= 1.0) return std::string();
        } catch (const std::exception&) {
        }
        return "must be at least 1, got " + v;
    },
    "POSITIVE");

std::string bundled(const std::string& rel) { return std::string(CLICKBAIT_BUNDLED_DATA_DIR) + "/" + rel; }

std::string corpus_file(const char* set, const char* file) {
    const char* dir = std::getenv("CLICKBAIT_CORPUS_DIR");
    if (!dir || !*dir) return {};
    return std::string(dir) + "/" + set + "/" + file;
}

// Explicit path, else the corpus default, else a usage error naming the flag.
std::string resolve(const std::string& given, const char* set, const char* file, const char* flag) {
    if (!given.empty()) return given;
    std::string p = corpus_file(set, file);
    if (p.empty()) throw UsageError(std::string(flag) + " is required (or set CLICKBAIT_CORPUS_DIR)");
    return p;
}

struct Global {
    std::uint64_t seed = 1;
    std::string config;
    std::string write_config;
    bool quiet = false;
    bool serial = false;
    int threads = 0;
};

struct ModelFlags {
    std::string arch = "lstm";
    std::string text = "tweet";
    std::string vectors = "none";
    std::size_t epochs = 3;
    std::size_t batch_size = 32;
    double lr = 0.001;
    double val_fraction = 0.2;
    std::size_t seq_length = 100;
    std::size_t vocab_size = Vocabulary::default_max_words;
    std::size_t embed_dim = 200;
    std::size_t lstm_units = 56;
    std::size_t cnn_filters = 64;
    std::size_t cnn_kernel = 3;
    std::size_t cnn_pool = 0;
    std::size_t dense_units = 32;
    std::size_t fusion_units = 32;
    std::string cue_normalization = "per_token";
    std::string cue_combine = "concat";
    std::string missing_image = "zeros";

    void add_to(CLI::App* app) {
        app->add_option("--arch", arch, "Text branch")->check(CLI::IsMember({"lstm", "cnn"}))->capture_default_str();
        app->add_option("--text", text, "Text source: tweet, article, both or none")
            ->check(CLI::IsMember({"tweet", "article", "both", "tweet+article", "none"}))
            ->capture_default_str();
        app->add_option("--vectors", vectors,
                        "Fusion vectors: comma list of cues, cues_tweet, cues_article, image (or none)")
            ->capture_default_str();
        app->add_option("--epochs", epochs, "Training epochs")->check(kAtLeastOne)->capture_default_str();
        app->add_option("--batch-size", batch_size)->check(kAtLeastOne)->capture_default_str();
        app->add_option("--lr", lr, "ADAM learning rate")->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--val-fraction", val_fraction, "Held-out share for validation loss (0 disables)")
            ->check(CLI::Range(0.0, 0.99))
            ->capture_default_str();
        app->add_option("--seq-length", seq_length)->check(kAtLeastOne)->capture_default_str();
        app->add_option("--vocab-size", vocab_size)->check(kAtLeastOne)->capture_default_str();
        app->add_option("--embed-dim", embed_dim)->check(kAtLeastOne)->capture_default_str();
        app->add_option("--lstm-units", lstm_units)->check(kAtLeastOne)->capture_default_str();
        app->add_option("--cnn-filters", cnn_filters)->check(kAtLeastOne)->capture_default_str();
        app->add_option("--cnn-kernel", cnn_kernel)->check(kAtLeastOne)->capture_default_str();
        app->add_option("--cnn-pool", cnn_pool, "0 = global max pool")->capture_default_str();
        app->add_option("--dense-units", dense_units)->check(kAtLeastOne)->capture_default_str();
        app->add_option("--fusion-units", fusion_units)->check(kAtLeastOne)->capture_default_str();
        app->add_option("--cue-normalization", cue_normalization)
            ->check(CLI::IsMember({"per_token", "raw_count"}))
            ->capture_default_str();
        app->add_option("--cue-combine", cue_combine, "Tweet+article cue blocks: concat or sum")
            ->check(CLI::IsMember({"concat", "sum"}))
            ->capture_default_str();
        app->add_option("--missing-image", missing_image)
            ->check(CLI::IsMember({"zeros", "error"}))
            ->capture_default_str();
    }

    ModelConfig build(std::uint64_t seed) const {
        ModelConfig c;
        try {
            c.branch = parse_branch(arch);
            c.use_text = text != "none";
            if (c.use_text) c.text_source = parse_document_source(text);
            c.vector_inputs = VectorInputs::parse(vectors);
            c.cue_normalization = parse_cue_normalization(cue_normalization);
            c.cue_combine = cue_combine == "sum" ? CueCombine::sum : CueCombine::concat;
            c.missing_image = missing_image == "error" ? MissingImage::error : MissingImage::zeros;
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
        c.epochs = epochs;
        c.batch_size = batch_size;
        c.learning_rate = lr;
        c.val_fraction = val_fraction;
        c.seq_length = seq_length;
        c.vocab_size = vocab_size;
        c.embed_dim = embed_dim;
        c.lstm_units = lstm_units;
        c.cnn.filters_1 = c.cnn.filters_2 = cnn_filters;
        c.cnn.kernel_1 = c.cnn.kernel_2 = cnn_kernel;
        c.cnn.pool = cnn_pool;
        c.dense_units = dense_units;
        c.fusion_units = fusion_units;
        c.seed = seed;
        try {
            c.validate();
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
        return c;
    }
};

// Image vectors for a model config: from a file, synthetic, or none.
struct ImageFlags {
    std::string path;
    bool synthetic = false;

    void add_to(CLI::App* app) {
        app->add_option("--images", path, "Image vectors (JSONL {id, vector})");
        app->add_flag("--synthetic-images", synthetic,
                      "Use seeded stand-in image vectors (for runs without the extractor)");
    }

    std::unique_ptr<ImageVectorStore> load(const ModelConfig& c, const Dataset& posts, std::uint64_t seed) const {
        if (!c.vector_inputs.image) return nullptr;
        if (!path.empty()) {
            auto store = std::make_unique<ImageVectorStore>(load_image_vectors(path, c.image_dim));
            std::clog << "image vectors: " << store->size() << " loaded from " << path << '\n';
            return store;
        }
        if (synthetic) {
            std::vector<std::string> ids;
            for (const Post& p : posts.posts) ids.push_back(p.id);
            return std::make_unique<ImageVectorStore>(synthetic_image_vectors(ids, seed, c.image_dim));
        }
        throw UsageError("image vectors requested: pass --images or --synthetic-images");
    }
};

std::unique_ptr<CueLexicons> maybe_lexicons(bool needed, const std::string& dir) {
    if (!needed) return nullptr;
    return std::make_unique<CueLexicons>(load_lexicons(dir));
}

Dataset load_labelled(const std::string& instances, const std::string& truth) {
    Dataset d = read_instances(instances);
    attach_truth(d, read_truth(truth));
    return d;
}

std::string truth_next_to(const std::string& instances) {
    const std::filesystem::path p(instances);
    return (p.parent_path() / "truth.jsonl").string();
}

void write_predictions_to(const std::string& out, const std::vector<Prediction>& preds) {
    if (out.empty() || out == "-") {
        write_predictions(std::cout, preds);
        return;
    }
    std::ofstream f(out);
    if (!f) throw Error("cannot write " + out);
    write_predictions(f, preds);
    if (!f) throw Error("failed writing " + out);
    std::clog << "wrote " << preds.size() << " predictions to " << out << '\n';
}

void log_epoch(const EpochRecord& r) {
    std::clog << "epoch " << r.epoch << ": train_loss " << std::setprecision(6) << r.train_loss;
    if (r.val_loss == r.val_loss) std::clog << " val_loss " << r.val_loss;
    std::clog << '\n';
}

// Fits the vocabulary and embeddings and trains a fresh network.
TrainedModel train_model(const ModelConfig& config, const Dataset& data, const Dataset* vocab_extra,
                         const CueLexicons* lexicons, const ImageVectorStore* images,
                         const std::string& embeddings) {
    Vocabulary vocab;
    if (config.use_text) {
        std::vector<Tokens> corpus = corpus_tokens(data, config.text_source);
        if (vocab_extra) {
            auto extra = corpus_tokens(*vocab_extra, config.text_source);
            corpus.insert(corpus.end(), extra.begin(), extra.end());
        }
        vocab = fit_vocabulary(corpus, config.vocab_size);
        std::clog << "vocabulary: " << vocab.size() << " words\n";
    }
    FusionNetwork network(config, config.seed);
    if (config.use_text && !embeddings.empty()) {
        EmbeddingMatrix m =
            load_pretrained_embeddings(embeddings, vocab, config.vocab_size + 1, config.embed_dim, config.seed);
        network.set_embedding(m.table);
    }
    std::clog << "parameters: " << network.parameter_count() << '\n';
    FeatureEncoder encoder(config, vocab, lexicons, images);
    return train(std::move(network), data, encoder, std::move(vocab), lexicons ? lexicons->fingerprint() : 0,
                 log_epoch);
}

void check_fingerprint(const TrainedModel& model, const CueLexicons* lexicons) {
    if (lexicons && lexicons->fingerprint() != model.lexicon_fingerprint)
        throw Error("lexicons differ from the ones the model was trained with");
}

bool is_flag(const CLI::Option* opt) { return opt->get_items_expected_max() == 0; }

std::string option_value(const CLI::Option* opt) {
    if (is_flag(opt)) return opt->count() > 0 ? "true" : "false";
    if (opt->count() == 0) return opt->get_default_str();
    std::string out;
    for (const auto& r : opt->results()) out += (out.empty() ? "" : ",") + r;
    return out;
}

// Resolved settings of the selected subcommand plus the globals, as config lines.
std::string resolved_spec(const CLI::App& app, const CLI::App& sub) {
    std::ostringstream s;
    s << "command=" << sub.get_name() << '\n';
    for (const CLI::App* a : {&app, &sub}) {
        for (const CLI::Option* opt : a->get_options()) {
            const std::string name = opt->get_single_name();
            if (name == "help" || name == "help-all" || name == "config" || name == "write-config") continue;
            s << name << '=' << option_value(opt) << '\n';
        }
    }
    return s.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& key) {
    const std::string flag = "--" + key;
    for (const auto& a : args)
        if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
}

// Appends config-file settings the command line did not already set. Keys
// belonging only to other subcommands are ignored so one file can describe
// a whole experiment.
std::vector<std::string> merge_config(const CLI::App& app, std::vector<std::string> args) {
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    if (config_path.empty()) return args;

    const CLI::App* sub = nullptr;
    for (const auto& a : args) {
        for (const CLI::App* s : app.get_subcommands({}))
            if (s->get_name() == a) sub = s;
        if (sub) break;
    }
    std::vector<std::string> extra;
    for (const auto& [key, value] : parse_config_text(read_file(config_path))) {
        if (key == "command" || key == "config" || key == "write-config") continue;
        const CLI::App* owner = nullptr;
        if (app.get_option_no_throw("--" + key)) owner = &app;
        else if (sub && sub->get_option_no_throw("--" + key)) owner = sub;
        if (!owner) {
            bool elsewhere = false;
            for (const CLI::App* s : app.get_subcommands({}))
                if (s->get_option_no_throw("--" + key)) elsewhere = true;
            if (!elsewhere) throw UsageError("unknown key '" + key + "' in " + config_path);
            continue;
        }
        if (value.empty() || given_on_command_line(args, key)) continue;
        const CLI::Option* opt = owner->get_option_no_throw("--" + key);
        if (is_flag(opt)) {
            if (value == "true" || value == "1") extra.push_back("--" + key);
            else if (value != "false" && value != "0")
                throw UsageError("config key '" + key + "' expects true or false");
            continue;
        }
        extra.push_back("--" + key + "=" + value);
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

class ClogSilencer {
public:
    explicit ClogSilencer(bool quiet) {
        if (quiet) saved_ = std::clog.rdbuf(nullptr);
    }
    ~ClogSilencer() {
        if (saved_) std::clog.rdbuf(saved_);
    }
    ClogSilencer(const ClogSilencer&) = delete;
    ClogSilencer& operator=(const ClogSilencer&) = delete;

private:
    std::streambuf* saved_ = nullptr;
};

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError("config line " + std::to_string(line_no) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.rfind("--", 0) == 0) key = key.substr(2);
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key.empty()) throw UsageError("config line " + std::to_string(line_no) + ": empty key");
        out.emplace_back(key, value);
    }
    return out;
}

int run(const std::vector<std::string>& raw_args) {
    CLI::App app{"Clickbait scoring: late-fusion neural regressors, boosted baseline, evaluation", "clickbait"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    Global g;
    app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
    app.add_option("--config", g.config, "Flat key=value file; command-line flags take precedence");
    app.add_option("--write-config", g.write_config, "Write the resolved settings to this file");
    app.add_flag("--quiet", g.quiet, "Suppress progress output");
    app.add_flag("--serial", g.serial, "Use the serial kernels instead of the OpenMP ones");
    app.add_option("--threads", g.threads, "OpenMP thread count (0 = runtime default)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();

    // ingest
    struct {
        std::string instances, truth;
        bool stats = false, strict = false;
    } ing;
    CLI::App* ingest = app.add_subcommand("ingest", "Validate a corpus and report its size and class ratio");
    ingest->add_option("--instances", ing.instances, "instances.jsonl")->required();
    ingest->add_option("--truth", ing.truth, "truth.jsonl");
    ingest->add_flag("--stats", ing.stats, "Print post counts and the class ratio as JSON");
    ingest->add_flag("--strict-scale", ing.strict, "Reject judgments off {0, 0.3, 0.66, 1}");

    // train
    ModelFlags tm;
    ImageFlags timg;
    struct {
        std::string instances, truth, lexicons = bundled("lexicons"), embeddings, vocab_extra, out;
    } tr;
    CLI::App* trainc = app.add_subcommand("train", "Train a fusion network");
    tm.add_to(trainc);
    timg.add_to(trainc);
    trainc->add_option("--instances", tr.instances, "Training instances (default: the 20k corpus)");
    trainc->add_option("--truth", tr.truth, "Training truth (default: next to the instances)");
    trainc->add_option("--lexicons", tr.lexicons, "Cue lexicon directory")->capture_default_str();
    trainc->add_option("--embeddings", tr.embeddings, "Pretrained embeddings in GloVe text format");
    trainc->add_option("--vocab-extra", tr.vocab_extra, "Extra instances whose text also feeds the vocabulary");
    trainc->add_option("--out", tr.out, "Model path")->required();

    // predict
    ImageFlags pimg;
    struct {
        std::string model, instances, lexicons = bundled("lexicons"), out = "-";
    } pr;
    CLI::App* predictc = app.add_subcommand("predict", "Score posts with a trained model");
    pimg.add_to(predictc);
    predictc->add_option("--model", pr.model, "Model path")->required();
    predictc->add_option("--instances", pr.instances, "Posts to score (default: the 2k corpus)");
    predictc->add_option("--lexicons", pr.lexicons, "Cue lexicon directory")->capture_default_str();
    predictc->add_option("--out", pr.out, "Predictions JSONL ('-' for stdout)")->capture_default_str();

    // selftrain
    ImageFlags simg;
    struct {
        std::string model, unlabelled, labelled, truth, lexicons = bundled("lexicons"), embeddings;
        std::string out_instances, out_truth, retrain, report;
        std::size_t epochs = 0;
    } st;
    CLI::App* selftrain =
        app.add_subcommand("selftrain", "Pseudo-label unlabelled posts and merge them with labelled data");
    simg.add_to(selftrain);
    selftrain->add_option("--model", st.model, "Model that assigns the pseudo-labels")->required();
    selftrain->add_option("--unlabelled", st.unlabelled, "Unlabelled instances (default: the 80k corpus)");
    selftrain->add_option("--labelled", st.labelled, "Labelled instances (default: the 20k corpus)");
    selftrain->add_option("--truth", st.truth, "Truth for --labelled (default: next to it)");
    selftrain->add_option("--lexicons", st.lexicons, "Cue lexicon directory")->capture_default_str();
    selftrain->add_option("--out-instances", st.out_instances, "Merged instances output");
    selftrain->add_option("--out-truth", st.out_truth, "Merged truth output (noisy records flagged synthetic)");
    selftrain->add_option("--report", st.report, "Write the bookkeeping report JSON here as well");
    selftrain->add_option("--retrain", st.retrain, "Train a new model on the merged data and save it here");
    selftrain->add_option("--embeddings", st.embeddings, "Pretrained embeddings for --retrain");
    selftrain->add_option("--epochs", st.epochs, "Epochs for --retrain (default: the model's)")
        ->check(kAtLeastOne);

    // evaluate
    struct {
        std::string pred, truth, out;
        double threshold = 0.5;
    } ev;
    CLI::App* evaluatec = app.add_subcommand("evaluate", "Score predictions against truth");
    evaluatec->add_option("--pred", ev.pred, "Predictions JSONL")->required();
    evaluatec->add_option("--truth", ev.truth, "truth.jsonl")->required();
    evaluatec->add_option("--threshold", ev.threshold, "Clickbait threshold")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    evaluatec->add_option("--out", ev.out, "Also write the JSON report here");

    // baseline
    struct {
        std::string instances, truth, model, out, pred_instances, pred_out = "-", lexicons = bundled("lexicons");
        std::string text = "tweet", cue_normalization = "per_token";
        bool cues = false;
        std::size_t estimators = 50;
    } bl;
    CLI::App* baselinec = app.add_subcommand(
        "baseline", "Boosted-stump regressor over tf-idf unigrams; trains with --out, scores with --model");
    baselinec->add_option("--instances", bl.instances, "Training instances (default: the 20k corpus)");
    baselinec->add_option("--truth", bl.truth, "Training truth (default: next to the instances)");
    baselinec->add_option("--text", bl.text, "tweet or both")
        ->check(CLI::IsMember({"tweet", "both", "tweet+article", "article"}))
        ->capture_default_str();
    baselinec->add_flag("--cues", bl.cues, "Append the five cue values as columns");
    baselinec->add_option("--cue-normalization", bl.cue_normalization)
        ->check(CLI::IsMember({"per_token", "raw_count"}))
        ->capture_default_str();
    baselinec->add_option("--estimators", bl.estimators, "Boosting rounds")
        ->check(kAtLeastOne)
        ->capture_default_str();
    baselinec->add_option("--lexicons", bl.lexicons, "Cue lexicon directory")->capture_default_str();
    baselinec->add_option("--out", bl.out, "Save the fitted baseline here");
    baselinec->add_option("--model", bl.model, "Load a fitted baseline instead of training");
    baselinec->add_option("--pred-instances", bl.pred_instances, "Posts to score after fitting/loading");
    baselinec->add_option("--pred-out", bl.pred_out, "Predictions JSONL ('-' for stdout)")->capture_default_str();

    // analyze-media
    struct {
        std::string tags, truth, scores, categories = bundled("coco_categories.tsv"), out_csv, images;
        std::size_t bins = 10;
        double min_confidence = 0.5;
    } am;
    CLI::App* media = app.add_subcommand("analyze-media", "Object-category proportions per class and per score bin");
    media->add_option("--tags", am.tags, "Object tags JSONL")->required();
    media->add_option("--truth", am.truth, "truth.jsonl (classes, and scores for the trend)");
    media->add_option("--scores", am.scores, "Predictions JSONL to use as trend scores");
    media->add_option("--categories", am.categories, "label<TAB>category map")->capture_default_str();
    media->add_option("--bins", am.bins, "Score bins for the trend")->check(CLI::Range(2, 1000))->capture_default_str();
    media->add_option("--min-confidence", am.min_confidence, "Detection confidence floor")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    media->add_option("--out-csv", am.out_csv, "Trend table CSV");
    media->add_option("--images", am.images, "Also validate an image-vector file");

    for (CLI::App* s : app.get_subcommands({})) s->fallthrough();

    std::vector<std::string> args;
    try {
        args = merge_config(app, raw_args);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    std::vector<char*> argv;
    std::string prog = "clickbait";
    argv.push_back(prog.data());
    for (auto& a : args) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n";
        const CLI::App* shown = &app;
        for (const CLI::App* s : app.get_subcommands()) shown = s;
        std::cerr << shown->help();
        return 2;
    }

    const CLI::App* sub = app.get_subcommands().front();
    ClogSilencer silencer(g.quiet);
    kernels::set_parallel(!g.serial);
#ifdef CLICKBAIT_HAVE_OPENMP
    if (g.threads > 0) omp_set_num_threads(g.threads);
#endif

    const std::string spec = resolved_spec(app, *sub);
    std::cerr << "# resolved settings (seed " << g.seed << ")\n" << spec;
    if (!g.write_config.empty()) {
        std::ofstream f(g.write_config);
        if (!f) {
            std::cerr << "error: cannot write " << g.write_config << '\n';
            return 1;
        }
        f << spec;
    }

    try {
        if (sub == ingest) {
            Dataset d = read_instances(ing.instances);
            if (!ing.truth.empty())
                attach_truth(d, read_truth(ing.truth, ing.strict ? JudgmentScale::strict : JudgmentScale::corpus));
            nlohmann::json j{{"instances", ing.instances}, {"posts", d.size()}};
            if (d.truths) {
                const RatioStat r = class_ratio(d);
                j["clickbait"] = r.n_clickbait;
                j["no_clickbait"] = r.n_not;
                j["ratio"] = r.display();
            }
            if (ing.stats) std::cout << j.dump() << '\n';
            else std::cout << d.size() << " posts OK\n";
        } else if (sub == trainc) {
            const ModelConfig config = tm.build(g.seed);
            const std::string instances = resolve(tr.instances, kTrainSet, "instances.jsonl", "--instances");
            const std::string truth = tr.truth.empty() ? truth_next_to(instances) : tr.truth;
            const Dataset data = load_labelled(instances, truth);
            std::optional<Dataset> extra;
            if (!tr.vocab_extra.empty()) extra = read_instances(tr.vocab_extra);
            const auto lexicons = maybe_lexicons(config.vector_inputs.any_cues(), tr.lexicons);
            const auto images = timg.load(config, data, g.seed);
            std::string embeddings = tr.embeddings;
            TrainedModel model =
                train_model(config, data, extra ? &*extra : nullptr, lexicons.get(), images.get(), embeddings);
            save_model(tr.out, model);
            std::clog << "saved model to " << tr.out << '\n';
            nlohmann::json hist = nlohmann::json::array();
            for (const EpochRecord& r : model.history)
                hist.push_back({{"epoch", r.epoch},
                                {"train_loss", r.train_loss},
                                {"val_loss", r.val_loss == r.val_loss ? nlohmann::json(r.val_loss) : nlohmann::json()}});
            std::cout << nlohmann::json{{"model", tr.out}, {"history", hist}}.dump() << '\n';
        } else if (sub == predictc) {
            const TrainedModel model = load_model(pr.model);
            const ModelConfig& config = model.config();
            const std::string instances = resolve(pr.instances, kTestSet, "instances.jsonl", "--instances");
            const Dataset posts = read_instances(instances);
            const auto lexicons = maybe_lexicons(config.vector_inputs.any_cues(), pr.lexicons);
            check_fingerprint(model, lexicons.get());
            const auto images = pimg.load(config, posts, g.seed);
            FeatureEncoder encoder(config, model.vocab, lexicons.get(), images.get());
            write_predictions_to(pr.out, predict(model, posts, encoder));
        } else if (sub == selftrain) {
            const TrainedModel model = load_model(st.model);
            ModelConfig config = model.config();
            const Dataset unlabelled =
                read_instances(resolve(st.unlabelled, kUnlabelledSet, "instances.jsonl", "--unlabelled"));
            const std::string labelled_path = resolve(st.labelled, kTrainSet, "instances.jsonl", "--labelled");
            const Dataset labelled =
                load_labelled(labelled_path, st.truth.empty() ? truth_next_to(labelled_path) : st.truth);
            const auto lexicons = maybe_lexicons(config.vector_inputs.any_cues(), st.lexicons);
            check_fingerprint(model, lexicons.get());

            Dataset all_posts = labelled;
            all_posts.posts.insert(all_posts.posts.end(), unlabelled.posts.begin(), unlabelled.posts.end());
            const auto images = simg.load(config, all_posts, g.seed);
            FeatureEncoder encoder(config, model.vocab, lexicons.get(), images.get());
            const Dataset noisy = pseudo_label(model, unlabelled, encoder);
            const Dataset merged = merge_noisy(labelled, noisy);
            const SelfTrainingReport rep = self_training_report(labelled, noisy, merged);

            nlohmann::json j{{"labelled", rep.labelled},
                             {"noisy", rep.noisy},
                             {"merged", rep.merged},
                             {"noisy_ratio", rep.noisy_ratio.display()},
                             {"merged_ratio", rep.merged_ratio.display()},
                             {"note", rep.note ? nlohmann::json(*rep.note) : nlohmann::json()}};
            if (!st.out_instances.empty()) {
                std::ofstream f(st.out_instances);
                if (!f) throw Error("cannot write " + st.out_instances);
                write_instances(f, merged);
            }
            if (!st.out_truth.empty()) {
                std::ofstream f(st.out_truth);
                if (!f) throw Error("cannot write " + st.out_truth);
                write_truth(f, merged);
            }
            if (!st.retrain.empty()) {
                if (st.epochs > 0) config.epochs = st.epochs;
                config.seed = g.seed;
                TrainedModel retrained =
                    train_model(config, merged, nullptr, lexicons.get(), images.get(), st.embeddings);
                save_model(st.retrain, retrained);
                j["retrained_model"] = st.retrain;
            }
            if (!st.report.empty()) {
                std::ofstream f(st.report);
                if (!f) throw Error("cannot write " + st.report);
                f << j.dump() << '\n';
            }
            std::cout << j.dump() << '\n';
        } else if (sub == evaluatec) {
            const auto preds = read_predictions(ev.pred);
            const auto truths = read_truth(ev.truth);
            const MetricsReport rep = evaluate(preds, truths, ev.threshold);
            const std::string json = rep.to_json().dump();
            std::cout << json << '\n';
            rep.print_table(std::cout);
            if (!ev.out.empty()) {
                std::ofstream f(ev.out);
                if (!f) throw Error("cannot write " + ev.out);
                f << json << '\n';
            }
        } else if (sub == baselinec) {
            if (bl.model.empty() == bl.out.empty())
                throw UsageError("baseline needs exactly one of --out (train) or --model (load)");
            BaselineModel model;
            std::unique_ptr<CueLexicons> lexicons;
            if (!bl.out.empty()) {
                BaselineConfig c;
                c.text = parse_document_source(bl.text);
                c.with_cues = bl.cues;
                c.normalization = parse_cue_normalization(bl.cue_normalization);
                c.boost.n_estimators = bl.estimators;
                c.boost.seed = g.seed;
                c.boost.parallel = !g.serial;
                lexicons = maybe_lexicons(c.with_cues, bl.lexicons);
                const std::string instances = resolve(bl.instances, kTrainSet, "instances.jsonl", "--instances");
                const Dataset data =
                    load_labelled(instances, bl.truth.empty() ? truth_next_to(instances) : bl.truth);
                model = baseline_fit(data, c, lexicons.get());
                save_baseline(model, bl.out);
                std::clog << "saved baseline (" << model.ensemble.stumps.size() << " stumps) to " << bl.out << '\n';
            } else {
                model = load_baseline(bl.model);
                lexicons = maybe_lexicons(model.config.with_cues, bl.lexicons);
            }
            if (!bl.pred_instances.empty())
                write_predictions_to(bl.pred_out, baseline_predict(model, read_instances(bl.pred_instances),
                                                                   lexicons.get()));
        } else if (sub == media) {
            const auto tags = load_object_tags(am.tags);
            const CategoryMap cmap = CategoryMap::load(am.categories);
            nlohmann::json j{{"min_confidence", am.min_confidence}, {"records", tags.size()}};
            if (!am.images.empty()) j["image_vectors"] = load_image_vectors(am.images).size();

            std::map<std::string, double> scores;
            if (!am.truth.empty()) {
                const auto truths = read_truth(am.truth);
                std::map<std::string, TruthClass> classes;
                for (const auto& [id, t] : truths) {
                    classes[id] = t.truth_class;
                    scores[id] = t.truth_mean;
                }
                const ProportionTable table = category_proportions(tags, classes, cmap, am.min_confidence);
                nlohmann::json rows = nlohmann::json::object();
                for (const ProportionRow& r : table.rows) {
                    nlohmann::json row{{"detections", r.detections}, {"empty", r.empty}};
                    for (std::size_t k = 0; k < table.categories.size(); ++k)
                        row["proportions"][table.categories[k]] = r.proportions[k];
                    rows[r.group] = row;
                }
                j["proportions"] = rows;
            }
            if (!am.scores.empty()) {
                scores.clear();
                for (const Prediction& p : read_predictions(am.scores)) scores[p.id] = p.clickbait_score;
            }
            if (!scores.empty()) {
                const TrendTable trend = proportion_trend(tags, scores, cmap, am.bins, am.min_confidence);
                j["trend_bins"] = trend.bins.size();
                j["empty_bin_centers"] = trend.empty_bin_centers;
                if (!am.out_csv.empty()) {
                    std::ofstream f(am.out_csv);
                    if (!f) throw Error("cannot write " + am.out_csv);
                    write_trend_csv(f, trend);
                }
            } else if (!am.out_csv.empty()) {
                throw UsageError("--out-csv needs --truth or --scores");
            }
            std::cout << j.dump() << '\n';
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace clickbait::cli
