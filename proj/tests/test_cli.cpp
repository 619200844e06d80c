#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "clickbait/cli.hpp"
#include "clickbait/error.hpp"
#include "fixtures.hpp"

using namespace clickbait;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Run run_cli(const std::filesystem::path& dir, const std::string& args) {
    const auto out = dir / "stdout.txt", err = dir / "stderr.txt";
    const std::string cmd = std::string("'") + CLICKBAIT_CLI_PATH + "' " + args + " >'" + out.string() + "' 2>'" +
                            err.string() + "'";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

const std::string kTiny =
    " --seq-length 8 --vocab-size 40 --embed-dim 4 --lstm-units 4 --dense-units 4 --fusion-units 4"
    " --batch-size 8 --val-fraction 0 --quiet";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config text parsing") {
    auto kv = cli::parse_config_text("# comment\n epochs = 3 \n\nlr=0.5\narch=\n");
    REQUIRE(kv.size() == 3);
    CHECK(kv[0] == std::pair<std::string, std::string>{"epochs", "3"});
    CHECK(kv[1].second == "0.5");
    CHECK(kv[2].second.empty());
    CHECK_THROWS(cli::parse_config_text("no equals sign\n"));
}

TEST_CASE("usage errors exit with status 2") {
    auto dir = fixtures::scratch_dir("cli-usage");
    fixtures::write_corpus(dir, fixtures::separable_corpus(12));
    const std::string data = " --instances '" + (dir / "instances.jsonl").string() + "'";
    CHECK(run_cli(dir, "train --epochs 0 --out x" + data).code == 2);
    CHECK(run_cli(dir, "train --no-such-flag --out x" + data).code == 2);
    CHECK(run_cli(dir, "frobnicate").code == 2);
    CHECK(run_cli(dir, "analyze-media --tags t --bins 1").code == 2);
    Run r = run_cli(dir, "train --epochs 0 --out x" + data);
    CHECK(r.err.find("at least 1") != std::string::npos);

    std::ofstream(dir / "bad.cfg") << "colour = blue\n";
    CHECK(run_cli(dir, "--config '" + (dir / "bad.cfg").string() + "' ingest" + data).code == 2);
}

TEST_CASE("runtime errors exit with status 1") {
    auto dir = fixtures::scratch_dir("cli-runtime");
    CHECK(run_cli(dir, "ingest --instances '" + (dir / "absent.jsonl").string() + "'").code == 1);
}

TEST_CASE("ingest reports counts") {
    auto dir = fixtures::scratch_dir("cli-ingest");
    fixtures::write_corpus(dir, fixtures::separable_corpus(12));
    Run r = run_cli(dir, "ingest --stats --instances '" + (dir / "instances.jsonl").string() + "' --truth '" +
                             (dir / "truth.jsonl").string() + "'");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out.substr(0, r.out.find('\n')));
    CHECK(j.at("posts") == 12);
    CHECK(j.at("clickbait") == 6);
}

TEST_CASE("evaluating the truth against itself") {
    auto dir = fixtures::scratch_dir("cli-eval");
    Dataset d = fixtures::separable_corpus(10);
    fixtures::write_corpus(dir, d);
    {
        std::ofstream pred(dir / "pred.jsonl");
        for (const auto& p : d.posts)
            pred << nlohmann::json{{"id", p.id}, {"clickbaitScore", d.truths->at(p.id).truth_mean}}.dump() << '\n';
    }
    Run r = run_cli(dir, "evaluate --pred '" + (dir / "pred.jsonl").string() + "' --truth '" +
                             (dir / "truth.jsonl").string() + "'");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out.substr(0, r.out.find('\n')));
    CHECK(j.at("mse") == 0.0);
    CHECK(j.at("f1") == 1.0);
}

TEST_CASE("config values apply unless given on the command line") {
    auto dir = fixtures::scratch_dir("cli-config");
    fixtures::write_corpus(dir, fixtures::separable_corpus(12));
    const std::string data = " --instances '" + (dir / "instances.jsonl").string() + "'";
    const std::string cfg = (dir / "run.cfg").string();
    std::ofstream(cfg) << "# tiny run\nepochs = 0\narch = cnn\nseed = 5\n";

    // The file's invalid epochs value is rejected ...
    CHECK(run_cli(dir, "--config '" + cfg + "' train --out '" + (dir / "m").string() + "'" + data + kTiny).code == 2);
    // ... unless the command line overrides it.
    Run r = run_cli(dir, "--config '" + cfg + "' train --epochs 1 --out '" + (dir / "m").string() + "'" + data +
                             kTiny + " --cnn-filters 4 --cnn-kernel 3");
    REQUIRE(r.code == 0);
    CHECK(r.err.find("# resolved settings (seed 5)") != std::string::npos);
    CHECK(r.err.find("arch=cnn") != std::string::npos);
    CHECK(r.err.find("epochs=1") != std::string::npos);

    // Written settings can be fed back in.
    const std::string written = (dir / "written.cfg").string();
    REQUIRE(run_cli(dir, "--write-config '" + written + "' --config '" + cfg + "' train --epochs 1 --out '" +
                             (dir / "m2").string() + "'" + data + kTiny + " --cnn-filters 4 --cnn-kernel 3")
                .code == 0);
    CHECK(slurp(written).find("arch=cnn") != std::string::npos);
    CHECK(run_cli(dir, "--config '" + written + "' train").code == 0);
}

}  // TEST_SUITE
