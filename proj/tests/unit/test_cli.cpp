#include "doctest.h"

#include "lyricsim/cli.hpp"
#include "lyricsim/error.hpp"
#include "lyricsim/study.hpp"
#include "support.hpp"

#include "json.hpp"

#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

using namespace lyricsim;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    Run r;
    r.code = run_command(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t line_count(const fs::path& p)
{
    const auto s = slurp(p);
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

/// Ingested fixture project with topics, PCA and vectors; built once.
const fs::path& project()
{
    static const fs::path dir = [] {
        const auto d = testing::scratch_dir("cli-project");
        const auto p = d.string();
        REQUIRE(run({"ingest", "--project", p, "--corpus", testing::fixture("corpus.jsonl").string(), "--lexicon",
                     testing::fixture("lexicon.dict").string()})
                    .code == 0);
        REQUIRE(run({"lda-train", "--project", p, "--topics", "5", "--iterations", "100", "--min-doc-freq", "2"})
                    .code == 0);
        REQUIRE(run({"pca-fit", "--project", p, "--pca-dims", "10"}).code == 0);
        REQUIRE(run({"vectors-load", "--project", p, "--semantic", testing::fixture("semantic.jsonl").string(),
                     "--audio", testing::fixture("audio.jsonl").string(), "--mood",
                     testing::fixture("mood.jsonl").string()})
                    .code == 0);
        return d;
    }();
    return dir;
}

} // namespace

TEST_CASE("every flag's help default matches the configuration default")
{
    // written out by hand rather than read back from ProjectConfig
    const std::map<std::string, std::string> expected = {
        {"project", "lyricsim-project"}, {"seed", "0"}, {"jobs", "1"}, {"topics", "50"}, {"alpha", "1"},
        {"beta", "0.01"}, {"iterations", "1000"}, {"min-doc-freq", "3"}, {"burn-in", "50"}, {"samples", "100"},
        {"pca-dims", "50"}, {"pca-tolerance", "1e-08"}, {"pca-max-iterations", "1000"}, {"pairs", "100000"},
        {"threshold", "0.99"}, {"cap", "50"}, {"references", "10"}, {"w-sim-top", "0"}, {"w-sim-sem", "0.65"},
        {"w-diff-mood", "0"}, {"w-sim-aud", "0.48"}, {"w-sim-pho", "0"}, {"w-diff-mus", "0.74"}, {"k", "10"}};
    const std::set<std::string> no_default = {"corpus", "lexicon", "features", "stopwords", "semantic", "audio", "mood"};

    const std::vector<std::vector<std::string>> leaves = {
        {"ingest"}, {"lexicon-check"}, {"lda-train"}, {"pca-fit"}, {"vectors-load"}, {"metrics", "pair"},
        {"pairs", "sample"}, {"pairs", "evaluate"}, {"pairs", "group"}, {"triples", "select"},
        {"correlate", "matrix"}, {"correlate", "rankings"}, {"recommend"}, {"report"}};
    const std::regex flag(R"(--([a-z][a-z-]*) (TEXT|UINT|FLOAT)( \[([^\]]*)\])?)");

    std::set<std::string> seen;
    for (auto args : leaves) {
        args.push_back("--help");
        const auto r = run(args);
        REQUIRE(r.code == 0);
        for (auto it = std::sregex_iterator(r.out.begin(), r.out.end(), flag); it != std::sregex_iterator(); ++it) {
            const std::string key = (*it)[1];
            seen.insert(key);
            if (expected.count(key)) {
                INFO(key);
                CHECK((*it)[4].str() == expected.at(key));
            } else if (no_default.count(key)) {
                INFO(key);
                CHECK_FALSE((*it)[3].matched);
            }
        }
    }
    for (const auto& [key, _] : expected) {
        INFO(key);
        CHECK(seen.count(key) == 1);
    }
    for (const auto& key : no_default) CHECK(seen.count(key) == 1);

    // the library's own rendering agrees too
    for (const auto& [key, value] : setting_defaults()) {
        if (expected.count(key)) {
            INFO(key);
            CHECK(value == expected.at(key));
        }
    }
}

TEST_CASE("exit codes")
{
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"pairs", "sample", "--n", "abc"}).code == 1);
    CHECK(run({"pairs", "sample", "--bogus", "1"}).code == 1);
    CHECK(run({"ingest", "--help"}).code == 0);

    const auto dir = testing::scratch_dir("cli-bad-vectors");
    {
        std::ofstream f(dir / "mood.jsonl");
        f << "{\"kind\":\"mood\",\"dim\":2}\n{\"id\":\"t01\",\"vec\":[1,2,3]}\n";
    }
    const auto p = project().string();
    const auto bad = run({"vectors-load", "--project", p, "--mood", (dir / "mood.jsonl").string()});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("DimensionMismatch") != std::string::npos);
    CHECK(run({"metrics", "pair", "--project", p, "--a", "t01:0", "--b", "nope:0"}).code == 2);
    CHECK(run({"pairs", "evaluate", "--project", (dir / "empty").string()}).code == 2);
}

TEST_CASE("pair sampling is deterministic under a seed")
{
    const auto p = project().string();
    const auto pairs = project() / "pairs.jsonl";
    REQUIRE(run({"pairs", "sample", "--project", p, "--n", "50", "--seed", "3"}).code == 0);
    const auto first = slurp(pairs);
    REQUIRE(run({"pairs", "sample", "--project", p, "--n", "50", "--seed", "3"}).code == 0);
    CHECK(slurp(pairs) == first);
    CHECK(line_count(pairs) == 50);
    REQUIRE(run({"pairs", "sample", "--project", p, "--n", "50", "--seed", "4"}).code == 0);
    CHECK(slurp(pairs) != first);
}

TEST_CASE("config file sits between defaults and flags")
{
    const auto dir = testing::scratch_dir("cli-config");
    {
        std::ofstream f(dir / "run.cfg");
        f << "# sampling\npairs = 30\nseed=4\nmin_doc_freq = 2\n";
    }
    const auto cfg = (dir / "run.cfg").string();
    const auto p = project().string();
    const auto pairs = project() / "pairs.jsonl";

    REQUIRE(run({"--config", cfg, "pairs", "sample", "--project", p}).code == 0);
    CHECK(line_count(pairs) == 30);
    const auto from_file = slurp(pairs);
    REQUIRE(run({"pairs", "sample", "--project", p, "--n", "30", "--seed", "4"}).code == 0);
    CHECK(slurp(pairs) == from_file);
    REQUIRE(run({"--config", cfg, "pairs", "sample", "--project", p, "--n", "20"}).code == 0);
    CHECK(line_count(pairs) == 20);

    ProjectConfig c;
    apply_config_file(cfg, c);
    CHECK(c.pairs == 30);
    CHECK(c.seed == 4);
    CHECK(c.min_doc_freq == 2);
    CHECK(c.topics == 50);

    {
        std::ofstream f(dir / "bad.cfg");
        f << "colour = blue\n";
    }
    CHECK_THROWS_AS(apply_config_file((dir / "bad.cfg").string(), c), Error);
    CHECK(run({"--config", (dir / "bad.cfg").string(), "report", "--project", p}).code == 1);
}

TEST_CASE("metrics pair agrees with the library")
{
    const auto p = project().string();
    REQUIRE(run({"metrics", "pair", "--project", p, "--a", "t02:1", "--b", "t01:0"}).code == 0);
    const auto doc = json::parse(slurp(project() / "metrics_pair.json"));
    CHECK(doc["a"] == "t01:0");
    CHECK(doc["b"] == "t02:1");

    const auto corpus = CorpusStore::load(project() / "corpus");
    const auto topics = TopicModel::load(project() / "topics.json");
    const auto pca = PcaModel::load(project() / "pca.json");
    const auto table = PhonemeFeatureTable::load(testing::data_file("phoneme_features.txt"));
    const auto sem = load_vectors(project() / "vectors" / "semantic.jsonl", EmbeddingKind::Semantic);
    const auto aud = load_vectors(project() / "vectors" / "audio.jsonl", EmbeddingKind::Audio);
    const auto mood = load_vectors(project() / "vectors" / "mood.jsonl", EmbeddingKind::Mood);
    MetricProviders prov;
    prov.corpus = &corpus;
    prov.topics = &topics;
    prov.infer = {50, 100, 0};
    prov.pca = &pca;
    prov.features = &table;
    prov.semantic = &sem;
    prov.audio = &aud;
    prov.mood = &mood;
    MetricContext ctx(prov);
    const auto mv = ctx.evaluate("t01:0", "t02:1");
    for (auto m : kAllMetrics) {
        INFO(metric_name(m));
        REQUIRE(mv[m].has_value());
        CHECK(doc[std::string(metric_name(m))].get<double>() == *mv[m]);
    }
    CHECK(std::abs(doc["diff_mood"].get<double>() - 4.2048) < 5e-5);
}

TEST_CASE("rank correlation on the ordered fixture")
{
    const auto p = project().string();
    const auto r = run({"correlate", "rankings", "--project", p, "--in", testing::fixture("ordered_ranks.csv").string(),
                        "--triples", testing::fixture("ordered_triples.json").string()});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(slurp(project() / "rank_correlation.json"));
    std::map<std::string, double> rs;
    for (const auto& m : doc["metrics"]) rs[m["metric"]] = m["r"].get<double>();
    CHECK(rs.size() == 2);
    CHECK(rs["sim_sem"] == doctest::Approx(-1.0));
    CHECK(rs["diff_mus"] == doctest::Approx(1.0));
    CHECK(doc["rank_summary"]["M"]["mean"] == 2.0);
}
