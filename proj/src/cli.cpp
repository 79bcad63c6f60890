#include "lyricsim/cli.hpp"

#include "lyricsim/corpus.hpp"
#include "lyricsim/embeddings.hpp"
#include "lyricsim/error.hpp"
#include "lyricsim/json_io.hpp"
#include "lyricsim/phonetics.hpp"
#include "lyricsim/random.hpp"
#include "lyricsim/recommend.hpp"
#include "lyricsim/study.hpp"
#include "lyricsim/topics.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <variant>

#ifndef LYRICSIM_DATA_DIR
#define LYRICSIM_DATA_DIR "data"
#endif

namespace lyricsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";
constexpr int kManifestVersion = 1;

// --- settings ---------------------------------------------------------------

using Target = std::variant<std::string*, double*, std::uint64_t*>;

struct Setting {
    std::string key;
    Target target;
    std::string help;
};

std::vector<Setting> settings_of(ProjectConfig& c)
{
    return {
        {"project", &c.project, "pipeline directory holding every artifact"},
        {"corpus", &c.corpus, "track records, one JSON object per line"},
        {"lexicon", &c.lexicon, "CMU-style pronunciation dictionary"},
        {"features", &c.features, "phoneme feature table (empty: bundled table)"},
        {"stopwords", &c.stopwords, "stopword list for the topic vocabulary (empty: bundled list)"},
        {"semantic", &c.semantic, "semantic vector file (per lyric set)"},
        {"audio", &c.audio, "audio vector file (per track)"},
        {"mood", &c.mood, "mood vector file (per track); overrides corpus valence/arousal"},
        {"seed", &c.seed, "random seed"},
        {"jobs", &c.jobs, "worker threads"},
        {"topics", &c.topics, "number of LDA topics"},
        {"alpha", &c.alpha, "document-topic prior"},
        {"beta", &c.beta, "topic-word prior"},
        {"iterations", &c.iterations, "Gibbs sweeps"},
        {"min-doc-freq", &c.min_doc_freq, "minimum document frequency for the vocabulary"},
        {"burn-in", &c.burn_in, "fold-in sweeps discarded before averaging"},
        {"samples", &c.samples, "fold-in sweeps averaged"},
        {"pca-dims", &c.pca_dims, "phonetic vector dimensions"},
        {"pca-tolerance", &c.pca_tolerance, "relative eigen-residual tolerance"},
        {"pca-max-iterations", &c.pca_max_iterations, "subspace iteration cap"},
        {"pairs", &c.pairs, "number of pairs to sample"},
        {"threshold", &c.threshold, "closeness threshold on the non-target metrics"},
        {"cap", &c.cap, "candidates kept per group"},
        {"references", &c.references, "reference sets drawn when no --ref is given"},
        {"w-sim-top", &c.w_sim_top, "recommendation weight"},
        {"w-sim-sem", &c.w_sim_sem, "recommendation weight"},
        {"w-diff-mood", &c.w_diff_mood, "recommendation weight"},
        {"w-sim-aud", &c.w_sim_aud, "recommendation weight"},
        {"w-sim-pho", &c.w_sim_pho, "recommendation weight"},
        {"w-diff-mus", &c.w_diff_mus, "recommendation weight"},
        {"k", &c.k, "recommendations returned"},
    };
}

std::string render(const Target& t)
{
    return std::visit(
        [](auto* p) -> std::string {
            std::ostringstream os;
            os << *p;
            return os.str();
        },
        t);
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

void assign(const Target& t, const std::string& value, const std::string& where)
{
    auto bad = [&] { return Error(ErrorCode::Usage, where + ": cannot parse '" + value + "'"); };
    std::visit(
        [&](auto* p) {
            using T = std::remove_pointer_t<decltype(p)>;
            if constexpr (std::is_same_v<T, std::string>) {
                *p = value;
            } else {
                std::size_t used = 0;
                try {
                    if constexpr (std::is_same_v<T, double>) {
                        *p = std::stod(value, &used);
                    } else {
                        if (!value.empty() && value[0] == '-') throw bad();
                        *p = static_cast<T>(std::stoull(value, &used));
                    }
                } catch (const std::logic_error&) {
                    throw bad();
                }
                if (used != value.size()) throw bad();
            }
        },
        t);
}

std::string option_name(const std::string& key)
{
    if (key == "pairs") return "-n,--n,--pairs";
    return "--" + key;
}

void bind(CLI::App* app, std::vector<Setting>& settings, std::initializer_list<const char*> keys)
{
    for (const char* key : keys) {
        auto it = std::find_if(settings.begin(), settings.end(), [&](const Setting& s) { return s.key == key; });
        std::visit([&](auto* p) { app->add_option(option_name(it->key), *p, it->help)->capture_default_str(); },
                   it->target);
    }
}

// --- project layout ---------------------------------------------------------

struct Layout {
    fs::path root;

    fs::path corpus() const { return root / "corpus"; }
    fs::path topics() const { return root / "topics.json"; }
    fs::path pca() const { return root / "pca.json"; }
    fs::path vectors(EmbeddingKind k) const { return root / "vectors" / (std::string(kind_name(k)) + ".jsonl"); }
    fs::path pairs() const { return root / "pairs.jsonl"; }
    fs::path evaluated() const { return root / "evaluated.jsonl"; }
    fs::path groups() const { return root / "groups.json"; }
    fs::path triples() const { return root / "triples.json"; }
    fs::path correlation() const { return root / "correlation.json"; }
    fs::path rank_correlation() const { return root / "rank_correlation.json"; }
    fs::path recommendations() const { return root / "recommendations.json"; }
    fs::path metrics_pair() const { return root / "metrics_pair.json"; }
    fs::path lexicon_check() const { return root / "lexicon_check.json"; }
    fs::path report() const { return root / "report.json"; }
    fs::path manifest() const { return root / "manifest.json"; }
};

std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string file_hash(const fs::path& p)
{
    return hex64(fnv1a(read_text_file(p)));
}

std::string dir_hash(const fs::path& dir)
{
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::string acc;
    for (const auto& f : files) acc += f.filename().string() + ":" + file_hash(f) + ";";
    return hex64(fnv1a(acc));
}

void record_stage(const Layout& layout, const std::string& stage, json inputs, json params,
                  const std::vector<fs::path>& outputs)
{
    json m;
    if (fs::exists(layout.manifest())) m = read_json_file(layout.manifest());
    m["format_version"] = kManifestVersion;
    m["tool_version"] = kToolVersion;
    json out = json::object();
    for (const auto& p : outputs) {
        out[fs::relative(p, layout.root).generic_string()] = fs::is_directory(p) ? dir_hash(p) : file_hash(p);
    }
    m["stages"][stage] = {{"inputs", std::move(inputs)}, {"params", std::move(params)}, {"outputs", std::move(out)}};
    write_text_file(layout.manifest(), m.dump(2) + "\n");
}

fs::path features_path(const ProjectConfig& c)
{
    return c.features.empty() ? fs::path(LYRICSIM_DATA_DIR) / "phoneme_features.txt" : fs::path(c.features);
}

fs::path stopwords_path(const ProjectConfig& c)
{
    return c.stopwords.empty() ? fs::path(LYRICSIM_DATA_DIR) / "stopwords.txt" : fs::path(c.stopwords);
}

void require_flag(const std::string& value, const std::string& flag)
{
    if (value.empty()) throw Error(ErrorCode::Usage, "--" + flag + " is required");
}

// --- serialization ----------------------------------------------------------

json optional_json(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

json metrics_json(const MetricVector& mv)
{
    json j = json::object();
    for (auto m : kAllMetrics) j[std::string(metric_name(m))] = optional_json(mv[m]);
    return j;
}

MetricVector metrics_from_json(const json& j)
{
    MetricVector mv;
    for (auto m : kAllMetrics) {
        const auto& v = j.at(std::string(metric_name(m)));
        if (!v.is_null()) mv[m] = v.get<double>();
    }
    return mv;
}

json pair_json(const PairRecord& r)
{
    json j = metrics_json(r.metrics);
    j["a"] = r.key.a;
    j["b"] = r.key.b;
    json avail = json::array();
    for (auto m : kAllMetrics) avail.push_back(r.metrics[m].has_value());
    j["available"] = std::move(avail);
    return j;
}

std::vector<PairRecord> read_evaluated(const fs::path& path)
{
    if (!fs::exists(path)) throw Error(ErrorCode::Io, path.string() + " missing; run 'pairs evaluate' first");
    std::vector<PairRecord> out;
    for_each_json_line(path, [&](const json& j) {
        PairRecord r;
        r.key = {j.at("a").get<std::string>(), j.at("b").get<std::string>()};
        r.metrics = metrics_from_json(j);
        out.push_back(std::move(r));
    });
    return out;
}

std::vector<PairKey> read_pairs(const fs::path& path)
{
    if (!fs::exists(path)) throw Error(ErrorCode::Io, path.string() + " missing; run 'pairs sample' first");
    std::vector<PairKey> out;
    for_each_json_line(path, [&](const json& j) {
        out.push_back(make_pair_key(j.at("a").get<std::string>(), j.at("b").get<std::string>()));
    });
    return out;
}

void write_lines(const fs::path& path, const std::vector<json>& rows)
{
    std::string text;
    for (const auto& r : rows) text += r.dump() + "\n";
    write_text_file(path, text);
}

std::string polarity_name(Polarity p)
{
    return p == Polarity::Similarity ? "similarity" : "difference";
}

json range_json(const MetricSpec& s)
{
    if (!s.range) return nullptr;
    return json::array({s.range->lo, s.range->hi});
}

json triple_json(const std::string& question_id, const Triple& t, const MetricSpecs& specs)
{
    json j;
    j["question_id"] = question_id;
    j["reference"] = t.reference;
    j["target"] = std::string(metric_name(t.target));
    j["threshold"] = t.threshold;
    j["min_closeness"] = t.min_closeness;
    json comps = json::object();
    json to_ref = json::object();
    for (auto g : {GroupLabel::H, GroupLabel::M, GroupLabel::L}) {
        const auto& c = t.comparison(g);
        const std::string label(1, label_char(g));
        comps[label] = {{"set_id", c.set_id}, {"metrics", metrics_json(c.metrics)}};
        // how close each comparison sits to an identical copy of the reference
        json r = json::object();
        for (auto m : kAllMetrics) {
            if (m == t.target || !c.metrics[m]) continue;
            const auto& spec = specs[index_of(m)];
            if (!spec.range) continue;
            const double ideal = spec.polarity == Polarity::Similarity ? spec.range->hi : spec.range->lo;
            r[std::string(metric_name(m))] = closeness(*c.metrics[m], ideal, spec);
        }
        to_ref[label] = std::move(r);
    }
    j["comparisons"] = std::move(comps);
    j["reference_closeness"] = std::move(to_ref);
    json certs = json::array();
    for (const auto& c : t.certificates) {
        certs.push_back({{"metric", std::string(metric_name(c.metric))}, {"hm", c.hm}, {"hl", c.hl}, {"ml", c.ml}});
    }
    j["certificates"] = std::move(certs);
    return j;
}

Question question_from_json(const json& j)
{
    Question q;
    q.question_id = j.at("question_id").get<std::string>();
    auto& t = q.triple;
    t.reference = j.at("reference").get<std::string>();
    t.target = parse_metric(j.at("target").get<std::string>());
    t.threshold = j.value("threshold", 0.99);
    t.min_closeness = j.value("min_closeness", 1.0);
    for (auto g : {GroupLabel::H, GroupLabel::M, GroupLabel::L}) {
        const auto& c = j.at("comparisons").at(std::string(1, label_char(g)));
        t.comparisons[static_cast<std::size_t>(g)] = {c.at("set_id").get<std::string>(),
                                                       metrics_from_json(c.at("metrics"))};
    }
    if (j.contains("certificates")) {
        for (const auto& c : j.at("certificates")) {
            t.certificates.push_back({parse_metric(c.at("metric").get<std::string>()), c.at("hm").get<double>(),
                                      c.at("hl").get<double>(), c.at("ml").get<double>()});
        }
    }
    return q;
}

// --- providers --------------------------------------------------------------

struct Loaded {
    CorpusStore corpus;
    std::optional<TopicModel> topics;
    std::optional<PcaModel> pca;
    std::optional<PhonemeFeatureTable> features;
    std::optional<EmbeddingStore> semantic;
    std::optional<EmbeddingStore> audio;
    std::optional<EmbeddingStore> mood;

    MetricProviders providers(const ProjectConfig& c) const
    {
        MetricProviders p;
        p.corpus = &corpus;
        p.topics = topics ? &*topics : nullptr;
        p.infer = {c.burn_in, c.samples, c.seed};
        p.pca = pca ? &*pca : nullptr;
        p.features = features ? &*features : nullptr;
        p.semantic = semantic ? &*semantic : nullptr;
        p.audio = audio ? &*audio : nullptr;
        p.mood = mood ? &*mood : nullptr;
        return p;
    }
};

CorpusStore load_corpus(const Layout& layout)
{
    if (!fs::exists(layout.corpus() / "manifest.json")) {
        throw Error(ErrorCode::Io, "no corpus store under " + layout.root.string() + "; run 'ingest' first");
    }
    return CorpusStore::load(layout.corpus());
}

Loaded load_all(const Layout& layout, const ProjectConfig& c, std::ostream& err)
{
    Loaded l;
    l.corpus = load_corpus(layout);
    if (fs::exists(layout.topics())) {
        l.topics = TopicModel::load(layout.topics());
    } else {
        err << "note: no topic model; sim_top unavailable\n";
    }
    if (fs::exists(layout.pca())) {
        l.pca = PcaModel::load(layout.pca());
        l.features = PhonemeFeatureTable::load(features_path(c));
    } else {
        err << "note: no PCA model; sim_pho unavailable\n";
    }
    for (auto kind : {EmbeddingKind::Semantic, EmbeddingKind::Audio}) {
        const auto path = layout.vectors(kind);
        auto& slot = kind == EmbeddingKind::Semantic ? l.semantic : l.audio;
        if (fs::exists(path)) {
            slot = load_vectors(path, kind);
        } else {
            err << "note: no " << kind_name(kind) << " vectors loaded\n";
        }
    }
    if (fs::exists(layout.vectors(EmbeddingKind::Mood))) {
        l.mood = load_vectors(layout.vectors(EmbeddingKind::Mood), EmbeddingKind::Mood);
    } else {
        l.mood = mood_store_from_corpus(l.corpus);
    }
    return l;
}

std::string fmt(const std::optional<double>& v, int precision = 6)
{
    if (!v) return "n/a";
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << *v;
    return os.str();
}

// --- commands ---------------------------------------------------------------

struct Args {
    std::string a;
    std::string b;
    std::vector<std::string> refs;
    std::vector<std::string> targets;
    std::string query_set;
    std::string query_text;
    std::string query_vectors;
    std::string rankings;
    std::string triples;
};

int cmd_ingest(const ProjectConfig& c, std::ostream& out, std::ostream& err)
{
    require_flag(c.corpus, "corpus");
    require_flag(c.lexicon, "lexicon");
    const Layout layout{c.project};
    const auto lex = load_lexicon(c.lexicon);
    for (std::size_t i = 0; i < lex.errors.size() && i < 5; ++i) {
        err << "warning: lexicon line " << lex.errors[i].line << ": " << lex.errors[i].message << "\n";
    }
    if (lex.errors.size() > 5) err << "warning: " << lex.errors.size() - 5 << " more lexicon lines skipped\n";

    const auto records = read_track_records(fs::path(c.corpus));
    const auto result = ingest_corpus(records, lex.lexicon);
    fs::create_directories(layout.root);
    result.store.save(layout.corpus());
    if (result.empty_sections > 0) err << "warning: " << result.empty_sections << " empty sections skipped\n";

    const auto& s = result.store.stats();
    record_stage(layout, "ingest", {{"corpus", file_hash(c.corpus)}, {"lexicon", file_hash(c.lexicon)}},
                 {{"lexicon_errors", lex.errors.size()}, {"empty_sections", result.empty_sections}},
                 {layout.corpus()});
    out << "ingested " << s.track_count << " tracks, " << s.lyric_set_count << " lyric sets (" << fmt(s.mean_sections_per_track, 2)
        << " per track), phoneme coverage " << fmt(s.mean_phoneme_coverage, 3) << "\n";
    out << "feasible cross-track pairs: " << count_feasible_pairs(result.store) << "\n";
    return 0;
}

int cmd_lexicon_check(const ProjectConfig& c, std::ostream& out, std::ostream& err)
{
    require_flag(c.lexicon, "lexicon");
    const Layout layout{c.project};
    const auto lex = load_lexicon(c.lexicon);
    json errors = json::array();
    for (const auto& e : lex.errors) errors.push_back({{"line", e.line}, {"message", e.message}});
    json j = {{"entries", lex.lexicon.size()}, {"errors", errors}, {"lexicon", file_hash(c.lexicon)}};
    write_text_file(layout.lexicon_check(), j.dump(2) + "\n");
    out << lex.lexicon.size() << " entries, " << lex.errors.size() << " malformed lines\n";
    if (lex.errors.empty()) return 0;
    for (std::size_t i = 0; i < lex.errors.size() && i < 10; ++i) {
        err << "line " << lex.errors[i].line << ": " << lex.errors[i].message << "\n";
    }
    err << "error: MalformedLexiconLine: " << lex.errors.size() << " lines rejected\n";
    return 2;
}

int cmd_lda_train(const ProjectConfig& c, std::ostream& out, std::ostream&)
{
    const Layout layout{c.project};
    const auto corpus = load_corpus(layout);
    std::vector<Document> docs;
    for (const auto& [_, set] : corpus.lyric_sets()) docs.push_back(set.tokens);
    LdaOptions opts;
    opts.topics = c.topics;
    opts.alpha = c.alpha;
    opts.beta = c.beta;
    opts.iterations = c.iterations;
    opts.seed = c.seed;
    opts.min_doc_freq = c.min_doc_freq;
    opts.stopwords = load_stopwords(stopwords_path(c));
    const auto model = train_lda(docs, opts);
    model.save(layout.topics());
    record_stage(layout, "lda-train", {{"corpus", dir_hash(layout.corpus())}, {"stopwords", file_hash(stopwords_path(c))}},
                 {{"topics", c.topics},
                  {"alpha", c.alpha},
                  {"beta", c.beta},
                  {"iterations", c.iterations},
                  {"min_doc_freq", c.min_doc_freq},
                  {"seed", c.seed}},
                 {layout.topics()});
    out << "trained " << model.topics << " topics over " << docs.size() << " lyric sets, vocabulary " << model.vocab_size()
        << "\n";
    return 0;
}

int cmd_pca_fit(const ProjectConfig& c, std::ostream& out, std::ostream&)
{
    const Layout layout{c.project};
    const auto corpus = load_corpus(layout);
    const auto table = PhonemeFeatureTable::load(features_path(c));
    std::vector<FeaturePairHistogram> hists;
    for (const auto& [_, set] : corpus.lyric_sets()) {
        auto h = feature_pairs(set.phonemes, table);
        if (h.total_count > 0) hists.push_back(std::move(h));
    }
    PcaOptions opts;
    opts.dims = c.pca_dims;
    opts.seed = c.seed;
    opts.tolerance = c.pca_tolerance;
    opts.max_iterations = c.pca_max_iterations;
    const auto model = fit_pca(hists, opts);
    model.save(layout.pca());
    record_stage(layout, "pca-fit", {{"corpus", dir_hash(layout.corpus())}, {"features", file_hash(features_path(c))}},
                 {{"dims", c.pca_dims},
                  {"tolerance", c.pca_tolerance},
                  {"max_iterations", c.pca_max_iterations},
                  {"seed", c.seed}},
                 {layout.pca()});
    const double total = std::accumulate(model.explained_variance.begin(), model.explained_variance.end(), 0.0);
    out << "fit " << model.dims() << " components over " << hists.size() << " histograms, " << model.pairs.size()
        << " feature pairs; leading variance " << fmt(model.explained_variance.front(), 6) << " of " << fmt(total, 6)
        << " retained\n";
    return 0;
}

int cmd_vectors_load(const ProjectConfig& c, std::ostream& out, std::ostream& err)
{
    const Layout layout{c.project};
    const auto corpus = load_corpus(layout);
    json inputs = json::object();
    std::vector<fs::path> outputs;

    auto coverage = [&](const EmbeddingStore& store, bool per_set) {
        std::size_t missing = 0;
        std::size_t unknown = 0;
        if (per_set) {
            for (const auto& [id, _] : corpus.lyric_sets()) missing += store.find(id) == nullptr;
            for (const auto& [id, _] : store.vectors()) unknown += corpus.find_set(id) == nullptr;
        } else {
            for (const auto& [id, _] : corpus.tracks()) missing += store.find(id) == nullptr;
            for (const auto& [id, _] : store.vectors()) unknown += corpus.find_track(id) == nullptr;
        }
        if (missing > 0) err << "warning: " << missing << " corpus ids have no " << kind_name(store.kind()) << " vector\n";
        if (unknown > 0) err << "warning: " << unknown << " " << kind_name(store.kind()) << " ids are not in the corpus\n";
    };

    for (auto kind : {EmbeddingKind::Semantic, EmbeddingKind::Audio}) {
        const auto& path = kind == EmbeddingKind::Semantic ? c.semantic : c.audio;
        if (path.empty()) continue;
        const auto store = load_vectors(fs::path(path), kind);
        coverage(store, kind == EmbeddingKind::Semantic);
        write_vectors(layout.vectors(kind), store);
        inputs[std::string(kind_name(kind))] = file_hash(path);
        outputs.push_back(layout.vectors(kind));
        out << kind_name(kind) << ": " << store.size() << " vectors of dim " << store.dim() << "\n";
    }

    auto mood = mood_store_from_corpus(corpus);
    if (!c.mood.empty()) {
        const auto file = load_vectors(fs::path(c.mood), EmbeddingKind::Mood);
        auto merged = merge_mood(mood, file);
        if (!merged.conflicts.empty()) {
            err << "warning: mood file overrides corpus metadata for " << merged.conflicts.size() << " tracks\n";
        }
        mood = std::move(merged.store);
        inputs["mood"] = file_hash(c.mood);
    }
    coverage(mood, false);
    write_vectors(layout.vectors(EmbeddingKind::Mood), mood);
    outputs.push_back(layout.vectors(EmbeddingKind::Mood));
    out << "mood: " << mood.size() << " vectors\n";

    record_stage(layout, "vectors-load", inputs, json::object(), outputs);
    return 0;
}

int cmd_metrics_pair(const ProjectConfig& c, const Args& args, std::ostream& out, std::ostream& err)
{
    require_flag(args.a, "a");
    require_flag(args.b, "b");
    const Layout layout{c.project};
    const auto loaded = load_all(layout, c, err);
    MetricContext ctx(loaded.providers(c));
    const auto key = make_pair_key(args.a, args.b);
    PairRecord rec{key, ctx.evaluate(key.a, key.b)};
    write_text_file(layout.metrics_pair(), pair_json(rec).dump(2) + "\n");
    out << key.a << " vs " << key.b << "\n";
    for (auto m : kAllMetrics) out << "  " << std::left << std::setw(10) << metric_name(m) << fmt(rec.metrics[m]) << "\n";
    return 0;
}

int cmd_pairs_sample(const ProjectConfig& c, std::ostream& out, std::ostream&)
{
    const Layout layout{c.project};
    const auto corpus = load_corpus(layout);
    const auto pairs = sample_pairs(corpus, c.pairs, c.seed);
    std::vector<json> rows;
    rows.reserve(pairs.size());
    for (const auto& p : pairs) rows.push_back({{"a", p.a}, {"b", p.b}});
    write_lines(layout.pairs(), rows);
    record_stage(layout, "pairs-sample", {{"corpus", dir_hash(layout.corpus())}}, {{"n", c.pairs}, {"seed", c.seed}},
                 {layout.pairs()});
    out << "sampled " << pairs.size() << " of " << count_feasible_pairs(corpus) << " feasible pairs\n";
    return 0;
}

int cmd_pairs_evaluate(const ProjectConfig& c, std::ostream& out, std::ostream& err)
{
    const Layout layout{c.project};
    const auto pairs = read_pairs(layout.pairs());
    const auto loaded = load_all(layout, c, err);
    MetricContext ctx(loaded.providers(c));
    const auto eval = evaluate_pairs(pairs, ctx, c.jobs);
    std::vector<json> rows;
    rows.reserve(eval.records.size());
    for (const auto& r : eval.records) rows.push_back(pair_json(r));
    write_lines(layout.evaluated(), rows);

    json inputs = {{"pairs", file_hash(layout.pairs())}};
    for (const auto& p : {layout.topics(), layout.pca()}) {
        if (fs::exists(p)) inputs[p.filename().string()] = file_hash(p);
    }
    if (fs::exists(layout.root / "vectors")) inputs["vectors"] = dir_hash(layout.root / "vectors");
    record_stage(layout, "pairs-evaluate", inputs, {{"burn_in", c.burn_in}, {"samples", c.samples}, {"seed", c.seed}},
                 {layout.evaluated()});

    out << "evaluated " << eval.records.size() << " pairs\n";
    for (auto m : kAllMetrics) {
        const auto miss = eval.unavailable[index_of(m)];
        if (miss > 0) out << "  " << metric_name(m) << " unavailable for " << miss << " pairs\n";
    }
    return 0;
}

int cmd_pairs_group(const ProjectConfig& c, std::ostream& out, std::ostream& err)
{
    const Layout layout{c.project};
    const auto records = read_evaluated(layout.evaluated());
    const auto specs = resolve_ranges(default_specs(), records);
    json metrics = json::object();
    for (auto m : kAllMetrics) {
        const auto& spec = specs[index_of(m)];
        std::vector<double> values;
        for (const auto& r : records) {
            if (r.metrics[m]) values.push_back(*r.metrics[m]);
        }
        json j;
        j["polarity"] = polarity_name(spec.polarity);
        j["range"] = range_json(spec);
        j["range_kind"] = spec.empirical ? "empirical" : "analytic";
        j["n"] = values.size();
        try {
            const auto g = group_by_metric(values, spec.polarity);
            j["mean"] = g.bounds.mean;
            j["sd"] = g.bounds.sd;
            j["lower"] = g.bounds.lower;
            j["upper"] = g.bounds.upper;
            std::map<char, std::size_t> counts{{'H', 0}, {'M', 0}, {'L', 0}};
            std::string labels;
            std::size_t next = 0;
            for (const auto& r : records) {
                if (!r.metrics[m]) {
                    labels += '-';
                    continue;
                }
                const char ch = label_char(g.labels[next++]);
                ++counts[ch];
                labels += ch;
            }
            j["counts"] = {{"H", counts['H']}, {"M", counts['M']}, {"L", counts['L']}};
            j["labels"] = labels;
            out << std::left << std::setw(10) << metric_name(m) << " mean " << fmt(g.bounds.mean) << " sd "
                << fmt(g.bounds.sd) << "  H/M/L " << counts['H'] << "/" << counts['M'] << "/" << counts['L'] << "\n";
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateDistribution && e.code() != ErrorCode::InsufficientSamples) throw;
            j["error"] = e.what();
            err << "note: " << metric_name(m) << " not grouped: " << e.what() << "\n";
        }
        metrics[std::string(metric_name(m))] = std::move(j);
    }
    json doc = {{"pair_count", records.size()}, {"metrics", metrics}};
    write_text_file(layout.groups(), doc.dump(2) + "\n");
    record_stage(layout, "pairs-group", {{"evaluated", file_hash(layout.evaluated())}}, json::object(), {layout.groups()});
    return 0;
}

struct GroupsFile {
    MetricSpecs specs = default_specs();
    std::array<std::optional<GroupBoundaries>, kMetricCount> bounds;
};

GroupsFile read_groups(const Layout& layout)
{
    if (!fs::exists(layout.groups())) throw Error(ErrorCode::Io, "groups.json missing; run 'pairs group' first");
    const auto doc = read_json_file(layout.groups());
    GroupsFile g;
    for (auto m : kAllMetrics) {
        const auto& j = doc.at("metrics").at(std::string(metric_name(m)));
        auto& spec = g.specs[index_of(m)];
        spec.range.reset();
        if (!j.at("range").is_null()) spec.range = MetricRange{j["range"][0].get<double>(), j["range"][1].get<double>()};
        if (j.contains("mean")) {
            g.bounds[index_of(m)] = GroupBoundaries{j.at("mean").get<double>(), j.at("sd").get<double>(),
                                                    j.at("lower").get<double>(), j.at("upper").get<double>()};
        }
    }
    return g;
}

int cmd_triples_select(const ProjectConfig& c, const Args& args, std::ostream& out, std::ostream& err)
{
    const Layout layout{c.project};
    const auto groups = read_groups(layout);
    const auto loaded = load_all(layout, c, err);
    MetricContext ctx(loaded.providers(c));
    const auto& corpus = loaded.corpus;

    std::vector<std::string> refs = args.refs;
    if (refs.empty()) {
        auto ids = corpus.set_ids();
        Rng rng(derive_seed(c.seed, "triples"));
        const std::size_t take = std::min(c.references, ids.size());
        for (std::size_t i = 0; i < take; ++i) {
            const auto j = i + static_cast<std::size_t>(rng.uniform_index(ids.size() - i));
            std::swap(ids[i], ids[j]);
        }
        refs.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(take));
    }
    std::vector<Metric> targets;
    for (const auto& t : args.targets) targets.push_back(parse_metric(t));
    if (targets.empty()) targets.assign(kAllMetrics.begin(), kAllMetrics.end());

    TripleOptions opts{c.threshold, c.cap};
    json questions = json::array();
    std::size_t attempted = 0;
    ctx.prepare(corpus.set_ids(), c.jobs);
    for (const auto& ref : refs) {
        const auto& ref_set = corpus.set(ref);
        std::vector<PairRecord> pool;
        for (const auto& [id, set] : corpus.lyric_sets()) {
            if (set.track_id == ref_set.track_id) continue;
            const auto key = make_pair_key(ref, id);
            pool.push_back({key, ctx.evaluate(key.a, key.b)});
        }
        for (auto target : targets) {
            const auto& bounds = groups.bounds[index_of(target)];
            if (!bounds) {
                err << "note: " << metric_name(target) << " has no group boundaries; skipped\n";
                continue;
            }
            ++attempted;
            std::vector<GroupLabel> labels;
            labels.reserve(pool.size());
            for (const auto& r : pool) {
                const auto& v = r.metrics[target];
                labels.push_back(v ? classify(*v, *bounds, polarity_of(target)) : GroupLabel::M);
            }
            const auto triple = select_triples(ref, pool, labels, target, groups.specs, opts);
            if (!triple) continue;
            std::ostringstream qid;
            qid << "q" << std::setw(4) << std::setfill('0') << questions.size() + 1;
            questions.push_back(triple_json(qid.str(), *triple, groups.specs));
        }
    }
    json doc = {{"threshold", c.threshold},
                {"cap", c.cap},
                {"references", refs},
                {"attempted", attempted},
                {"selected", questions.size()},
                {"questions", questions}};
    write_text_file(layout.triples(), doc.dump(2) + "\n");
    record_stage(layout, "triples-select", {{"groups", file_hash(layout.groups())}},
                 {{"threshold", c.threshold}, {"cap", c.cap}, {"seed", c.seed}, {"references", refs}}, {layout.triples()});
    out << "selected " << questions.size() << " triples from " << attempted << " (reference, target) attempts\n";
    return 0;
}

json matrix_json(const CorrelationMatrix& cm)
{
    json names = json::array();
    json r = json::array();
    json n = json::array();
    for (std::size_t i = 0; i < kMetricCount; ++i) {
        names.push_back(std::string(metric_name(kAllMetrics[i])));
        json rr = json::array();
        json nn = json::array();
        for (std::size_t j = 0; j < kMetricCount; ++j) {
            rr.push_back(optional_json(cm.r[i][j]));
            nn.push_back(cm.n[i][j]);
        }
        r.push_back(std::move(rr));
        n.push_back(std::move(nn));
    }
    return {{"metrics", names}, {"r", r}, {"n", n}};
}

int cmd_correlate_matrix(const ProjectConfig& c, std::ostream& out, std::ostream&)
{
    const Layout layout{c.project};
    const auto records = read_evaluated(layout.evaluated());
    const auto cm = metric_correlation_matrix(records);
    write_text_file(layout.correlation(), matrix_json(cm).dump(2) + "\n");
    record_stage(layout, "correlate-matrix", {{"evaluated", file_hash(layout.evaluated())}}, json::object(),
                 {layout.correlation()});
    out << std::setw(10) << "";
    for (auto m : kAllMetrics) out << std::setw(11) << metric_name(m);
    out << "\n";
    for (std::size_t i = 0; i < kMetricCount; ++i) {
        out << std::left << std::setw(10) << metric_name(kAllMetrics[i]) << std::right;
        for (std::size_t j = 0; j < kMetricCount; ++j) out << std::setw(11) << fmt(cm.r[i][j], 4);
        out << "\n";
    }
    return 0;
}

int cmd_correlate_rankings(const ProjectConfig& c, const Args& args, std::ostream& out, std::ostream&)
{
    require_flag(args.rankings, "in");
    const Layout layout{c.project};
    const fs::path triples_path = args.triples.empty() ? layout.triples() : fs::path(args.triples);
    if (!fs::exists(triples_path)) throw Error(ErrorCode::Io, triples_path.string() + " missing");
    const auto doc = read_json_file(triples_path);
    std::vector<Question> questions;
    try {
        for (const auto& q : doc.at("questions")) questions.push_back(question_from_json(q));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedRecord, triples_path.string() + ": " + e.what());
    }
    const auto ranks = read_rankings(fs::path(args.rankings));
    const auto results = metric_rank_correlation(questions, ranks);

    json metrics = json::array();
    for (const auto& r : results) {
        json j = {{"metric", std::string(metric_name(r.metric))}, {"n", r.n}, {"expected_sign", r.expected_sign}};
        if (r.result) {
            j["r"] = r.result->r;
            j["p"] = r.result->p;
            j["sign_matches"] = r.result->r * r.expected_sign > 0;
        } else {
            j["r"] = nullptr;
            j["p"] = nullptr;
            j["sign_matches"] = nullptr;
        }
        metrics.push_back(std::move(j));
        out << std::left << std::setw(10) << metric_name(r.metric) << " r = "
            << fmt(r.result ? std::optional<double>(r.result->r) : std::nullopt) << "  p = "
            << fmt(r.result ? std::optional<double>(r.result->p) : std::nullopt) << "  n = " << r.n << "  (expected "
            << (r.expected_sign < 0 ? "negative" : "positive") << ")\n";
    }
    json summary = json::object();
    for (auto g : {GroupLabel::H, GroupLabel::M, GroupLabel::L}) {
        try {
            const auto s = rank_summary(ranks, g);
            summary[std::string(1, label_char(g))] = {{"mean", s.mean}, {"lower", s.lower}, {"upper", s.upper}, {"n", s.n}};
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InsufficientSamples) throw;
            summary[std::string(1, label_char(g))] = nullptr;
        }
    }
    json result = {{"metrics", metrics}, {"rank_summary", summary}};
    write_text_file(layout.rank_correlation(), result.dump(2) + "\n");
    record_stage(layout, "correlate-rankings",
                 {{"rankings", file_hash(args.rankings)}, {"triples", file_hash(triples_path)}}, json::object(),
                 {layout.rank_correlation()});
    return 0;
}

std::optional<std::vector<double>> vector_field(const json& j, const char* name, EmbeddingKind kind)
{
    if (!j.contains(name) || j.at(name).is_null()) return std::nullopt;
    auto v = j.at(name).get<std::vector<double>>();
    if (v.size() != expected_dim(kind)) {
        throw Error(ErrorCode::DimensionMismatch, std::string("query ") + name + " vector has dim " +
                                                      std::to_string(v.size()) + ", expected " +
                                                      std::to_string(expected_dim(kind)));
    }
    return v;
}

int cmd_recommend(const ProjectConfig& c, const Args& args, std::ostream& out, std::ostream& err)
{
    if (args.query_set.empty() == args.query_text.empty()) {
        throw Error(ErrorCode::Usage, "give exactly one of --query-set or --query-text");
    }
    const Layout layout{c.project};
    const auto loaded = load_all(layout, c, err);
    MetricContext ctx(loaded.providers(c));

    MetricWeights w{c.w_sim_top, c.w_sim_sem, c.w_diff_mood, c.w_sim_aud, c.w_sim_pho, c.w_diff_mus};
    SetFeatures query;
    std::optional<std::vector<double>> qsem;
    std::optional<std::vector<double>> qaud;
    std::optional<std::vector<double>> qmood;
    json query_doc;
    if (!args.query_set.empty()) {
        query = ctx.features(args.query_set);
        query_doc = {{"set_id", args.query_set}};
    } else {
        const auto tokens = tokenize(args.query_text);
        PhonemeSequence phonemes;
        if (!c.lexicon.empty()) phonemes = phonemize(tokens, load_lexicon(c.lexicon).lexicon).phonemes;
        query = derive_features(ctx.providers(), "", "", tokens, phonemes);
        query.semantic = query.audio = query.mood = nullptr;
        if (!args.query_vectors.empty()) {
            const auto j = read_json_file(args.query_vectors);
            qsem = vector_field(j, "semantic", EmbeddingKind::Semantic);
            qaud = vector_field(j, "audio", EmbeddingKind::Audio);
            qmood = vector_field(j, "mood", EmbeddingKind::Mood);
            if (qsem) query.semantic = &*qsem;
            if (qaud) query.audio = &*qaud;
            if (qmood) query.mood = &*qmood;
        }
        query_doc = {{"text", args.query_text}};
    }

    const auto recs = recommend(query, ctx, w, c.k, c.jobs);
    json weights = json::object();
    for (auto m : kAllMetrics) weights[std::string(metric_name(m))] = w[index_of(m)];
    json results = json::array();
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto& r = recs[i];
        json z = json::object();
        for (auto m : kAllMetrics) {
            if (w[index_of(m)] != 0.0) z[std::string(metric_name(m))] = r.z[index_of(m)];
        }
        results.push_back({{"rank", i + 1},
                           {"set_id", r.set_id},
                           {"track_id", loaded.corpus.set(r.set_id).track_id},
                           {"score", r.score},
                           {"metrics", metrics_json(r.metrics)},
                           {"z", z}});
        out << std::right << std::setw(3) << i + 1 << "  " << std::left << std::setw(24) << r.set_id << " "
            << fmt(r.score, 4) << "\n";
    }
    json doc = {{"query", query_doc}, {"weights", weights}, {"k", c.k}, {"results", results}};
    write_text_file(layout.recommendations(), doc.dump(2) + "\n");
    record_stage(layout, "recommend", json::object(), {{"weights", weights}, {"k", c.k}, {"seed", c.seed}},
                 {layout.recommendations()});
    return 0;
}

int cmd_report(const ProjectConfig& c, std::ostream& out, std::ostream&)
{
    const Layout layout{c.project};
    const auto corpus = load_corpus(layout);
    json report;
    report["format_version"] = kManifestVersion;
    const auto& s = corpus.stats();
    report["corpus"] = {{"tracks", s.track_count},
                        {"lyric_sets", s.lyric_set_count},
                        {"mean_sections_per_track", s.mean_sections_per_track},
                        {"mean_phoneme_coverage", s.mean_phoneme_coverage},
                        {"feasible_pairs", count_feasible_pairs(corpus)}};
    if (fs::exists(layout.manifest())) {
        auto m = read_json_file(layout.manifest());
        json stages = json::object();
        for (auto& [name, st] : m["stages"].items()) {
            stages[name] = {{"inputs", st["inputs"]}, {"params", st["params"]}};
        }
        report["provenance"] = {{"tool_version", m.value("tool_version", "")}, {"stages", stages}};
    }
    if (fs::exists(layout.evaluated())) {
        const auto records = read_evaluated(layout.evaluated());
        json unavailable = json::object();
        for (auto m : kAllMetrics) {
            std::size_t miss = 0;
            for (const auto& r : records) miss += !r.metrics[m].has_value();
            unavailable[std::string(metric_name(m))] = miss;
        }
        report["pairs"] = {{"evaluated", records.size()}, {"unavailable", unavailable}};
    }
    if (fs::exists(layout.groups())) {
        auto g = read_json_file(layout.groups());
        for (auto& [_, m] : g["metrics"].items()) m.erase("labels");
        report["groups"] = g["metrics"];
    }
    if (fs::exists(layout.correlation())) report["correlation_matrix"] = read_json_file(layout.correlation());
    if (fs::exists(layout.triples())) {
        auto t = read_json_file(layout.triples());
        report["triples"] = t;
    }
    if (fs::exists(layout.rank_correlation())) report["rank_correlation"] = read_json_file(layout.rank_correlation());
    if (fs::exists(layout.recommendations())) report["recommendations"] = read_json_file(layout.recommendations());
    write_text_file(layout.report(), report.dump(2) + "\n");
    out << "report written with sections:";
    for (auto& [k, _] : report.items()) out << " " << k;
    out << "\n";
    return 0;
}

int exit_code(ErrorCode code)
{
    switch (error_class(code)) {
    case ErrorClass::Usage: return 1;
    case ErrorClass::Data: return 2;
    case ErrorClass::Numeric: return 3;
    }
    return 2;
}

std::string find_config(const std::vector<std::string>& args)
{
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return {};
}

} // namespace

std::vector<std::pair<std::string, std::string>> setting_defaults(const ProjectConfig& config)
{
    ProjectConfig copy = config;
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& s : settings_of(copy)) out.emplace_back(s.key, render(s.target));
    return out;
}

void apply_config_file(const std::string& path, ProjectConfig& config)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Usage, "cannot open config file " + path);
    auto settings = settings_of(config);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto where = path + ":" + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::Usage, where + ": expected key=value");
        auto key = trim(line.substr(0, eq));
        std::replace(key.begin(), key.end(), '_', '-');
        const auto value = trim(line.substr(eq + 1));
        const auto it = std::find_if(settings.begin(), settings.end(), [&](const Setting& s) { return s.key == key; });
        if (it == settings.end()) throw Error(ErrorCode::Usage, where + ": unknown key '" + key + "'");
        assign(it->target, value, where);
    }
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    ProjectConfig cfg;
    Args extra;
    std::string config_path;
    try {
        config_path = find_config(args);
        if (!config_path.empty()) apply_config_file(config_path, cfg);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    auto settings = settings_of(cfg);

    CLI::App app{"lyric similarity pipeline", "lyricsim"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config", config_path, "key=value file overriding defaults; flags override it");

    auto sub = [&](CLI::App* parent, const char* name, const char* help) {
        auto* s = parent->add_subcommand(name, help);
        s->fallthrough();
        return s;
    };

    auto* ingest = sub(&app, "ingest", "tokenize and phonemize a corpus into the project store");
    bind(ingest, settings, {"project", "corpus", "lexicon"});

    auto* lexicon_check = sub(&app, "lexicon-check", "validate a pronunciation dictionary");
    bind(lexicon_check, settings, {"project", "lexicon"});

    auto* lda = sub(&app, "lda-train", "train the topic model on the ingested lyric sets");
    bind(lda, settings, {"project", "stopwords", "seed", "topics", "alpha", "beta", "iterations", "min-doc-freq"});

    auto* pca = sub(&app, "pca-fit", "fit the phonetic feature-pair PCA");
    bind(pca, settings, {"project", "features", "seed", "pca-dims", "pca-tolerance", "pca-max-iterations"});

    auto* vectors = sub(&app, "vectors-load", "validate and import semantic, audio and mood vectors");
    bind(vectors, settings, {"project", "semantic", "audio", "mood"});

    const std::initializer_list<const char*> metric_keys = {"project", "features", "seed", "jobs", "burn-in", "samples"};

    auto* metrics = sub(&app, "metrics", "single-pair metrics");
    metrics->require_subcommand(1);
    auto* metrics_pair = sub(metrics, "pair", "all six metrics for one pair of lyric sets");
    bind(metrics_pair, settings, metric_keys);
    metrics_pair->add_option("--a", extra.a, "first lyric set id")->required();
    metrics_pair->add_option("--b", extra.b, "second lyric set id")->required();

    auto* pairs = sub(&app, "pairs", "pair sampling, evaluation and grouping");
    pairs->require_subcommand(1);
    auto* pairs_sample = sub(pairs, "sample", "draw distinct cross-track pairs");
    bind(pairs_sample, settings, {"project", "pairs", "seed"});
    auto* pairs_evaluate = sub(pairs, "evaluate", "score every sampled pair on the six metrics");
    bind(pairs_evaluate, settings, metric_keys);
    auto* pairs_group = sub(pairs, "group", "H/M/L groups and closeness ranges per metric");
    bind(pairs_group, settings, {"project"});

    auto* triples = sub(&app, "triples", "closeness-controlled comparison triples");
    triples->require_subcommand(1);
    auto* triples_select = sub(triples, "select", "pick H/M/L comparisons per reference and target metric");
    bind(triples_select, settings, metric_keys);
    bind(triples_select, settings, {"threshold", "cap", "references"});
    triples_select->add_option("--ref", extra.refs, "reference lyric set id (repeatable)");
    triples_select->add_option("--target", extra.targets, "target metric (repeatable; default all)");

    auto* correlate = sub(&app, "correlate", "correlation analyses");
    correlate->require_subcommand(1);
    auto* correlate_matrix = sub(correlate, "matrix", "Pearson r between the six metrics");
    bind(correlate_matrix, settings, {"project"});
    auto* correlate_rankings = sub(correlate, "rankings", "Pearson r between target metric values and human ranks");
    bind(correlate_rankings, settings, {"project"});
    correlate_rankings->add_option("--in", extra.rankings, "rankings table")->required();
    correlate_rankings->add_option("--triples", extra.triples, "questions file (default: the project's triples)");

    auto* rec = sub(&app, "recommend", "rank lyric sets against a query");
    bind(rec, settings, metric_keys);
    bind(rec, settings, {"lexicon", "w-sim-top", "w-sim-sem", "w-diff-mood", "w-sim-aud", "w-sim-pho", "w-diff-mus", "k"});
    rec->add_option("--query-set", extra.query_set, "query by stored lyric set id");
    rec->add_option("--query-text", extra.query_text, "query by free text");
    rec->add_option("--query-vectors", extra.query_vectors, "JSON with optional semantic/audio/mood vectors for a text query");

    auto* report = sub(&app, "report", "collect every artifact into one report");
    bind(report, settings, {"project"});

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*ingest) return cmd_ingest(cfg, out, err);
        if (*lexicon_check) return cmd_lexicon_check(cfg, out, err);
        if (*lda) return cmd_lda_train(cfg, out, err);
        if (*pca) return cmd_pca_fit(cfg, out, err);
        if (*vectors) return cmd_vectors_load(cfg, out, err);
        if (*metrics_pair) return cmd_metrics_pair(cfg, extra, out, err);
        if (*pairs_sample) return cmd_pairs_sample(cfg, out, err);
        if (*pairs_evaluate) return cmd_pairs_evaluate(cfg, out, err);
        if (*pairs_group) return cmd_pairs_group(cfg, out, err);
        if (*triples_select) return cmd_triples_select(cfg, extra, out, err);
        if (*correlate_matrix) return cmd_correlate_matrix(cfg, out, err);
        if (*correlate_rankings) return cmd_correlate_rankings(cfg, extra, out, err);
        if (*rec) return cmd_recommend(cfg, extra, out, err);
        if (*report) return cmd_report(cfg, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const json::exception& e) {
        err << "error: MalformedRecord: " << e.what() << "\n";
        return 2;
    } catch (const fs::filesystem_error& e) {
        err << "error: Io: " << e.what() << "\n";
        return 2;
    }
    err << "error: Usage: no subcommand\n";
    return 1;
}

} // namespace lyricsim
