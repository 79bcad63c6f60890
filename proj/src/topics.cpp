#include "lyricsim/topics.hpp"

#include "lyricsim/embeddings.hpp"
#include "lyricsim/error.hpp"
#include "lyricsim/json_io.hpp"
#include "lyricsim/random.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>

namespace lyricsim {

namespace {

// Inverse-CDF draw from unnormalized weights.
std::size_t draw(const std::vector<double>& weights, double total, Rng& rng)
{
    double u = rng.uniform01() * total;
    for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
        u -= weights[k];
        if (u < 0.0) return k;
    }
    return weights.size() - 1;
}

} // namespace

double TopicModel::phi(std::size_t topic, std::size_t word) const
{
    return (static_cast<double>(count(topic, word)) + beta) /
           (static_cast<double>(topic_totals[topic]) + static_cast<double>(vocab_size()) * beta);
}

std::vector<double> TopicModel::phi_row(std::size_t topic) const
{
    std::vector<double> row(vocab_size());
    for (std::size_t w = 0; w < row.size(); ++w) row[w] = phi(topic, w);
    return row;
}

void TopicModel::index_vocabulary()
{
    word_index.clear();
    for (std::size_t i = 0; i < vocabulary.size(); ++i) word_index.emplace(vocabulary[i], i);
}

std::vector<std::string> build_vocabulary(const std::vector<Document>& docs, std::size_t min_doc_freq,
                                          const std::set<std::string>& stopwords)
{
    std::map<std::string, std::size_t> doc_freq;
    for (const auto& doc : docs) {
        std::set<std::string_view> seen(doc.begin(), doc.end());
        for (const auto& w : seen) ++doc_freq[std::string(w)];
    }
    std::vector<std::string> vocab;
    for (const auto& [word, df] : doc_freq) {
        if (df >= min_doc_freq && stopwords.count(word) == 0) vocab.push_back(word);
    }
    return vocab;
}

TopicModel train_lda(const std::vector<Document>& docs, const LdaOptions& options)
{
    if (options.iterations == 0) throw Error(ErrorCode::Usage, "LDA needs at least one iteration");
    if (options.topics == 0) throw Error(ErrorCode::Usage, "LDA needs at least one topic");
    if (!(options.alpha > 0.0) || !(options.beta > 0.0)) throw Error(ErrorCode::Usage, "LDA priors must be positive");

    TopicModel model;
    model.topics = options.topics;
    model.alpha = options.alpha;
    model.beta = options.beta;
    model.seed = options.seed;
    model.vocabulary = build_vocabulary(docs, options.min_doc_freq, options.stopwords);
    model.index_vocabulary();
    if (model.vocabulary.empty()) {
        throw Error(ErrorCode::EmptyVocabulary, "no word survives vocabulary filtering");
    }

    std::vector<std::vector<std::uint32_t>> corpus;
    for (const auto& doc : docs) {
        std::vector<std::uint32_t> ids;
        for (const auto& w : doc) {
            if (const auto it = model.word_index.find(w); it != model.word_index.end()) {
                ids.push_back(static_cast<std::uint32_t>(it->second));
            }
        }
        if (!ids.empty()) corpus.push_back(std::move(ids));
    }
    const std::size_t K = options.topics;
    const std::size_t V = model.vocab_size();
    if (corpus.size() < K) {
        throw Error(ErrorCode::TooFewDocuments, std::to_string(corpus.size()) + " non-empty documents for " +
                                                    std::to_string(K) + " topics");
    }

    Rng rng(options.seed);
    std::vector<std::vector<std::uint32_t>> assignment(corpus.size());
    std::vector<std::int64_t> doc_topic(corpus.size() * K, 0);
    std::vector<std::int64_t> topic_word(K * V, 0);
    std::vector<std::int64_t> topic_total(K, 0);

    for (std::size_t d = 0; d < corpus.size(); ++d) {
        assignment[d].resize(corpus[d].size());
        for (std::size_t i = 0; i < corpus[d].size(); ++i) {
            const auto k = static_cast<std::uint32_t>(rng.uniform_index(K));
            assignment[d][i] = k;
            ++doc_topic[d * K + k];
            ++topic_word[k * V + corpus[d][i]];
            ++topic_total[k];
        }
    }

    const double vbeta = static_cast<double>(V) * options.beta;
    std::vector<double> weights(K);
    for (std::size_t it = 0; it < options.iterations; ++it) {
        for (std::size_t d = 0; d < corpus.size(); ++d) {
            std::int64_t* nd = doc_topic.data() + d * K;
            for (std::size_t i = 0; i < corpus[d].size(); ++i) {
                const std::size_t w = corpus[d][i];
                std::size_t k = assignment[d][i];
                --nd[k];
                --topic_word[k * V + w];
                --topic_total[k];

                double total = 0.0;
                for (std::size_t t = 0; t < K; ++t) {
                    weights[t] = (static_cast<double>(nd[t]) + options.alpha) *
                                 (static_cast<double>(topic_word[t * V + w]) + options.beta) /
                                 (static_cast<double>(topic_total[t]) + vbeta);
                    total += weights[t];
                }
                k = draw(weights, total, rng);

                assignment[d][i] = static_cast<std::uint32_t>(k);
                ++nd[k];
                ++topic_word[k * V + w];
                ++topic_total[k];
            }
        }
    }

    model.topic_word_counts.assign(topic_word.begin(), topic_word.end());
    model.topic_totals.assign(topic_total.begin(), topic_total.end());
    model.iterations_run = options.iterations;
    return model;
}

TopicVector infer_topics(const TopicModel& model, const Document& doc, const InferOptions& options)
{
    if (options.samples == 0) throw Error(ErrorCode::Usage, "topic inference needs at least one sample");
    const std::size_t K = model.topics;

    std::vector<std::size_t> words;
    for (const auto& token : doc) {
        if (const auto it = model.word_index.find(token); it != model.word_index.end()) words.push_back(it->second);
    }
    if (words.empty()) {
        throw Error(ErrorCode::NoKnownTokens, "document has no in-vocabulary tokens");
    }

    // phi is fixed during fold-in; cache the rows this document touches
    std::vector<double> phi(words.size() * K);
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t k = 0; k < K; ++k) phi[i * K + k] = model.phi(k, words[i]);

    Rng rng(options.seed);
    std::vector<std::size_t> z(words.size());
    std::vector<std::int64_t> nd(K, 0);
    for (auto& zi : z) {
        zi = rng.uniform_index(K);
        ++nd[zi];
    }

    const double denom = static_cast<double>(words.size()) + static_cast<double>(K) * model.alpha;
    TopicVector acc(K, 0.0);
    std::vector<double> weights(K);
    const std::size_t sweeps = options.burn_in + options.samples;
    for (std::size_t s = 0; s < sweeps; ++s) {
        for (std::size_t i = 0; i < words.size(); ++i) {
            --nd[z[i]];
            double total = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                weights[k] = (static_cast<double>(nd[k]) + model.alpha) * phi[i * K + k];
                total += weights[k];
            }
            z[i] = draw(weights, total, rng);
            ++nd[z[i]];
        }
        if (s >= options.burn_in) {
            for (std::size_t k = 0; k < K; ++k) acc[k] += (static_cast<double>(nd[k]) + model.alpha) / denom;
        }
    }

    const double sum = std::accumulate(acc.begin(), acc.end(), 0.0);
    for (auto& x : acc) x /= sum;
    return acc;
}

double sim_top(const TopicVector& t, const TopicVector& u)
{
    return std::clamp(cosine(t, u), 0.0, 1.0);
}

std::set<std::string> load_stopwords(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open stopword list " + path.string());
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        words.insert(line.substr(b, e - b + 1));
    }
    return words;
}

void TopicModel::save(const std::filesystem::path& path) const
{
    nlohmann::json j;
    j["format_version"] = kTopicFormatVersion;
    j["topics"] = topics;
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["seed"] = seed;
    j["iterations_run"] = iterations_run;
    j["vocabulary"] = vocabulary;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t k = 0; k < topics; ++k) {
        rows.push_back(std::vector<std::uint64_t>(topic_word_counts.begin() + static_cast<std::ptrdiff_t>(k * vocab_size()),
                                                  topic_word_counts.begin() + static_cast<std::ptrdiff_t>((k + 1) * vocab_size())));
    }
    j["topic_word_counts"] = std::move(rows);
    j["topic_totals"] = topic_totals;
    write_text_file(path, j.dump() + "\n");
}

TopicModel TopicModel::load(const std::filesystem::path& path)
{
    const auto j = read_json_file(path);
    try {
        if (j.at("format_version").get<int>() != kTopicFormatVersion) {
            throw Error(ErrorCode::MalformedRecord, "unsupported topic model version in " + path.string());
        }
        TopicModel m;
        m.topics = j.at("topics").get<std::size_t>();
        m.alpha = j.at("alpha").get<double>();
        m.beta = j.at("beta").get<double>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.iterations_run = j.at("iterations_run").get<std::size_t>();
        m.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
        m.index_vocabulary();
        const auto rows = j.at("topic_word_counts").get<std::vector<std::vector<std::uint64_t>>>();
        if (rows.size() != m.topics) throw Error(ErrorCode::DimensionMismatch, "topic row count");
        for (const auto& r : rows) {
            if (r.size() != m.vocab_size()) throw Error(ErrorCode::DimensionMismatch, "topic row length");
            m.topic_word_counts.insert(m.topic_word_counts.end(), r.begin(), r.end());
        }
        m.topic_totals = j.at("topic_totals").get<std::vector<std::uint64_t>>();
        if (m.topic_totals.size() != m.topics) throw Error(ErrorCode::DimensionMismatch, "topic totals length");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedRecord, path.string() + ": " + e.what());
    }
}

} // namespace lyricsim
