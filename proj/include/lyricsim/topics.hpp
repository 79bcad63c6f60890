#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lyricsim {

using Document = std::vector<std::string>;
using TopicVector = std::vector<double>;

struct LdaOptions {
    std::size_t topics = 50;
    double alpha = 1.0;    ///< symmetric document-topic prior, 50 / K at K = 50
    double beta = 0.01;    ///< symmetric topic-word prior
    std::size_t iterations = 1000;
    std::uint64_t seed = 0;
    std::size_t min_doc_freq = 3;
    std::set<std::string> stopwords;
};

struct InferOptions {
    std::size_t burn_in = 50;
    std::size_t samples = 100;
    std::uint64_t seed = 0;
};

inline constexpr int kTopicFormatVersion = 1;

/// Collapsed-Gibbs LDA point estimate: counts from the final sweep.
struct TopicModel {
    std::size_t topics = 0;
    std::vector<std::string> vocabulary;
    std::unordered_map<std::string, std::size_t> word_index;
    double alpha = 1.0;
    double beta = 0.01;
    std::vector<std::uint64_t> topic_word_counts;   ///< topics x vocabulary, row-major
    std::vector<std::uint64_t> topic_totals;
    std::uint64_t seed = 0;
    std::size_t iterations_run = 0;

    std::size_t vocab_size() const noexcept { return vocabulary.size(); }
    std::uint64_t count(std::size_t topic, std::size_t word) const { return topic_word_counts[topic * vocab_size() + word]; }
    /// (n_kw + beta) / (n_k + V beta)
    double phi(std::size_t topic, std::size_t word) const;
    /// Full smoothed topic-word row.
    std::vector<double> phi_row(std::size_t topic) const;

    void save(const std::filesystem::path& path) const;
    static TopicModel load(const std::filesystem::path& path);

    /// Rebuilds word_index from vocabulary.
    void index_vocabulary();
};

/// Words kept after dropping stopwords and words seen in fewer than min_doc_freq documents.
std::vector<std::string> build_vocabulary(const std::vector<Document>& docs, std::size_t min_doc_freq,
                                          const std::set<std::string>& stopwords);

/// Throws EmptyVocabulary, TooFewDocuments (fewer than K non-empty documents
/// after filtering), Usage for iterations == 0 or non-positive priors.
TopicModel train_lda(const std::vector<Document>& docs, const LdaOptions& options);

/// Fold-in Gibbs sampling with topic-word counts frozen. The estimate is the
/// average over post-burn-in sweeps of (n_dk + alpha) / (N_d + K alpha).
/// Out-of-vocabulary tokens are ignored; throws NoKnownTokens if none remain.
TopicVector infer_topics(const TopicModel& model, const Document& doc, const InferOptions& options);

/// Cosine of two topic distributions; lies in [0, 1].
double sim_top(const TopicVector& t, const TopicVector& u);

/// One word per line; '#' comments.
std::set<std::string> load_stopwords(const std::filesystem::path& path);

} // namespace lyricsim
