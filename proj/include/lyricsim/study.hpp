#pragma once

#include "lyricsim/corpus.hpp"
#include "lyricsim/embeddings.hpp"
#include "lyricsim/phonetics.hpp"
#include "lyricsim/statistics.hpp"
#include "lyricsim/topics.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lyricsim {

// --- metrics ----------------------------------------------------------------

enum class Metric { SimTop, SimSem, DiffMood, SimAud, SimPho, DiffMus };

inline constexpr std::size_t kMetricCount = 6;
inline constexpr std::array<Metric, kMetricCount> kAllMetrics{Metric::SimTop, Metric::SimSem, Metric::DiffMood,
                                                              Metric::SimAud, Metric::SimPho, Metric::DiffMus};

constexpr std::size_t index_of(Metric m) noexcept { return static_cast<std::size_t>(m); }
std::string_view metric_name(Metric m) noexcept;
/// Throws Usage.
Metric parse_metric(std::string_view name);

enum class Polarity { Similarity, Difference };

Polarity polarity_of(Metric m) noexcept;

struct MetricRange {
    double lo = 0.0;
    double hi = 1.0;
};

struct MetricSpec {
    Metric metric = Metric::SimTop;
    Polarity polarity = Polarity::Similarity;
    bool empirical = false;               ///< range comes from a reference population
    std::optional<MetricRange> range;     ///< unset until resolved for empirical specs
};

/// Analytic (0,1) for sim_top, (-1,1) for the other cosines; diff metrics are empirical and unresolved.
MetricSpec default_spec(Metric m);

using MetricSpecs = std::array<MetricSpec, kMetricCount>;
MetricSpecs default_specs();

/// Six per-pair scores; an empty slot means an input was unavailable.
struct MetricVector {
    std::array<std::optional<double>, kMetricCount> values;

    const std::optional<double>& operator[](Metric m) const { return values[index_of(m)]; }
    std::optional<double>& operator[](Metric m) { return values[index_of(m)]; }
    bool complete() const;

    friend bool operator==(const MetricVector&, const MetricVector&) = default;
};

struct PairKey {
    std::string a;   ///< a < b lexicographically
    std::string b;

    friend bool operator==(const PairKey&, const PairKey&) = default;
    friend auto operator<=>(const PairKey&, const PairKey&) = default;
};

PairKey make_pair_key(std::string x, std::string y);

struct PairRecord {
    PairKey key;
    MetricVector metrics;

    friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

/// Fills empirical ranges with the min/max of the available values in records.
/// A metric whose population is empty or constant stays unresolved.
MetricSpecs resolve_ranges(MetricSpecs specs, std::span<const PairRecord> records);

// --- sampling ---------------------------------------------------------------

/// n distinct cross-track pairs drawn uniformly by rejection sampling on
/// uniform lyric-set index pairs. Throws NotEnoughPairs.
std::vector<PairKey> sample_pairs(const CorpusStore& store, std::size_t n, std::uint64_t seed);

// --- evaluation -------------------------------------------------------------

/// Everything needed to score pairs. Pointers may be null when a source is
/// absent; the corresponding metric is then unavailable.
struct MetricProviders {
    const CorpusStore* corpus = nullptr;
    const TopicModel* topics = nullptr;
    InferOptions infer;   ///< infer.seed is the base; each set gets derive_seed(seed, set_id)
    const PcaModel* pca = nullptr;
    const PhonemeFeatureTable* features = nullptr;
    const EmbeddingStore* semantic = nullptr;
    const EmbeddingStore* audio = nullptr;
    const EmbeddingStore* mood = nullptr;
};

/// Per-lyric-set derived inputs.
struct SetFeatures {
    std::string set_id;
    std::string track_id;
    PhonemeSequence phonemes;
    std::optional<TopicVector> topic;
    std::optional<PhoneticVector> phonetic;
    std::size_t dropped_pairs = 0;
    const std::vector<double>* semantic = nullptr;
    const std::vector<double>* audio = nullptr;
    const std::vector<double>* mood = nullptr;
};

/// Derives features for free-standing text (recommendation queries) or a stored set.
SetFeatures derive_features(const MetricProviders& providers, std::string set_id, std::string track_id,
                            const std::vector<std::string>& tokens, const PhonemeSequence& phonemes);

/// Scores a pair from prepared features; missing inputs leave the metric empty.
MetricVector score(const SetFeatures& x, const SetFeatures& y);

/// Caches SetFeatures per lyric set.
class MetricContext {
public:
    explicit MetricContext(MetricProviders providers);

    /// Computes features for the given sets, in parallel when jobs > 1.
    void prepare(std::span<const std::string> set_ids, std::size_t jobs = 1);
    const SetFeatures& features(const std::string& set_id);
    const MetricProviders& providers() const noexcept { return providers_; }

    MetricVector evaluate(const std::string& a, const std::string& b);

private:
    SetFeatures compute(const std::string& set_id) const;

    MetricProviders providers_;
    std::unordered_map<std::string, SetFeatures> cache_;
};

struct Evaluation {
    std::vector<PairRecord> records;
    std::array<std::size_t, kMetricCount> unavailable{};
};

Evaluation evaluate_pairs(std::span<const PairKey> pairs, MetricContext& context, std::size_t jobs = 1);

// --- grouping ---------------------------------------------------------------

enum class GroupLabel { H, M, L };

char label_char(GroupLabel g) noexcept;
/// Accepts H/M/L (case-insensitive); throws MalformedRecord.
GroupLabel parse_label(std::string_view s);

struct GroupBoundaries {
    double mean = 0.0;
    double sd = 0.0;      ///< population standard deviation
    double lower = 0.0;   ///< mean - sd
    double upper = 0.0;   ///< mean + sd
};

/// Closed [lower, upper] is M. Above is H for similarity metrics and L for differences.
GroupLabel classify(double value, const GroupBoundaries& bounds, Polarity polarity);

struct Grouping {
    GroupBoundaries bounds;
    std::vector<GroupLabel> labels;
};

/// Throws InsufficientSamples below 2 values, DegenerateDistribution for zero variance.
Grouping group_by_metric(std::span<const double> values, Polarity polarity);

/// 1 - |x - y| / (hi - lo), clamped to [0, 1]. Throws UnresolvedRange.
double closeness(double x, double y, const MetricSpec& spec);

// --- variable-controlled triples ---------------------------------------------

struct Comparison {
    std::string set_id;
    MetricVector metrics;   ///< scores against the reference
};

/// Pairwise closeness among the three comparisons on one non-target metric.
struct ClosenessCertificate {
    Metric metric = Metric::SimTop;
    double hm = 0.0;
    double hl = 0.0;
    double ml = 0.0;

    double min() const;
};

struct Triple {
    std::string reference;
    Metric target = Metric::SimTop;
    double threshold = 0.99;
    std::array<Comparison, 3> comparisons;   ///< indexed by GroupLabel H, M, L
    std::vector<ClosenessCertificate> certificates;
    double min_closeness = 1.0;

    const Comparison& comparison(GroupLabel g) const { return comparisons[static_cast<std::size_t>(g)]; }
};

struct TripleOptions {
    double threshold = 0.99;
    std::size_t cap_per_group = 50;   ///< candidates nearest the group centroid on the target metric
};

/// Picks one H, one M and one L comparison whose scores on the five
/// non-target metrics are pairwise at least `threshold` close, maximizing the
/// minimum closeness; ties go to the lexicographically smallest (H, M, L) ids.
/// `labels` is aligned with `pool`. Pool records lacking any metric are ignored.
std::optional<Triple> select_triples(const std::string& reference, std::span<const PairRecord> pool,
                                     std::span<const GroupLabel> labels, Metric target, const MetricSpecs& specs,
                                     const TripleOptions& options = {});

/// Recomputes every certificate of `triple` and checks it against the threshold.
bool verify_triple(const Triple& triple, const MetricSpecs& specs);

// --- correlation ------------------------------------------------------------

struct CorrelationMatrix {
    std::array<std::array<std::optional<double>, kMetricCount>, kMetricCount> r;
    std::array<std::array<std::size_t, kMetricCount>, kMetricCount> n{};
};

/// Pearson r for each metric pair over records where both are available.
/// Degenerate cells are left empty; the diagonal is exactly 1.
CorrelationMatrix metric_correlation_matrix(std::span<const PairRecord> records);

// --- human rankings ---------------------------------------------------------

struct RankRecord {
    std::string question_id;
    std::string rater_id;
    GroupLabel group = GroupLabel::M;
    int rank = 1;   ///< 1 is most similar to the reference
};

/// Comma-separated with header question_id,rater_id,group_label,rank. Each
/// (question, rater) must rank the three groups as a permutation of {1,2,3}.
/// Throws MalformedRecord.
std::vector<RankRecord> read_rankings(std::istream& in);
std::vector<RankRecord> read_rankings(const std::filesystem::path& path);

/// Mean rank of one comparison group with a 95% t-interval.
RankSummary rank_summary(std::span<const RankRecord> records, GroupLabel group);

struct Question {
    std::string question_id;
    Triple triple;
};

struct MetricRankCorrelation {
    Metric metric = Metric::SimTop;
    std::size_t n = 0;
    std::optional<CorrelationResult> result;   ///< empty when the joined data is degenerate
    /// Rank 1 is most similar, so similarity metrics should correlate negatively.
    int expected_sign = -1;
};

/// Pearson r and p between each target metric's value and the rank it received,
/// over questions targeting that metric. Metrics without questions are omitted.
/// Throws UnknownId for a ranking that names no known question, DegenerateInput
/// when nothing joins.
std::vector<MetricRankCorrelation> metric_rank_correlation(std::span<const Question> questions,
                                                           std::span<const RankRecord> ranks);

} // namespace lyricsim
