#pragma once

#include "lyricsim/corpus.hpp"
#include "lyricsim/pca.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lyricsim {

inline constexpr const char* kBeginFeature = "beg";
inline constexpr const char* kEndFeature = "end";

/// Articulatory feature sets per phoneme.
class PhonemeFeatureTable {
public:
    /// Feature sets are stored sorted and de-duplicated. Throws InvalidFeatureTable
    /// for an empty set or one containing beg/end.
    void add(const std::string& phoneme, std::vector<std::string> features);

    /// Throws UnknownPhoneme.
    const std::vector<std::string>& features(const std::string& phoneme) const;
    bool contains(const std::string& phoneme) const { return table_.count(phoneme) != 0; }
    const std::map<std::string, std::vector<std::string>>& entries() const noexcept { return table_; }

    /// Lines "PHONEME feat1,feat2,..."; '#' starts a comment.
    static PhonemeFeatureTable parse(std::istream& in);
    static PhonemeFeatureTable load(const std::filesystem::path& path);

private:
    std::map<std::string, std::vector<std::string>> table_;
};

using FeaturePair = std::pair<std::string, std::string>;

struct FeaturePairHistogram {
    std::map<FeaturePair, std::uint64_t> counts;
    std::uint64_t total_count = 0;

    friend bool operator==(const FeaturePairHistogram&, const FeaturePairHistogram&) = default;
};

/// Feature sets F_0 = {beg}, F_1..F_n, F_{n+1} = {end}; every element of each
/// F_k x F_{k+1} adds one count. Throws UnknownPhoneme.
FeaturePairHistogram feature_pairs(const PhonemeSequence& phonemes, const PhonemeFeatureTable& table);

using PhoneticVector = std::vector<double>;

inline constexpr int kPcaFormatVersion = 1;

/// PCA over feature-pair frequency vectors.
struct PcaModel {
    std::vector<FeaturePair> pairs;   ///< column order; pair_index is the position in this list
    std::map<FeaturePair, std::size_t> pair_index;
    std::vector<double> mean;
    std::vector<std::vector<double>> components;
    std::vector<double> explained_variance;

    std::size_t dims() const noexcept { return components.size(); }

    /// components * (frequency - mean)
    PhoneticVector project(const std::vector<double>& frequency) const;

    void save(const std::filesystem::path& path) const;
    static PcaModel load(const std::filesystem::path& path);
};

/// Histograms are normalized to frequencies over the union pair space and mean-centered.
/// Empty histograms are rejected with InsufficientData.
PcaModel fit_pca(const std::vector<FeaturePairHistogram>& histograms, const PcaOptions& options);

struct PhoneticProjection {
    PhoneticVector vector;
    std::size_t dropped_pairs = 0;   ///< distinct pairs absent from the fitted pair space
};

/// Throws EmptyHistogram.
PhoneticProjection phonetic_vector(const FeaturePairHistogram& hist, const PcaModel& model);

/// Cosine of two phonetic vectors; throws ZeroVector.
double sim_pho(const PhoneticVector& p, const PhoneticVector& q);

/// Unique / total consecutive phoneme bigrams. Lower means more repetition.
/// Throws TooShort below two phonemes.
double pho(const PhonemeSequence& phonemes);

/// |pho(a) - pho(b)| + pho(a followed by b).
double diff_mus(const PhonemeSequence& a, const PhonemeSequence& b);

} // namespace lyricsim
