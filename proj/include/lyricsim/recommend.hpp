#pragma once

#include "lyricsim/study.hpp"

#include <array>
#include <string>
#include <vector>

namespace lyricsim {

using MetricWeights = std::array<double, kMetricCount>;

/// sim_sem 0.65, sim_aud 0.48, diff_mus 0.74; the rest 0.
MetricWeights default_weights();

struct Recommendation {
    std::string set_id;
    double score = 0.0;
    MetricVector metrics;   ///< raw scores against the query
    std::array<double, kMetricCount> z{};   ///< polarity-adjusted z-scores, 0 for unweighted metrics
};

/// Ranks every lyric set not on the query's track (and not the query itself)
/// by sum of weight * z over the weighted metrics. z is taken over the
/// candidate population, negated for difference metrics, and 0 when that
/// metric's values are constant. Candidates missing a weighted metric are
/// dropped. Throws MissingObjective when all weights are 0, MissingProvider
/// when a weighted metric has no provider or the query lacks its input.
std::vector<Recommendation> recommend(const SetFeatures& query, MetricContext& context, const MetricWeights& weights,
                                      std::size_t k, std::size_t jobs = 1);

} // namespace lyricsim
