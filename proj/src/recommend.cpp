#include "lyricsim/recommend.hpp"

#include "lyricsim/error.hpp"
#include "lyricsim/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace lyricsim {

MetricWeights default_weights()
{
    MetricWeights w{};
    w[index_of(Metric::SimSem)] = 0.65;
    w[index_of(Metric::SimAud)] = 0.48;
    w[index_of(Metric::DiffMus)] = 0.74;
    return w;
}

namespace {

void require_inputs(const SetFeatures& query, const MetricProviders& p, const MetricWeights& weights)
{
    for (auto m : kAllMetrics) {
        if (weights[index_of(m)] == 0.0) continue;
        bool provider = true;
        bool input = true;
        switch (m) {
        case Metric::SimTop:
            provider = p.topics != nullptr;
            input = query.topic.has_value();
            break;
        case Metric::SimSem:
            provider = p.semantic != nullptr;
            input = query.semantic != nullptr;
            break;
        case Metric::DiffMood:
            provider = p.mood != nullptr;
            input = query.mood != nullptr;
            break;
        case Metric::SimAud:
            provider = p.audio != nullptr;
            input = query.audio != nullptr;
            break;
        case Metric::SimPho:
            provider = p.pca != nullptr && p.features != nullptr;
            input = query.phonetic.has_value();
            break;
        case Metric::DiffMus:
            input = query.phonemes.size() >= 2;
            break;
        }
        if (!provider) {
            throw Error(ErrorCode::MissingProvider, std::string(metric_name(m)) + " is weighted but has no provider");
        }
        if (!input) {
            throw Error(ErrorCode::MissingProvider, "query has no input for weighted metric " + std::string(metric_name(m)));
        }
    }
}

} // namespace

std::vector<Recommendation> recommend(const SetFeatures& query, MetricContext& context, const MetricWeights& weights,
                                      std::size_t k, std::size_t jobs)
{
    if (std::all_of(weights.begin(), weights.end(), [](double w) { return w == 0.0; })) {
        throw Error(ErrorCode::MissingObjective, "all metric weights are zero");
    }
    for (double w : weights) {
        if (!std::isfinite(w)) throw Error(ErrorCode::Usage, "metric weights must be finite");
    }
    const auto& providers = context.providers();
    require_inputs(query, providers, weights);

    std::vector<std::string> ids;
    for (const auto& [id, set] : providers.corpus->lyric_sets()) {
        if (id == query.set_id) continue;
        if (!query.track_id.empty() && set.track_id == query.track_id) continue;
        ids.push_back(id);
    }
    context.prepare(ids, jobs);

    std::vector<Recommendation> all(ids.size());
    std::vector<const SetFeatures*> feats(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) feats[i] = &context.features(ids[i]);
    parallel_for(ids.size(), jobs, [&](std::size_t i) {
        all[i].set_id = ids[i];
        all[i].metrics = score(query, *feats[i]);
    });

    std::vector<Recommendation> kept;
    for (auto& r : all) {
        bool ok = true;
        for (auto m : kAllMetrics) {
            if (weights[index_of(m)] != 0.0 && !r.metrics[m]) ok = false;
        }
        if (ok) kept.push_back(std::move(r));
    }

    for (auto m : kAllMetrics) {
        const double w = weights[index_of(m)];
        if (w == 0.0 || kept.empty()) continue;
        long double sum = 0.0L;
        for (const auto& r : kept) sum += *r.metrics[m];
        const long double mean = sum / static_cast<long double>(kept.size());
        long double ss = 0.0L;
        for (const auto& r : kept) ss += (*r.metrics[m] - mean) * (*r.metrics[m] - mean);
        const long double sd = std::sqrt(ss / static_cast<long double>(kept.size()));
        const double sign = polarity_of(m) == Polarity::Difference ? -1.0 : 1.0;
        for (auto& r : kept) {
            const double z = sd > 0.0L ? static_cast<double>((*r.metrics[m] - mean) / sd) : 0.0;
            r.z[index_of(m)] = sign * z;
        }
    }
    for (auto& r : kept) {
        r.score = 0.0;
        for (std::size_t i = 0; i < kMetricCount; ++i) r.score += weights[i] * r.z[i];
    }
    std::sort(kept.begin(), kept.end(), [](const Recommendation& a, const Recommendation& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.set_id < b.set_id;
    });
    if (kept.size() > k) kept.resize(k);
    return kept;
}

} // namespace lyricsim
