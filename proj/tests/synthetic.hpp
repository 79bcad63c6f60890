#pragma once

// Seeded generators and brute-force oracles shared by unit and acceptance tests.

#include "lyricsim/embeddings.hpp"
#include "lyricsim/study.hpp"
#include "lyricsim/topics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

namespace testing {

inline std::vector<double> dirichlet(std::mt19937_64& gen, std::size_t k, double a)
{
    std::gamma_distribution<double> g(a, 1.0);
    std::vector<double> v(k);
    double s = 0.0;
    for (auto& x : v) s += (x = g(gen));
    for (auto& x : v) x /= s;
    return v;
}

inline std::size_t categorical(std::mt19937_64& gen, const std::vector<double>& p)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double r = u(gen);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        r -= p[i];
        if (r < 0.0) return i;
    }
    return p.size() - 1;
}

struct LdaSample {
    std::vector<lyricsim::Document> docs;
    std::vector<std::vector<double>> phi;   ///< true topic-word rows over words "w00".."w29"
};

/// 3 topics over 30 words, 200 documents of 50 tokens.
inline LdaSample lda_sample(std::uint64_t seed)
{
    constexpr std::size_t K = 3, V = 30, D = 200, N = 50;
    std::mt19937_64 gen(seed);
    LdaSample s;
    for (std::size_t k = 0; k < K; ++k) s.phi.push_back(dirichlet(gen, V, 0.1));
    for (std::size_t d = 0; d < D; ++d) {
        const auto theta = dirichlet(gen, K, 0.5);
        lyricsim::Document doc;
        for (std::size_t n = 0; n < N; ++n) {
            const auto z = categorical(gen, theta);
            const auto w = categorical(gen, s.phi[z]);
            doc.push_back((w < 10 ? "w0" : "w") + std::to_string(w));
        }
        s.docs.push_back(std::move(doc));
    }
    return s;
}

/// Cosine between each true topic and its learned partner under the
/// permutation that maximizes the total cosine.
inline std::vector<double> matched_topic_cosines(const LdaSample& s, const lyricsim::TopicModel& m)
{
    const std::size_t K = s.phi.size();
    const std::size_t V = s.phi[0].size();
    std::vector<std::vector<double>> learned(K, std::vector<double>(V, 0.0));
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t w = 0; w < V; ++w) {
            const std::string name = (w < 10 ? "w0" : "w") + std::to_string(w);
            const auto it = m.word_index.find(name);
            if (it != m.word_index.end()) learned[k][w] = m.phi(k, it->second);
        }
    }
    std::vector<std::size_t> perm(K);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> best;
    double best_total = -1.0;
    do {
        std::vector<double> cs;
        double total = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            cs.push_back(lyricsim::cosine(s.phi[k], learned[perm[k]]));
            total += cs.back();
        }
        if (total > best_total) {
            best_total = total;
            best = cs;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

struct BruteTriple {
    std::string h, m, l;
    double score = 0.0;
};

/// Every (H, M, L) combination, no candidate cap. Same objective and tie rule
/// as select_triples, written independently.
inline std::optional<BruteTriple> brute_force_triple(const std::string& reference,
                                                     const std::vector<lyricsim::PairRecord>& pool,
                                                     const std::vector<lyricsim::GroupLabel>& labels,
                                                     lyricsim::Metric target, const lyricsim::MetricSpecs& specs,
                                                     double threshold)
{
    using namespace lyricsim;
    struct Cand {
        std::string id;
        const MetricVector* mv;
    };
    std::vector<Cand> groups[3];
    for (std::size_t i = 0; i < pool.size(); ++i) {
        bool complete = true;
        for (auto m : kAllMetrics) complete = complete && pool[i].metrics[m].has_value();
        if (!complete) continue;
        const auto& k = pool[i].key;
        const std::string other = k.a == reference ? k.b : k.a;
        groups[static_cast<int>(labels[i])].push_back({other, &pool[i].metrics});
    }
    std::optional<BruteTriple> best;
    for (const auto& h : groups[0])
        for (const auto& m : groups[1])
            for (const auto& l : groups[2]) {
                if (h.id == m.id || h.id == l.id || m.id == l.id) continue;
                double worst = 1.0;
                for (auto metric : kAllMetrics) {
                    if (metric == target) continue;
                    const auto& r = *specs[index_of(metric)].range;
                    const double span = r.hi - r.lo;
                    auto c = [&](const MetricVector* x, const MetricVector* y) {
                        return std::clamp(1.0 - std::abs(*(*x)[metric] - *(*y)[metric]) / span, 0.0, 1.0);
                    };
                    worst = std::min({worst, c(h.mv, m.mv), c(h.mv, l.mv), c(m.mv, l.mv)});
                }
                if (worst < threshold) continue;
                const BruteTriple t{h.id, m.id, l.id, worst};
                if (!best || worst > best->score ||
                    (worst == best->score && std::tie(t.h, t.m, t.l) < std::tie(best->h, best->m, best->l))) {
                    best = t;
                }
            }
    return best;
}

/// Random pool around one reference: n candidates, five controlled metrics
/// clustered tightly so feasible combinations exist, labels drawn at random.
struct TriplePool {
    std::string reference = "ref";
    std::vector<lyricsim::PairRecord> pool;
    std::vector<lyricsim::GroupLabel> labels;
    lyricsim::MetricSpecs specs;
};

inline TriplePool random_triple_pool(std::mt19937_64& gen, std::size_t n)
{
    using namespace lyricsim;
    TriplePool tp;
    tp.specs = default_specs();
    tp.specs[index_of(Metric::DiffMood)].range = MetricRange{0.0, 5.0};
    tp.specs[index_of(Metric::DiffMus)].range = MetricRange{0.0, 2.0};
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> g(0, 2);
    const double spread = 0.005 + 0.03 * u(gen);
    for (std::size_t i = 0; i < n; ++i) {
        MetricVector mv;
        for (auto m : kAllMetrics) {
            const auto& r = *tp.specs[index_of(m)].range;
            const double mid = r.lo + 0.5 * (r.hi - r.lo);
            mv[m] = mid + (u(gen) - 0.5) * spread * (r.hi - r.lo);
        }
        if (u(gen) < 0.05) mv[Metric::SimAud].reset();
        std::string id = "c" + std::to_string(100 + i);
        // reference sorts either side of the candidate
        tp.pool.push_back({i % 2 ? make_pair_key(tp.reference, id) : make_pair_key(id, tp.reference), mv});
        tp.labels.push_back(static_cast<GroupLabel>(g(gen)));
    }
    return tp;
}

} // namespace testing
