#include "lyricsim/study.hpp"

#include "lyricsim/error.hpp"
#include "lyricsim/parallel.hpp"
#include "lyricsim/random.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

namespace lyricsim {

std::string_view metric_name(Metric m) noexcept
{
    switch (m) {
    case Metric::SimTop: return "sim_top";
    case Metric::SimSem: return "sim_sem";
    case Metric::DiffMood: return "diff_mood";
    case Metric::SimAud: return "sim_aud";
    case Metric::SimPho: return "sim_pho";
    case Metric::DiffMus: return "diff_mus";
    }
    return "sim_top";
}

Metric parse_metric(std::string_view name)
{
    for (auto m : kAllMetrics) {
        if (metric_name(m) == name) return m;
    }
    throw Error(ErrorCode::Usage, "unknown metric '" + std::string(name) + "'");
}

Polarity polarity_of(Metric m) noexcept
{
    return (m == Metric::DiffMood || m == Metric::DiffMus) ? Polarity::Difference : Polarity::Similarity;
}

MetricSpec default_spec(Metric m)
{
    MetricSpec spec;
    spec.metric = m;
    spec.polarity = polarity_of(m);
    switch (m) {
    case Metric::SimTop: spec.range = MetricRange{0.0, 1.0}; break;
    case Metric::SimSem:
    case Metric::SimAud:
    case Metric::SimPho: spec.range = MetricRange{-1.0, 1.0}; break;
    case Metric::DiffMood:
    case Metric::DiffMus: spec.empirical = true; break;
    }
    return spec;
}

MetricSpecs default_specs()
{
    MetricSpecs specs;
    for (auto m : kAllMetrics) specs[index_of(m)] = default_spec(m);
    return specs;
}

bool MetricVector::complete() const
{
    return std::all_of(values.begin(), values.end(), [](const auto& v) { return v.has_value(); });
}

PairKey make_pair_key(std::string x, std::string y)
{
    if (y < x) std::swap(x, y);
    return {std::move(x), std::move(y)};
}

MetricSpecs resolve_ranges(MetricSpecs specs, std::span<const PairRecord> records)
{
    for (auto& spec : specs) {
        if (!spec.empirical) continue;
        spec.range.reset();
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const auto& rec : records) {
            if (const auto& v = rec.metrics[spec.metric]) {
                lo = std::min(lo, *v);
                hi = std::max(hi, *v);
            }
        }
        if (lo < hi) spec.range = MetricRange{lo, hi};
    }
    return specs;
}

// --- sampling ---------------------------------------------------------------

std::vector<PairKey> sample_pairs(const CorpusStore& store, std::size_t n, std::uint64_t seed)
{
    const auto feasible = count_feasible_pairs(store);
    if (n > feasible) {
        throw Error(ErrorCode::NotEnoughPairs,
                    "requested " + std::to_string(n) + " pairs, only " + std::to_string(feasible) + " feasible");
    }
    std::vector<const LyricSet*> sets;
    sets.reserve(store.lyric_sets().size());
    for (const auto& [_, s] : store.lyric_sets()) sets.push_back(&s);

    Rng rng(seed);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::vector<PairKey> out;
    out.reserve(n);
    const auto N = static_cast<std::uint64_t>(sets.size());
    while (out.size() < n) {
        auto i = static_cast<std::size_t>(rng.uniform_index(N));
        auto j = static_cast<std::size_t>(rng.uniform_index(N));
        if (i == j || sets[i]->track_id == sets[j]->track_id) continue;
        if (j < i) std::swap(i, j);
        if (!seen.emplace(i, j).second) continue;
        // sets are in id order, so i < j already gives a < b
        out.push_back({sets[i]->set_id, sets[j]->set_id});
    }
    return out;
}

// --- evaluation -------------------------------------------------------------

SetFeatures derive_features(const MetricProviders& providers, std::string set_id, std::string track_id,
                            const std::vector<std::string>& tokens, const PhonemeSequence& phonemes)
{
    SetFeatures f;
    f.set_id = std::move(set_id);
    f.track_id = std::move(track_id);
    f.phonemes = phonemes;

    if (providers.topics != nullptr) {
        auto opts = providers.infer;
        opts.seed = derive_seed(providers.infer.seed, f.set_id);
        try {
            f.topic = infer_topics(*providers.topics, tokens, opts);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoKnownTokens) throw;
        }
    }
    if (providers.pca != nullptr && providers.features != nullptr) {
        const auto hist = feature_pairs(phonemes, *providers.features);
        if (hist.total_count > 0) {
            auto proj = phonetic_vector(hist, *providers.pca);
            f.dropped_pairs = proj.dropped_pairs;
            if (norm(proj.vector) > 0.0) f.phonetic = std::move(proj.vector);
        }
    }
    if (providers.semantic != nullptr) f.semantic = providers.semantic->find(f.set_id);
    if (providers.audio != nullptr) f.audio = providers.audio->find(f.track_id);
    if (providers.mood != nullptr) f.mood = providers.mood->find(f.track_id);
    return f;
}

MetricVector score(const SetFeatures& x, const SetFeatures& y)
{
    MetricVector mv;
    auto cosine_or_empty = [](const std::vector<double>* u, const std::vector<double>* v) -> std::optional<double> {
        if (u == nullptr || v == nullptr || norm(*u) == 0.0 || norm(*v) == 0.0) return std::nullopt;
        return cosine(*u, *v);
    };
    if (x.topic && y.topic) mv[Metric::SimTop] = sim_top(*x.topic, *y.topic);
    mv[Metric::SimSem] = cosine_or_empty(x.semantic, y.semantic);
    if (x.mood != nullptr && y.mood != nullptr) mv[Metric::DiffMood] = euclidean(*x.mood, *y.mood);
    mv[Metric::SimAud] = cosine_or_empty(x.audio, y.audio);
    if (x.phonetic && y.phonetic) mv[Metric::SimPho] = sim_pho(*x.phonetic, *y.phonetic);
    if (x.phonemes.size() >= 2 && y.phonemes.size() >= 2) mv[Metric::DiffMus] = diff_mus(x.phonemes, y.phonemes);
    return mv;
}

MetricContext::MetricContext(MetricProviders providers) : providers_(providers)
{
    if (providers_.corpus == nullptr) {
        throw Error(ErrorCode::MissingProvider, "metric evaluation needs a corpus store");
    }
}

SetFeatures MetricContext::compute(const std::string& set_id) const
{
    const auto& set = providers_.corpus->set(set_id);
    return derive_features(providers_, set.set_id, set.track_id, set.tokens, set.phonemes);
}

void MetricContext::prepare(std::span<const std::string> set_ids, std::size_t jobs)
{
    std::vector<std::string> todo;
    for (const auto& id : set_ids) {
        if (cache_.count(id) == 0) todo.push_back(id);
    }
    std::sort(todo.begin(), todo.end());
    todo.erase(std::unique(todo.begin(), todo.end()), todo.end());

    std::vector<SetFeatures> computed(todo.size());
    parallel_for(todo.size(), jobs, [&](std::size_t i) { computed[i] = compute(todo[i]); });
    for (std::size_t i = 0; i < todo.size(); ++i) cache_.emplace(todo[i], std::move(computed[i]));
}

const SetFeatures& MetricContext::features(const std::string& set_id)
{
    auto it = cache_.find(set_id);
    if (it == cache_.end()) it = cache_.emplace(set_id, compute(set_id)).first;
    return it->second;
}

MetricVector MetricContext::evaluate(const std::string& a, const std::string& b)
{
    const auto& fa = features(a);
    const auto& fb = features(b);
    return score(fa, fb);
}

Evaluation evaluate_pairs(std::span<const PairKey> pairs, MetricContext& context, std::size_t jobs)
{
    std::vector<std::string> ids;
    ids.reserve(pairs.size() * 2);
    for (const auto& p : pairs) {
        ids.push_back(p.a);
        ids.push_back(p.b);
    }
    context.prepare(ids, jobs);

    Evaluation out;
    out.records.resize(pairs.size());
    parallel_for(pairs.size(), jobs, [&](std::size_t i) {
        out.records[i].key = pairs[i];
    });
    // features are cached now, so scoring only reads
    std::vector<const SetFeatures*> fa(pairs.size());
    std::vector<const SetFeatures*> fb(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        fa[i] = &context.features(pairs[i].a);
        fb[i] = &context.features(pairs[i].b);
    }
    parallel_for(pairs.size(), jobs, [&](std::size_t i) { out.records[i].metrics = score(*fa[i], *fb[i]); });

    for (const auto& rec : out.records) {
        for (auto m : kAllMetrics) {
            if (!rec.metrics[m]) ++out.unavailable[index_of(m)];
        }
    }
    return out;
}

// --- grouping ---------------------------------------------------------------

char label_char(GroupLabel g) noexcept
{
    switch (g) {
    case GroupLabel::H: return 'H';
    case GroupLabel::M: return 'M';
    case GroupLabel::L: return 'L';
    }
    return 'M';
}

GroupLabel parse_label(std::string_view s)
{
    if (s == "H" || s == "h") return GroupLabel::H;
    if (s == "M" || s == "m") return GroupLabel::M;
    if (s == "L" || s == "l") return GroupLabel::L;
    throw Error(ErrorCode::MalformedRecord, "group label must be H, M or L, got '" + std::string(s) + "'");
}

GroupLabel classify(double value, const GroupBoundaries& bounds, Polarity polarity)
{
    if (value >= bounds.lower && value <= bounds.upper) return GroupLabel::M;
    const bool above = value > bounds.upper;
    if (polarity == Polarity::Similarity) return above ? GroupLabel::H : GroupLabel::L;
    return above ? GroupLabel::L : GroupLabel::H;
}

Grouping group_by_metric(std::span<const double> values, Polarity polarity)
{
    if (values.size() < 2) {
        throw Error(ErrorCode::InsufficientSamples, "grouping needs at least 2 values");
    }
    long double sum = 0.0L;
    for (double v : values) sum += v;
    const long double mean = sum / static_cast<long double>(values.size());
    long double ss = 0.0L;
    for (double v : values) ss += (v - mean) * (v - mean);
    const long double var = ss / static_cast<long double>(values.size());
    if (var == 0.0L) {
        throw Error(ErrorCode::DegenerateDistribution, "all values are identical");
    }

    Grouping g;
    g.bounds.mean = static_cast<double>(mean);
    g.bounds.sd = static_cast<double>(std::sqrt(var));
    g.bounds.lower = static_cast<double>(mean - std::sqrt(var));
    g.bounds.upper = static_cast<double>(mean + std::sqrt(var));
    g.labels.reserve(values.size());
    for (double v : values) g.labels.push_back(classify(v, g.bounds, polarity));
    return g;
}

double closeness(double x, double y, const MetricSpec& spec)
{
    if (!spec.range || !(spec.range->hi > spec.range->lo)) {
        throw Error(ErrorCode::UnresolvedRange, "no usable range for " + std::string(metric_name(spec.metric)));
    }
    const double c = 1.0 - std::abs(x - y) / (spec.range->hi - spec.range->lo);
    return std::clamp(c, 0.0, 1.0);
}

// --- triples ----------------------------------------------------------------

double ClosenessCertificate::min() const
{
    return std::min({hm, hl, ml});
}

namespace {

struct Candidate {
    const std::string* id;
    const MetricVector* metrics;
    double target;
};

std::vector<Candidate> pick_candidates(std::vector<Candidate> group, std::size_t cap)
{
    if (group.empty()) return group;
    double centroid = 0.0;
    for (const auto& c : group) centroid += c.target;
    centroid /= static_cast<double>(group.size());
    std::sort(group.begin(), group.end(), [&](const Candidate& x, const Candidate& y) {
        const double dx = std::abs(x.target - centroid);
        const double dy = std::abs(y.target - centroid);
        if (dx != dy) return dx < dy;
        return *x.id < *y.id;
    });
    if (group.size() > cap) group.resize(cap);
    return group;
}

} // namespace

std::optional<Triple> select_triples(const std::string& reference, std::span<const PairRecord> pool,
                                     std::span<const GroupLabel> labels, Metric target, const MetricSpecs& specs,
                                     const TripleOptions& options)
{
    if (pool.size() != labels.size()) {
        throw Error(ErrorCode::DegenerateInput, "pool and group labels differ in length");
    }
    std::vector<Metric> controlled;
    for (auto m : kAllMetrics) {
        if (m != target) controlled.push_back(m);
    }

    std::array<std::vector<Candidate>, 3> groups;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const auto& rec = pool[i];
        if (!rec.metrics.complete()) continue;
        const std::string* other = nullptr;
        if (rec.key.a == reference) {
            other = &rec.key.b;
        } else if (rec.key.b == reference) {
            other = &rec.key.a;
        } else {
            continue;
        }
        groups[static_cast<std::size_t>(labels[i])].push_back({other, &rec.metrics, *rec.metrics[target]});
    }
    for (auto& g : groups) {
        g = pick_candidates(std::move(g), options.cap_per_group);
        if (g.empty()) return std::nullopt;
    }

    const Candidate* best[3] = {nullptr, nullptr, nullptr};
    double best_score = -1.0;
    auto ids_less = [](const Candidate* const* x, const Candidate* const* y) {
        return std::tie(*x[0]->id, *x[1]->id, *x[2]->id) < std::tie(*y[0]->id, *y[1]->id, *y[2]->id);
    };

    for (const auto& h : groups[0]) {
        for (const auto& m : groups[1]) {
            if (*m.id == *h.id) continue;
            for (const auto& l : groups[2]) {
                if (*l.id == *h.id || *l.id == *m.id) continue;
                double worst = 1.0;
                for (auto metric : controlled) {
                    const auto& spec = specs[index_of(metric)];
                    const double vh = *(*h.metrics)[metric];
                    const double vm = *(*m.metrics)[metric];
                    const double vl = *(*l.metrics)[metric];
                    worst = std::min({worst, closeness(vh, vm, spec), closeness(vh, vl, spec), closeness(vm, vl, spec)});
                    if (worst < options.threshold) break;
                }
                if (worst < options.threshold) continue;
                const Candidate* combo[3] = {&h, &m, &l};
                if (worst > best_score || (worst == best_score && ids_less(combo, best))) {
                    best_score = worst;
                    std::copy(std::begin(combo), std::end(combo), std::begin(best));
                }
            }
        }
    }
    if (best[0] == nullptr) return std::nullopt;

    Triple t;
    t.reference = reference;
    t.target = target;
    t.threshold = options.threshold;
    for (std::size_t g = 0; g < 3; ++g) t.comparisons[g] = {*best[g]->id, *best[g]->metrics};
    for (auto metric : controlled) {
        const auto& spec = specs[index_of(metric)];
        const double vh = *t.comparisons[0].metrics[metric];
        const double vm = *t.comparisons[1].metrics[metric];
        const double vl = *t.comparisons[2].metrics[metric];
        t.certificates.push_back({metric, closeness(vh, vm, spec), closeness(vh, vl, spec), closeness(vm, vl, spec)});
    }
    t.min_closeness = best_score;
    return t;
}

bool verify_triple(const Triple& triple, const MetricSpecs& specs)
{
    if (triple.certificates.size() != kMetricCount - 1) return false;
    for (const auto& cert : triple.certificates) {
        if (cert.metric == triple.target) return false;
        const auto& spec = specs[index_of(cert.metric)];
        const auto vh = triple.comparisons[0].metrics[cert.metric];
        const auto vm = triple.comparisons[1].metrics[cert.metric];
        const auto vl = triple.comparisons[2].metrics[cert.metric];
        if (!vh || !vm || !vl) return false;
        const double hm = closeness(*vh, *vm, spec);
        const double hl = closeness(*vh, *vl, spec);
        const double ml = closeness(*vm, *vl, spec);
        if (hm != cert.hm || hl != cert.hl || ml != cert.ml) return false;
        if (std::min({hm, hl, ml}) < triple.threshold) return false;
    }
    return true;
}

// --- correlation ------------------------------------------------------------

CorrelationMatrix metric_correlation_matrix(std::span<const PairRecord> records)
{
    CorrelationMatrix out;
    for (std::size_t i = 0; i < kMetricCount; ++i) {
        out.r[i][i] = 1.0;
        std::size_t count = 0;
        for (const auto& rec : records) {
            if (rec.metrics.values[i]) ++count;
        }
        out.n[i][i] = count;
    }
    for (std::size_t i = 0; i < kMetricCount; ++i) {
        for (std::size_t j = i + 1; j < kMetricCount; ++j) {
            std::vector<double> x;
            std::vector<double> y;
            for (const auto& rec : records) {
                const auto& vi = rec.metrics.values[i];
                const auto& vj = rec.metrics.values[j];
                if (vi && vj) {
                    x.push_back(*vi);
                    y.push_back(*vj);
                }
            }
            out.n[i][j] = out.n[j][i] = x.size();
            try {
                out.r[i][j] = out.r[j][i] = pearson(x, y);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::DegenerateInput) throw;
            }
        }
    }
    return out;
}

// --- rankings ---------------------------------------------------------------

namespace {

std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace

std::vector<RankRecord> read_rankings(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    std::vector<RankRecord> out;
    std::vector<std::size_t> line_of;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv(line);
        if (!header) {
            if (fields != std::vector<std::string>{"question_id", "rater_id", "group_label", "rank"}) {
                throw Error(ErrorCode::MalformedRecord,
                            "rankings header must be question_id,rater_id,group_label,rank");
            }
            header = true;
            continue;
        }
        const auto where = "rankings line " + std::to_string(line_no);
        if (fields.size() != 4) throw Error(ErrorCode::MalformedRecord, where + ": expected 4 fields");
        RankRecord r;
        r.question_id = fields[0];
        r.rater_id = fields[1];
        try {
            r.group = parse_label(fields[2]);
        } catch (const Error& e) {
            throw Error(ErrorCode::MalformedRecord, where + ": " + e.detail());
        }
        if (fields[3] != "1" && fields[3] != "2" && fields[3] != "3") {
            throw Error(ErrorCode::MalformedRecord, where + ": rank must be 1, 2 or 3");
        }
        r.rank = fields[3][0] - '0';
        out.push_back(std::move(r));
        line_of.push_back(line_no);
    }
    if (!header) throw Error(ErrorCode::MalformedRecord, "rankings file is empty");

    std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> by_response;
    for (std::size_t i = 0; i < out.size(); ++i) by_response[{out[i].question_id, out[i].rater_id}].push_back(i);
    for (const auto& [key, rows] : by_response) {
        std::set<int> ranks;
        std::set<GroupLabel> groups;
        for (auto i : rows) {
            ranks.insert(out[i].rank);
            groups.insert(out[i].group);
        }
        if (rows.size() != 3 || ranks.size() != 3 || groups.size() != 3) {
            throw Error(ErrorCode::MalformedRecord, "question " + key.first + ", rater " + key.second +
                                                        " (line " + std::to_string(line_of[rows.front()]) +
                                                        "): ranks must be a permutation of 1,2,3 over H, M, L");
        }
    }
    return out;
}

std::vector<RankRecord> read_rankings(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return read_rankings(in);
}

RankSummary rank_summary(std::span<const RankRecord> records, GroupLabel group)
{
    std::vector<double> ranks;
    for (const auto& r : records) {
        if (r.group == group) ranks.push_back(r.rank);
    }
    return summarize_ranks(ranks);
}

std::vector<MetricRankCorrelation> metric_rank_correlation(std::span<const Question> questions,
                                                           std::span<const RankRecord> ranks)
{
    std::map<std::string, const Question*> by_id;
    for (const auto& q : questions) by_id.emplace(q.question_id, &q);

    std::array<std::vector<double>, kMetricCount> values;
    std::array<std::vector<double>, kMetricCount> rank_values;
    for (const auto& r : ranks) {
        const auto it = by_id.find(r.question_id);
        if (it == by_id.end()) throw Error(ErrorCode::UnknownId, "ranking names unknown question " + r.question_id);
        const auto& triple = it->second->triple;
        const auto& v = triple.comparison(r.group).metrics[triple.target];
        if (!v) {
            throw Error(ErrorCode::MissingVector, "question " + r.question_id + " lacks its target metric value");
        }
        values[index_of(triple.target)].push_back(*v);
        rank_values[index_of(triple.target)].push_back(r.rank);
    }

    std::vector<MetricRankCorrelation> out;
    for (auto m : kAllMetrics) {
        const auto i = index_of(m);
        if (values[i].empty()) continue;
        MetricRankCorrelation c;
        c.metric = m;
        c.n = values[i].size();
        c.expected_sign = polarity_of(m) == Polarity::Similarity ? -1 : 1;
        try {
            c.result = correlate(values[i], rank_values[i]);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateInput && e.code() != ErrorCode::InsufficientSamples) throw;
        }
        out.push_back(std::move(c));
    }
    if (out.empty()) throw Error(ErrorCode::DegenerateInput, "no rankings joined with any question");
    return out;
}

} // namespace lyricsim
