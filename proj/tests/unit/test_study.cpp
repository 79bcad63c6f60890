#include "doctest.h"

#include "lyricsim/error.hpp"
#include "lyricsim/study.hpp"
#include "fixture_world.hpp"
#include "support.hpp"
#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

using namespace lyricsim;

namespace {

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Usage;
}

std::vector<PairKey> all_cross_track_pairs(const CorpusStore& store)
{
    std::vector<PairKey> out;
    const auto ids = store.set_ids();
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = i + 1; j < ids.size(); ++j)
            if (store.set(ids[i]).track_id != store.set(ids[j]).track_id) out.push_back({ids[i], ids[j]});
    return out;
}

MetricVector uniform_metrics(double v)
{
    MetricVector mv;
    for (auto m : kAllMetrics) mv[m] = v;
    return mv;
}

MetricSpecs unit_specs()
{
    auto s = default_specs();
    for (auto& spec : s) spec.range = MetricRange{0.0, 1.0};
    return s;
}

} // namespace

TEST_CASE("metric names and polarity")
{
    for (auto m : kAllMetrics) CHECK(parse_metric(metric_name(m)) == m);
    CHECK(polarity_of(Metric::DiffMood) == Polarity::Difference);
    CHECK(polarity_of(Metric::DiffMus) == Polarity::Difference);
    CHECK(polarity_of(Metric::SimPho) == Polarity::Similarity);
    CHECK(default_spec(Metric::SimTop).range->lo == 0.0);
    CHECK(default_spec(Metric::SimSem).range->lo == -1.0);
    CHECK_FALSE(default_spec(Metric::DiffMus).range.has_value());
    CHECK(code_of([] { parse_metric("sim_lyr"); }) == ErrorCode::Usage);
}

TEST_CASE("sampling the full feasible set equals enumeration")
{
    const auto store = testing::corpus_with_sections({2, 3, 1, 2});
    const auto all = all_cross_track_pairs(store);
    REQUIRE(all.size() == count_feasible_pairs(store));
    auto drawn = sample_pairs(store, all.size(), 5);
    std::sort(drawn.begin(), drawn.end());
    CHECK(drawn == all);
    CHECK(sample_pairs(store, 0, 5).empty());
    CHECK(sample_pairs(store, 7, 11) == sample_pairs(store, 7, 11));
    CHECK(sample_pairs(store, 7, 11) != sample_pairs(store, 7, 12));
    CHECK(code_of([&] { sample_pairs(store, all.size() + 1, 5); }) == ErrorCode::NotEnoughPairs);
    CHECK(code_of([] { sample_pairs(testing::corpus_with_sections({4}), 1, 5); }) == ErrorCode::NotEnoughPairs);
}

TEST_CASE("sampled pairs are distinct, ordered, cross-track")
{
    const auto store = testing::corpus_with_sections({5, 1, 3, 4, 2, 6});
    const auto drawn = sample_pairs(store, 40, 3);
    std::set<PairKey> seen(drawn.begin(), drawn.end());
    CHECK(seen.size() == drawn.size());
    for (const auto& k : drawn) {
        CHECK(k.a < k.b);
        CHECK(store.set(k.a).track_id != store.set(k.b).track_id);
    }
}

TEST_CASE("grouping splits at one population sd")
{
    const std::vector<double> v{-2.0, 0.0, 2.0};
    auto g = group_by_metric(v, Polarity::Similarity);
    CHECK(g.bounds.mean == 0.0);
    CHECK(g.bounds.sd == doctest::Approx(std::sqrt(8.0 / 3.0)));
    CHECK(g.labels == std::vector<GroupLabel>{GroupLabel::L, GroupLabel::M, GroupLabel::H});
    g = group_by_metric(v, Polarity::Difference);
    CHECK(g.labels == std::vector<GroupLabel>{GroupLabel::H, GroupLabel::M, GroupLabel::L});

    // values exactly on the boundary are M
    const GroupBoundaries b{0.0, 1.0, -1.0, 1.0};
    CHECK(classify(1.0, b, Polarity::Similarity) == GroupLabel::M);
    CHECK(classify(-1.0, b, Polarity::Difference) == GroupLabel::M);
    CHECK(classify(1.0 + 1e-12, b, Polarity::Similarity) == GroupLabel::H);

    CHECK(code_of([] { group_by_metric(std::vector<double>{1.0}, Polarity::Similarity); }) ==
          ErrorCode::InsufficientSamples);
    CHECK(code_of([] { group_by_metric(std::vector<double>{3.0, 3.0, 3.0}, Polarity::Similarity); }) ==
          ErrorCode::DegenerateDistribution);
}

TEST_CASE("grouping is invariant to positive affine maps")
{
    std::mt19937_64 gen(4);
    std::normal_distribution<double> z;
    std::vector<double> v(500), w(500);
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = z(gen);
        w[i] = 2.5 * v[i] + 10.0;
    }
    CHECK(group_by_metric(v, Polarity::Similarity).labels == group_by_metric(w, Polarity::Similarity).labels);
    CHECK(parse_label("h") == GroupLabel::H);
    CHECK(label_char(GroupLabel::L) == 'L');
    CHECK(code_of([] { parse_label("X"); }) == ErrorCode::MalformedRecord);
}

TEST_CASE("closeness")
{
    const auto spec = default_spec(Metric::SimTop);
    CHECK(closeness(0.67, 0.68, spec) == 0.99);
    CHECK(closeness(0.3, 0.3, spec) == 1.0);
    CHECK(closeness(0.2, 0.7, spec) == closeness(0.7, 0.2, spec));
    CHECK(closeness(-3.0, 3.0, spec) == 0.0);
    CHECK(closeness(0.0, 0.5, default_spec(Metric::SimSem)) == 0.75);
    CHECK(code_of([] { closeness(0.1, 0.2, default_spec(Metric::DiffMus)); }) == ErrorCode::UnresolvedRange);
}

TEST_CASE("empirical ranges come from the population")
{
    std::vector<PairRecord> rs(3);
    rs[0].metrics[Metric::DiffMus] = 0.4;
    rs[1].metrics[Metric::DiffMus] = 1.6;
    rs[2].metrics[Metric::DiffMood] = 2.0;
    const auto specs = resolve_ranges(default_specs(), rs);
    CHECK(specs[index_of(Metric::DiffMus)].range->lo == 0.4);
    CHECK(specs[index_of(Metric::DiffMus)].range->hi == 1.6);
    CHECK_FALSE(specs[index_of(Metric::DiffMood)].range.has_value());
    CHECK(specs[index_of(Metric::SimSem)].range->lo == -1.0);
}

TEST_CASE("triple selection on a constructed pool")
{
    const auto specs = unit_specs();
    std::vector<PairRecord> pool;
    std::vector<GroupLabel> labels;
    auto add = [&](const std::string& id, GroupLabel g, double target, double rest) {
        auto mv = uniform_metrics(rest);
        mv[Metric::SimSem] = target;
        pool.push_back({make_pair_key("r", id), mv});
        labels.push_back(g);
    };
    add("h1", GroupLabel::H, 0.9, 0.500);
    add("h2", GroupLabel::H, 0.8, 0.900);   // far from the others on the controls
    add("m1", GroupLabel::M, 0.5, 0.505);
    add("m2", GroupLabel::M, 0.5, 0.501);
    add("l1", GroupLabel::L, 0.1, 0.498);

    const auto t = select_triples("r", pool, labels, Metric::SimSem, specs);
    REQUIRE(t.has_value());
    CHECK(t->comparison(GroupLabel::H).set_id == "h1");
    CHECK(t->comparison(GroupLabel::M).set_id == "m2");
    CHECK(t->comparison(GroupLabel::L).set_id == "l1");
    CHECK(t->certificates.size() == 5);
    CHECK(t->min_closeness == doctest::Approx(0.997));
    CHECK(verify_triple(*t, specs));

    // tampering with a comparison breaks the certificate
    auto bad = *t;
    bad.comparisons[1].metrics[Metric::SimTop] = 0.9;
    CHECK_FALSE(verify_triple(bad, specs));

    // no L candidate: nothing to select
    auto no_l = labels;
    no_l[4] = GroupLabel::M;
    CHECK_FALSE(select_triples("r", pool, no_l, Metric::SimSem, specs).has_value());

    // above the best attainable closeness
    TripleOptions strict;
    strict.threshold = 0.999;
    CHECK_FALSE(select_triples("r", pool, labels, Metric::SimSem, specs, strict).has_value());
}

TEST_CASE("ties fall to the smallest ids")
{
    const auto specs = unit_specs();
    std::vector<PairRecord> pool;
    std::vector<GroupLabel> labels;
    for (const char* id : {"hb", "ha", "mb", "ma", "lb", "la"}) {
        pool.push_back({make_pair_key("r", id), uniform_metrics(0.5)});
        labels.push_back(id[0] == 'h' ? GroupLabel::H : id[0] == 'm' ? GroupLabel::M : GroupLabel::L);
    }
    TripleOptions opts;
    opts.threshold = 0.0;
    const auto t = select_triples("r", pool, labels, Metric::DiffMus, specs, opts);
    REQUIRE(t.has_value());
    CHECK(t->comparison(GroupLabel::H).set_id == "ha");
    CHECK(t->comparison(GroupLabel::M).set_id == "ma");
    CHECK(t->comparison(GroupLabel::L).set_id == "la");
    CHECK(t->min_closeness == 1.0);
}

TEST_CASE("triple selection matches exhaustive search on random pools")
{
    std::mt19937_64 gen(31);
    for (int trial = 0; trial < 60; ++trial) {
        const auto tp = testing::random_triple_pool(gen, 4 + trial % 9);
        const auto target = kAllMetrics[trial % kMetricCount];
        TripleOptions opts;
        opts.threshold = 0.985;
        opts.cap_per_group = 100;
        const auto got = select_triples(tp.reference, tp.pool, tp.labels, target, tp.specs, opts);
        const auto want = testing::brute_force_triple(tp.reference, tp.pool, tp.labels, target, tp.specs, 0.985);
        REQUIRE(got.has_value() == want.has_value());
        if (!got) continue;
        CHECK(got->comparison(GroupLabel::H).set_id == want->h);
        CHECK(got->comparison(GroupLabel::M).set_id == want->m);
        CHECK(got->comparison(GroupLabel::L).set_id == want->l);
        CHECK(got->min_closeness == want->score);
        CHECK(verify_triple(*got, tp.specs));
    }
}

TEST_CASE("correlation matrix")
{
    std::vector<PairRecord> rs;
    for (int i = 0; i < 20; ++i) {
        PairRecord r;
        r.metrics[Metric::SimTop] = i * 0.05;
        r.metrics[Metric::SimSem] = 2.0 * i * 0.05 + 1.0;
        r.metrics[Metric::DiffMus] = (i * 7) % 5;
        r.metrics[Metric::DiffMood] = 3.0;
        if (i < 10) r.metrics[Metric::SimAud] = -static_cast<double>(i);
        rs.push_back(r);
    }
    const auto m = metric_correlation_matrix(rs);
    const auto at = [&](Metric a, Metric b) { return m.r[index_of(a)][index_of(b)]; };
    for (auto x : kAllMetrics) CHECK(at(x, x) == 1.0);
    CHECK(std::abs(*at(Metric::SimTop, Metric::SimSem) - 1.0) < 1e-12);
    CHECK(at(Metric::SimSem, Metric::SimTop) == at(Metric::SimTop, Metric::SimSem));
    CHECK(std::abs(*at(Metric::SimTop, Metric::SimAud) + 1.0) < 1e-12);
    CHECK(m.n[index_of(Metric::SimTop)][index_of(Metric::SimAud)] == 10);
    CHECK_FALSE(at(Metric::SimTop, Metric::DiffMood).has_value());
    CHECK_FALSE(at(Metric::SimTop, Metric::SimPho).has_value());
}

TEST_CASE("reading rankings")
{
    const auto ok = read_rankings(testing::fixture("ordered_ranks.csv"));
    CHECK(ok.size() == 6 * 3 * 3);

    auto parse = [](const std::string& s) {
        std::istringstream in(s);
        return read_rankings(in);
    };
    const std::string header = "question_id,rater_id,group_label,rank\n";
    CHECK(parse(header + "q1,r1,H,1\nq1,r1,M,2\nq1,r1,L,3\n").size() == 3);
    CHECK(code_of([&] { parse("question,rater,group,rank\n"); }) == ErrorCode::MalformedRecord);
    CHECK(code_of([&] { parse(header + "q1,r1,H,1\nq1,r1,M,2\nq1,r1,L,4\n"); }) == ErrorCode::MalformedRecord);
    CHECK(code_of([&] { parse(header + "q1,r1,H,1\nq1,r1,M,1\nq1,r1,L,3\n"); }) == ErrorCode::MalformedRecord);
    CHECK(code_of([&] { parse(header + "q1,r1,H,1\nq1,r1,M,2\n"); }) == ErrorCode::MalformedRecord);
    CHECK(code_of([&] { parse(header + "q1,r1,H,1\nq1,r1,Q,2\nq1,r1,L,3\n"); }) == ErrorCode::MalformedRecord);

    const auto s = rank_summary(ok, GroupLabel::H);
    CHECK(s.mean == 1.0);
    CHECK(s.n == 18);
}

TEST_CASE("metric rank correlation follows the sign convention")
{
    auto question = [](const std::string& id, Metric target, double h, double m, double l) {
        Question q;
        q.question_id = id;
        q.triple.target = target;
        const double v[3] = {h, m, l};
        for (int g = 0; g < 3; ++g) q.triple.comparisons[g].metrics[target] = v[g];
        return q;
    };
    const std::vector<Question> qs = {question("a", Metric::SimSem, 0.9, 0.5, 0.1),
                                      question("b", Metric::SimSem, 0.8, 0.4, 0.2),
                                      question("c", Metric::DiffMus, 0.2, 0.5, 0.8)};
    std::vector<RankRecord> ranks;
    for (const auto& q : qs)
        for (const char* rater : {"x", "y"})
            for (int g = 0; g < 3; ++g) ranks.push_back({q.question_id, rater, static_cast<GroupLabel>(g), g + 1});

    const auto rc = metric_rank_correlation(qs, ranks);
    REQUIRE(rc.size() == 2);
    CHECK(rc[0].metric == Metric::SimSem);
    CHECK(rc[0].n == 12);
    CHECK(rc[0].expected_sign == -1);
    CHECK(rc[0].result->r < -0.95);
    CHECK(rc[1].metric == Metric::DiffMus);
    CHECK(rc[1].expected_sign == 1);
    CHECK(rc[1].result->r == doctest::Approx(1.0));

    ranks.push_back({"zz", "x", GroupLabel::H, 1});
    CHECK(code_of([&] { metric_rank_correlation(qs, ranks); }) == ErrorCode::UnknownId);
    CHECK(code_of([&] { metric_rank_correlation(qs, std::vector<RankRecord>{}); }) == ErrorCode::DegenerateInput);
}

TEST_CASE("pair evaluation on the fixture corpus")
{
    const testing::FixtureWorld w;
    const auto& store = w.store;
    const auto& aud = w.audio;
    const auto p = w.providers();
    MetricContext ctx(p);

    const auto same = ctx.evaluate("t03:1", "t20:0");
    CHECK_FALSE(same[Metric::SimTop].has_value());   // no topic model
    CHECK(*same[Metric::SimSem] == doctest::Approx(1.0));
    CHECK(*same[Metric::SimPho] == doctest::Approx(1.0));
    const auto& ph = store.set("t03:1").phonemes;
    PhonemeSequence doubled = ph;
    doubled.insert(doubled.end(), ph.begin(), ph.end());
    CHECK(std::abs(*same[Metric::DiffMus] - pho(doubled)) < 1e-12);

    const auto moods = ctx.evaluate("t01:0", "t02:0");
    CHECK(std::abs(*moods[Metric::DiffMood] - 4.2048) < 5e-5);
    CHECK(*moods[Metric::SimAud] == doctest::Approx(cosine(aud.at("t01"), aud.at("t02"))));
    CHECK_FALSE(ctx.evaluate("t07:0", "t01:0")[Metric::SimAud].has_value());

    const auto pairs = sample_pairs(store, 300, 9);
    const auto serial = evaluate_pairs(pairs, ctx, 1);
    MetricContext fresh(p);
    const auto parallel = evaluate_pairs(pairs, fresh, 4);
    CHECK(serial.records == parallel.records);
    CHECK(serial.unavailable == parallel.unavailable);
    CHECK(serial.unavailable[index_of(Metric::SimTop)] == 300);
    CHECK(serial.unavailable[index_of(Metric::SimAud)] > 0);
    for (std::size_t i = 0; i < pairs.size(); ++i) CHECK(serial.records[i].key == pairs[i]);
}
