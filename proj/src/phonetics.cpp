#include "lyricsim/phonetics.hpp"

#include "lyricsim/embeddings.hpp"
#include "lyricsim/error.hpp"
#include "lyricsim/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace lyricsim {

void PhonemeFeatureTable::add(const std::string& phoneme, std::vector<std::string> features)
{
    std::sort(features.begin(), features.end());
    features.erase(std::unique(features.begin(), features.end()), features.end());
    if (features.empty()) {
        throw Error(ErrorCode::InvalidFeatureTable, "phoneme " + phoneme + " has no features");
    }
    for (const auto& f : features) {
        if (f == kBeginFeature || f == kEndFeature) {
            throw Error(ErrorCode::InvalidFeatureTable, "phoneme " + phoneme + " uses reserved feature '" + f + "'");
        }
    }
    if (!table_.emplace(phoneme, std::move(features)).second) {
        throw Error(ErrorCode::InvalidFeatureTable, "phoneme " + phoneme + " listed twice");
    }
}

const std::vector<std::string>& PhonemeFeatureTable::features(const std::string& phoneme) const
{
    const auto it = table_.find(phoneme);
    if (it == table_.end()) {
        throw Error(ErrorCode::UnknownPhoneme, "'" + phoneme + "' is not in the feature table");
    }
    return it->second;
}

PhonemeFeatureTable PhonemeFeatureTable::parse(std::istream& in)
{
    PhonemeFeatureTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string phoneme;
        std::string list;
        if (!(fields >> phoneme)) continue;
        if (!(fields >> list)) {
            throw Error(ErrorCode::InvalidFeatureTable,
                        "line " + std::to_string(line_no) + ": no features for " + phoneme);
        }
        std::string extra;
        if (fields >> extra) {
            throw Error(ErrorCode::InvalidFeatureTable,
                        "line " + std::to_string(line_no) + ": features must be one comma-separated list");
        }
        std::vector<std::string> features;
        std::stringstream parts(list);
        std::string f;
        while (std::getline(parts, f, ',')) {
            if (!f.empty()) features.push_back(f);
        }
        try {
            table.add(phoneme, std::move(features));
        } catch (const Error& e) {
            throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.detail());
        }
    }
    return table;
}

PhonemeFeatureTable PhonemeFeatureTable::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open feature table " + path.string());
    return parse(in);
}

FeaturePairHistogram feature_pairs(const PhonemeSequence& phonemes, const PhonemeFeatureTable& table)
{
    FeaturePairHistogram hist;
    if (phonemes.empty()) {
        return hist;
    }
    static const std::vector<std::string> begin_set{kBeginFeature};
    static const std::vector<std::string> end_set{kEndFeature};

    const std::vector<std::string>* prev = &begin_set;
    auto accumulate = [&](const std::vector<std::string>& next) {
        for (const auto& a : *prev) {
            for (const auto& b : next) {
                ++hist.counts[{a, b}];
            }
        }
        hist.total_count += prev->size() * next.size();
        prev = &next;
    };
    for (const auto& ph : phonemes) {
        accumulate(table.features(ph));
    }
    accumulate(end_set);
    return hist;
}

namespace {

std::vector<double> frequencies(const FeaturePairHistogram& hist, const std::map<FeaturePair, std::size_t>& index,
                                std::size_t& dropped)
{
    std::vector<double> freq(index.size(), 0.0);
    const double total = static_cast<double>(hist.total_count);
    for (const auto& [pair, count] : hist.counts) {
        const auto it = index.find(pair);
        if (it == index.end()) {
            ++dropped;
            continue;
        }
        freq[it->second] = static_cast<double>(count) / total;
    }
    return freq;
}

} // namespace

PhoneticVector PcaModel::project(const std::vector<double>& frequency) const
{
    if (frequency.size() != mean.size()) {
        throw Error(ErrorCode::DimensionMismatch, "frequency vector does not match the PCA pair space");
    }
    std::vector<double> centered(frequency.size());
    for (std::size_t i = 0; i < frequency.size(); ++i) centered[i] = frequency[i] - mean[i];
    PhoneticVector out(components.size());
    for (std::size_t c = 0; c < components.size(); ++c) {
        out[c] = dot(components[c], centered);
    }
    return out;
}

PcaModel fit_pca(const std::vector<FeaturePairHistogram>& histograms, const PcaOptions& options)
{
    PcaModel model;
    std::set<FeaturePair> space;
    for (const auto& h : histograms) {
        if (h.total_count == 0) {
            throw Error(ErrorCode::InsufficientData, "PCA input contains an empty histogram");
        }
        for (const auto& [pair, _] : h.counts) space.insert(pair);
    }
    model.pairs.assign(space.begin(), space.end());
    for (std::size_t i = 0; i < model.pairs.size(); ++i) model.pair_index.emplace(model.pairs[i], i);

    std::vector<std::vector<double>> rows;
    rows.reserve(histograms.size());
    for (const auto& h : histograms) {
        std::size_t dropped = 0;
        rows.push_back(frequencies(h, model.pair_index, dropped));
    }

    auto pc = fit_principal_components(rows, options);
    model.mean = std::move(pc.mean);
    model.components = std::move(pc.components);
    model.explained_variance = std::move(pc.explained_variance);
    return model;
}

PhoneticProjection phonetic_vector(const FeaturePairHistogram& hist, const PcaModel& model)
{
    if (hist.total_count == 0) {
        throw Error(ErrorCode::EmptyHistogram, "cannot project an empty feature-pair histogram");
    }
    PhoneticProjection out;
    out.vector = model.project(frequencies(hist, model.pair_index, out.dropped_pairs));
    return out;
}

double sim_pho(const PhoneticVector& p, const PhoneticVector& q)
{
    return cosine(p, q);
}

double pho(const PhonemeSequence& phonemes)
{
    if (phonemes.size() < 2) {
        throw Error(ErrorCode::TooShort, "pho needs at least two phonemes, got " + std::to_string(phonemes.size()));
    }
    std::set<std::pair<std::string_view, std::string_view>> unique;
    for (std::size_t i = 0; i + 1 < phonemes.size(); ++i) {
        unique.emplace(phonemes[i], phonemes[i + 1]);
    }
    return static_cast<double>(unique.size()) / static_cast<double>(phonemes.size() - 1);
}

double diff_mus(const PhonemeSequence& a, const PhonemeSequence& b)
{
    const double pa = pho(a);
    const double pb = pho(b);
    PhonemeSequence joined;
    joined.reserve(a.size() + b.size());
    joined.insert(joined.end(), a.begin(), a.end());
    joined.insert(joined.end(), b.begin(), b.end());
    return std::abs(pa - pb) + pho(joined);
}

void PcaModel::save(const std::filesystem::path& path) const
{
    nlohmann::json j;
    j["format_version"] = kPcaFormatVersion;
    nlohmann::json pairs_json = nlohmann::json::array();
    for (const auto& [a, b] : pairs) pairs_json.push_back({a, b});
    j["pair_index"] = std::move(pairs_json);
    j["mean"] = mean;
    j["components"] = components;
    j["explained_variance"] = explained_variance;
    write_text_file(path, j.dump() + "\n");
}

PcaModel PcaModel::load(const std::filesystem::path& path)
{
    const auto j = read_json_file(path);
    try {
        if (j.at("format_version").get<int>() != kPcaFormatVersion) {
            throw Error(ErrorCode::MalformedRecord, "unsupported PCA model version in " + path.string());
        }
        PcaModel m;
        for (const auto& p : j.at("pair_index")) {
            m.pairs.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
        }
        for (std::size_t i = 0; i < m.pairs.size(); ++i) m.pair_index.emplace(m.pairs[i], i);
        m.mean = j.at("mean").get<std::vector<double>>();
        m.components = j.at("components").get<std::vector<std::vector<double>>>();
        m.explained_variance = j.at("explained_variance").get<std::vector<double>>();
        if (m.mean.size() != m.pairs.size()) {
            throw Error(ErrorCode::DimensionMismatch, "PCA mean does not match pair index");
        }
        for (const auto& c : m.components) {
            if (c.size() != m.pairs.size()) throw Error(ErrorCode::DimensionMismatch, "PCA component length");
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedRecord, path.string() + ": " + e.what());
    }
}

} // namespace lyricsim
