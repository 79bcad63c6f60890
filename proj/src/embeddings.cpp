#include "lyricsim/embeddings.hpp"

#include "lyricsim/error.hpp"
#include "lyricsim/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace lyricsim {

namespace {

long double pairwise_dot(const double* u, const double* v, std::size_t n)
{
    if (n <= 16) {
        long double s = 0.0L;
        for (std::size_t i = 0; i < n; ++i) s += static_cast<long double>(u[i]) * static_cast<long double>(v[i]);
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_dot(u, v, half) + pairwise_dot(u + half, v + half, n - half);
}

void require_same_dim(std::span<const double> u, std::span<const double> v)
{
    if (u.size() != v.size()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "vectors of length " + std::to_string(u.size()) + " and " + std::to_string(v.size()));
    }
}

} // namespace

double dot(std::span<const double> u, std::span<const double> v)
{
    require_same_dim(u, v);
    return static_cast<double>(pairwise_dot(u.data(), v.data(), u.size()));
}

double norm(std::span<const double> u)
{
    return static_cast<double>(std::sqrt(pairwise_dot(u.data(), u.data(), u.size())));
}

double cosine(std::span<const double> u, std::span<const double> v)
{
    require_same_dim(u, v);
    const long double uv = pairwise_dot(u.data(), v.data(), u.size());
    const long double uu = pairwise_dot(u.data(), u.data(), u.size());
    const long double vv = pairwise_dot(v.data(), v.data(), v.size());
    if (uu == 0.0L || vv == 0.0L) {
        throw Error(ErrorCode::ZeroVector, "cosine of a zero vector");
    }
    const auto c = static_cast<double>(uv / (std::sqrt(uu) * std::sqrt(vv)));
    return std::clamp(c, -1.0, 1.0);
}

double euclidean(std::span<const double> u, std::span<const double> v)
{
    require_same_dim(u, v);
    long double s = 0.0L;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const long double d = static_cast<long double>(u[i]) - static_cast<long double>(v[i]);
        s += d * d;
    }
    return static_cast<double>(std::sqrt(s));
}

std::string_view kind_name(EmbeddingKind kind) noexcept
{
    switch (kind) {
    case EmbeddingKind::Semantic: return "semantic";
    case EmbeddingKind::Audio: return "audio";
    case EmbeddingKind::Mood: return "mood";
    }
    return "semantic";
}

EmbeddingKind parse_kind(std::string_view name)
{
    if (name == "semantic") return EmbeddingKind::Semantic;
    if (name == "audio") return EmbeddingKind::Audio;
    if (name == "mood") return EmbeddingKind::Mood;
    throw Error(ErrorCode::Usage, "unknown vector kind '" + std::string(name) + "'");
}

std::size_t expected_dim(EmbeddingKind kind) noexcept
{
    switch (kind) {
    case EmbeddingKind::Semantic: return 384;
    case EmbeddingKind::Audio: return 200;
    case EmbeddingKind::Mood: return 2;
    }
    return 0;
}

void EmbeddingStore::insert(const std::string& id, std::vector<double> vec)
{
    if (vec.size() != dim_) {
        throw Error(ErrorCode::DimensionMismatch, "vector '" + id + "' has " + std::to_string(vec.size()) +
                                                      " entries, expected " + std::to_string(dim_));
    }
    if (!std::all_of(vec.begin(), vec.end(), [](double x) { return std::isfinite(x); })) {
        throw Error(ErrorCode::MalformedRecord, "vector '" + id + "' has a non-finite entry");
    }
    if (!vectors_.emplace(id, std::move(vec)).second) {
        throw Error(ErrorCode::DuplicateId, id);
    }
}

void EmbeddingStore::assign(const std::string& id, std::vector<double> vec)
{
    if (vec.size() != dim_) {
        throw Error(ErrorCode::DimensionMismatch, "vector '" + id + "' has wrong dimension");
    }
    vectors_[id] = std::move(vec);
}

const std::vector<double>* EmbeddingStore::find(std::string_view id) const
{
    const auto it = vectors_.find(std::string(id));
    return it == vectors_.end() ? nullptr : &it->second;
}

const std::vector<double>& EmbeddingStore::at(std::string_view id) const
{
    if (const auto* v = find(id)) return *v;
    throw Error(ErrorCode::MissingVector,
                "no " + std::string(kind_name(kind_)) + " vector for '" + std::string(id) + "'");
}

EmbeddingStore load_vectors(std::istream& in, EmbeddingKind kind)
{
    const std::size_t dim = expected_dim(kind);
    EmbeddingStore store(kind, dim);

    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto where = "vector file line " + std::to_string(line_no);

        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::MalformedRecord, where + ": " + e.what());
        }
        if (!j.is_object()) {
            throw Error(ErrorCode::MalformedRecord, where + ": expected an object");
        }

        if (!have_header) {
            if (!j.contains("kind") || !j.contains("dim") || !j["kind"].is_string() || !j["dim"].is_number_unsigned()) {
                throw Error(ErrorCode::MalformedRecord, where + ": missing header with kind and dim");
            }
            const auto file_kind = j["kind"].get<std::string>();
            if (file_kind != kind_name(kind)) {
                throw Error(ErrorCode::MalformedRecord,
                            where + ": file kind '" + file_kind + "' but '" + std::string(kind_name(kind)) + "' requested");
            }
            if (j["dim"].get<std::size_t>() != dim) {
                throw Error(ErrorCode::DimensionMismatch, where + ": header dim " + j["dim"].dump() +
                                                              ", " + std::string(kind_name(kind)) + " requires " +
                                                              std::to_string(dim));
            }
            have_header = true;
            continue;
        }

        if (!j.contains("id") || !j["id"].is_string() || !j.contains("vec") || !j["vec"].is_array()) {
            throw Error(ErrorCode::MalformedRecord, where + ": record needs string 'id' and array 'vec'");
        }
        std::vector<double> vec;
        vec.reserve(j["vec"].size());
        for (const auto& x : j["vec"]) {
            if (!x.is_number()) throw Error(ErrorCode::MalformedRecord, where + ": non-numeric entry");
            vec.push_back(x.get<double>());
        }
        try {
            store.insert(j["id"].get<std::string>(), std::move(vec));
        } catch (const Error& e) {
            throw Error(e.code(), where + ": " + e.detail());
        }
    }
    if (!have_header) {
        throw Error(ErrorCode::MalformedRecord, "vector file has no header line");
    }
    return store;
}

EmbeddingStore load_vectors(const std::filesystem::path& path, EmbeddingKind kind)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return load_vectors(in, kind);
}

void write_vectors(std::ostream& out, const EmbeddingStore& store)
{
    nlohmann::json header;
    header["dim"] = store.dim();
    header["kind"] = std::string(kind_name(store.kind()));
    out << header.dump() << '\n';
    for (const auto& [id, vec] : store.vectors()) {
        nlohmann::json rec;
        rec["id"] = id;
        rec["vec"] = vec;
        out << rec.dump() << '\n';
    }
}

void write_vectors(const std::filesystem::path& path, const EmbeddingStore& store)
{
    std::ostringstream ss;
    write_vectors(ss, store);
    write_text_file(path, ss.str());
}

EmbeddingStore mood_store_from_corpus(const CorpusStore& corpus)
{
    EmbeddingStore store(EmbeddingKind::Mood, 2);
    for (const auto& [id, track] : corpus.tracks()) {
        if (track.mood) {
            store.insert(id, {track.mood->valence, track.mood->arousal});
        }
    }
    return store;
}

MoodMerge merge_mood(const EmbeddingStore& from_corpus, const EmbeddingStore& from_file)
{
    MoodMerge merged{from_corpus, {}};
    for (const auto& [id, vec] : from_file.vectors()) {
        if (const auto* existing = from_corpus.find(id); existing != nullptr && *existing != vec) {
            merged.conflicts.push_back(id);
        }
        merged.store.assign(id, vec);
    }
    return merged;
}

double sim_sem(std::string_view set_a, std::string_view set_b, const EmbeddingStore& semantic)
{
    return cosine(semantic.at(set_a), semantic.at(set_b));
}

double sim_aud(std::string_view track_a, std::string_view track_b, const EmbeddingStore& audio)
{
    return cosine(audio.at(track_a), audio.at(track_b));
}

double diff_mood(std::string_view track_a, std::string_view track_b, const EmbeddingStore& mood)
{
    return euclidean(mood.at(track_a), mood.at(track_b));
}

} // namespace lyricsim
