#pragma once

#include "lyricsim/corpus.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lyricsim {

// --- shared vector primitives ---------------------------------------------

/// Dot product accumulated in long double with pairwise summation.
double dot(std::span<const double> u, std::span<const double> v);
double norm(std::span<const double> u);

/// u.v / (|u||v|), clamped to [-1, 1]. Throws DimensionMismatch, ZeroVector.
double cosine(std::span<const double> u, std::span<const double> v);

/// Throws DimensionMismatch.
double euclidean(std::span<const double> u, std::span<const double> v);

// --- embedding stores -------------------------------------------------------

enum class EmbeddingKind { Semantic, Audio, Mood };

std::string_view kind_name(EmbeddingKind kind) noexcept;
/// Throws Usage for unknown names.
EmbeddingKind parse_kind(std::string_view name);
/// 384 for semantic, 200 for audio, 2 for mood.
std::size_t expected_dim(EmbeddingKind kind) noexcept;

/// Externally produced vectors keyed by id: lyric-set ids for semantic,
/// track ids for audio and mood.
class EmbeddingStore {
public:
    EmbeddingStore(EmbeddingKind kind, std::size_t dim) : kind_(kind), dim_(dim) {}

    EmbeddingKind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return vectors_.size(); }

    /// Throws DimensionMismatch, DuplicateId, MalformedRecord (non-finite entry).
    void insert(const std::string& id, std::vector<double> vec);
    /// Replaces silently; used when merging mood sources.
    void assign(const std::string& id, std::vector<double> vec);

    const std::vector<double>* find(std::string_view id) const;
    /// Throws MissingVector.
    const std::vector<double>& at(std::string_view id) const;

    const std::map<std::string, std::vector<double>>& vectors() const noexcept { return vectors_; }

    friend bool operator==(const EmbeddingStore&, const EmbeddingStore&) = default;

private:
    EmbeddingKind kind_;
    std::size_t dim_;
    std::map<std::string, std::vector<double>> vectors_;
};

/// Reads the vector file format: a header line {"kind": ..., "dim": ...}
/// then one {"id": ..., "vec": [...]} object per line.
/// Throws DimensionMismatch (header or record dim disagrees with kind),
/// DuplicateId, MalformedRecord (with line number).
EmbeddingStore load_vectors(std::istream& in, EmbeddingKind kind);
EmbeddingStore load_vectors(const std::filesystem::path& path, EmbeddingKind kind);

/// Writes in id order with round-trip decimal precision.
void write_vectors(std::ostream& out, const EmbeddingStore& store);
void write_vectors(const std::filesystem::path& path, const EmbeddingStore& store);

/// Mood vectors from corpus metadata.
EmbeddingStore mood_store_from_corpus(const CorpusStore& corpus);

struct MoodMerge {
    EmbeddingStore store;
    std::vector<std::string> conflicts;   ///< track ids where the file overrode differing metadata
};

/// Corpus metadata overlaid by the file; the file wins on conflict.
MoodMerge merge_mood(const EmbeddingStore& from_corpus, const EmbeddingStore& from_file);

// --- metrics --------------------------------------------------------------

/// Cosine between the semantic vectors of two lyric sets. Throws MissingVector.
double sim_sem(std::string_view set_a, std::string_view set_b, const EmbeddingStore& semantic);
/// Cosine between the audio vectors of two tracks. Throws MissingVector.
double sim_aud(std::string_view track_a, std::string_view track_b, const EmbeddingStore& audio);
/// Euclidean distance between (valence, arousal) of two tracks. Throws MissingVector.
double diff_mood(std::string_view track_a, std::string_view track_b, const EmbeddingStore& mood);

} // namespace lyricsim
