#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lyricsim {

using Phoneme = std::string;
using PhonemeSequence = std::vector<Phoneme>;

enum class Genre { Rock, Pop, Country, HipHop, Electronic, Rnb, Other };

std::string_view genre_name(Genre g) noexcept;
/// Case-insensitive; accepts "hip-hop"/"hiphop", "rnb"/"r&b". Unrecognized names map to Other.
Genre parse_genre(std::string_view name);

struct Mood {
    double valence = 0.0;
    double arousal = 0.0;

    friend bool operator==(const Mood&, const Mood&) = default;
};

struct Track {
    std::string track_id;
    std::string title;
    std::string artist;
    Genre genre = Genre::Other;
    std::optional<Mood> mood;
    std::vector<std::string> lyric_set_ids;

    friend bool operator==(const Track&, const Track&) = default;
};

/// One lyrical section of a track; the unit every metric compares.
struct LyricSet {
    std::string set_id;
    std::string track_id;
    std::size_t section_index = 0;
    std::vector<std::string> lines;
    std::vector<std::string> tokens;
    PhonemeSequence phonemes;
    double phoneme_coverage = 1.0;

    friend bool operator==(const LyricSet&, const LyricSet&) = default;
};

/// The 39 stress-free ARPABET phonemes, sorted.
const std::vector<std::string>& arpabet_inventory();
bool is_arpabet(std::string_view symbol);

class PronLexicon {
public:
    /// Keeps the first pronunciation seen for a word; returns false if the word was already present.
    bool insert(std::string_view word, PhonemeSequence phonemes);
    /// Case-insensitive lookup.
    const PhonemeSequence* find(std::string_view word) const;

    std::size_t size() const noexcept { return entries_.size(); }
    const std::unordered_map<std::string, PhonemeSequence>& entries() const noexcept { return entries_; }

private:
    std::unordered_map<std::string, PhonemeSequence> entries_;
};

struct LexiconLineError {
    std::size_t line = 0;
    std::string message;
};

struct LexiconParse {
    PronLexicon lexicon;
    std::vector<LexiconLineError> errors;
};

/// Reads a CMU-style dictionary ("WORD  PH1 PH2 ..."). Comment lines start
/// with ";;;". Stress digits are stripped, "WORD(2)" variants after the first
/// are dropped. Malformed lines are skipped and reported.
LexiconParse parse_lexicon(std::istream& source);
LexiconParse load_lexicon(const std::filesystem::path& path);

/// Lowercase word tokens. Apostrophes are kept between word characters;
/// other punctuation and digits separate. U+2019 is read as an apostrophe.
std::vector<std::string> tokenize(const std::vector<std::string>& lines);
std::vector<std::string> tokenize(std::string_view line);

struct Phonemization {
    PhonemeSequence phonemes;
    double coverage = 1.0;
    std::size_t covered = 0;
};

/// Concatenates the pronunciations of in-lexicon tokens; OOV tokens are skipped and counted.
Phonemization phonemize(const std::vector<std::string>& tokens, const PronLexicon& lexicon);

/// One input line of the corpus file.
struct TrackRecord {
    std::string track_id;
    std::string title;
    std::string artist;
    std::string genre;
    std::optional<double> valence;
    std::optional<double> arousal;
    std::vector<std::vector<std::string>> sections;
};

/// Parses line-delimited JSON track records. Throws MalformedRecord with the line number.
std::vector<TrackRecord> read_track_records(std::istream& in);
std::vector<TrackRecord> read_track_records(const std::filesystem::path& path);

struct IngestStats {
    std::size_t track_count = 0;
    std::size_t lyric_set_count = 0;
    double mean_sections_per_track = 0.0;
    double mean_phoneme_coverage = 0.0;

    friend bool operator==(const IngestStats&, const IngestStats&) = default;
};

/// Immutable store of tracks and lyric sets, ordered by id.
class CorpusStore {
public:
    const std::map<std::string, Track>& tracks() const noexcept { return tracks_; }
    const std::map<std::string, LyricSet>& lyric_sets() const noexcept { return lyric_sets_; }
    const IngestStats& stats() const noexcept { return stats_; }

    const Track* find_track(std::string_view id) const;
    const LyricSet* find_set(std::string_view id) const;
    const LyricSet& set(std::string_view id) const;   ///< throws UnknownId
    const Track& track(std::string_view id) const;    ///< throws UnknownId

    /// Lyric-set ids in sorted order.
    std::vector<std::string> set_ids() const;

    /// Writes manifest.json, tracks.jsonl and lyric_sets.jsonl into dir.
    void save(const std::filesystem::path& dir) const;
    static CorpusStore load(const std::filesystem::path& dir);

    friend bool operator==(const CorpusStore&, const CorpusStore&) = default;

private:
    friend class CorpusBuilder;
    std::map<std::string, Track> tracks_;
    std::map<std::string, LyricSet> lyric_sets_;
    IngestStats stats_;
};

inline constexpr int kCorpusFormatVersion = 1;

struct IngestResult {
    CorpusStore store;
    std::size_t empty_sections = 0;   ///< sections skipped for having no non-blank line
};

/// Builds a store. Throws DuplicateTrackId, or MalformedRecord for a record without sections.
/// Set ids are "<track_id>:<section index>".
IngestResult ingest_corpus(const std::vector<TrackRecord>& records, const PronLexicon& lexicon);

/// C(N,2) minus the same-track pairs.
std::uint64_t count_feasible_pairs(const CorpusStore& store);

} // namespace lyricsim
