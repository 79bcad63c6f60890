#pragma once

#include "lyricsim/corpus.hpp"

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

namespace testing {

inline std::filesystem::path fixture(const std::string& name)
{
    return std::filesystem::path(LYRICSIM_FIXTURE_DIR) / name;
}

inline std::filesystem::path data_file(const std::string& name)
{
    return std::filesystem::path(LYRICSIM_DATA_DIR) / name;
}

inline lyricsim::PronLexicon small_lexicon()
{
    std::istringstream in("RING  R IH1 NG\nSING  S IH1 NG\nTHE  DH AH0\nNIGHT  N AY1 T\nLIGHT  L AY1 T\n");
    return lyricsim::parse_lexicon(in).lexicon;
}

/// One track per entry, with that many one-line sections.
inline lyricsim::CorpusStore corpus_with_sections(const std::vector<std::size_t>& counts)
{
    std::vector<lyricsim::TrackRecord> records;
    for (std::size_t t = 0; t < counts.size(); ++t) {
        lyricsim::TrackRecord r;
        r.track_id = "track" + std::to_string(1000 + t);
        r.title = "title";
        r.artist = "artist";
        r.genre = "pop";
        for (std::size_t s = 0; s < counts[t]; ++s) r.sections.push_back({"ring the night " + std::to_string(s)});
        records.push_back(std::move(r));
    }
    return lyricsim::ingest_corpus(records, small_lexicon()).store;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name)
{
    auto p = std::filesystem::temp_directory_path() / ("lyricsim-test-" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

} // namespace testing
