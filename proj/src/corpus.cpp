#include "lyricsim/corpus.hpp"

#include "lyricsim/error.hpp"
#include "lyricsim/json_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

namespace lyricsim {

namespace {

std::string to_upper(std::string_view s)
{
    std::string out(s);
    for (auto& c : out) {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return out;
}

std::string to_lower(std::string_view s)
{
    std::string out(s);
    for (auto& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

// "READ(2)" -> ("READ", 2); plain words have variant 1.
std::pair<std::string_view, int> split_variant(std::string_view word)
{
    if (word.size() >= 3 && word.back() == ')') {
        const auto open = word.rfind('(');
        if (open != std::string_view::npos && open > 0) {
            const auto digits = word.substr(open + 1, word.size() - open - 2);
            if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](char c) {
                    return std::isdigit(static_cast<unsigned char>(c)) != 0;
                })) {
                return {word.substr(0, open), std::stoi(std::string(digits))};
            }
        }
    }
    return {word, 1};
}

bool is_blank(std::string_view s)
{
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; });
}

} // namespace

std::string_view genre_name(Genre g) noexcept
{
    switch (g) {
    case Genre::Rock: return "rock";
    case Genre::Pop: return "pop";
    case Genre::Country: return "country";
    case Genre::HipHop: return "hip-hop";
    case Genre::Electronic: return "electronic";
    case Genre::Rnb: return "rnb";
    case Genre::Other: return "other";
    }
    return "other";
}

Genre parse_genre(std::string_view name)
{
    const auto g = to_lower(name);
    if (g == "rock") return Genre::Rock;
    if (g == "pop") return Genre::Pop;
    if (g == "country") return Genre::Country;
    if (g == "hip-hop" || g == "hiphop" || g == "hip hop" || g == "rap") return Genre::HipHop;
    if (g == "electronic") return Genre::Electronic;
    if (g == "rnb" || g == "r&b" || g == "r'n'b") return Genre::Rnb;
    return Genre::Other;
}

const std::vector<std::string>& arpabet_inventory()
{
    static const std::vector<std::string> inventory = [] {
        std::vector<std::string> v{
            "AA", "AE", "AH", "AO", "AW", "AY", "B",  "CH", "D",  "DH", "EH", "ER", "EY",
            "F",  "G",  "HH", "IH", "IY", "JH", "K",  "L",  "M",  "N",  "NG", "OW", "OY",
            "P",  "R",  "S",  "SH", "T",  "TH", "UH", "UW", "V",  "W",  "Y",  "Z",  "ZH"};
        std::sort(v.begin(), v.end());
        return v;
    }();
    return inventory;
}

bool is_arpabet(std::string_view symbol)
{
    const auto& inv = arpabet_inventory();
    return std::binary_search(inv.begin(), inv.end(), symbol);
}

bool PronLexicon::insert(std::string_view word, PhonemeSequence phonemes)
{
    return entries_.try_emplace(to_upper(word), std::move(phonemes)).second;
}

const PhonemeSequence* PronLexicon::find(std::string_view word) const
{
    const auto it = entries_.find(to_upper(word));
    return it == entries_.end() ? nullptr : &it->second;
}

LexiconParse parse_lexicon(std::istream& source)
{
    LexiconParse result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(source, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (is_blank(line) || line.rfind(";;;", 0) == 0) {
            continue;
        }

        std::istringstream fields(line);
        std::string word;
        fields >> word;

        PhonemeSequence phonemes;
        std::string token;
        std::string bad;
        while (fields >> token) {
            std::string symbol = token;
            if (!symbol.empty() && symbol.back() >= '0' && symbol.back() <= '2') {
                symbol.pop_back();
            }
            if (!is_arpabet(symbol)) {
                bad = token;
                break;
            }
            phonemes.push_back(std::move(symbol));
        }

        if (!bad.empty()) {
            result.errors.push_back({line_no, "unparseable phoneme '" + bad + "' for " + word});
            continue;
        }
        if (phonemes.empty()) {
            result.errors.push_back({line_no, "no phonemes for " + word});
            continue;
        }
        const auto [base, variant] = split_variant(word);
        // only the first listed pronunciation of a word is kept
        if (variant > 1 && result.lexicon.find(base) != nullptr) {
            continue;
        }
        result.lexicon.insert(base, std::move(phonemes));
    }
    return result;
}

LexiconParse load_lexicon(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open lexicon " + path.string());
    }
    return parse_lexicon(in);
}

std::vector<std::string> tokenize(std::string_view line)
{
    std::vector<std::string> tokens;
    std::string current;

    auto flush = [&] {
        while (!current.empty() && current.back() == '\'') {
            current.pop_back();
        }
        if (!current.empty()) {
            tokens.push_back(std::move(current));
        }
        current.clear();
    };

    for (std::size_t i = 0; i < line.size(); ++i) {
        const auto c = static_cast<unsigned char>(line[i]);
        bool apostrophe = false;
        std::size_t width = 1;
        if (c == '\'') {
            apostrophe = true;
        } else if (c == 0xE2 && i + 2 < line.size() && static_cast<unsigned char>(line[i + 1]) == 0x80) {
            // U+2000..U+203F general punctuation; only U+2019 joins a word
            if (static_cast<unsigned char>(line[i + 2]) != 0x99) {
                flush();
                i += 2;
                continue;
            }
            apostrophe = true;
            width = 3;
        }

        if (apostrophe) {
            // leading apostrophes are dropped, trailing ones trimmed in flush()
            if (!current.empty()) {
                current.push_back('\'');
            }
            i += width - 1;
        } else if (std::isalpha(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (c >= 0x80) {
            current.push_back(static_cast<char>(c));
        } else {
            flush();
        }
    }
    flush();

    // collapse runs like "rock''n" that can appear after apostrophe normalization
    for (auto& t : tokens) {
        t.erase(std::unique(t.begin(), t.end(), [](char a, char b) { return a == '\'' && b == '\''; }), t.end());
    }
    return tokens;
}

std::vector<std::string> tokenize(const std::vector<std::string>& lines)
{
    std::vector<std::string> tokens;
    for (const auto& line : lines) {
        auto part = tokenize(std::string_view(line));
        tokens.insert(tokens.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return tokens;
}

Phonemization phonemize(const std::vector<std::string>& tokens, const PronLexicon& lexicon)
{
    Phonemization out;
    for (const auto& token : tokens) {
        if (const auto* pron = lexicon.find(token)) {
            out.phonemes.insert(out.phonemes.end(), pron->begin(), pron->end());
            ++out.covered;
        }
    }
    out.coverage = tokens.empty() ? 1.0 : static_cast<double>(out.covered) / static_cast<double>(tokens.size());
    return out;
}

std::vector<TrackRecord> read_track_records(std::istream& in)
{
    std::vector<TrackRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) {
            continue;
        }
        const auto where = "corpus line " + std::to_string(line_no);
        try {
            const auto j = nlohmann::json::parse(line);
            TrackRecord r;
            r.track_id = j.at("track_id").get<std::string>();
            r.title = j.value("title", std::string{});
            r.artist = j.value("artist", std::string{});
            r.genre = j.value("genre", std::string{"other"});
            if (j.contains("valence") && !j["valence"].is_null()) r.valence = j["valence"].get<double>();
            if (j.contains("arousal") && !j["arousal"].is_null()) r.arousal = j["arousal"].get<double>();
            r.sections = j.at("sections").get<std::vector<std::vector<std::string>>>();
            if (r.valence.has_value() != r.arousal.has_value()) {
                throw Error(ErrorCode::MalformedRecord, where + ": valence and arousal must be given together");
            }
            records.push_back(std::move(r));
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::MalformedRecord, where + ": " + e.what());
        }
    }
    return records;
}

std::vector<TrackRecord> read_track_records(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open corpus " + path.string());
    }
    return read_track_records(in);
}

const Track* CorpusStore::find_track(std::string_view id) const
{
    const auto it = tracks_.find(std::string(id));
    return it == tracks_.end() ? nullptr : &it->second;
}

const LyricSet* CorpusStore::find_set(std::string_view id) const
{
    const auto it = lyric_sets_.find(std::string(id));
    return it == lyric_sets_.end() ? nullptr : &it->second;
}

const LyricSet& CorpusStore::set(std::string_view id) const
{
    if (const auto* s = find_set(id)) return *s;
    throw Error(ErrorCode::UnknownId, "no lyric set '" + std::string(id) + "'");
}

const Track& CorpusStore::track(std::string_view id) const
{
    if (const auto* t = find_track(id)) return *t;
    throw Error(ErrorCode::UnknownId, "no track '" + std::string(id) + "'");
}

std::vector<std::string> CorpusStore::set_ids() const
{
    std::vector<std::string> ids;
    ids.reserve(lyric_sets_.size());
    for (const auto& [id, _] : lyric_sets_) {
        ids.push_back(id);
    }
    return ids;
}

class CorpusBuilder {
public:
    static IngestResult build(const std::vector<TrackRecord>& records, const PronLexicon& lexicon)
    {
        IngestResult result;
        auto& store = result.store;
        double coverage_sum = 0.0;

        for (const auto& rec : records) {
            if (store.tracks_.count(rec.track_id) != 0) {
                throw Error(ErrorCode::DuplicateTrackId, rec.track_id);
            }
            if (rec.sections.empty()) {
                throw Error(ErrorCode::MalformedRecord, "track " + rec.track_id + " has no lyric sections");
            }
            Track track;
            track.track_id = rec.track_id;
            track.title = rec.title;
            track.artist = rec.artist;
            track.genre = parse_genre(rec.genre);
            if (rec.valence && rec.arousal) {
                track.mood = Mood{*rec.valence, *rec.arousal};
            }

            for (std::size_t i = 0; i < rec.sections.size(); ++i) {
                const auto& lines = rec.sections[i];
                if (std::all_of(lines.begin(), lines.end(), [](const std::string& l) { return is_blank(l); })) {
                    ++result.empty_sections;
                    continue;
                }
                LyricSet set;
                set.set_id = rec.track_id + ":" + std::to_string(i);
                set.track_id = rec.track_id;
                set.section_index = i;
                set.lines = lines;
                set.tokens = tokenize(lines);
                auto ph = phonemize(set.tokens, lexicon);
                set.phonemes = std::move(ph.phonemes);
                set.phoneme_coverage = ph.coverage;
                coverage_sum += set.phoneme_coverage;

                track.lyric_set_ids.push_back(set.set_id);
                const auto id = set.set_id;
                store.lyric_sets_.emplace(id, std::move(set));
            }
            store.tracks_.emplace(track.track_id, std::move(track));
        }

        auto& st = store.stats_;
        st.track_count = store.tracks_.size();
        st.lyric_set_count = store.lyric_sets_.size();
        st.mean_sections_per_track =
            st.track_count == 0 ? 0.0 : static_cast<double>(st.lyric_set_count) / static_cast<double>(st.track_count);
        st.mean_phoneme_coverage =
            st.lyric_set_count == 0 ? 0.0 : coverage_sum / static_cast<double>(st.lyric_set_count);
        return result;
    }

    static CorpusStore load(const std::filesystem::path& dir);
};

IngestResult ingest_corpus(const std::vector<TrackRecord>& records, const PronLexicon& lexicon)
{
    return CorpusBuilder::build(records, lexicon);
}

std::uint64_t count_feasible_pairs(const CorpusStore& store)
{
    auto choose2 = [](std::uint64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; };
    std::uint64_t same_track = 0;
    for (const auto& [_, track] : store.tracks()) {
        same_track += choose2(track.lyric_set_ids.size());
    }
    return choose2(store.lyric_sets().size()) - same_track;
}

// --- persistence ------------------------------------------------------------

namespace {

nlohmann::json track_to_json(const Track& t)
{
    nlohmann::json j;
    j["track_id"] = t.track_id;
    j["title"] = t.title;
    j["artist"] = t.artist;
    j["genre"] = std::string(genre_name(t.genre));
    if (t.mood) {
        j["mood"] = {t.mood->valence, t.mood->arousal};
    } else {
        j["mood"] = nullptr;
    }
    j["lyric_set_ids"] = t.lyric_set_ids;
    return j;
}

Track track_from_json(const nlohmann::json& j)
{
    Track t;
    t.track_id = j.at("track_id").get<std::string>();
    t.title = j.at("title").get<std::string>();
    t.artist = j.at("artist").get<std::string>();
    t.genre = parse_genre(j.at("genre").get<std::string>());
    if (!j.at("mood").is_null()) {
        const auto m = j.at("mood").get<std::vector<double>>();
        if (m.size() != 2) throw Error(ErrorCode::MalformedRecord, "mood must have two entries");
        t.mood = Mood{m[0], m[1]};
    }
    t.lyric_set_ids = j.at("lyric_set_ids").get<std::vector<std::string>>();
    return t;
}

nlohmann::json set_to_json(const LyricSet& s)
{
    nlohmann::json j;
    j["set_id"] = s.set_id;
    j["track_id"] = s.track_id;
    j["section_index"] = s.section_index;
    j["lines"] = s.lines;
    j["tokens"] = s.tokens;
    j["phonemes"] = s.phonemes;
    j["phoneme_coverage"] = s.phoneme_coverage;
    return j;
}

LyricSet set_from_json(const nlohmann::json& j)
{
    LyricSet s;
    s.set_id = j.at("set_id").get<std::string>();
    s.track_id = j.at("track_id").get<std::string>();
    s.section_index = j.at("section_index").get<std::size_t>();
    s.lines = j.at("lines").get<std::vector<std::string>>();
    s.tokens = j.at("tokens").get<std::vector<std::string>>();
    s.phonemes = j.at("phonemes").get<PhonemeSequence>();
    s.phoneme_coverage = j.at("phoneme_coverage").get<double>();
    return s;
}

} // namespace

void CorpusStore::save(const std::filesystem::path& dir) const
{
    std::filesystem::create_directories(dir);

    nlohmann::json manifest;
    manifest["format_version"] = kCorpusFormatVersion;
    manifest["ingest_stats"] = {
        {"track_count", stats_.track_count},
        {"lyric_set_count", stats_.lyric_set_count},
        {"mean_sections_per_track", stats_.mean_sections_per_track},
        {"mean_phoneme_coverage", stats_.mean_phoneme_coverage},
    };
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");

    std::string tracks;
    for (const auto& [_, t] : tracks_) {
        tracks += track_to_json(t).dump() + "\n";
    }
    write_text_file(dir / "tracks.jsonl", tracks);

    std::string sets;
    for (const auto& [_, s] : lyric_sets_) {
        sets += set_to_json(s).dump() + "\n";
    }
    write_text_file(dir / "lyric_sets.jsonl", sets);
}

CorpusStore CorpusBuilder::load(const std::filesystem::path& dir)
{
    CorpusStore store;
    const auto manifest = read_json_file(dir / "manifest.json");
    if (manifest.at("format_version").get<int>() != kCorpusFormatVersion) {
        throw Error(ErrorCode::MalformedRecord, "unsupported corpus format version in " + dir.string());
    }
    const auto& st = manifest.at("ingest_stats");
    store.stats_.track_count = st.at("track_count").get<std::size_t>();
    store.stats_.lyric_set_count = st.at("lyric_set_count").get<std::size_t>();
    store.stats_.mean_sections_per_track = st.at("mean_sections_per_track").get<double>();
    store.stats_.mean_phoneme_coverage = st.at("mean_phoneme_coverage").get<double>();

    for_each_json_line(dir / "tracks.jsonl", [&](const nlohmann::json& j) {
        auto t = track_from_json(j);
        const auto id = t.track_id;
        if (!store.tracks_.emplace(id, std::move(t)).second) throw Error(ErrorCode::DuplicateTrackId, id);
    });
    for_each_json_line(dir / "lyric_sets.jsonl", [&](const nlohmann::json& j) {
        auto s = set_from_json(j);
        const auto id = s.set_id;
        if (!store.lyric_sets_.emplace(id, std::move(s)).second) throw Error(ErrorCode::DuplicateId, id);
    });

    for (const auto& [tid, t] : store.tracks_) {
        for (const auto& sid : t.lyric_set_ids) {
            const auto* s = store.find_set(sid);
            if (s == nullptr || s->track_id != tid) {
                throw Error(ErrorCode::MalformedRecord, "lyric set " + sid + " does not resolve to track " + tid);
            }
        }
    }
    if (store.lyric_sets_.size() != store.stats_.lyric_set_count) {
        throw Error(ErrorCode::MalformedRecord, "lyric set count disagrees with manifest in " + dir.string());
    }
    return store;
}

CorpusStore CorpusStore::load(const std::filesystem::path& dir)
{
    return CorpusBuilder::load(dir);
}

} // namespace lyricsim
