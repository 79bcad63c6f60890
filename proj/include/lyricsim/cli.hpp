#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace lyricsim {

/// Every tunable the command line exposes. Defaults are the module defaults.
/// Each field maps to a flag of the same name (underscores become dashes) and
/// to a key in the --config file.
struct ProjectConfig {
    std::string project = "lyricsim-project";
    std::string corpus;
    std::string lexicon;
    std::string features;    ///< empty means the bundled table
    std::string stopwords;   ///< empty means the bundled list
    std::string semantic;
    std::string audio;
    std::string mood;

    std::uint64_t seed = 0;
    std::uint64_t jobs = 1;

    std::uint64_t topics = 50;
    double alpha = 1.0;
    double beta = 0.01;
    std::uint64_t iterations = 1000;
    std::uint64_t min_doc_freq = 3;
    std::uint64_t burn_in = 50;
    std::uint64_t samples = 100;

    std::uint64_t pca_dims = 50;
    double pca_tolerance = 1e-8;
    std::uint64_t pca_max_iterations = 1000;

    std::uint64_t pairs = 100000;
    double threshold = 0.99;
    std::uint64_t cap = 50;
    std::uint64_t references = 10;

    double w_sim_top = 0.0;
    double w_sim_sem = 0.65;
    double w_diff_mood = 0.0;
    double w_sim_aud = 0.48;
    double w_sim_pho = 0.0;
    double w_diff_mus = 0.74;
    std::uint64_t k = 10;
};

/// (flag name, default rendered as the help text shows it) for every setting.
std::vector<std::pair<std::string, std::string>> setting_defaults(const ProjectConfig& config = {});

/// Reads key=value lines ('#' comments) into config. Throws Usage on an
/// unknown key or a value that does not parse.
void apply_config_file(const std::string& path, ProjectConfig& config);

/// Runs one subcommand. args excludes the program name.
/// Exit codes: 0 ok, 1 usage, 2 data or contract error, 3 numeric failure.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace lyricsim
