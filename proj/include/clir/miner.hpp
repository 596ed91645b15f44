#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clir/langid.hpp"

namespace clir {

/// Affix and path-segment substitutions that turn a source-language file
/// name into its target-language counterpart. Source and target lists are
/// index-aligned; an empty affix is allowed on one side of a pair.
struct NamingRules {
    std::vector<std::string> source_prefixes;
    std::vector<std::string> target_prefixes;
    std::vector<std::string> source_suffixes;
    std::vector<std::string> target_suffixes;
    std::vector<std::pair<std::string, std::string>> path_segment_pairs;

    /// Common webmaster conventions for a language pair: language codes,
    /// initials and names as prefixes, suffixes and directory names.
    static NamingRules for_languages(std::string_view source, std::string_view target);

    /// Throws ConfigError when the lists are not parallel or a pair is empty on both sides.
    void validate() const;
};

using PathPair = std::pair<std::string, std::string>;

/// All (a, b) where one substitution maps a onto an existing b. Each file
/// takes part in at most `max_pairings` pairs, longer affixes winning, then
/// lexicographic order. Output is sorted and independent of listing order.
std::vector<PathPair> scan_pairs(std::span<const std::string> file_listing, const NamingRules& rules,
                                 std::size_t max_pairings = 1);

struct PageProfile {
    std::string path;
    std::size_t byte_length = 0;
    std::size_t text_length = 0;            // code points after tag removal
    std::vector<std::string> tag_sequence;  // meaningful tags in document order
    std::string detected_language;
    double language_confidence = 0.0;
    std::string text;
};

std::vector<std::string> default_meaningful_tags();

/// Builds a profile from raw page bytes. Language fields are left empty.
PageProfile profile_page(std::string path, std::string_view bytes, std::span<const std::string> meaningful_tags);

enum class RejectReason { empty_text, length_ratio, insufficient_text, structure, language };

std::string_view to_string(RejectReason reason);

struct Verdict {
    std::optional<RejectReason> rejection;  // empty when accepted
    bool accepted() const { return !rejection.has_value(); }
};

struct PairCandidate {
    PageProfile source_profile;
    PageProfile target_profile;
    double length_ratio = 0.0;
    double structure_distance = 0.0;
    Verdict verdict;
};

/// Accepts iff |ratio / typical_ratio - 1| <= tolerance, ratio being
/// source / target text length. Sets `pair.length_ratio`.
Verdict length_filter(PairCandidate& pair, double typical_ratio = 1.0, double tolerance = 0.40);

/// Edit distance between tag sequences divided by the longer length.
double tag_distance(std::span<const std::string> a, std::span<const std::string> b);

/// Rejects pages with less than `min_text` characters, then accepts iff the
/// tag distance is at most `threshold`. Sets `pair.structure_distance`.
Verdict structure_filter(PairCandidate& pair, double threshold = 0.20, std::size_t min_text = 200);

struct MinerConfig {
    std::string source_language = "en";
    std::string target_language = "fr";
    NamingRules rules = NamingRules::for_languages("en", "fr");
    std::size_t max_pairings = 1;
    double typical_ratio = 1.0;
    double length_tolerance = 0.40;
    double structure_threshold = 0.20;
    std::size_t min_text = 200;
    std::vector<std::string> meaningful_tags = default_meaningful_tags();
    std::vector<std::string> extensions{".html", ".htm", ".shtml", ".txt"};
    bool candidate_gate = false;
    /// ECMAScript regex matched case-insensitively against link anchor text.
    std::string anchor_pattern;
    bool verify_language = true;
    std::vector<LanguageIdModel> language_models;
};

/// Default anchor pattern: names of the two languages as they appear in
/// "French version" / "en français" style links.
std::string default_anchor_pattern(std::string_view source, std::string_view target);

struct MiningReport {
    std::size_t pages_scanned = 0;
    std::size_t candidates = 0;
    std::size_t accepted = 0;
    std::map<std::string, std::size_t> rejections;  // one counter per RejectReason
    std::string site_status = "ok";

    MiningReport();
    void reject(RejectReason reason);
    void merge(const MiningReport& other);
    void write(std::ostream& out) const;
};

struct MiningResult {
    std::vector<PairCandidate> accepted;
    std::vector<PairCandidate> rejected;
    MiningReport report;
};

/// Sorted relative paths (with '/' separators) of the files under `root`
/// whose extension is listed.
std::vector<std::string> list_site(const std::filesystem::path& root, std::span<const std::string> extensions);

/// Runs the candidate-site gate, pair scanning and the length, structure and
/// language filters over a mirrored site tree.
MiningResult mine(const std::filesystem::path& site_root, const MinerConfig& config);

/// Re-applies the three content filters; used to check that accepted pairs are stable.
Verdict apply_filters(PairCandidate& pair, const MinerConfig& config);

void write_pairs(std::ostream& out, std::span<const PathPair> pairs);
std::vector<PathPair> read_pairs(std::istream& in);

}  // namespace clir
