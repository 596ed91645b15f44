#include "clir/miner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <regex>
#include <set>
#include <tuple>
#include <unordered_set>

#include "clir/error.hpp"
#include "clir/textprep.hpp"
#include "clir/utf8.hpp"

namespace clir {

namespace {

constexpr double kBoundarySlack = 1e-12;

struct LanguageNames {
    std::string_view code;
    std::string_view initial;
    std::vector<std::string_view> names;  // lower case, ASCII forms used in file names
    std::vector<std::string_view> anchors;
};

const LanguageNames* language_names(std::string_view code) {
    static const std::vector<LanguageNames> kNames{
        {"en", "e", {"english", "eng", "anglais"}, {"english", "anglais", "inglese"}},
        {"fr", "f", {"french", "fra", "francais"}, {"french", "fran(c|ç)ais", "francese"}},
        {"it", "i", {"italian", "ita", "italiano"}, {"italian", "italiano", "italien"}},
    };
    for (const auto& n : kNames)
        if (n.code == code) return &n;
    return nullptr;
}

std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t slash = path.find('/', start);
        parts.emplace_back(path.substr(start, slash == std::string_view::npos ? std::string_view::npos : slash - start));
        if (slash == std::string_view::npos) break;
        start = slash + 1;
    }
    return parts;
}

std::string join_path(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.push_back('/');
        out += parts[i];
    }
    return out;
}

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

bool ends_with(std::string_view s, std::string_view p) {
    return s.size() >= p.size() && s.substr(s.size() - p.size()) == p;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string collapse(std::string_view s) {
    std::string out;
    bool space = false;
    for (std::size_t pos = 0; pos < s.size();) {
        const std::size_t start = pos;
        const char32_t cp = utf8::next(s, pos);
        if (utf8::is_space(cp)) {
            space = !out.empty();
            continue;
        }
        if (space) out.push_back(' ');
        space = false;
        out.append(s.substr(start, pos - start));
    }
    return out;
}

std::vector<std::string> anchor_texts(std::string_view bytes) {
    const auto lexed = html::lex(utf8::from_bytes(bytes));
    std::vector<std::string> anchors;
    bool inside = false;
    std::string current;
    for (const auto& tok : lexed.tokens) {
        if (tok.kind == html::TokenKind::open && tok.name == "a") {
            inside = true;
            current.clear();
        } else if (tok.kind == html::TokenKind::close && tok.name == "a") {
            if (inside) anchors.push_back(collapse(html::decode_entities(current)));
            inside = false;
        } else if (inside && tok.kind == html::TokenKind::text) {
            current += tok.content;
            current.push_back(' ');
        }
    }
    return anchors;
}

}  // namespace

NamingRules NamingRules::for_languages(std::string_view source, std::string_view target) {
    NamingRules rules;
    const auto* src = language_names(source);
    const auto* tgt = language_names(target);
    const std::string s_code(source);
    const std::string t_code(target);
    const std::string s_init = src ? std::string(src->initial) : s_code.substr(0, 1);
    const std::string t_init = tgt ? std::string(tgt->initial) : t_code.substr(0, 1);

    auto add_prefix = [&](const std::string& a, const std::string& b) {
        rules.source_prefixes.push_back(a);
        rules.target_prefixes.push_back(b);
    };
    auto add_suffix = [&](const std::string& a, const std::string& b) {
        rules.source_suffixes.push_back(a);
        rules.target_suffixes.push_back(b);
    };

    for (const std::string sep : {"_", "-", "."}) {
        add_prefix(s_code + sep, t_code + sep);
        add_prefix(s_init + sep, t_init + sep);
        add_suffix(sep + s_code, sep + t_code);
        add_suffix(sep + s_init, sep + t_init);
        add_suffix("", sep + t_init);
        add_suffix("", sep + t_code);
    }
    rules.path_segment_pairs.emplace_back(s_code, t_code);
    rules.path_segment_pairs.emplace_back(s_init, t_init);
    if (src && tgt) {
        const std::size_t n = std::min(src->names.size(), tgt->names.size());
        for (std::size_t i = 0; i < n; ++i) {
            const std::string a(src->names[i]);
            const std::string b(tgt->names[i]);
            rules.path_segment_pairs.emplace_back(a, b);
            add_prefix(a + "_", b + "_");
            add_prefix(a + "-", b + "-");
            add_suffix("_" + a, "_" + b);
            add_suffix("-" + a, "-" + b);
        }
    }
    return rules;
}

void NamingRules::validate() const {
    if (source_prefixes.size() != target_prefixes.size())
        throw ConfigError("naming rules: prefix lists differ in length");
    if (source_suffixes.size() != target_suffixes.size())
        throw ConfigError("naming rules: suffix lists differ in length");
    for (std::size_t i = 0; i < source_prefixes.size(); ++i)
        if (source_prefixes[i].empty() && target_prefixes[i].empty())
            throw ConfigError("naming rules: prefix pair " + std::to_string(i) + " is empty on both sides");
    for (std::size_t i = 0; i < source_suffixes.size(); ++i)
        if (source_suffixes[i].empty() && target_suffixes[i].empty())
            throw ConfigError("naming rules: suffix pair " + std::to_string(i) + " is empty on both sides");
    for (const auto& [a, b] : path_segment_pairs)
        if (a.empty() || b.empty()) throw ConfigError("naming rules: empty path segment");
}

std::vector<PathPair> scan_pairs(std::span<const std::string> file_listing, const NamingRules& rules,
                                 std::size_t max_pairings) {
    rules.validate();
    const std::set<std::string> files(file_listing.begin(), file_listing.end());

    // (affix length, source, target)
    std::vector<std::tuple<std::size_t, std::string, std::string>> candidates;
    auto consider = [&](const std::string& a, std::string b, std::size_t score) {
        if (b != a && files.count(b)) candidates.emplace_back(score, a, std::move(b));
    };

    for (const auto& a : files) {
        const std::vector<std::string> parts = split_path(a);
        const std::string& base = parts.back();
        const std::size_t dot = base.rfind('.');
        const std::string stem = (dot == std::string::npos || dot == 0) ? base : base.substr(0, dot);
        const std::string ext = base.substr(stem.size());

        for (const auto& [src_seg, tgt_seg] : rules.path_segment_pairs) {
            for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
                if (parts[k] != src_seg) continue;
                auto replaced = parts;
                replaced[k] = tgt_seg;
                consider(a, join_path(replaced), src_seg.size() + tgt_seg.size());
            }
        }
        for (std::size_t i = 0; i < rules.source_prefixes.size(); ++i) {
            const auto& sp = rules.source_prefixes[i];
            const auto& tp = rules.target_prefixes[i];
            if (!starts_with(base, sp) || base.size() == sp.size()) continue;
            auto replaced = parts;
            replaced.back() = tp + base.substr(sp.size());
            consider(a, join_path(replaced), sp.size() + tp.size());
        }
        for (std::size_t i = 0; i < rules.source_suffixes.size(); ++i) {
            const auto& ss = rules.source_suffixes[i];
            const auto& ts = rules.target_suffixes[i];
            if (!ends_with(stem, ss) || stem.size() == ss.size()) continue;
            auto replaced = parts;
            replaced.back() = stem.substr(0, stem.size() - ss.size()) + ts + ext;
            consider(a, join_path(replaced), ss.size() + ts.size());
        }
    }

    std::sort(candidates.begin(), candidates.end(), [](const auto& x, const auto& y) {
        if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) > std::get<0>(y);
        if (std::get<1>(x) != std::get<1>(y)) return std::get<1>(x) < std::get<1>(y);
        return std::get<2>(x) < std::get<2>(y);
    });

    std::map<std::string, std::size_t> usage;
    std::set<PathPair> accepted;
    for (const auto& [score, a, b] : candidates) {
        if (accepted.count({a, b}) || accepted.count({b, a})) continue;
        if (usage[a] >= max_pairings || usage[b] >= max_pairings) continue;
        ++usage[a];
        ++usage[b];
        accepted.emplace(a, b);
    }
    return {accepted.begin(), accepted.end()};
}

std::vector<std::string> default_meaningful_tags() {
    return {"p", "h1", "h2", "h3", "h4", "h5", "h6", "li", "table", "tr", "td", "ul", "ol", "title"};
}

PageProfile profile_page(std::string path, std::string_view bytes, std::span<const std::string> meaningful_tags) {
    PageProfile profile;
    profile.path = std::move(path);
    profile.byte_length = bytes.size();
    const std::unordered_set<std::string> meaningful(meaningful_tags.begin(), meaningful_tags.end());
    const auto lexed = html::lex(utf8::from_bytes(bytes));
    for (const auto& tok : lexed.tokens)
        if ((tok.kind == html::TokenKind::open || tok.kind == html::TokenKind::self_closing) &&
            meaningful.count(tok.name))
            profile.tag_sequence.push_back(tok.name);

    const auto paragraphs = extract_text(bytes);
    for (std::size_t i = 0; i < paragraphs.size(); ++i) {
        if (i) profile.text.push_back('\n');
        profile.text += paragraphs[i];
    }
    profile.text_length = utf8::length(profile.text);
    return profile;
}

std::string_view to_string(RejectReason reason) {
    switch (reason) {
        case RejectReason::empty_text:
            return "empty-text";
        case RejectReason::length_ratio:
            return "length-ratio";
        case RejectReason::insufficient_text:
            return "insufficient-text";
        case RejectReason::structure:
            return "structure";
        case RejectReason::language:
            return "language";
    }
    return "unknown";
}

Verdict length_filter(PairCandidate& pair, double typical_ratio, double tolerance) {
    const auto src = pair.source_profile.text_length;
    const auto tgt = pair.target_profile.text_length;
    if (src == 0 || tgt == 0) {
        pair.length_ratio = 0.0;
        return {RejectReason::empty_text};
    }
    pair.length_ratio = static_cast<double>(src) / static_cast<double>(tgt);
    const double deviation = std::abs(pair.length_ratio / typical_ratio - 1.0);
    if (deviation <= tolerance + kBoundarySlack) return {};
    return {RejectReason::length_ratio};
}

double tag_distance(std::span<const std::string> a, std::span<const std::string> b) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
        }
        std::swap(prev, cur);
    }
    return static_cast<double>(prev[m]) / static_cast<double>(std::max<std::size_t>({n, m, 1}));
}

Verdict structure_filter(PairCandidate& pair, double threshold, std::size_t min_text) {
    pair.structure_distance = tag_distance(pair.source_profile.tag_sequence, pair.target_profile.tag_sequence);
    if (pair.source_profile.text_length < min_text || pair.target_profile.text_length < min_text)
        return {RejectReason::insufficient_text};
    if (pair.structure_distance <= threshold + kBoundarySlack) return {};
    return {RejectReason::structure};
}

std::string default_anchor_pattern(std::string_view source, std::string_view target) {
    std::string pattern;
    for (const auto code : {source, target}) {
        if (const auto* names = language_names(code)) {
            for (const auto& a : names->anchors) {
                if (!pattern.empty()) pattern.push_back('|');
                pattern += a;
            }
        }
    }
    if (pattern.empty()) pattern = std::string(source) + "|" + std::string(target);
    return "\\b(" + pattern + ")\\b";
}

MiningReport::MiningReport() {
    for (auto r : {RejectReason::empty_text, RejectReason::length_ratio, RejectReason::insufficient_text,
                   RejectReason::structure, RejectReason::language})
        rejections[std::string(to_string(r))] = 0;
}

void MiningReport::reject(RejectReason reason) { ++rejections[std::string(to_string(reason))]; }

void MiningReport::merge(const MiningReport& other) {
    pages_scanned += other.pages_scanned;
    candidates += other.candidates;
    accepted += other.accepted;
    for (const auto& [k, v] : other.rejections) rejections[k] += v;
    if (other.site_status != "ok") site_status = other.site_status;
}

void MiningReport::write(std::ostream& out) const {
    out << "site_status=" << site_status << '\n'
        << "pages_scanned=" << pages_scanned << '\n'
        << "candidates=" << candidates << '\n'
        << "accepted=" << accepted << '\n';
    for (const auto& [reason, n] : rejections) out << "rejected." << reason << '=' << n << '\n';
}

std::vector<std::string> list_site(const std::filesystem::path& root, std::span<const std::string> extensions) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(root, ec)) throw IoError("site root is not a readable directory: " + root.string());
    std::vector<std::string> listing;
    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
    if (ec) throw IoError("cannot read site root " + root.string() + ": " + ec.message());
    for (const auto& entry : it) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (!extensions.empty() && std::find(extensions.begin(), extensions.end(), ext) == extensions.end()) continue;
        listing.push_back(fs::relative(entry.path(), root).generic_string());
    }
    std::sort(listing.begin(), listing.end());
    return listing;
}

Verdict apply_filters(PairCandidate& pair, const MinerConfig& config) {
    if (auto v = length_filter(pair, config.typical_ratio, config.length_tolerance); !v.accepted()) return v;
    if (auto v = structure_filter(pair, config.structure_threshold, config.min_text); !v.accepted()) return v;
    if (config.verify_language) {
        if (pair.source_profile.detected_language != config.source_language ||
            pair.target_profile.detected_language != config.target_language)
            return {RejectReason::language};
    }
    return {};
}

MiningResult mine(const std::filesystem::path& site_root, const MinerConfig& config) {
    if (config.verify_language && config.language_models.empty())
        throw ConfigError("language verification enabled but no language-id models given");
    MiningResult result;
    const auto listing = list_site(site_root, config.extensions);
    result.report.pages_scanned = listing.size();
    if (listing.empty()) return result;

    if (config.candidate_gate) {
        const std::string pattern = config.anchor_pattern.empty()
                                        ? default_anchor_pattern(config.source_language, config.target_language)
                                        : config.anchor_pattern;
        const std::regex re(pattern, std::regex::ECMAScript | std::regex::icase);
        bool found = false;
        for (const auto& rel : listing) {
            for (const auto& anchor : anchor_texts(read_file(site_root / rel))) {
                if (std::regex_search(anchor, re)) {
                    found = true;
                    break;
                }
            }
            if (found) break;
        }
        if (!found) {
            result.report.site_status = "no-candidate-anchor";
            return result;
        }
    }

    auto profile = [&](const std::string& rel) {
        PageProfile p = profile_page(rel, read_file(site_root / rel), config.meaningful_tags);
        if (config.verify_language && !p.text.empty()) {
            const auto guess = detect_language(p.text, config.language_models);
            p.detected_language = guess.language;
            p.language_confidence = guess.confidence;
        }
        return p;
    };

    for (const auto& [a, b] : scan_pairs(listing, config.rules, config.max_pairings)) {
        ++result.report.candidates;
        PairCandidate pair;
        pair.source_profile = profile(a);
        pair.target_profile = profile(b);
        pair.verdict = apply_filters(pair, config);
        if (pair.verdict.accepted()) {
            ++result.report.accepted;
            result.accepted.push_back(std::move(pair));
        } else {
            result.report.reject(*pair.verdict.rejection);
            result.rejected.push_back(std::move(pair));
        }
    }
    return result;
}

void write_pairs(std::ostream& out, std::span<const PathPair> pairs) {
    for (const auto& [a, b] : pairs) out << a << '\t' << b << '\n';
}

std::vector<PathPair> read_pairs(std::istream& in) {
    std::vector<PathPair> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw DataError("pair line " + std::to_string(line_no) + ": expected two columns");
        pairs.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
    return pairs;
}

}  // namespace clir
