#include "clir/textprep.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <utility>

#include "clir/error.hpp"
#include "clir/utf8.hpp"

namespace clir {

namespace html {

namespace {

bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; }

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), ascii_lower);
    return out;
}

// Position of the '>' closing a tag that starts at `start`, skipping quoted
// attribute values. npos when unterminated.
std::size_t tag_end(std::string_view s, std::size_t start) {
    char quote = 0;
    for (std::size_t i = start; i < s.size(); ++i) {
        const char c = s[i];
        if (quote) {
            if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
            // only treat as quote when it opens an attribute value
            if (i > 0 && s[i - 1] == '=') quote = c;
        } else if (c == '>') {
            return i;
        }
    }
    return std::string_view::npos;
}

std::size_t find_ci(std::string_view haystack, std::string_view needle, std::size_t from) {
    if (needle.size() > haystack.size()) return std::string_view::npos;
    for (std::size_t i = from; i + needle.size() <= haystack.size(); ++i) {
        bool match = true;
        for (std::size_t k = 0; k < needle.size(); ++k) {
            if (ascii_lower(haystack[i + k]) != needle[k]) {
                match = false;
                break;
            }
        }
        if (match) return i;
    }
    return std::string_view::npos;
}

struct NamedEntity {
    std::string_view name;
    char32_t cp;
};

constexpr std::array<NamedEntity, 44> kEntities{{
    {"amp", U'&'},      {"lt", U'<'},       {"gt", U'>'},       {"quot", U'"'},     {"apos", U'\''},
    {"nbsp", U' '},     {"eacute", U'é'},   {"egrave", U'è'},   {"ecirc", U'ê'},    {"euml", U'ë'},
    {"agrave", U'à'},   {"aacute", U'á'},   {"acirc", U'â'},    {"auml", U'ä'},     {"ccedil", U'ç'},
    {"igrave", U'ì'},   {"iacute", U'í'},   {"icirc", U'î'},    {"iuml", U'ï'},     {"ograve", U'ò'},
    {"oacute", U'ó'},   {"ocirc", U'ô'},    {"ouml", U'ö'},     {"ugrave", U'ù'},   {"uacute", U'ú'},
    {"ucirc", U'û'},    {"uuml", U'ü'},     {"Eacute", U'É'},   {"Egrave", U'È'},   {"Ecirc", U'Ê'},
    {"Agrave", U'À'},   {"Ccedil", U'Ç'},   {"oelig", U'œ'},    {"OElig", U'Œ'},    {"laquo", U'«'},
    {"raquo", U'»'},    {"rsquo", U'’'}, {"lsquo", U'‘'}, {"ldquo", U'“'}, {"rdquo", U'”'},
    {"hellip", U'…'}, {"ndash", U'–'}, {"mdash", U'—'}, {"copy", U'©'},
}};

}  // namespace

bool is_void_element(std::string_view name) {
    static const std::unordered_set<std::string_view> kVoid{"area", "base", "br",   "col",   "embed",  "hr",
                                                            "img",  "input", "link", "meta", "param", "source",
                                                            "track", "wbr",  "basefont", "frame", "isindex"};
    return kVoid.count(name) > 0;
}

bool is_block_element(std::string_view name) {
    static const std::unordered_set<std::string_view> kBlock{
        "p",     "div",   "li",      "h1",      "h2",     "h3",     "h4",   "h5",         "h6",
        "title", "td",    "th",      "tr",      "table",  "ul",     "ol",   "dl",         "dt",
        "dd",    "pre",   "section", "article", "header", "footer", "nav",  "blockquote", "body",
        "html",  "head",  "form",    "center",  "hr",     "address", "caption", "main", "aside"};
    return kBlock.count(name) > 0;
}

std::string decode_entities(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '&') {
            out.push_back(text[i++]);
            continue;
        }
        const std::size_t semi = text.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 10) {
            out.push_back(text[i++]);
            continue;
        }
        const std::string_view body = text.substr(i + 1, semi - i - 1);
        std::optional<char32_t> cp;
        if (body.size() > 1 && body[0] == '#') {
            char32_t value = 0;
            bool ok = true;
            const bool hex = body[1] == 'x' || body[1] == 'X';
            const std::string_view digits = body.substr(hex ? 2 : 1);
            if (digits.empty()) ok = false;
            for (char c : digits) {
                int d = -1;
                if (c >= '0' && c <= '9') d = c - '0';
                else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
                else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
                if (d < 0 || value > 0x10FFFF) {
                    ok = false;
                    break;
                }
                value = value * (hex ? 16 : 10) + static_cast<char32_t>(d);
            }
            if (ok && value > 0 && value <= 0x10FFFF) cp = value;
        } else {
            for (const auto& e : kEntities)
                if (e.name == body) cp = e.cp;
        }
        if (!cp) {
            out.push_back(text[i++]);
            continue;
        }
        utf8::append(out, *cp);
        i = semi + 1;
    }
    return out;
}

std::optional<std::string> attribute(std::string_view attributes, std::string_view name) {
    const std::string lowered = lower_ascii(attributes);
    std::size_t pos = 0;
    while ((pos = lowered.find(name, pos)) != std::string::npos) {
        const bool left_ok = pos == 0 || !is_ascii_alpha(lowered[pos - 1]);
        std::size_t k = pos + name.size();
        while (k < lowered.size() && lowered[k] == ' ') ++k;
        if (!left_ok || k >= lowered.size() || lowered[k] != '=') {
            pos += name.size();
            continue;
        }
        ++k;
        while (k < lowered.size() && lowered[k] == ' ') ++k;
        if (k >= lowered.size()) return std::string{};
        const char q = attributes[k];
        if (q == '"' || q == '\'') {
            const std::size_t end = attributes.find(q, k + 1);
            return std::string(attributes.substr(k + 1, end == std::string_view::npos ? std::string_view::npos
                                                                                      : end - k - 1));
        }
        std::size_t end = k;
        while (end < attributes.size() && attributes[end] != ' ' && attributes[end] != '>') ++end;
        return std::string(attributes.substr(k, end - k));
    }
    return std::nullopt;
}

LexResult lex(std::string_view s) {
    LexResult result;
    std::string text;
    auto flush_text = [&] {
        if (!text.empty()) {
            result.tokens.push_back({TokenKind::text, {}, std::move(text)});
            text.clear();
        }
    };

    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '<' || i + 1 >= s.size()) {
            text.push_back(s[i++]);
            continue;
        }
        const char c1 = s[i + 1];
        if (s.substr(i, 4) == "<!--") {
            const std::size_t end = s.find("-->", i + 4);
            if (end == std::string_view::npos) {
                result.complete = false;
                text.push_back(s[i++]);
                continue;
            }
            i = end + 3;
            continue;
        }
        if (c1 == '!' || c1 == '?') {
            const std::size_t end = s.find('>', i + 2);
            if (end == std::string_view::npos) {
                result.complete = false;
                text.push_back(s[i++]);
                continue;
            }
            i = end + 1;
            continue;
        }
        const bool closing = c1 == '/';
        const std::size_t name_start = i + (closing ? 2 : 1);
        if (name_start >= s.size() || !is_ascii_alpha(s[name_start])) {
            text.push_back(s[i++]);
            continue;
        }
        const std::size_t end = tag_end(s, name_start);
        if (end == std::string_view::npos) {
            result.complete = false;
            text.push_back(s[i++]);
            continue;
        }
        std::size_t name_end = name_start;
        while (name_end < end && (is_ascii_alpha(s[name_end]) || (s[name_end] >= '0' && s[name_end] <= '9') ||
                                  s[name_end] == '-' || s[name_end] == ':'))
            ++name_end;
        std::string name = lower_ascii(s.substr(name_start, name_end - name_start));
        std::string_view attrs = s.substr(name_end, end - name_end);
        bool self_closing = false;
        if (!attrs.empty() && attrs.back() == '/') {
            self_closing = true;
            attrs.remove_suffix(1);
        }
        flush_text();
        i = end + 1;

        if (!closing && !self_closing && (name == "script" || name == "style")) {
            const std::string closer = "</" + name;
            const std::size_t body_end = find_ci(s, closer, i);
            if (body_end == std::string_view::npos) {
                result.complete = false;
                i = s.size();
                continue;
            }
            const std::size_t close_end = s.find('>', body_end);
            i = close_end == std::string_view::npos ? s.size() : close_end + 1;
            continue;
        }

        Token tok;
        tok.kind = closing ? TokenKind::close : (self_closing ? TokenKind::self_closing : TokenKind::open);
        tok.name = std::move(name);
        tok.content = std::string(attrs);
        result.tokens.push_back(std::move(tok));
    }
    flush_text();
    return result;
}

}  // namespace html

namespace {

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (std::size_t pos = 0; pos < s.size();) {
        const std::size_t start = pos;
        const char32_t cp = utf8::next(s, pos);
        if (utf8::is_space(cp)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.append(s.substr(start, pos - start));
    }
    return out;
}

// Splits on lines that contain only whitespace.
std::vector<std::string> split_blank_lines(std::string_view s) {
    std::vector<std::string> parts;
    std::string current;
    std::size_t line_start = 0;
    while (line_start <= s.size()) {
        std::size_t nl = s.find('\n', line_start);
        if (nl == std::string_view::npos) nl = s.size();
        const std::string_view line = s.substr(line_start, nl - line_start);
        const bool blank = collapse_whitespace(line).empty();
        if (blank) {
            parts.push_back(std::move(current));
            current.clear();
        } else {
            current.append(line);
            current.push_back('\n');
        }
        line_start = nl + 1;
    }
    parts.push_back(std::move(current));
    return parts;
}

void push_paragraph(std::vector<std::string>& out, std::string_view raw) {
    std::string p = collapse_whitespace(raw);
    if (!p.empty()) out.push_back(std::move(p));
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_closer(char32_t cp) {
    return cp == '"' || cp == '\'' || cp == ')' || cp == ']' || cp == 0xBB || cp == 0x201D || cp == 0x2019;
}

bool is_opener(char32_t cp) {
    return cp == '"' || cp == '\'' || cp == '(' || cp == '[' || cp == 0xAB || cp == 0x201C || cp == 0x2018 ||
           cp == 0xBF || cp == 0xA1;
}

std::u32string decode(std::string_view s) {
    std::u32string out;
    for (std::size_t pos = 0; pos < s.size();) out.push_back(utf8::next(s, pos));
    return out;
}

std::string encode(std::u32string_view w) {
    std::string out;
    for (char32_t c : w) utf8::append(out, c);
    return out;
}

std::u32string strip_closers(const std::u32string& w) {
    std::size_t end = w.size();
    while (end > 0 && is_closer(w[end - 1])) --end;
    return w.substr(0, end);
}

std::u32string strip_openers(const std::u32string& w) {
    std::size_t begin = 0;
    while (begin < w.size() && is_opener(w[begin])) ++begin;
    return w.substr(begin);
}

bool is_terminator(char32_t cp) { return cp == '.' || cp == '!' || cp == '?'; }

std::vector<std::string> split_whitespace(std::string_view s) {
    std::vector<std::string> words;
    std::string current;
    for (std::size_t pos = 0; pos < s.size();) {
        const std::size_t start = pos;
        const char32_t cp = utf8::next(s, pos);
        if (utf8::is_space(cp)) {
            if (!current.empty()) words.push_back(std::move(current));
            current.clear();
        } else {
            current.append(s.substr(start, pos - start));
        }
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

Sentence make_sentence(std::vector<std::string> words) {
    Sentence s;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) s.text.push_back(' ');
        s.text += words[i];
    }
    s.char_length = utf8::length(s.text);
    s.tokens = std::move(words);
    return s;
}

bool is_hyphen(char32_t cp) { return cp == '-' || cp == 0x2010 || cp == 0x2011; }

struct Contraction {
    std::string_view surface;
    std::string_view first;
    std::string_view second;
};

constexpr std::array<Contraction, 3> kFrenchContractions{{
    {"au", "à", "le"},
    {"aux", "à", "les"},
    {"du", "de", "le"},
}};

bool uses_elision(std::string_view language) { return language == "fr" || language == "it"; }

void emit_with_rules(std::vector<std::string>& out, std::string token, std::string_view language) {
    if (uses_elision(language)) {
        const std::string lowered = utf8::to_lower(token);
        const bool exception = language == "fr" && (lowered == "aujourd'hui" || lowered == "presqu'île");
        if (!exception) {
            std::size_t start = 0;
            std::size_t apos;
            while ((apos = token.find('\'', start)) != std::string::npos) {
                out.push_back(token.substr(start, apos - start + 1));
                start = apos + 1;
            }
            token = token.substr(start);
        }
        if (token.empty()) return;
        if (language == "fr") {
            const std::string low = utf8::to_lower(token);
            for (const auto& c : kFrenchContractions) {
                if (low == c.surface) {
                    out.emplace_back(c.first);
                    out.emplace_back(c.second);
                    return;
                }
            }
        }
        out.push_back(std::move(token));
        return;
    }
    if (language == "en" && token.size() > 2 && (ends_with(token, "'s") || ends_with(token, "'S"))) {
        out.push_back(token.substr(0, token.size() - 2));
        out.push_back(token.substr(token.size() - 2));
        return;
    }
    out.push_back(std::move(token));
}

}  // namespace

std::optional<std::vector<std::string>> extract_structured(std::string_view text) {
    const html::LexResult lexed = html::lex(text);
    if (!lexed.complete) return std::nullopt;

    std::vector<std::string> paragraphs;
    std::vector<std::string> stack;
    std::string current;
    bool last_was_br = false;

    auto flush = [&] {
        push_paragraph(paragraphs, current);
        current.clear();
        last_was_br = false;
    };
    auto handle_br = [&] {
        if (last_was_br) {
            flush();
        } else {
            current.push_back(' ');
            last_was_br = true;
        }
    };

    for (const auto& tok : lexed.tokens) {
        switch (tok.kind) {
            case html::TokenKind::text: {
                const std::string decoded = html::decode_entities(tok.content);
                const auto parts = split_blank_lines(decoded);
                for (std::size_t k = 0; k < parts.size(); ++k) {
                    if (k) flush();
                    if (!collapse_whitespace(parts[k]).empty()) last_was_br = false;
                    current += parts[k];
                    current.push_back(' ');
                }
                break;
            }
            case html::TokenKind::open:
                if (html::is_void_element(tok.name)) {
                    if (tok.name == "br") handle_br();
                    else if (html::is_block_element(tok.name)) flush();
                    break;
                }
                stack.push_back(tok.name);
                if (html::is_block_element(tok.name)) flush();
                break;
            case html::TokenKind::self_closing:
                if (tok.name == "br") handle_br();
                else if (html::is_block_element(tok.name)) flush();
                break;
            case html::TokenKind::close:
                if (html::is_void_element(tok.name)) break;
                if (stack.empty() || stack.back() != tok.name) return std::nullopt;
                stack.pop_back();
                if (html::is_block_element(tok.name)) flush();
                break;
        }
    }
    if (!stack.empty()) return std::nullopt;
    flush();
    return paragraphs;
}

std::vector<std::string> extract_plain(std::string_view text) {
    const html::LexResult lexed = html::lex(text);
    std::string stripped;
    for (const auto& tok : lexed.tokens) {
        if (tok.kind == html::TokenKind::text) {
            stripped += html::decode_entities(tok.content);
        } else if (tok.name == "br") {
            stripped += "\n";
        } else if (html::is_block_element(tok.name)) {
            stripped += "\n\n";
        }
    }
    std::vector<std::string> paragraphs;
    for (const auto& part : split_blank_lines(stripped)) push_paragraph(paragraphs, part);
    return paragraphs;
}

std::vector<std::string> extract_text(std::string_view page_bytes) {
    const std::string text = utf8::from_bytes(page_bytes);
    if (auto structured = extract_structured(text)) return std::move(*structured);
    return extract_plain(text);
}

std::vector<Sentence> segment(std::string_view paragraph, const WordSet& abbreviations) {
    std::vector<std::string> words = split_whitespace(paragraph);
    std::vector<Sentence> sentences;
    if (words.empty()) return sentences;

    const std::u32string last = strip_closers(decode(words.back()));
    if (last.empty() || !is_terminator(last.back())) {
        sentences.push_back(make_sentence(std::move(words)));
        return sentences;
    }

    std::vector<std::string> current;
    for (std::size_t i = 0; i < words.size(); ++i) {
        current.push_back(words[i]);
        if (i + 1 == words.size()) break;
        const std::u32string core = strip_closers(decode(words[i]));
        if (core.empty() || !is_terminator(core.back())) continue;
        const std::u32string next = strip_openers(decode(words[i + 1]));
        if (next.empty() || !(utf8::is_upper(next.front()) || utf8::is_digit(next.front()))) continue;
        if (core.back() == '.' && abbreviations.count(utf8::to_lower(encode(core)))) continue;
        sentences.push_back(make_sentence(std::move(current)));
        current.clear();
    }
    if (!current.empty()) sentences.push_back(make_sentence(std::move(current)));
    return sentences;
}

std::vector<Sentence> segment_document(std::string_view document_id, std::span<const std::string> paragraphs,
                                       const WordSet& abbreviations) {
    std::vector<Sentence> out;
    for (std::size_t p = 0; p < paragraphs.size(); ++p) {
        auto sentences = segment(paragraphs[p], abbreviations);
        for (std::size_t k = 0; k < sentences.size(); ++k) {
            sentences[k].origin = {std::string(document_id), p, k};
            out.push_back(std::move(sentences[k]));
        }
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text, std::string_view language) {
    const std::u32string cps = decode(text);
    std::vector<std::string> out;
    const std::size_t n = cps.size();
    std::size_t i = 0;
    while (i < n) {
        if (!utf8::is_alnum(cps[i])) {
            ++i;
            continue;
        }
        std::u32string token;
        std::size_t j = i;
        while (j < n) {
            const char32_t c = cps[j];
            if (utf8::is_alnum(c)) {
                token.push_back(c);
                ++j;
                continue;
            }
            const bool next_alnum = j + 1 < n && utf8::is_alnum(cps[j + 1]);
            if (!next_alnum) break;
            if (utf8::is_apostrophe(c)) {
                token.push_back(U'\'');
            } else if (is_hyphen(c)) {
                token.push_back(U'-');
            } else if ((c == '.' || c == ',') && utf8::is_digit(cps[j - 1]) && utf8::is_digit(cps[j + 1])) {
                token.push_back(c);
            } else {
                break;
            }
            ++j;
        }
        // elided forms keep their trailing apostrophe ("l'" before a space or quote)
        if (uses_elision(language) && j < n && utf8::is_apostrophe(cps[j])) {
            token.push_back(U'\'');
            ++j;
        }
        emit_with_rules(out, encode(token), language);
        i = j;
    }
    return out;
}

TermSequence normalize(std::span<const std::string> tokens, const Stemmer& stemmer, const WordSet& stoplist,
                       std::string_view language) {
    TermSequence seq;
    seq.language = std::string(language);
    seq.terms.reserve(tokens.size());
    for (const auto& token : tokens) {
        std::string term = utf8::to_lower(token);
        if (term.empty() || stoplist.count(term)) continue;
        for (int pass = 0; pass < 8; ++pass) {
            std::string next = stemmer(term);
            if (next == term) break;
            term = std::move(next);
        }
        if (term.empty() || stoplist.count(term)) continue;
        seq.terms.push_back(std::move(term));
    }
    return seq;
}

WordSet read_word_list(std::istream& in) {
    WordSet words;
    std::string line;
    while (std::getline(in, line)) {
        const std::string entry = collapse_whitespace(line);
        if (entry.empty() || entry.front() == '#') continue;
        words.insert(utf8::to_lower(entry));
    }
    return words;
}

WordSet load_word_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read word list: " + path.string());
    return read_word_list(in);
}

TermSequence LanguageResources::analyze(std::string_view text) const {
    const auto tokens = tokenize(text, language);
    return normalize(tokens, stemmer, stoplist, language);
}

LanguageResources load_language_resources(std::string_view language, const std::filesystem::path& data_dir) {
    LanguageResources res;
    res.language = std::string(language);
    res.stemmer = default_stemmer(language);
    const auto stop = data_dir / "stoplists" / (res.language + ".txt");
    const auto abbrev = data_dir / "abbrev" / (res.language + ".txt");
    if (std::filesystem::exists(stop)) res.stoplist = load_word_list(stop);
    if (std::filesystem::exists(abbrev)) res.abbreviations = load_word_list(abbrev);
    return res;
}

std::filesystem::path default_data_dir() { return CLIR_DATA_DIR; }

void write_corpus(std::ostream& out, std::span<const CorpusDocument> documents) {
    for (const auto& doc : documents) {
        out << "#doc " << doc.id << '\n';
        for (const auto& s : doc.sentences) out << collapse_whitespace(s) << '\n';
        out << '\n';
    }
}

std::vector<CorpusDocument> read_corpus(std::istream& in) {
    std::vector<CorpusDocument> docs;
    std::string line;
    bool open = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("#doc ", 0) == 0) {
            docs.push_back({collapse_whitespace(line.substr(5)), {}});
            open = true;
            continue;
        }
        if (collapse_whitespace(line).empty()) {
            open = false;
            continue;
        }
        if (!open && line.front() == '#') continue;
        if (!open) throw DataError("corpus line " + std::to_string(line_no) + " outside a #doc block");
        docs.back().sentences.push_back(collapse_whitespace(line));
    }
    return docs;
}

}  // namespace clir
