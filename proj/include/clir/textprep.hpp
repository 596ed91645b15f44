#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "clir/stemmer.hpp"

namespace clir {

using WordSet = std::unordered_set<std::string>;

namespace html {

enum class TokenKind { text, open, close, self_closing };

struct Token {
    TokenKind kind = TokenKind::text;
    std::string name;        // lower-cased tag name, empty for text
    std::string content;     // raw text, or the raw attribute string for tags
};

struct LexResult {
    std::vector<Token> tokens;
    bool complete = true;    // false when a '<' started a tag that never closed
};

/// Splits markup into text and tag tokens. Comments, declarations and the
/// bodies of <script>/<style> are dropped.
LexResult lex(std::string_view text);

/// Value of attribute `name` in a raw attribute string, if present.
std::optional<std::string> attribute(std::string_view attributes, std::string_view name);

/// Decodes the common named entities and numeric character references.
std::string decode_entities(std::string_view text);

bool is_void_element(std::string_view name);
bool is_block_element(std::string_view name);

}  // namespace html

/// Splits a page into paragraphs. Well-formed markup is split on block
/// tags; otherwise all markup is stripped and paragraphs are separated by
/// blank lines. Input bytes are decoded as UTF-8 with a Latin-1 fallback.
std::vector<std::string> extract_text(std::string_view page_bytes);

/// Structured path only; nullopt when the markup does not nest properly.
std::optional<std::vector<std::string>> extract_structured(std::string_view text);

/// Plain-text path: strip every tag, split on blank lines.
std::vector<std::string> extract_plain(std::string_view text);

struct SentenceOrigin {
    std::string document_id;
    std::size_t paragraph = 0;
    std::size_t sentence = 0;
};

struct Sentence {
    std::string text;
    std::vector<std::string> tokens;  // surface tokens (whitespace split)
    std::size_t char_length = 0;      // code points in `text`
    SentenceOrigin origin;
};

/// Sentence boundaries fall after '.', '!' or '?' (closing quotes and
/// brackets allowed) when the next word starts with an upper-case letter or
/// a digit, unless the word carrying the period is a known abbreviation.
/// A paragraph without terminal punctuation is a header: one sentence.
/// `abbreviations` holds lower-cased entries including the period ("dr.").
std::vector<Sentence> segment(std::string_view paragraph, const WordSet& abbreviations);

std::vector<Sentence> segment_document(std::string_view document_id, std::span<const std::string> paragraphs,
                                       const WordSet& abbreviations);

/// Splits on whitespace and punctuation, then applies language rules:
/// fr/it elision (l'amour -> l' amour), fr contractions (au -> à le),
/// en possessives (Bob's -> Bob 's). Unknown languages get the generic split.
std::vector<std::string> tokenize(std::string_view text, std::string_view language);

struct TermSequence {
    std::vector<std::string> terms;
    std::string language;
};

/// Lower-cases, stems and drops stopwords. A token is dropped when either
/// its lower-cased surface form or its stem is on the stoplist. The stemmer
/// is applied until it reaches a fixed point so that normalize is idempotent.
TermSequence normalize(std::span<const std::string> tokens, const Stemmer& stemmer, const WordSet& stoplist,
                       std::string_view language = {});

/// One entry per line; blank lines and lines starting with '#' are ignored.
/// Entries are lower-cased.
WordSet load_word_list(const std::filesystem::path& path);
WordSet read_word_list(std::istream& in);

/// Stemmer, stoplist and abbreviation list for one language.
struct LanguageResources {
    std::string language;
    Stemmer stemmer;
    WordSet stoplist;
    WordSet abbreviations;

    /// Runs tokenize + normalize.
    TermSequence analyze(std::string_view text) const;
};

/// Loads `<data_dir>/stoplists/<lang>.txt` and `<data_dir>/abbrev/<lang>.txt`
/// (missing files give empty lists) and picks the default stemmer.
LanguageResources load_language_resources(std::string_view language, const std::filesystem::path& data_dir);

std::filesystem::path default_data_dir();

/// Extracted-corpus text format: `#doc <id>` header, one sentence per line,
/// blank line between documents. Other `#` lines outside a document are comments.
struct CorpusDocument {
    std::string id;
    std::vector<std::string> sentences;
};

void write_corpus(std::ostream& out, std::span<const CorpusDocument> documents);
std::vector<CorpusDocument> read_corpus(std::istream& in);

}  // namespace clir
