#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snapinfo/dates.hpp"
#include "snapinfo/error.hpp"

namespace snapinfo::corpus {

SNAPINFO_DEFINE_ERROR(MalformedRecord);
SNAPINFO_DEFINE_ERROR(DuplicateId);
SNAPINFO_DEFINE_ERROR(EmptyDocument);

enum class DocKind { article, tweet };
enum class Label { positive, negative, neutral };

std::string_view to_string(DocKind k);
std::string_view to_string(Label l);
std::optional<DocKind> parse_kind(std::string_view s);
std::optional<Label> parse_label(std::string_view s);

struct GeoTag {
    double lat = 0.0;
    double lon = 0.0;

    friend bool operator==(const GeoTag&, const GeoTag&) = default;
};

struct Document {
    std::string id;
    DocKind kind = DocKind::article;
    std::string text;
    std::string source;
    std::optional<std::string> url;
    Timestamp published_at{};
    std::optional<GeoTag> geotag;
    int traffic_tier = 1;
    std::optional<Label> label;

    friend bool operator==(const Document&, const Document&) = default;
};

struct Token {
    std::string surface;
    std::string norm;
    bool all_caps = false;
    int trailing_exclaims = 0;
};

struct Sentence {
    std::string doc_id;
    std::size_t index = 0;
    std::vector<Token> tokens;
    std::string raw;
};

/// Throws MalformedRecord describing the first violated invariant.
void validate(const Document& doc);

/// Reads JSON Lines. Blank lines are skipped but still counted for line
/// numbers. Unknown fields are accepted; one warning per occurrence is
/// appended to `warnings` when it is non-null.
std::vector<Document> read_documents(std::istream& in, std::vector<std::string>* warnings = nullptr);
std::vector<Document> load_documents(const std::filesystem::path& path,
                                     std::vector<std::string>* warnings = nullptr);

void write_documents(std::ostream& out, const std::vector<Document>& docs);
std::string to_jsonl_line(const Document& doc);

struct RelevanceFilter {
    std::vector<std::string> key_terms{"snap", "food stamp", "food stamps", "ebt"};
    /// Single-token key terms that only count when a context term co-occurs.
    std::vector<std::string> ambiguous_terms{"snap"};
    std::vector<std::string> context_terms{"food",     "stamp", "stamps", "benefit",
                                           "benefits", "ebt",   "hunger", "usda"};
};

std::vector<Document> filter_relevant(const std::vector<Document>& docs, const RelevanceFilter& filter = {});
bool is_relevant(const Document& doc, const RelevanceFilter& filter = {});

std::vector<Token> tokenize(std::string_view text);

/// Splits on ., ! or ? followed by whitespace and an uppercase letter, or by
/// end of text. Segments without any word token are merged into a neighbour.
/// Throws EmptyDocument when the text yields no tokens at all.
std::vector<Sentence> split_sentences(const Document& doc);

int count_syllables(std::string_view word);

/// Flesch-Kincaid grade level. Sentences are counted at every terminal
/// punctuation followed by whitespace, whatever the case of the next word.
/// Throws EmptyDocument without words.
double reading_grade(const Document& doc);

/// Counts-based form, exposed for callers that already have the totals.
double flesch_kincaid_grade(std::size_t words, std::size_t sentences, std::size_t syllables);

/// True when `tokens` contains `term` (whitespace-separated words) as a run of
/// consecutive norms.
bool contains_term(const std::vector<Token>& tokens, std::string_view term);

}  // namespace snapinfo::corpus
