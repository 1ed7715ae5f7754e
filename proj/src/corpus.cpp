#include "snapinfo/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace snapinfo::corpus {

using nlohmann::json;

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_delim(char c) { return c == '.' || c == '!' || c == '?'; }

char to_lower(char c) { return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; }

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string_view> split_words(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        const std::size_t start = i;
        while (i < s.size() && !is_space(s[i])) ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

constexpr std::array<std::string_view, 30> kAbbreviations{
    "Dr.",  "Mr.",  "Mrs.", "Ms.",  "St.",  "U.S.", "Sen.", "Rep.", "vs.",  "etc.",
    "Jr.",  "Sr.",  "Gov.", "Prof.", "Inc.", "Corp.", "Co.", "Lt.",  "Gen.", "Mt.",
    "U.K.", "e.g.", "i.e.", "Jan.", "Feb.", "Aug.", "Sept.", "Oct.", "Nov.", "Dec."};

bool is_abbreviation(std::string_view word) {
    while (!word.empty() && (word.front() == '(' || word.front() == '"' || word.front() == '\'' ||
                             word.front() == '['))
        word.remove_prefix(1);
    return std::any_of(kAbbreviations.begin(), kAbbreviations.end(), [word](std::string_view a) {
        return a.size() == word.size() &&
               std::equal(a.begin(), a.end(), word.begin(), [](char x, char y) { return to_lower(x) == to_lower(y); });
    });
}

std::optional<std::string> invariant_violation(const Document& doc) {
    if (doc.id.empty()) return "empty id";
    if (trim(doc.text).empty()) return "document '" + doc.id + "' has empty text";
    if (doc.traffic_tier < 1 || doc.traffic_tier > 5)
        return "document '" + doc.id + "' traffic_tier " + std::to_string(doc.traffic_tier) + " outside 1..5";
    if (doc.geotag) {
        const auto& g = *doc.geotag;
        if (!(g.lat >= -90.0 && g.lat <= 90.0) || !(g.lon >= -180.0 && g.lon <= 180.0))
            return "document '" + doc.id + "' geotag out of range";
    }
    if (doc.label && doc.kind != DocKind::tweet) return "document '" + doc.id + "' is an article but carries a label";
    return std::nullopt;
}

[[noreturn]] void malformed(std::size_t line_no, const std::string& what) {
    throw MalformedRecord("line " + std::to_string(line_no) + ": " + what);
}

Document document_from_json(const json& j, std::size_t line_no, std::vector<std::string>* warnings) {
    static const std::unordered_set<std::string> known{
        "id", "kind", "text", "source", "url", "published_at", "geotag", "traffic_tier", "label"};
    if (!j.is_object()) malformed(line_no, "record is not a JSON object");

    auto str = [&](const char* key) -> std::string {
        auto it = j.find(key);
        if (it == j.end() || !it->is_string()) malformed(line_no, std::string("missing string field '") + key + "'");
        return it->get<std::string>();
    };

    Document d;
    d.id = str("id");
    const auto kind = parse_kind(str("kind"));
    if (!kind) malformed(line_no, "unknown kind");
    d.kind = *kind;
    d.text = str("text");
    d.source = str("source");
    const auto ts = parse_timestamp(str("published_at"));
    if (!ts) malformed(line_no, "published_at is not ISO-8601 with zone");
    d.published_at = *ts;

    if (auto it = j.find("url"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) malformed(line_no, "url must be a string");
        d.url = it->get<std::string>();
    }
    if (auto it = j.find("geotag"); it != j.end() && !it->is_null()) {
        if (!it->is_object() || !it->contains("lat") || !it->contains("lon") || !(*it)["lat"].is_number() ||
            !(*it)["lon"].is_number())
            malformed(line_no, "geotag must be an object with numeric lat and lon");
        d.geotag = GeoTag{(*it)["lat"].get<double>(), (*it)["lon"].get<double>()};
    }
    if (auto it = j.find("traffic_tier"); it != j.end() && !it->is_null()) {
        if (!it->is_number_integer()) malformed(line_no, "traffic_tier must be an integer");
        d.traffic_tier = it->get<int>();
    }
    if (auto it = j.find("label"); it != j.end() && !it->is_null()) {
        const auto label = it->is_string() ? parse_label(it->get<std::string>()) : std::nullopt;
        if (!label) malformed(line_no, "unknown label");
        d.label = *label;
    }
    if (warnings) {
        for (const auto& [key, _] : j.items())
            if (!known.count(key)) warnings->push_back("line " + std::to_string(line_no) + ": ignoring unknown field '" + key + "'");
    }

    if (auto why = invariant_violation(d)) malformed(line_no, *why);
    return d;
}

}  // namespace

std::string_view to_string(DocKind k) { return k == DocKind::article ? "article" : "tweet"; }

std::string_view to_string(Label l) {
    switch (l) {
        case Label::positive: return "positive";
        case Label::negative: return "negative";
        case Label::neutral: return "neutral";
    }
    return "neutral";
}

std::optional<DocKind> parse_kind(std::string_view s) {
    if (s == "article") return DocKind::article;
    if (s == "tweet") return DocKind::tweet;
    return std::nullopt;
}

std::optional<Label> parse_label(std::string_view s) {
    if (s == "positive") return Label::positive;
    if (s == "negative") return Label::negative;
    if (s == "neutral") return Label::neutral;
    return std::nullopt;
}

void validate(const Document& doc) {
    if (auto why = invariant_violation(doc)) throw MalformedRecord(*why);
}

std::vector<Document> read_documents(std::istream& in, std::vector<std::string>* warnings) {
    std::vector<Document> docs;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            malformed(line_no, e.what());
        }
        Document d = document_from_json(j, line_no, warnings);
        if (!seen.insert(d.id).second) throw DuplicateId(d.id);
        docs.push_back(std::move(d));
    }
    return docs;
}

std::vector<Document> load_documents(const std::filesystem::path& path, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw MalformedRecord("cannot open " + path.string());
    return read_documents(in, warnings);
}

std::string to_jsonl_line(const Document& doc) {
    json j;
    j["id"] = doc.id;
    j["kind"] = to_string(doc.kind);
    j["text"] = doc.text;
    j["source"] = doc.source;
    j["url"] = doc.url ? json(*doc.url) : json(nullptr);
    j["published_at"] = format_timestamp(doc.published_at);
    j["geotag"] = doc.geotag ? json{{"lat", doc.geotag->lat}, {"lon", doc.geotag->lon}} : json(nullptr);
    j["traffic_tier"] = doc.traffic_tier;
    j["label"] = doc.label ? json(to_string(*doc.label)) : json(nullptr);
    return j.dump();
}

void write_documents(std::ostream& out, const std::vector<Document>& docs) {
    for (const auto& d : docs) out << to_jsonl_line(d) << '\n';
}

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    for (std::string_view word : split_words(text)) {
        std::size_t b = 0, e = word.size();
        while (b < e && is_punct(word[b])) ++b;
        while (e > b && is_punct(word[e - 1])) --e;
        if (b == e) continue;

        Token t;
        t.surface = std::string(word);
        t.norm.reserve(e - b);
        for (std::size_t i = b; i < e; ++i) t.norm.push_back(to_lower(word[i]));

        int letters = 0, upper = 0;
        for (char c : word) {
            if (is_upper(c)) ++letters, ++upper;
            else if (is_lower(c)) ++letters;
        }
        t.all_caps = letters >= 2 && upper == letters;

        int bangs = 0;
        for (std::size_t i = e; i < word.size(); ++i)
            if (word[i] == '!') ++bangs;
        t.trailing_exclaims = std::min(bangs, 3);
        tokens.push_back(std::move(t));
    }
    return tokens;
}

namespace {

/// With `cased` set, a boundary also needs an uppercase letter after the gap.
std::vector<Sentence> split_text(const Document& doc, bool cased) {
    const std::string_view text = doc.text;
    std::vector<std::string> segments;
    std::size_t start = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_delim(text[i])) {
            ++i;
            continue;
        }
        std::size_t k = i;
        while (k < text.size() && is_delim(text[k])) ++k;
        const bool single_period = (k - i == 1 && text[i] == '.');
        while (k < text.size() && (text[k] == '"' || text[k] == '\'' || text[k] == ')' || text[k] == ']')) ++k;

        std::size_t next = k;
        while (next < text.size() && is_space(text[next])) ++next;
        bool boundary = next == text.size() || (next > k && (!cased || is_upper(text[next])));

        if (boundary && single_period) {
            std::size_t ws = i;
            while (ws > start && !is_space(text[ws - 1])) --ws;
            if (is_abbreviation(text.substr(ws, i + 1 - ws))) boundary = false;
        }
        if (boundary) {
            segments.emplace_back(text.substr(start, k - start));
            start = k;
        }
        i = k;
    }
    if (start < text.size()) segments.emplace_back(text.substr(start));

    std::vector<Sentence> sentences;
    std::string pending;
    for (const auto& seg : segments) {
        std::string raw = trim(seg);
        if (raw.empty()) continue;
        if (!pending.empty()) {
            raw = pending + " " + raw;
            pending.clear();
        }
        auto tokens = tokenize(raw);
        if (tokens.empty()) {
            if (sentences.empty()) {
                pending = raw;
            } else {
                auto& prev = sentences.back();
                prev.raw += " " + raw;
            }
            continue;
        }
        Sentence s;
        s.doc_id = doc.id;
        s.index = sentences.size();
        s.tokens = std::move(tokens);
        s.raw = std::move(raw);
        sentences.push_back(std::move(s));
    }
    if (sentences.empty()) throw EmptyDocument("document '" + doc.id + "' contains no words");
    return sentences;
}

}  // namespace

std::vector<Sentence> split_sentences(const Document& doc) { return split_text(doc, true); }

int count_syllables(std::string_view word) {
    auto is_vowel = [](char c) {
        c = to_lower(c);
        return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
    };
    int groups = 0;
    bool in_group = false;
    for (char c : word) {
        const bool v = is_vowel(c);
        if (v && !in_group) ++groups;
        in_group = v;
    }
    // silent trailing 'e' forms its own group only when preceded by a consonant
    const std::size_t n = word.size();
    if (n >= 2 && to_lower(word[n - 1]) == 'e' && !is_vowel(word[n - 2])) --groups;
    return std::max(groups, 1);
}

double flesch_kincaid_grade(std::size_t words, std::size_t sentences, std::size_t syllables) {
    if (words == 0 || sentences == 0) throw EmptyDocument("reading grade needs at least one word and sentence");
    return 0.39 * (static_cast<double>(words) / static_cast<double>(sentences)) +
           11.8 * (static_cast<double>(syllables) / static_cast<double>(words)) - 15.59;
}

double reading_grade(const Document& doc) {
    const auto sentences = split_text(doc, false);
    std::size_t words = 0, syllables = 0;
    for (const auto& s : sentences) {
        for (const auto& t : s.tokens) {
            ++words;
            syllables += static_cast<std::size_t>(count_syllables(t.norm));
        }
    }
    return flesch_kincaid_grade(words, sentences.size(), syllables);
}

bool contains_term(const std::vector<Token>& tokens, std::string_view term) {
    const auto parts = split_words(term);
    if (parts.empty() || parts.size() > tokens.size()) return false;
    for (std::size_t i = 0; i + parts.size() <= tokens.size(); ++i) {
        bool match = true;
        for (std::size_t k = 0; k < parts.size() && match; ++k) match = tokens[i + k].norm == parts[k];
        if (match) return true;
    }
    return false;
}

bool is_relevant(const Document& doc, const RelevanceFilter& filter) {
    const auto tokens = tokenize(doc.text);
    auto has_context = [&] {
        for (const auto& t : tokens)
            if (std::find(filter.context_terms.begin(), filter.context_terms.end(), t.norm) != filter.context_terms.end())
                return true;
        return false;
    };
    for (const auto& term : filter.key_terms) {
        if (!contains_term(tokens, term)) continue;
        const bool ambiguous =
            std::find(filter.ambiguous_terms.begin(), filter.ambiguous_terms.end(), term) != filter.ambiguous_terms.end();
        if (!ambiguous || has_context()) return true;
    }
    return false;
}

std::vector<Document> filter_relevant(const std::vector<Document>& docs, const RelevanceFilter& filter) {
    std::vector<Document> out;
    std::copy_if(docs.begin(), docs.end(), std::back_inserter(out),
                 [&](const Document& d) { return is_relevant(d, filter); });
    return out;
}

}  // namespace snapinfo::corpus
