#include "snapinfo/sentiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace snapinfo::sentiment {

using corpus::Token;
using nlohmann::json;

namespace {

bool in_list(const std::vector<std::string>& list, const std::string& word) {
    return std::find(list.begin(), list.end(), word) != list.end();
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_negation(const Token& t, const RuleConfig& cfg) {
    return in_list(cfg.negation_cues, t.norm) || ends_with(t.norm, "n't");
}

bool negated_at(std::span<const Token> tokens, std::size_t i, const RuleConfig& cfg) {
    const std::size_t window = static_cast<std::size_t>(std::max(cfg.negation_window, 0));
    const std::size_t lo = i >= window ? i - window : 0;
    for (std::size_t j = lo; j < i; ++j)
        if (is_negation(tokens[j], cfg)) return true;
    return false;
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

std::string lowercase(std::string s) {
    for (char& c : s)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return s;
}

}  // namespace

void ValenceLexicon::add(const std::string& term, int score) {
    if (score < -5 || score > 5) throw OutOfRangeScore(term + " (" + std::to_string(score) + ")");
    const std::string key = lowercase(term);
    if (!entries_.emplace(key, score).second) throw DuplicateTerm(key);
}

int ValenceLexicon::valence(const std::string& norm) const {
    auto it = entries_.find(norm);
    return it == entries_.end() ? 0 : it->second;
}

ValenceLexicon ValenceLexicon::negated() const {
    ValenceLexicon out(name_ + "-negated");
    for (const auto& [term, score] : entries_) out.entries_.emplace(term, -score);
    return out;
}

ValenceLexicon read_lexicon(std::istream& in, std::string name) {
    ValenceLexicon lex(std::move(name));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto tab = line.rfind('\t');
        if (tab == std::string::npos || tab == 0) throw MalformedLine("line " + std::to_string(line_no));
        const std::string term = line.substr(0, tab);
        const std::string value = line.substr(tab + 1);
        std::size_t used = 0;
        int score = 0;
        try {
            score = std::stoi(value, &used);
        } catch (const std::exception&) {
            throw MalformedLine("line " + std::to_string(line_no) + ": score '" + value + "'");
        }
        if (used != value.size()) throw MalformedLine("line " + std::to_string(line_no) + ": score '" + value + "'");
        lex.add(term, score);
    }
    return lex;
}

ValenceLexicon load_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MalformedLine("cannot open " + path.string());
    return read_lexicon(in, path.stem().string());
}

void RuleConfig::validate() const {
    if (!(alpha > 0.0)) throw InvalidConfig("alpha must be > 0");
    if (!(but_before > 0.0 && but_before < but_after)) throw InvalidConfig("need 0 < but_before < but_after");
    if (negation_window < 1) throw InvalidConfig("negation_window must be >= 1");
    if (booster_window < 0) throw InvalidConfig("booster_window must be >= 0");
}

std::vector<std::string> RuleConfig::default_boosters() {
    return {"absolutely", "amazingly",   "awfully",    "completely",  "considerably", "decidedly",   "deeply",
            "enormously", "entirely",    "especially", "exceptionally", "extremely",  "fabulously",  "fully",
            "greatly",    "highly",      "hugely",     "incredibly",  "intensely",    "majorly",     "more",
            "most",       "particularly", "purely",    "quite",       "really",       "remarkably",  "so",
            "substantially", "thoroughly", "totally",  "tremendously", "uber",        "unbelievably", "unusually",
            "utterly",    "very"};
}

std::vector<std::string> RuleConfig::default_dampeners() {
    return {"almost", "barely",  "hardly",   "less",  "little", "marginally", "occasionally",
            "partly", "scarcely", "slightly", "somewhat", "kinda", "sorta"};
}

std::vector<std::string> RuleConfig::default_negations() {
    return {"aint",    "arent",   "cannot",  "cant",    "couldnt", "darent", "didnt",  "doesnt", "dont",
            "hadnt",   "hasnt",   "havent",  "isnt",    "mightnt", "mustnt", "neither", "neednt", "never",
            "none",    "nope",    "nor",     "not",     "nothing", "nowhere", "oughtnt", "shant", "shouldnt",
            "wasnt",   "werent",  "without", "wont",    "wouldnt", "rarely", "seldom", "despite"};
}

double word_sum_score(std::span<const Token> tokens, const ValenceLexicon& lex, bool negation_mode,
                      const RuleConfig& cfg) {
    double total = 0.0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const int v = lex.valence(tokens[i].norm);
        if (v == 0) continue;
        double value = v;
        if (negation_mode && negated_at(tokens, i, cfg)) value *= cfg.negation_scalar;
        total += value;
    }
    return total;
}

std::vector<double> adjusted_valences(std::span<const Token> tokens, const ValenceLexicon& lex, const RuleConfig& cfg) {
    std::vector<double> valences(tokens.size(), 0.0);

    const auto caps = static_cast<std::size_t>(
        std::count_if(tokens.begin(), tokens.end(), [](const Token& t) { return t.all_caps; }));
    const bool mixed_case = caps > 0 && caps < tokens.size();

    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const Token& t = tokens[i];
        double v = lex.valence(t.norm);
        if (v == 0.0) continue;

        const std::size_t window = static_cast<std::size_t>(cfg.booster_window);
        for (std::size_t j = i >= window ? i - window : 0; j < i; ++j) {
            if (in_list(cfg.booster_terms, tokens[j].norm)) v += sign_of(v) * cfg.booster_delta;
            else if (in_list(cfg.dampener_terms, tokens[j].norm)) v -= sign_of(v) * cfg.booster_delta;
        }
        if (negated_at(tokens, i, cfg)) v *= cfg.negation_scalar;
        if (mixed_case && t.all_caps) v += sign_of(v) * cfg.caps_delta;
        v += sign_of(v) * cfg.exclaim_delta * std::min(t.trailing_exclaims, 3);
        valences[i] = v;
    }

    auto but = std::find_if(tokens.begin(), tokens.end(), [](const Token& t) { return t.norm == "but"; });
    if (but != tokens.end()) {
        const auto pivot = static_cast<std::size_t>(but - tokens.begin());
        for (std::size_t i = 0; i < valences.size(); ++i) {
            if (i < pivot) valences[i] *= cfg.but_before;
            else if (i > pivot) valences[i] *= cfg.but_after;
        }
    }
    return valences;
}

double normalize_compound(double raw_sum, double alpha) {
    if (raw_sum == 0.0) return 0.0;
    const double c = raw_sum / std::sqrt(raw_sum * raw_sum + alpha);
    constexpr double kEdge = 1.0 - 1e-15;
    return std::clamp(c, -kEdge, kEdge);
}

double compound_score(std::span<const Token> tokens, const ValenceLexicon& lex, const RuleConfig& cfg) {
    double sum = 0.0;
    for (double v : adjusted_valences(tokens, lex, cfg)) sum += v;
    return normalize_compound(sum, cfg.alpha);
}

double sentence_weight(const std::vector<Token>& tokens, const std::vector<std::string>& key_terms, double kappa) {
    for (const auto& term : key_terms)
        if (corpus::contains_term(tokens, term)) return kappa;
    return 1.0;
}

double document_weight(int traffic_tier, double grade) {
    if (traffic_tier < 1 || traffic_tier > 5) throw InvalidTier(std::to_string(traffic_tier));
    return std::ldexp(1.0, traffic_tier - 1) * std::clamp(grade / 12.0, 0.5, 1.5);
}

std::vector<SentenceScore> score_sentences(const corpus::Document& doc, const ValenceLexicon& lex,
                                           const ScoringConfig& cfg) {
    std::vector<SentenceScore> out;
    for (const auto& s : corpus::split_sentences(doc)) {
        SentenceScore sc;
        sc.doc_id = doc.id;
        sc.index = s.index;
        sc.word_sum = word_sum_score(s.tokens, lex, cfg.negation_mode, cfg.rules);
        sc.compound = compound_score(s.tokens, lex, cfg.rules);
        sc.weight = sentence_weight(s.tokens, cfg.key_terms, cfg.kappa);
        out.push_back(std::move(sc));
    }
    return out;
}

DocumentScore aggregate_sentences(const std::string& doc_id, Timestamp published_at,
                                  std::span<const SentenceScore> sentences, double doc_weight) {
    if (sentences.empty()) throw corpus::EmptyDocument("document '" + doc_id + "' has no sentences");
    double wsum = 0.0, word = 0.0, comp = 0.0;
    for (const auto& s : sentences) {
        wsum += s.weight;
        word += s.weight * s.word_sum;
        comp += s.weight * s.compound;
    }
    DocumentScore d;
    d.doc_id = doc_id;
    d.word_sum_avg = word / wsum;
    d.compound_avg = comp / wsum;
    d.doc_weight = doc_weight;
    d.published_at = published_at;
    return d;
}

DocumentScore score_document(const corpus::Document& doc, const ValenceLexicon& lex, const ScoringConfig& cfg) {
    const auto sentences = score_sentences(doc, lex, cfg);
    const double weight = cfg.apply_doc_weight ? document_weight(doc.traffic_tier, corpus::reading_grade(doc)) : 1.0;
    return aggregate_sentences(doc.id, doc.published_at, sentences, weight);
}

std::vector<TimePoint> corpus_timeseries(std::span<const DocumentScore> scores, Day from, Day to) {
    if (from > to) throw InvalidRange(format_day(from) + " > " + format_day(to));
    struct Acc {
        double w = 0.0, word = 0.0, comp = 0.0;
        std::size_t n = 0;
    };
    std::map<Day, Acc> days;
    for (const auto& s : scores) {
        const Day d = utc_day(s.published_at);
        if (d < from || d > to) continue;
        auto& a = days[d];
        a.w += s.doc_weight;
        a.word += s.doc_weight * s.word_sum_avg;
        a.comp += s.doc_weight * s.compound_avg;
        ++a.n;
    }
    std::vector<TimePoint> out;
    out.reserve(days.size());
    for (const auto& [day, a] : days) out.push_back(TimePoint{day, a.word / a.w, a.comp / a.w, a.n, a.w});
    return out;
}

Agreement tool_agreement(std::span<const DocumentScore> scores) {
    const std::size_t n = scores.size();
    if (n < 2) throw DegenerateInput("need at least 2 documents");
    double mx = 0.0, my = 0.0;
    for (const auto& s : scores) {
        mx += s.word_sum_avg;
        my += s.compound_avg;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    std::size_t agree = 0;
    for (const auto& s : scores) {
        const double dx = s.word_sum_avg - mx, dy = s.compound_avg - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
        if (s.word_sum_avg * s.compound_avg >= 0.0) ++agree;
    }
    if (sxx == 0.0 || syy == 0.0) throw DegenerateInput("zero variance in a score column");
    return Agreement{std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0),
                     static_cast<double>(agree) / static_cast<double>(n)};
}

std::string to_json_line(const DocumentScore& s) {
    json j{{"doc_id", s.doc_id},
           {"word_sum_avg", s.word_sum_avg},
           {"compound_avg", s.compound_avg},
           {"doc_weight", s.doc_weight},
           {"published_at", format_timestamp(s.published_at)}};
    return j.dump();
}

DocumentScore document_score_from_json_line(const std::string& line) {
    try {
        const json j = json::parse(line);
        DocumentScore s;
        s.doc_id = j.at("doc_id").get<std::string>();
        s.word_sum_avg = j.at("word_sum_avg").get<double>();
        s.compound_avg = j.at("compound_avg").get<double>();
        s.doc_weight = j.at("doc_weight").get<double>();
        const auto ts = parse_timestamp(j.at("published_at").get<std::string>());
        if (!ts) throw MalformedLine("bad published_at");
        s.published_at = *ts;
        if (!(s.doc_weight > 0.0)) throw MalformedLine("doc_weight must be > 0");
        return s;
    } catch (const json::exception& e) {
        throw MalformedLine(e.what());
    }
}

std::vector<DocumentScore> read_document_scores(std::istream& in) {
    std::vector<DocumentScore> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(document_score_from_json_line(line));
    }
    return out;
}

}  // namespace snapinfo::sentiment
