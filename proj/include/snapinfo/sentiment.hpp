#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "snapinfo/corpus.hpp"
#include "snapinfo/dates.hpp"
#include "snapinfo/error.hpp"

namespace snapinfo::sentiment {

SNAPINFO_DEFINE_ERROR(OutOfRangeScore);
SNAPINFO_DEFINE_ERROR(DuplicateTerm);
SNAPINFO_DEFINE_ERROR(MalformedLine);
SNAPINFO_DEFINE_ERROR(InvalidTier);
SNAPINFO_DEFINE_ERROR(InvalidRange);
SNAPINFO_DEFINE_ERROR(DegenerateInput);
SNAPINFO_DEFINE_ERROR(InvalidConfig);

/// Word valences in [-5, 5]. Terms are stored lowercase.
class ValenceLexicon {
public:
    ValenceLexicon() = default;
    explicit ValenceLexicon(std::string name) : name_(std::move(name)) {}

    /// Throws OutOfRangeScore or DuplicateTerm.
    void add(const std::string& term, int score);

    /// 0 when absent.
    int valence(const std::string& norm) const;
    bool contains(const std::string& norm) const { return entries_.count(norm) != 0; }

    const std::map<std::string, int>& entries() const { return entries_; }
    const std::string& name() const { return name_; }
    std::size_t size() const { return entries_.size(); }

    /// Every score multiplied by -1.
    ValenceLexicon negated() const;

private:
    std::string name_;
    std::map<std::string, int> entries_;
};

ValenceLexicon read_lexicon(std::istream& in, std::string name = "lexicon");
ValenceLexicon load_lexicon(const std::filesystem::path& path);

struct RuleConfig {
    double alpha = 15.0;
    double booster_delta = 0.293;
    double negation_scalar = -0.74;
    int negation_window = 3;
    int booster_window = 3;
    double caps_delta = 0.733;
    double exclaim_delta = 0.292;
    double but_before = 0.5;
    double but_after = 1.5;
    std::vector<std::string> booster_terms = default_boosters();
    std::vector<std::string> dampener_terms = default_dampeners();
    std::vector<std::string> negation_cues = default_negations();

    /// Throws InvalidConfig.
    void validate() const;

    static std::vector<std::string> default_boosters();
    static std::vector<std::string> default_dampeners();
    static std::vector<std::string> default_negations();
};

/// Everything the document scorer needs besides the lexicon.
struct ScoringConfig {
    RuleConfig rules;
    std::vector<std::string> key_terms{"snap", "food stamp", "food stamps", "ebt"};
    double kappa = 2.0;
    bool negation_mode = false;
    /// When false every document weighs 1 in corpus aggregates.
    bool apply_doc_weight = true;
};

struct SentenceScore {
    std::string doc_id;
    std::size_t index = 0;
    double word_sum = 0.0;
    double compound = 0.0;
    double weight = 1.0;
};

struct DocumentScore {
    std::string doc_id;
    double word_sum_avg = 0.0;
    double compound_avg = 0.0;
    double doc_weight = 1.0;
    Timestamp published_at{};

    friend bool operator==(const DocumentScore&, const DocumentScore&) = default;
};

struct TimePoint {
    Day day{};
    double avg_word_sum = 0.0;
    double avg_compound = 0.0;
    std::size_t n_docs = 0;
    /// Sum of doc weights on this day.
    double weight = 0.0;

    friend bool operator==(const TimePoint&, const TimePoint&) = default;
};

struct Agreement {
    double pearson_r = 0.0;
    double sign_agreement = 0.0;
};

double word_sum_score(std::span<const corpus::Token> tokens, const ValenceLexicon& lex, bool negation_mode = false,
                      const RuleConfig& cfg = {});

/// Per-token valences after the rule adjustments, before normalization.
std::vector<double> adjusted_valences(std::span<const corpus::Token> tokens, const ValenceLexicon& lex,
                                      const RuleConfig& cfg);

/// s / sqrt(s^2 + alpha), kept strictly inside (-1, 1).
double normalize_compound(double raw_sum, double alpha);

double compound_score(std::span<const corpus::Token> tokens, const ValenceLexicon& lex, const RuleConfig& cfg = {});

double sentence_weight(const std::vector<corpus::Token>& tokens, const std::vector<std::string>& key_terms,
                       double kappa);

/// 2^(tier-1) * clamp(grade/12, 0.5, 1.5). Throws InvalidTier.
double document_weight(int traffic_tier, double grade);

std::vector<SentenceScore> score_sentences(const corpus::Document& doc, const ValenceLexicon& lex,
                                           const ScoringConfig& cfg);

/// Weighted means of the sentence scores. Throws corpus::EmptyDocument when
/// `sentences` is empty.
DocumentScore aggregate_sentences(const std::string& doc_id, Timestamp published_at,
                                  std::span<const SentenceScore> sentences, double doc_weight);

DocumentScore score_document(const corpus::Document& doc, const ValenceLexicon& lex, const ScoringConfig& cfg);

/// One point per UTC day in [from, to] that has documents. Throws InvalidRange.
std::vector<TimePoint> corpus_timeseries(std::span<const DocumentScore> scores, Day from, Day to);

/// Throws DegenerateInput for fewer than 2 scores or zero variance.
Agreement tool_agreement(std::span<const DocumentScore> scores);

std::string to_json_line(const DocumentScore& s);
/// Throws MalformedLine.
DocumentScore document_score_from_json_line(const std::string& line);
std::vector<DocumentScore> read_document_scores(std::istream& in);

}  // namespace snapinfo::sentiment
