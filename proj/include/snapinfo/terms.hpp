#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "snapinfo/corpus.hpp"
#include "snapinfo/dates.hpp"
#include "snapinfo/error.hpp"
#include "snapinfo/sentiment.hpp"

namespace snapinfo::terms {

SNAPINFO_DEFINE_ERROR(EmptyCorpus);
SNAPINFO_DEFINE_ERROR(MissingScore);

using Stopwords = std::set<std::string, std::less<>>;

/// The English list shipped in data/stopwords.txt, compiled in.
const Stopwords& default_stopwords();
Stopwords read_stopwords(std::istream& in);
Stopwords load_stopwords(const std::filesystem::path& path);

enum class Origin { tfidf, bigram, entity };
std::string_view to_string(Origin o);

struct TermEntry {
    std::string term;
    double score = 0.0;
    /// Absent when entries are aggregated over all days.
    std::optional<Day> day;
    Origin origin = Origin::tfidf;

    friend bool operator==(const TermEntry&, const TermEntry&) = default;
};

/// Content tokens of a document: sentence-split norms minus stopwords.
std::vector<std::vector<std::string>> content_sentences(const corpus::Document& doc, const Stopwords& stopwords);

using TfidfScores = std::map<std::pair<std::string, std::string>, double>;

/// (doc_id, term) -> count * ln(N / df). Throws EmptyCorpus.
TfidfScores tfidf(std::span<const corpus::Document> corpus, const Stopwords& stopwords = default_stopwords());

struct Collocation {
    std::string bigram;
    double pmi = 0.0;
    std::size_t count = 0;
};

/// Adjacent pairs within a sentence, after stopword removal when a stopword
/// set is given. Ranked by PMI desc, count desc, then bigram.
std::vector<Collocation> bigram_collocations(std::span<const corpus::Document> corpus, std::size_t min_count = 3,
                                             std::size_t top_n = 50, const Stopwords& stopwords = {});

struct LdaParams {
    int topics = 10;
    int iterations = 500;
    /// Negative means 50 / topics.
    double alpha = -1.0;
    double beta = 0.01;
    std::uint64_t seed = 20170924;
};

/// Row-major dense matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

struct TopicModel {
    int topics = 0;
    std::vector<std::string> vocab;
    std::vector<std::string> doc_ids;
    Matrix phi;    ///< topics x vocab
    Matrix theta;  ///< docs x topics
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;

    /// Highest-probability words of topic k, ties broken by vocabulary order.
    std::vector<std::pair<std::string, double>> top_words(int k, std::size_t n) const;
};

/// Collapsed Gibbs sampling. Throws EmptyCorpus, std::invalid_argument.
TopicModel lda_fit(std::span<const corpus::Document> corpus, const LdaParams& params,
                   const Stopwords& stopwords = default_stopwords());

struct EntityMention {
    std::string doc_id;
    std::string term;
    double score = 0.0;
};

struct WordCloudParams {
    bool day_bucket = true;
    std::size_t min_count = 3;
    std::size_t top_n = 50;
};

/// Per document: tfidf scores and positive-PMI collocation hits (PMI times
/// occurrences in the document) multiplied by the document weight, summed per
/// term (and per day when bucketing). Zero scores are dropped.
/// Throws MissingScore.
std::vector<TermEntry> wordcloud_terms(std::span<const corpus::Document> corpus,
                                       std::span<const sentiment::DocumentScore> doc_scores,
                                       const WordCloudParams& params = {},
                                       const Stopwords& stopwords = default_stopwords(),
                                       std::span<const EntityMention> entities = {});

}  // namespace snapinfo::terms
