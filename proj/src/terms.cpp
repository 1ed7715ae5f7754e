#include "snapinfo/terms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "stopwords_data.hpp"

namespace snapinfo::terms {

using corpus::Document;

namespace {

using PairCounts = std::map<std::pair<std::string, std::string>, std::size_t>;

std::string join(const std::pair<std::string, std::string>& p) { return p.first + " " + p.second; }

/// Adjacent content pairs; a stopword on either side breaks the pair.
void count_pairs(const Document& doc, const Stopwords& stopwords, PairCounts& pairs,
                 std::map<std::string, std::size_t>* unigrams) {
    std::vector<corpus::Sentence> sentences;
    try {
        sentences = corpus::split_sentences(doc);
    } catch (const corpus::EmptyDocument&) {
        return;
    }
    for (const auto& s : sentences) {
        const auto& t = s.tokens;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (stopwords.count(t[i].norm)) continue;
            if (unigrams) ++(*unigrams)[t[i].norm];
            if (i + 1 < t.size() && !stopwords.count(t[i + 1].norm)) ++pairs[{t[i].norm, t[i + 1].norm}];
        }
    }
}

// 53 random bits -> [0, 1); identical on every platform, unlike
// std::uniform_real_distribution.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

const Stopwords& default_stopwords() {
    static const Stopwords words = [] {
        std::istringstream in{std::string(kStopwordsText)};
        return read_stopwords(in);
    }();
    return words;
}

Stopwords read_stopwords(std::istream& in) {
    Stopwords out;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
        const auto start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        std::string w = line.substr(start);
        for (char& c : w)
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        out.insert(std::move(w));
    }
    return out;
}

Stopwords load_stopwords(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_stopwords(in);
}

std::string_view to_string(Origin o) {
    switch (o) {
        case Origin::tfidf: return "tfidf";
        case Origin::bigram: return "bigram";
        case Origin::entity: return "entity";
    }
    return "tfidf";
}

std::vector<std::vector<std::string>> content_sentences(const Document& doc, const Stopwords& stopwords) {
    std::vector<std::vector<std::string>> out;
    std::vector<corpus::Sentence> sentences;
    try {
        sentences = corpus::split_sentences(doc);
    } catch (const corpus::EmptyDocument&) {
        return out;
    }
    for (const auto& s : sentences) {
        std::vector<std::string> words;
        for (const auto& t : s.tokens)
            if (!stopwords.count(t.norm)) words.push_back(t.norm);
        if (!words.empty()) out.push_back(std::move(words));
    }
    return out;
}

TfidfScores tfidf(std::span<const Document> corpus, const Stopwords& stopwords) {
    if (corpus.empty()) throw EmptyCorpus("tfidf needs at least one document");

    std::vector<std::map<std::string, std::size_t>> counts(corpus.size());
    std::map<std::string, std::size_t> df;
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        for (const auto& sentence : content_sentences(corpus[d], stopwords))
            for (const auto& w : sentence) ++counts[d][w];
        for (const auto& [w, _] : counts[d]) ++df[w];
    }

    const double n = static_cast<double>(corpus.size());
    TfidfScores out;
    for (std::size_t d = 0; d < corpus.size(); ++d)
        for (const auto& [w, c] : counts[d])
            out[{corpus[d].id, w}] = static_cast<double>(c) * std::log(n / static_cast<double>(df[w]));
    return out;
}

std::vector<Collocation> bigram_collocations(std::span<const Document> corpus, std::size_t min_count,
                                             std::size_t top_n, const Stopwords& stopwords) {
    if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");
    PairCounts pairs;
    std::map<std::string, std::size_t> unigrams;
    for (const auto& doc : corpus) count_pairs(doc, stopwords, pairs, &unigrams);

    std::size_t n_uni = 0, n_bi = 0;
    for (const auto& [_, c] : unigrams) n_uni += c;
    for (const auto& [_, c] : pairs) n_bi += c;

    std::vector<Collocation> out;
    for (const auto& [pair, c] : pairs) {
        if (c < min_count) continue;
        const double p_ab = static_cast<double>(c) / static_cast<double>(n_bi);
        const double p_a = static_cast<double>(unigrams[pair.first]) / static_cast<double>(n_uni);
        const double p_b = static_cast<double>(unigrams[pair.second]) / static_cast<double>(n_uni);
        out.push_back({join(pair), std::log(p_ab / (p_a * p_b)), c});
    }
    std::sort(out.begin(), out.end(), [](const Collocation& a, const Collocation& b) {
        if (a.pmi != b.pmi) return a.pmi > b.pmi;
        if (a.count != b.count) return a.count > b.count;
        return a.bigram < b.bigram;
    });
    if (out.size() > top_n) out.resize(top_n);
    return out;
}

std::vector<std::pair<std::string, double>> TopicModel::top_words(int k, std::size_t n) const {
    std::vector<std::size_t> order(vocab.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const auto row = phi.row(static_cast<std::size_t>(k));
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
    std::vector<std::pair<std::string, double>> out;
    for (std::size_t i = 0; i < std::min(n, order.size()); ++i) out.emplace_back(vocab[order[i]], row[order[i]]);
    return out;
}

TopicModel lda_fit(std::span<const Document> corpus, const LdaParams& params, const Stopwords& stopwords) {
    if (params.topics < 1) throw std::invalid_argument("topics must be >= 1");
    if (params.iterations < 0) throw std::invalid_argument("iterations must be >= 0");
    if (!(params.beta > 0.0)) throw std::invalid_argument("beta must be > 0");
    const std::size_t K = static_cast<std::size_t>(params.topics);
    const double alpha = params.alpha < 0.0 ? 50.0 / static_cast<double>(K) : params.alpha;
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    const double beta = params.beta;

    std::vector<std::vector<std::string>> doc_words(corpus.size());
    std::map<std::string, std::size_t> vocab_index;
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        for (auto& sentence : content_sentences(corpus[d], stopwords))
            for (auto& w : sentence) doc_words[d].push_back(std::move(w));
        for (const auto& w : doc_words[d]) vocab_index.emplace(w, 0);
    }
    if (vocab_index.empty()) throw EmptyCorpus("no content tokens");

    TopicModel model;
    model.topics = params.topics;
    model.alpha = alpha;
    model.beta = beta;
    model.seed = params.seed;
    for (auto& [w, idx] : vocab_index) {
        idx = model.vocab.size();
        model.vocab.push_back(w);
    }
    for (const auto& d : corpus) model.doc_ids.push_back(d.id);

    const std::size_t V = model.vocab.size();
    const std::size_t D = corpus.size();
    std::vector<std::vector<std::size_t>> words(D);
    std::vector<std::vector<std::size_t>> z(D);
    std::vector<std::size_t> n_dk(D * K, 0), n_kw(K * V, 0), n_k(K, 0), n_d(D, 0);

    std::mt19937_64 rng(params.seed);
    for (std::size_t d = 0; d < D; ++d) {
        for (const auto& w : doc_words[d]) {
            const std::size_t wi = vocab_index.at(w);
            const std::size_t k = static_cast<std::size_t>(unit_draw(rng) * static_cast<double>(K));
            words[d].push_back(wi);
            z[d].push_back(k);
            ++n_dk[d * K + k];
            ++n_kw[k * V + wi];
            ++n_k[k];
        }
        n_d[d] = words[d].size();
    }

    const double vbeta = static_cast<double>(V) * beta;
    std::vector<double> cumulative(K);
    for (int it = 0; it < params.iterations; ++it) {
        for (std::size_t d = 0; d < D; ++d) {
            for (std::size_t i = 0; i < words[d].size(); ++i) {
                const std::size_t w = words[d][i];
                std::size_t k = z[d][i];
                --n_dk[d * K + k];
                --n_kw[k * V + w];
                --n_k[k];

                double total = 0.0;
                for (std::size_t t = 0; t < K; ++t) {
                    total += (static_cast<double>(n_dk[d * K + t]) + alpha) *
                             (static_cast<double>(n_kw[t * V + w]) + beta) / (static_cast<double>(n_k[t]) + vbeta);
                    cumulative[t] = total;
                }
                const double u = unit_draw(rng) * total;
                k = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
                if (k >= K) k = K - 1;

                z[d][i] = k;
                ++n_dk[d * K + k];
                ++n_kw[k * V + w];
                ++n_k[k];
            }
        }
    }

    model.phi = Matrix{K, V, std::vector<double>(K * V)};
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t w = 0; w < V; ++w)
            model.phi(k, w) = (static_cast<double>(n_kw[k * V + w]) + beta) / (static_cast<double>(n_k[k]) + vbeta);

    const double kalpha = static_cast<double>(K) * alpha;
    model.theta = Matrix{D, K, std::vector<double>(D * K)};
    for (std::size_t d = 0; d < D; ++d)
        for (std::size_t k = 0; k < K; ++k)
            model.theta(d, k) = (static_cast<double>(n_dk[d * K + k]) + alpha) / (static_cast<double>(n_d[d]) + kalpha);
    return model;
}

std::vector<TermEntry> wordcloud_terms(std::span<const Document> corpus,
                                       std::span<const sentiment::DocumentScore> doc_scores,
                                       const WordCloudParams& params, const Stopwords& stopwords,
                                       std::span<const EntityMention> entities) {
    std::unordered_map<std::string, const sentiment::DocumentScore*> score_of;
    for (const auto& s : doc_scores) score_of.emplace(s.doc_id, &s);
    std::unordered_map<std::string, const Document*> doc_of;
    for (const auto& d : corpus) {
        if (!score_of.count(d.id)) throw MissingScore(d.id);
        doc_of.emplace(d.id, &d);
    }
    if (corpus.empty()) return {};

    struct Key {
        std::string term;
        Origin origin;
        std::optional<Day> day;
        bool operator<(const Key& o) const {
            return std::tie(term, origin, day) < std::tie(o.term, o.origin, o.day);
        }
    };
    std::map<Key, double> totals;
    auto bucket = [&](const Document& d) -> std::optional<Day> {
        if (!params.day_bucket) return std::nullopt;
        return utc_day(d.published_at);
    };

    for (const auto& [key, score] : tfidf(corpus, stopwords)) {
        const Document& d = *doc_of.at(key.first);
        totals[{key.second, Origin::tfidf, bucket(d)}] += score * score_of.at(d.id)->doc_weight;
    }

    std::map<std::string, double> positive_pmi;
    for (const auto& c : bigram_collocations(corpus, params.min_count, params.top_n, stopwords))
        if (c.pmi > 0.0) positive_pmi.emplace(c.bigram, c.pmi);
    if (!positive_pmi.empty()) {
        for (const auto& d : corpus) {
            PairCounts pairs;
            count_pairs(d, stopwords, pairs, nullptr);
            for (const auto& [pair, c] : pairs) {
                auto it = positive_pmi.find(join(pair));
                if (it == positive_pmi.end()) continue;
                totals[{it->first, Origin::bigram, bucket(d)}] +=
                    it->second * static_cast<double>(c) * score_of.at(d.id)->doc_weight;
            }
        }
    }

    for (const auto& e : entities) {
        auto it = doc_of.find(e.doc_id);
        if (it == doc_of.end()) throw MissingScore(e.doc_id);
        if (e.term.empty() || !(e.score >= 0.0)) throw std::invalid_argument("entity mentions need a term and score >= 0");
        totals[{e.term, Origin::entity, bucket(*it->second)}] += e.score * score_of.at(e.doc_id)->doc_weight;
    }

    std::vector<TermEntry> out;
    for (const auto& [key, score] : totals)
        if (score > 0.0) out.push_back({key.term, score, key.day, key.origin});
    std::stable_sort(out.begin(), out.end(), [](const TermEntry& a, const TermEntry& b) { return a.score > b.score; });
    return out;
}

}  // namespace snapinfo::terms
