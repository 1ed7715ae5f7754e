// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "oracles.hpp"
#include "schemas.hpp"
#include "snapinfo/classifier.hpp"
#include "snapinfo/corpus.hpp"
#include "snapinfo/geo.hpp"
#include "snapinfo/sentiment.hpp"
#include "snapinfo/service.hpp"
#include "snapinfo/terms.hpp"
#include "snapinfo/votes.hpp"
#include "support.hpp"
#include "synthetic.hpp"

using namespace snapinfo;
using nlohmann::json;

namespace {

// Tolerances and budgets.
constexpr double kGiTolerance = 1e-9;
constexpr double kGiBudgetSeconds = 1.0;
constexpr int kPlantedSeeds = 100;
constexpr int kPlantedRequired = 95;
constexpr double kPlantedBudgetSeconds = 10.0;
constexpr int kRandomSequences = 1000;
constexpr double kCompoundAt3 = 0.6124;
constexpr double kCompoundTolerance = 1e-4;
constexpr double kMinSignAgreement = 0.9;
constexpr double kMinPearson = 0.8;
constexpr double kChanceTolerance = 0.1;
constexpr double kPosteriorTolerance = 1e-9;
constexpr int kPredictions = 1000;
constexpr double kRowSumTolerance = 1e-9;
constexpr double kLdaBudgetSeconds = 30.0;
constexpr int kConcurrentRequests = 100;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail.clear();
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string& what) {
        if (pass) detail += (detail.empty() ? "" : "; ") + what;
    }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome gi_star_oracle() {
    Outcome out;
    std::vector<geo::Axial> cells;
    for (int r = 0; r < 5; ++r)
        for (int q = 0; q < 5; ++q) cells.push_back({q, r});
    geo::HexGrid grid(1.0, cells);
    std::mt19937_64 rng(20170924);
    std::normal_distribution<double> n01(0.0, 1.0);
    for (auto& c : grid.cells()) {
        c.value = n01(rng);
        c.count = 1;
    }

    const auto t0 = std::chrono::steady_clock::now();
    const auto z = geo::gi_star(grid);
    auto flat = grid;
    for (auto& c : flat.cells()) c.value = -0.25;
    const auto zf = geo::gi_star(flat);
    const double elapsed = seconds_since(t0);

    const auto expected = oracle::gi_star_direct(grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.require(z.cells()[i].z.has_value(), "cell without z");
        if (z.cells()[i].z) worst = std::max(worst, std::abs(*z.cells()[i].z - *expected[i]));
    }
    out.require(worst <= kGiTolerance, "max |dz| " + fmt("%.3g", worst));
    bool all_zero = true;
    for (const auto& c : zf.cells()) all_zero &= c.z && *c.z == 0.0;
    out.require(all_zero, "uniform field produced nonzero z");
    out.require(elapsed < kGiBudgetSeconds, "runtime " + fmt("%.3f s", elapsed));
    out.note("25 cells, max |dz| " + fmt("%.2e", worst) + ", uniform z == 0, " + fmt("%.4f s", elapsed));
    return out;
}

Outcome planted_cluster() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    int passed = 0;
    for (int seed = 1; seed <= kPlantedSeeds; ++seed) {
        const auto grid = geo::classify_hotspots(geo::gi_star(synthetic::planted_cluster(static_cast<std::uint64_t>(seed))));
        bool ok = true;
        for (const auto& c : grid.cells()) {
            const int d = synthetic::distance_to_block(c.coord);
            if (d == 0) ok &= c.cls == geo::HotspotClass::cold95 || c.cls == geo::HotspotClass::cold99;
            if (d >= 3) ok &= c.cls == geo::HotspotClass::ns;
        }
        passed += ok;
    }
    const double elapsed = seconds_since(t0);
    out.require(passed >= kPlantedRequired, std::to_string(passed) + "/" + std::to_string(kPlantedSeeds) + " seeds");
    out.require(elapsed < kPlantedBudgetSeconds, "runtime " + fmt("%.3f s", elapsed));
    out.note(std::to_string(passed) + "/" + std::to_string(kPlantedSeeds) + " seeds, " + fmt("%.3f s", elapsed));
    return out;
}

Outcome sentiment_bounds() {
    Outcome out;
    const auto lex = sentiment::load_lexicon(testing::fixture("lexicon.tsv"));
    const auto negated = lex.negated();
    std::vector<std::string> vocab;
    for (const auto& [term, v] : lex.entries()) {
        vocab.push_back(term);
        vocab.push_back(term + "!!");
        std::string upper = term;
        std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
        vocab.push_back(upper);
    }
    for (const char* w : {"the", "very", "extremely", "not", "never", "isn't", "but", "slightly", "snap", "food", "stamps"})
        vocab.push_back(w);

    std::mt19937_64 rng(1000);
    int outside = 0, asymmetric = 0;
    double lo = 1.0, hi = -1.0;
    for (int i = 0; i < kRandomSequences; ++i) {
        std::string text;
        const int n = 1 + static_cast<int>(rng() % 60);
        for (int k = 0; k < n; ++k) text += vocab[rng() % vocab.size()] + " ";
        const auto tokens = corpus::tokenize(text);
        const double c = sentiment::compound_score(tokens, lex);
        if (!(c > -1.0 && c < 1.0)) ++outside;
        lo = std::min(lo, c), hi = std::max(hi, c);
        if (sentiment::word_sum_score(tokens, negated) != -sentiment::word_sum_score(tokens, lex)) ++asymmetric;
    }
    const double at3 = sentiment::normalize_compound(3.0, 15.0);
    out.require(outside == 0, std::to_string(outside) + " compounds outside (-1, 1)");
    out.require(asymmetric == 0, std::to_string(asymmetric) + " word sums not flipped");
    out.require(std::abs(at3 - kCompoundAt3) <= kCompoundTolerance, "s=3 gives " + fmt("%.6f", at3));
    out.note(std::to_string(kRandomSequences) + " sequences, compound range [" + fmt("%.4f", lo) + ", " + fmt("%.4f", hi) +
             "], s=3 -> " + fmt("%.6f", at3));
    return out;
}

Outcome aggregation_identity() {
    Outcome out;
    const PipelineConfig cfg;
    const auto snap = service::build_snapshot(
        cfg, {testing::fixture("ten_docs.jsonl"), testing::fixture("lexicon.tsv"), std::nullopt, Timestamp{}});

    const auto lex = sentiment::load_lexicon(testing::fixture("lexicon.tsv"));
    const auto docs = corpus::filter_relevant(corpus::load_documents(testing::fixture("ten_docs.jsonl")));
    out.require(docs.size() == 10, "fixture has " + std::to_string(docs.size()) + " relevant docs");
    std::vector<sentiment::DocumentScore> scores;
    for (const auto& d : docs) {
        const auto scored = sentiment::score_document(d, lex, cfg.scoring);
        const double w = sentiment::document_weight(d.traffic_tier, corpus::reading_grade(d));
        out.require(scored.doc_weight == w, "doc_weight mismatch for " + d.id);
        scores.push_back(scored);
    }
    Day lo = utc_day(scores.front().published_at), hi = lo;
    for (const auto& s : scores) lo = std::min(lo, utc_day(s.published_at)), hi = std::max(hi, utc_day(s.published_at));
    const auto piecewise = sentiment::corpus_timeseries(scores, lo, hi);

    out.require(snap.doc_scores == scores, "document scores differ");
    out.require(snap.timeseries == piecewise, "time series differ");
    double total_w = 0.0;
    std::size_t total_n = 0;
    for (const auto& p : snap.timeseries) total_w += p.weight, total_n += p.n_docs;
    out.note(std::to_string(snap.timeseries.size()) + " days, " + std::to_string(total_n) + " docs, total weight " +
             fmt("%.4f", total_w) + ", exact equality");
    return out;
}

/// Documents whose sentences all lean one way, drawn from the fixture lexicon.
std::vector<corpus::Document> consistent_valence_corpus(const sentiment::ValenceLexicon& lex, int n, std::uint64_t seed) {
    std::vector<std::string> pos, neg;
    for (const auto& [term, v] : lex.entries()) (v > 0 ? pos : neg).push_back(term);
    const std::vector<std::string> filler{"the", "program", "families", "state", "budget", "week", "report", "county"};
    std::mt19937_64 rng(seed);
    std::vector<corpus::Document> docs;
    for (int i = 0; i < n; ++i) {
        const bool positive = rng() % 2;
        const auto& lean = positive ? pos : neg;
        std::string text;
        const int sentences = 1 + static_cast<int>(rng() % 3);
        for (int s = 0; s < sentences; ++s) {
            std::string sentence = "Snap";
            const int words = 4 + static_cast<int>(rng() % 6);
            for (int w = 0; w < words; ++w) {
                const auto r = rng() % 10;
                sentence += ' ';
                sentence += r < 4 ? lean[rng() % lean.size()] : filler[rng() % filler.size()];
            }
            text += sentence + ". ";
        }
        docs.push_back(testing::make_doc("v" + std::to_string(i), text));
    }
    return docs;
}

Outcome tool_agreement() {
    Outcome out;
    const auto lex = sentiment::load_lexicon(testing::fixture("lexicon.tsv"));
    const auto docs = consistent_valence_corpus(lex, 50, 31);
    std::vector<sentiment::DocumentScore> scores;
    for (const auto& d : docs) scores.push_back(sentiment::score_document(d, lex, {}));
    const auto a = sentiment::tool_agreement(scores);
    out.require(a.sign_agreement >= kMinSignAgreement, "sign agreement " + fmt("%.3f", a.sign_agreement));
    out.require(a.pearson_r >= kMinPearson, "pearson r " + fmt("%.3f", a.pearson_r));
    out.note("50 docs, sign agreement " + fmt("%.3f", a.sign_agreement) + ", pearson r " + fmt("%.4f", a.pearson_r));
    return out;
}

Outcome classifier_sanity() {
    Outcome out;
    const double separable = classifier::cross_validate(synthetic::separable(50, 41), 5);
    const double chance = classifier::cross_validate(synthetic::random_labels(500, 42), 5);
    out.require(separable == 1.0, "separable accuracy " + fmt("%.4f", separable));
    out.require(std::abs(chance - 0.5) <= kChanceTolerance, "random-label accuracy " + fmt("%.4f", chance));

    const auto model = classifier::train(synthetic::random_labels(100, 43));
    const auto vocab = synthetic::numbered_vocab("w", 80);
    std::mt19937_64 rng(44);
    double worst = 0.0;
    for (int i = 0; i < kPredictions; ++i) {
        const auto doc = testing::make_doc("q", synthetic::draw_text(vocab, 1 + static_cast<int>(rng() % 40), rng));
        double sum = 0.0;
        for (const auto& [label, p] : classifier::predict(model, doc).posterior) sum += p;
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    out.require(worst <= kPosteriorTolerance, "posterior sum off by " + fmt("%.3g", worst));
    out.note("5-fold separable " + fmt("%.3f", separable) + ", random labels " + fmt("%.3f", chance) + ", " +
             std::to_string(kPredictions) + " posteriors within " + fmt("%.1e", worst));
    return out;
}

double worst_row_error(const terms::Matrix& m) {
    double worst = 0.0;
    for (std::size_t r = 0; r < m.rows; ++r) {
        double s = 0.0;
        for (double v : m.row(r)) s += v;
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

Outcome lda() {
    Outcome out;
    const auto& stop = terms::default_stopwords();

    // Row sums and K = 1 collapse on the fixture corpus.
    const auto docs = corpus::load_documents(testing::fixture("docs.jsonl"));
    terms::LdaParams one;
    one.topics = 1;
    one.iterations = 20;
    const auto m1 = terms::lda_fit(docs, one);
    std::map<std::string, double> counts;
    double total = 0.0;
    for (const auto& d : docs)
        for (const auto& t : corpus::tokenize(d.text))
            if (!stop.count(t.norm)) counts[t.norm] += 1.0, total += 1.0;
    const double vbeta = static_cast<double>(counts.size()) * one.beta;
    bool exact = m1.vocab.size() == counts.size();
    for (std::size_t w = 0; exact && w < m1.vocab.size(); ++w)
        exact = m1.phi(0, w) == (counts.at(m1.vocab[w]) + one.beta) / (total + vbeta);
    out.require(exact, "K=1 phi differs from the smoothed unigram distribution");

    // Two disjoint generating vocabularies.
    std::vector<std::string> va, vb;
    const auto two = synthetic::two_topics(60, 20, 51, &va, &vb);
    terms::LdaParams p2;
    p2.topics = 2;
    p2.iterations = 200;
    const auto m2 = terms::lda_fit(two, p2);
    const std::set<std::string> sa(va.begin(), va.end()), sb(vb.begin(), vb.end());
    std::vector<int> source;
    for (int k = 0; k < 2; ++k) {
        int in_a = 0, in_b = 0;
        for (const auto& [w, p] : m2.top_words(k, 5)) in_a += sa.count(w), in_b += sb.count(w);
        source.push_back(in_a == 5 ? 0 : in_b == 5 ? 1 : -1);
    }
    const bool recovered = source[0] >= 0 && source[1] >= 0 && source[0] != source[1];
    out.require(recovered, "two-topic recovery failed");

    // Timed run: 500 iterations, 200 documents, default K.
    std::mt19937_64 rng(52);
    const auto words = synthetic::numbered_vocab("term", 300);
    std::vector<corpus::Document> big;
    for (int i = 0; i < 200; ++i) big.push_back(testing::make_doc("b" + std::to_string(i), synthetic::draw_text(words, 60, rng)));
    terms::LdaParams timed;
    const auto t0 = std::chrono::steady_clock::now();
    const auto m3 = terms::lda_fit(big, timed);
    const double elapsed = seconds_since(t0);
    out.require(elapsed < kLdaBudgetSeconds, "500 iterations took " + fmt("%.2f s", elapsed));

    const double rows = std::max({worst_row_error(m1.phi), worst_row_error(m1.theta), worst_row_error(m2.phi),
                                  worst_row_error(m2.theta), worst_row_error(m3.phi), worst_row_error(m3.theta)});
    out.require(rows <= kRowSumTolerance, "row sums off by " + fmt("%.3g", rows));
    out.note("row sums within " + fmt("%.1e", rows) + ", K=1 exact, two topics recovered, 200 docs x 500 iterations in " +
             fmt("%.2f s", elapsed));
    return out;
}

Outcome votes_pruning() {
    Outcome out;
    const auto bills = votes::load_bills(testing::fixture("bills_pruning.json"));
    out.require(bills.size() == 3, "fixture has " + std::to_string(bills.size()) + " bills");

    // Each bill matches a phrase, so only the vote rules can remove the last two.
    for (const auto& b : bills) {
        auto all_in = b;
        for (auto& v : all_in.votes) v.in_office = true;
        if (all_in.votes.empty()) all_in.votes.push_back({"x", "x", votes::Chamber::house, true, votes::Vote::yea});
        out.require(votes::filter_bills({all_in}).size() == 1, b.id + " does not match a phrase");
    }

    const auto kept = votes::filter_bills(bills);
    out.require(kept.size() == 1 && kept[0].id == "HB 101", "expected only HB 101 to survive");
    if (!kept.empty())
        out.require(kept[0].matched_phrases == std::vector<std::string>{"georgia peach card"},
                    "HB 101 matched phrases wrong");
    const auto has = [&](const std::string& id) {
        return std::any_of(kept.begin(), kept.end(), [&](const votes::Bill& b) { return b.id == id; });
    };
    out.require(!has("HB 202"), "zero-vote bill kept");
    out.require(!has("SB 303"), "bill with only out-of-office votes kept");
    out.require(votes::filter_bills(kept) == kept, "filter is not idempotent");

    const auto wider = votes::filter_bills(votes::load_bills(testing::fixture("bills.json")));
    out.require(votes::filter_bills(wider) == wider, "filter is not idempotent on the service fixture");
    out.note("phrase match incl. georgia peach card, zero-vote removal, out-of-office removal, idempotent");
    return out;
}

Outcome service_contract() {
    Outcome out;
    const auto snap = std::make_shared<const service::Snapshot>(testing::fixture_snapshot());
    service::HttpService http(snap, service::ServeOptions{"127.0.0.1", 0, std::nullopt});
    const int port = http.start();

    const std::vector<std::pair<std::string, std::function<std::string(const json&)>>> endpoints{
        {"/api/meta", schema::meta},
        {"/api/timeseries", schema::timeseries},
        {"/api/map", schema::feature_collection},
        {"/api/terms", schema::terms},
        {"/api/legislators", schema::legislators},
        {"/api/legislators/ga-h-001/votes", schema::legislator_votes},
    };
    httplib::Client client("127.0.0.1", port);
    for (const auto& [path, check] : endpoints) {
        const auto res = client.Get(path);
        if (!res) {
            out.require(false, path + ": no response");
            continue;
        }
        out.require(res->status == 200, path + ": status " + std::to_string(res->status));
        try {
            const auto problem = check(json::parse(res->body));
            out.require(problem.empty(), path + ": " + problem);
        } catch (const json::exception& e) {
            out.require(false, path + ": " + e.what());
        }
    }

    const std::string path = "/api/map?metric=word_sum&from=2017-03-01&to=2017-03-05";
    std::vector<std::string> bodies(kConcurrentRequests);
    std::vector<int> statuses(kConcurrentRequests, 0);
    {
        std::vector<std::thread> threads;
        for (int i = 0; i < kConcurrentRequests; ++i) {
            threads.emplace_back([&, i] {
                httplib::Client c("127.0.0.1", port);
                c.set_read_timeout(30);
                if (auto res = c.Get(path)) {
                    statuses[i] = res->status;
                    bodies[i] = res->body;
                }
            });
        }
        for (auto& t : threads) t.join();
    }
    http.stop();
    const bool all_ok = std::all_of(statuses.begin(), statuses.end(), [](int s) { return s == 200; });
    const bool identical = std::all_of(bodies.begin(), bodies.end(), [&](const std::string& b) { return b == bodies[0]; });
    out.require(all_ok, "some concurrent requests failed");
    out.require(identical && !bodies[0].empty(), "concurrent bodies differ");
    out.note("6 endpoints schema-valid, " + std::to_string(kConcurrentRequests) +
             " concurrent identical requests byte-identical, core library only");
    return out;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
        {"gi_star_oracle_equivalence", gi_star_oracle},
        {"planted_cluster_recovery", planted_cluster},
        {"sentiment_normalization_antisymmetry", sentiment_bounds},
        {"aggregation_identity", aggregation_identity},
        {"tool_agreement", tool_agreement},
        {"classifier_sanity", classifier_sanity},
        {"lda_topic_model", lda},
        {"votes_pruning", votes_pruning},
        {"service_contract", service_contract},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += !o.pass;
        std::printf("%s  %-38s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
    return failed == 0 ? 0 : 1;
}
