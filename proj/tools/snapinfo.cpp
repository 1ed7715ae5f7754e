// snapinfo: command line front end for the opinion analytics pipeline.
//
// Exit codes: 0 success, 1 data error, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "snapinfo/classifier.hpp"
#include "snapinfo/config.hpp"
#include "snapinfo/corpus.hpp"
#include "snapinfo/geo.hpp"
#include "snapinfo/sentiment.hpp"
#include "snapinfo/service.hpp"
#include "snapinfo/terms.hpp"
#include "snapinfo/votes.hpp"

namespace fs = std::filesystem;
using namespace snapinfo;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("IoError", "cannot write " + path.string());
    out << content;
    if (!content.empty() && content.back() != '\n') out << '\n';
}

std::string scores_jsonl(const std::vector<sentiment::DocumentScore>& scores) {
    std::string out;
    for (const auto& s : scores) out += sentiment::to_json_line(s) + "\n";
    return out;
}

std::vector<corpus::Document> read_corpus(const fs::path& path) {
    std::vector<std::string> warnings;
    auto docs = corpus::load_documents(path, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    return docs;
}

std::vector<sentiment::DocumentScore> score_all(const std::vector<corpus::Document>& docs,
                                                const sentiment::ValenceLexicon& lex, const PipelineConfig& cfg) {
    std::vector<sentiment::DocumentScore> out;
    out.reserve(docs.size());
    for (const auto& d : docs) {
        try {
            out.push_back(sentiment::score_document(d, lex, cfg.scoring));
        } catch (const Error& e) {
            throw Error(e.kind(), "document '" + d.id + "': " + e.message());
        }
    }
    return out;
}

struct Common {
    std::string config_path;

    PipelineConfig load() const { return config_path.empty() ? PipelineConfig{} : load_config(config_path); }
};

void add_config(CLI::App* cmd, Common& common) {
    cmd->add_option("--config", common.config_path, "key = value configuration file")->check(CLI::ExistingFile);
}

int env_port(int fallback) {
    if (const char* p = std::getenv("PORT"); p && *p) {
        try {
            return std::stoi(p);
        } catch (const std::exception&) {
        }
    }
    return fallback;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"snapinfo: sentiment, term, hot-spot and vote analytics over a document corpus"};
    app.require_subcommand(1);

    Common common;
    std::string input, lexicon, out, bills_path, scores_path, from, to, metric, legislator, model_path, out_dir,
        static_dir, bbox_text;
    std::string host = "127.0.0.1";
    bool no_filter = false, no_day_bucket = false;
    double cell_size = 0.0;
    int port = 0, topics = 0, iterations = 500, folds = 5;
    unsigned long long seed = terms::LdaParams{}.seed;
    std::string topics_out;

    auto* ingest = app.add_subcommand("ingest", "validate and relevance-filter a JSONL corpus");
    ingest->add_option("--input", input)->required()->check(CLI::ExistingFile);
    ingest->add_option("--out", out)->required();
    ingest->add_flag("--no-filter", no_filter, "keep every valid document");
    add_config(ingest, common);

    auto* score = app.add_subcommand("score", "score documents, writing DocumentScore JSONL");
    score->add_option("--input", input)->required()->check(CLI::ExistingFile);
    score->add_option("--lexicon", lexicon)->required()->check(CLI::ExistingFile);
    score->add_option("--out", out)->required();
    add_config(score, common);

    auto* timeseries = app.add_subcommand("timeseries", "daily weighted averages from a score file");
    timeseries->add_option("--scores", scores_path)->required()->check(CLI::ExistingFile);
    timeseries->add_option("--from", from, "YYYY-MM-DD (default: first day)");
    timeseries->add_option("--to", to, "YYYY-MM-DD (default: last day)");
    timeseries->add_option("--out", out)->required();

    auto* hotspots = app.add_subcommand("hotspots", "hex-grid Gi* hot/cold spots as GeoJSON");
    hotspots->add_option("--input", input)->required()->check(CLI::ExistingFile);
    hotspots->add_option("--lexicon", lexicon)->required()->check(CLI::ExistingFile);
    hotspots->add_option("--out", out)->required();
    hotspots->add_option("--metric", metric, "compound or word_sum");
    hotspots->add_option("--cell-size", cell_size, "circumradius in degrees");
    hotspots->add_option("--bbox", bbox_text, "min_lon,min_lat,max_lon,max_lat");
    add_config(hotspots, common);

    auto* terms_cmd = app.add_subcommand("terms", "weighted word-cloud terms");
    terms_cmd->add_option("--input", input)->required()->check(CLI::ExistingFile);
    terms_cmd->add_option("--lexicon", lexicon)->required()->check(CLI::ExistingFile);
    terms_cmd->add_option("--out", out)->required();
    terms_cmd->add_flag("--no-day-bucket", no_day_bucket, "sum over all days");
    terms_cmd->add_option("--topics", topics, "also fit an LDA model with this many topics");
    terms_cmd->add_option("--iterations", iterations, "Gibbs sweeps for --topics");
    terms_cmd->add_option("--seed", seed, "sampler seed for --topics");
    terms_cmd->add_option("--topics-out", topics_out, "where to write topics (default: <out>.topics.json)");
    add_config(terms_cmd, common);

    auto* votes_cmd = app.add_subcommand("votes", "phrase-filter bills and prune votes");
    votes_cmd->add_option("--bills", bills_path)->required()->check(CLI::ExistingFile);
    votes_cmd->add_option("--out", out)->required();
    votes_cmd->add_option("--legislator", legislator, "write this legislator's record instead");
    add_config(votes_cmd, common);

    auto* fetch = app.add_subcommand("fetch-bills", "download bills from the provider configured in the environment");
    fetch->add_option("--out", out)->required();
    add_config(fetch, common);

    auto* train_cmd = app.add_subcommand("train", "train the tweet classifier on labelled documents");
    train_cmd->add_option("--input", input)->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--model", model_path)->required();
    train_cmd->add_option("--folds", folds, "report k-fold accuracy (0 to skip)");

    auto* classify_cmd = app.add_subcommand("classify", "label documents with a trained model");
    classify_cmd->add_option("--input", input)->required()->check(CLI::ExistingFile);
    classify_cmd->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
    classify_cmd->add_option("--out", out)->required();

    auto* serve_cmd = app.add_subcommand("serve", "build a snapshot and serve the read-only API");
    serve_cmd->add_option("--input", input)->required()->check(CLI::ExistingFile);
    serve_cmd->add_option("--lexicon", lexicon)->required()->check(CLI::ExistingFile);
    serve_cmd->add_option("--bills", bills_path)->check(CLI::ExistingFile);
    serve_cmd->add_option("--host", host);
    serve_cmd->add_option("--port", port, "default: $PORT or 8080");
    serve_cmd->add_option("--static-dir", static_dir, "serve UI assets from this directory")->check(CLI::ExistingDirectory);
    add_config(serve_cmd, common);

    auto* all = app.add_subcommand("all", "run the whole pipeline and write every artifact");
    all->add_option("--input", input)->required()->check(CLI::ExistingFile);
    all->add_option("--lexicon", lexicon)->required()->check(CLI::ExistingFile);
    all->add_option("--bills", bills_path)->check(CLI::ExistingFile);
    all->add_option("--out-dir", out_dir)->required();
    add_config(all, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return 2;
    }

    try {
        if (*ingest) {
            const auto cfg = common.load();
            auto docs = read_corpus(input);
            const std::size_t total = docs.size();
            if (!no_filter && cfg.filter_relevant) docs = corpus::filter_relevant(docs, cfg.relevance);
            std::string text;
            for (const auto& d : docs) text += corpus::to_jsonl_line(d) + "\n";
            write_file(out, text);
            std::cerr << "kept " << docs.size() << " of " << total << " documents\n";
        } else if (*score) {
            const auto cfg = common.load();
            const auto docs = read_corpus(input);
            write_file(out, scores_jsonl(score_all(docs, sentiment::load_lexicon(lexicon), cfg)));
        } else if (*timeseries) {
            std::ifstream in(scores_path);
            const auto scores = sentiment::read_document_scores(in);
            std::vector<sentiment::TimePoint> points;
            if (!scores.empty() || (!from.empty() && !to.empty())) {
                Day lo = Day::max(), hi = Day::min();
                for (const auto& s : scores) {
                    lo = std::min(lo, utc_day(s.published_at));
                    hi = std::max(hi, utc_day(s.published_at));
                }
                auto day_or = [](const std::string& text, Day fallback, const char* name) {
                    if (text.empty()) return fallback;
                    const auto d = parse_day(text);
                    if (!d) throw sentiment::InvalidRange(std::string(name) + " is not YYYY-MM-DD: " + text);
                    return *d;
                };
                points = sentiment::corpus_timeseries(scores, day_or(from, lo, "--from"), day_or(to, hi, "--to"));
            }
            write_file(out, service::timeseries_to_json(points, 2));
        } else if (*hotspots) {
            auto cfg = common.load();
            if (!metric.empty()) {
                const auto m = parse_metric(metric);
                if (!m) throw ConfigError("--metric must be compound or word_sum");
                cfg.metric = *m;
            }
            if (cell_size > 0.0) cfg.cell_size = cell_size;
            if (!bbox_text.empty()) {
                std::istringstream in("bbox = " + bbox_text);
                cfg.bbox = parse_config(in).bbox;
            }
            const auto docs = read_corpus(input);
            const auto scores = score_all(docs, sentiment::load_lexicon(lexicon), cfg);
            std::vector<geo::ScoredPoint> points;
            for (std::size_t i = 0; i < docs.size(); ++i)
                if (docs[i].geotag)
                    points.push_back({*docs[i].geotag, cfg.metric == Metric::compound ? scores[i].compound_avg
                                                                                      : scores[i].word_sum_avg});
            auto joined = geo::spatial_join(geo::make_hex_grid(cfg.bbox, cfg.cell_size), points);
            if (joined.skipped) std::cerr << "warning: " << joined.skipped << " geotags outside the grid\n";
            auto grid = geo::classify_hotspots(geo::gi_star(std::move(joined.grid)));
            write_file(out, geo::to_geojson(grid));
        } else if (*terms_cmd) {
            auto cfg = common.load();
            if (no_day_bucket) cfg.wordcloud.day_bucket = false;
            const auto stopwords = cfg.stopwords_path ? terms::load_stopwords(*cfg.stopwords_path) : terms::default_stopwords();
            auto docs = read_corpus(input);
            const auto scores = score_all(docs, sentiment::load_lexicon(lexicon), cfg);
            write_file(out, service::terms_to_json(terms::wordcloud_terms(docs, scores, cfg.wordcloud, stopwords), 2));
            if (topics > 0) {
                terms::LdaParams params;
                params.topics = topics;
                params.iterations = iterations;
                params.seed = seed;
                const auto model = terms::lda_fit(docs, params, stopwords);
                nlohmann::json arr = nlohmann::json::array();
                for (int k = 0; k < model.topics; ++k) {
                    nlohmann::json words = nlohmann::json::array();
                    for (const auto& [w, p] : model.top_words(k, 10)) words.push_back({{"term", w}, {"weight", p}});
                    arr.push_back({{"topic", k}, {"words", std::move(words)}});
                }
                write_file(topics_out.empty() ? out + ".topics.json" : topics_out, arr.dump(2));
            }
        } else if (*votes_cmd) {
            const auto cfg = common.load();
            const auto bills = votes::filter_bills(votes::load_bills(bills_path), cfg.bill_phrases);
            if (legislator.empty()) {
                write_file(out, votes::bills_to_json(bills));
            } else {
                nlohmann::json arr = nlohmann::json::array();
                for (const auto& r : votes::legislator_record(bills, legislator))
                    arr.push_back({{"bill_id", r.bill_id},
                                   {"title", r.title},
                                   {"session", r.session},
                                   {"vote", votes::to_string(r.vote)}});
                write_file(out, arr.dump(2));
            }
        } else if (*fetch) {
            const auto cfg = common.load();
            const auto fetch_cfg = votes::FetchConfig::from_env();
            if (!fetch_cfg) throw votes::FetchFailed("set BILLS_API_BASE and BILLS_API_KEY to enable fetching");
            const auto bills = votes::fetch_bills(*fetch_cfg, cfg.bill_phrases);
            write_file(out, votes::bills_to_json(bills));
            std::cerr << "fetched " << bills.size() << " bills\n";
        } else if (*train_cmd) {
            const auto docs = read_corpus(input);
            const auto model = classifier::train(docs);
            model.save(model_path);
            if (folds > 0) std::cerr << folds << "-fold accuracy: " << classifier::cross_validate(docs, folds) << '\n';
        } else if (*classify_cmd) {
            const auto model = classifier::NBModel::load(model_path);
            std::string text;
            for (const auto& d : read_corpus(input)) {
                const auto p = classifier::predict(model, d);
                nlohmann::json post = nlohmann::json::object();
                for (const auto& [label, prob] : p.posterior) post[std::string(corpus::to_string(label))] = prob;
                text += nlohmann::json{{"doc_id", d.id}, {"label", corpus::to_string(p.label)}, {"posterior", post}}.dump() + "\n";
            }
            write_file(out, text);
        } else if (*serve_cmd) {
            service::BuildInputs inputs{input, lexicon, {}, {}};
            if (!bills_path.empty()) inputs.bills_path = bills_path;
            auto snapshot = std::make_shared<const service::Snapshot>(service::build_snapshot(common.load(), inputs));
            service::ServeOptions options;
            options.host = host;
            options.port = port > 0 ? port : env_port(8080);
            if (!static_dir.empty()) options.static_dir = static_dir;
            service::HttpService http(snapshot, options);
            const int bound = http.start();
            std::cerr << "serving " << snapshot->doc_scores.size() << " documents on http://" << host << ':' << bound << '\n';
            http.wait();
        } else if (*all) {
            service::BuildInputs inputs{input, lexicon, {}, {}};
            if (!bills_path.empty()) inputs.bills_path = bills_path;
            const auto snap = service::build_snapshot(common.load(), inputs);
            const fs::path dir(out_dir);
            write_file(dir / "scores.jsonl", scores_jsonl(snap.doc_scores));
            write_file(dir / "timeseries.json", service::timeseries_to_json(snap.timeseries, 2));
            write_file(dir / "hotspots.geojson", geo::to_geojson(snap.grid));
            write_file(dir / "terms.json", service::terms_to_json(snap.terms_by_day, 2));
            write_file(dir / "bills.json", votes::bills_to_json(snap.bills));
            write_file(dir / "snapshot.json", service::snapshot_to_json(snap));
            if (snap.hotspot_status != "ok")
                std::cerr << "warning: hot spots not computed (" << snap.hotspot_status << ")\n";
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
