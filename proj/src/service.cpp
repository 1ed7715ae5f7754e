#include "snapinfo/service.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>

#include "httplib.h"
#include "json.hpp"

namespace snapinfo::service {

using nlohmann::json;
using sentiment::DocumentScore;
using sentiment::TimePoint;

namespace {

[[noreturn]] void rethrow_with_context(const Error& e, const std::string& context) {
    e.raise_with_context(context);
    std::abort();
}

Timestamp default_build_timestamp() {
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
        long long secs = 0;
        const std::string_view s(epoch);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), secs);
        if (ec == std::errc{} && ptr == s.data() + s.size()) return Timestamp{std::chrono::seconds{secs}};
    }
    return std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
}

json timepoint_json(const TimePoint& p) {
    return {{"day", format_day(p.day)},
            {"avg_word_sum", p.avg_word_sum},
            {"avg_compound", p.avg_compound},
            {"n_docs", p.n_docs},
            {"weight", p.weight}};
}

json term_json(const terms::TermEntry& t) {
    return {{"term", t.term},
            {"score", t.score},
            {"day", t.day ? json(format_day(*t.day)) : json(nullptr)},
            {"origin", terms::to_string(t.origin)}};
}

json score_json(const DocumentScore& s) {
    return {{"doc_id", s.doc_id},
            {"word_sum_avg", s.word_sum_avg},
            {"compound_avg", s.compound_avg},
            {"doc_weight", s.doc_weight},
            {"published_at", format_timestamp(s.published_at)}};
}

json meta_json(const Snapshot& s) {
    json range = nullptr;
    if (!s.timeseries.empty())
        range = {{"from", format_day(s.timeseries.front().day)}, {"to", format_day(s.timeseries.back().day)}};
    return {{"n_ingested", s.meta.n_ingested},
            {"n_docs", s.meta.n_relevant},
            {"doc_counts", {{"by_kind", s.meta.by_kind}, {"by_outlet", s.meta.by_outlet}}},
            {"date_range", range},
            {"n_bills", s.bills.size()},
            {"grid",
             {{"cell_size", s.grid.cell_size()},
              {"bbox", {s.config.bbox.min_lon, s.config.bbox.min_lat, s.config.bbox.max_lon, s.config.bbox.max_lat}},
              {"n_cells", s.grid.size()},
              {"skipped", s.grid_skipped},
              {"metric", to_string(s.config.metric)},
              {"status", s.hotspot_status}}},
            {"build_timestamp", format_timestamp(s.build_timestamp)}};
}

Response json_response(int status, const json& body) { return {status, body.dump()}; }

Response error_response(int status, const std::string& message, const std::string& param = {}) {
    json body{{"error", message}};
    if (!param.empty()) body["param"] = param;
    return json_response(status, body);
}

std::optional<std::string> param(const QueryParams& params, const std::string& name) {
    auto it = params.find(name);
    if (it == params.end()) return std::nullopt;
    return it->second;
}

/// Parses an optional YYYY-MM-DD parameter; sets `bad` on failure.
std::optional<Day> day_param(const QueryParams& params, const std::string& name, bool& bad) {
    const auto raw = param(params, name);
    if (!raw) return std::nullopt;
    auto d = parse_day(*raw);
    if (!d) bad = true;
    return d;
}

std::pair<Day, Day> score_range(const Snapshot& s) {
    Day lo = Day::max(), hi = Day::min();
    for (const auto& sc : s.doc_scores) {
        lo = std::min(lo, utc_day(sc.published_at));
        hi = std::max(hi, utc_day(sc.published_at));
    }
    return {lo, hi};
}

}  // namespace

geo::HexGrid hotspot_grid(const Snapshot& snapshot, Metric metric, std::optional<Day> from, std::optional<Day> to,
                          std::string* status, std::size_t* skipped) {
    std::vector<geo::ScoredPoint> points;
    for (std::size_t i = 0; i < snapshot.docs.size(); ++i) {
        const auto& meta = snapshot.docs[i];
        if (!meta.geotag) continue;
        const Day d = utc_day(meta.published_at);
        if ((from && d < *from) || (to && d > *to)) continue;
        const auto& sc = snapshot.doc_scores[i];
        points.push_back({*meta.geotag, metric == Metric::compound ? sc.compound_avg : sc.word_sum_avg});
    }
    auto joined = geo::spatial_join(geo::make_hex_grid(snapshot.config.bbox, snapshot.config.cell_size), points);
    if (skipped) *skipped = joined.skipped;
    geo::HexGrid grid = std::move(joined.grid);
    std::string outcome = "ok";
    try {
        grid = geo::gi_star(std::move(grid));
    } catch (const geo::TooFewCells& e) {
        outcome = e.kind();
    } catch (const geo::DegenerateField& e) {
        outcome = e.kind();
    }
    if (status) *status = outcome;
    return geo::classify_hotspots(std::move(grid));
}

Snapshot assemble_snapshot(const PipelineConfig& config, std::vector<corpus::Document> ingested,
                           const sentiment::ValenceLexicon& lexicon, const std::vector<votes::Bill>& bills,
                           Timestamp build_timestamp) {
    Snapshot snap;
    snap.config = config;
    snap.build_timestamp = build_timestamp;
    snap.meta.n_ingested = ingested.size();

    std::vector<corpus::Document> docs =
        config.filter_relevant ? corpus::filter_relevant(ingested, config.relevance) : std::move(ingested);
    snap.meta.n_relevant = docs.size();

    for (const auto& d : docs) {
        try {
            snap.doc_scores.push_back(sentiment::score_document(d, lexicon, config.scoring));
        } catch (const Error& e) {
            rethrow_with_context(e, "document '" + d.id + "'");
        }
        snap.docs.push_back({d.id, d.kind, d.source, d.published_at, d.geotag});
        ++snap.meta.by_kind[std::string(corpus::to_string(d.kind))];
        ++snap.meta.by_outlet[d.source];
    }

    if (!snap.doc_scores.empty()) {
        const auto [lo, hi] = score_range(snap);
        snap.timeseries = sentiment::corpus_timeseries(snap.doc_scores, lo, hi);
    }

    snap.grid = hotspot_grid(snap, config.metric, std::nullopt, std::nullopt, &snap.hotspot_status, &snap.grid_skipped);

    const terms::Stopwords stopwords =
        config.stopwords_path ? terms::load_stopwords(*config.stopwords_path) : terms::default_stopwords();
    terms::WordCloudParams params = config.wordcloud;
    params.day_bucket = true;
    snap.terms_by_day = terms::wordcloud_terms(docs, snap.doc_scores, params, stopwords);
    params.day_bucket = false;
    snap.terms_total = terms::wordcloud_terms(docs, snap.doc_scores, params, stopwords);

    snap.bills = votes::filter_bills(bills, config.bill_phrases);
    return snap;
}

Snapshot build_snapshot(const PipelineConfig& config, const BuildInputs& inputs) {
    std::vector<corpus::Document> docs;
    try {
        docs = corpus::load_documents(inputs.corpus_path);
    } catch (const Error& e) {
        rethrow_with_context(e, "corpus " + inputs.corpus_path.string());
    }
    sentiment::ValenceLexicon lexicon;
    try {
        lexicon = sentiment::load_lexicon(inputs.lexicon_path);
    } catch (const Error& e) {
        rethrow_with_context(e, "lexicon " + inputs.lexicon_path.string());
    }
    std::vector<votes::Bill> bills;
    if (inputs.bills_path) {
        try {
            bills = votes::load_bills(*inputs.bills_path);
        } catch (const Error& e) {
            rethrow_with_context(e, "bills " + inputs.bills_path->string());
        }
    }
    return assemble_snapshot(config, std::move(docs), lexicon, bills,
                             inputs.build_timestamp.value_or(default_build_timestamp()));
}

std::string timeseries_to_json(const std::vector<TimePoint>& points, int indent) {
    json arr = json::array();
    for (const auto& p : points) arr.push_back(timepoint_json(p));
    return arr.dump(indent);
}

std::string terms_to_json(const std::vector<terms::TermEntry>& entries, int indent) {
    json arr = json::array();
    for (const auto& t : entries) arr.push_back(term_json(t));
    return arr.dump(indent);
}

std::string snapshot_to_json(const Snapshot& s, int indent) {
    json scores = json::array();
    for (const auto& sc : s.doc_scores) scores.push_back(score_json(sc));
    json root{{"meta", meta_json(s)},
              {"doc_scores", std::move(scores)},
              {"timeseries", json::parse(timeseries_to_json(s.timeseries))},
              {"map", json::parse(geo::to_geojson(s.grid))},
              {"terms", json::parse(terms_to_json(s.terms_by_day))},
              {"bills", json::parse(votes::bills_to_json(s.bills))["bills"]}};
    return root.dump(indent);
}

Api::Api(std::shared_ptr<const Snapshot> snapshot) : snapshot_(std::move(snapshot)) {
    if (!snapshot_) throw std::invalid_argument("Api needs a snapshot");
}

Response Api::handle(std::string_view path, const QueryParams& params) const {
    if (path == "/api/meta") return meta();
    if (path == "/api/timeseries") return timeseries(params);
    if (path == "/api/map") return map(params);
    if (path == "/api/terms") return terms(params);
    if (path == "/api/legislators") return legislators();

    constexpr std::string_view prefix = "/api/legislators/";
    constexpr std::string_view suffix = "/votes";
    if (path.size() > prefix.size() + suffix.size() && path.substr(0, prefix.size()) == prefix &&
        path.substr(path.size() - suffix.size()) == suffix) {
        const auto id = path.substr(prefix.size(), path.size() - prefix.size() - suffix.size());
        if (id.find('/') == std::string_view::npos) return legislator_votes(std::string(id));
    }
    return error_response(404, "not found");
}

Response Api::meta() const { return json_response(200, meta_json(*snapshot_)); }

Response Api::timeseries(const QueryParams& params) const {
    const Snapshot& s = *snapshot_;
    bool bad_from = false, bad_to = false;
    const auto from = day_param(params, "from", bad_from);
    const auto to = day_param(params, "to", bad_to);
    if (bad_from) return error_response(422, "expected YYYY-MM-DD", "from");
    if (bad_to) return error_response(422, "expected YYYY-MM-DD", "to");
    if (from && to && *from > *to) return error_response(422, "from is after to", "from");

    const auto outlet = param(params, "outlet");
    std::optional<corpus::DocKind> kind;
    if (const auto raw = param(params, "kind")) {
        kind = corpus::parse_kind(*raw);
        if (!kind) return error_response(422, "expected article or tweet", "kind");
    }

    if (!from && !to && !outlet && !kind) return {200, timeseries_to_json(s.timeseries)};
    if (s.doc_scores.empty()) return {200, "[]"};

    std::vector<DocumentScore> selected;
    for (std::size_t i = 0; i < s.docs.size(); ++i) {
        if (outlet && s.docs[i].source != *outlet) continue;
        if (kind && s.docs[i].kind != *kind) continue;
        selected.push_back(s.doc_scores[i]);
    }
    const auto [lo, hi] = score_range(s);
    const Day a = from.value_or(lo), b = to.value_or(hi);
    if (a > b) return {200, "[]"};
    return {200, timeseries_to_json(sentiment::corpus_timeseries(selected, a, b))};
}

Response Api::map(const QueryParams& params) const {
    const Snapshot& s = *snapshot_;
    Metric metric = s.config.metric;
    if (const auto raw = param(params, "metric")) {
        const auto m = parse_metric(*raw);
        if (!m) return error_response(422, "expected compound or word_sum", "metric");
        metric = *m;
    }
    bool bad_from = false, bad_to = false;
    const auto from = day_param(params, "from", bad_from);
    const auto to = day_param(params, "to", bad_to);
    if (bad_from) return error_response(422, "expected YYYY-MM-DD", "from");
    if (bad_to) return error_response(422, "expected YYYY-MM-DD", "to");
    if (from && to && *from > *to) return error_response(422, "from is after to", "from");

    if (metric == s.config.metric && !from && !to) return {200, geo::to_geojson(s.grid)};
    return {200, geo::to_geojson(hotspot_grid(s, metric, from, to))};
}

Response Api::terms(const QueryParams& params) const {
    const Snapshot& s = *snapshot_;
    bool bad_day = false;
    const auto day = day_param(params, "day", bad_day);
    if (bad_day) return error_response(422, "expected YYYY-MM-DD", "day");

    std::size_t limit = 100;
    if (const auto raw = param(params, "limit")) {
        long n = 0;
        const auto [ptr, ec] = std::from_chars(raw->data(), raw->data() + raw->size(), n);
        if (ec != std::errc{} || ptr != raw->data() + raw->size() || n < 1 || n > 1000)
            return error_response(422, "expected an integer in 1..1000", "limit");
        limit = static_cast<std::size_t>(n);
    }

    std::vector<terms::TermEntry> out;
    if (day) {
        for (const auto& t : s.terms_by_day)
            if (t.day == day && out.size() < limit) out.push_back(t);
    } else {
        const std::size_t n = std::min(limit, s.terms_total.size());
        out.assign(s.terms_total.begin(), s.terms_total.begin() + static_cast<std::ptrdiff_t>(n));
    }
    return {200, terms_to_json(out)};
}

Response Api::legislators() const {
    json arr = json::array();
    for (const auto& l : votes::legislators(snapshot_->bills))
        arr.push_back({{"id", l.id}, {"name", l.name}, {"chamber", votes::to_string(l.chamber)}});
    return json_response(200, arr);
}

Response Api::legislator_votes(const std::string& id) const {
    try {
        json arr = json::array();
        for (const auto& row : votes::legislator_record(snapshot_->bills, id))
            arr.push_back({{"bill_id", row.bill_id},
                           {"title", row.title},
                           {"session", row.session},
                           {"vote", votes::to_string(row.vote)}});
        return json_response(200, arr);
    } catch (const votes::UnknownLegislator&) {
        return error_response(404, "unknown legislator", "id");
    }
}

HttpService::HttpService(std::shared_ptr<const Snapshot> snapshot, ServeOptions options)
    : api_(std::move(snapshot)), options_(std::move(options)), server_(std::make_unique<httplib::Server>()) {
    const std::string origin = api_.snapshot().config.cors_origin;

    server_->set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    server_->Get(R"(/api/.*)", [this](const httplib::Request& req, httplib::Response& res) {
        QueryParams params(req.params.begin(), req.params.end());
        const Response r = api_.handle(req.path, params);
        res.status = r.status;
        res.set_content(r.body, "application/json");
    });
    server_->Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
        res.status = 204;
        res.set_header("Access-Control-Allow-Methods", "GET, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
    server_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty()) res.set_content(json{{"error", "not found"}}.dump(), "application/json");
    });
    server_->set_post_routing_handler([origin](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", origin);
    });
    if (options_.static_dir && !server_->set_mount_point("/", options_.static_dir->string()))
        throw BindFailure("static directory not found: " + options_.static_dir->string());
}

HttpService::~HttpService() { stop(); }

int HttpService::start() {
    int port = options_.port;
    if (port == 0) {
        port = server_->bind_to_any_port(options_.host);
        if (port < 0) throw BindFailure(options_.host + ":0");
    } else if (!server_->bind_to_port(options_.host, port)) {
        throw BindFailure(options_.host + ":" + std::to_string(port));
    }
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port;
}

void HttpService::stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
}

void HttpService::wait() {
    if (thread_.joinable()) thread_.join();
}

void serve(std::shared_ptr<const Snapshot> snapshot, const ServeOptions& options) {
    HttpService service(std::move(snapshot), options);
    service.start();
    service.wait();
}

}  // namespace snapinfo::service
