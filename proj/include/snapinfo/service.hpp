#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "snapinfo/config.hpp"
#include "snapinfo/corpus.hpp"
#include "snapinfo/geo.hpp"
#include "snapinfo/sentiment.hpp"
#include "snapinfo/terms.hpp"
#include "snapinfo/votes.hpp"

namespace httplib {
class Server;
}

namespace snapinfo::service {

SNAPINFO_DEFINE_ERROR(BindFailure);

/// What the API needs to know about a document besides its score.
struct DocMeta {
    std::string id;
    corpus::DocKind kind = corpus::DocKind::article;
    std::string source;
    Timestamp published_at{};
    std::optional<corpus::GeoTag> geotag;
};

struct CorpusMeta {
    std::size_t n_ingested = 0;
    std::size_t n_relevant = 0;
    std::map<std::string, std::size_t> by_kind;
    std::map<std::string, std::size_t> by_outlet;
};

struct Snapshot {
    PipelineConfig config;
    CorpusMeta meta;
    /// Parallel to doc_scores.
    std::vector<DocMeta> docs;
    std::vector<sentiment::DocumentScore> doc_scores;
    std::vector<sentiment::TimePoint> timeseries;
    geo::HexGrid grid;
    std::size_t grid_skipped = 0;
    /// "ok", or the error kind that left z unset (e.g. "TooFewCells").
    std::string hotspot_status = "ok";
    /// Day-bucketed word-cloud entries.
    std::vector<terms::TermEntry> terms_by_day;
    /// The same entries summed over all days.
    std::vector<terms::TermEntry> terms_total;
    std::vector<votes::Bill> bills;
    Timestamp build_timestamp{};
};

struct BuildInputs {
    std::filesystem::path corpus_path;
    std::filesystem::path lexicon_path;
    std::optional<std::filesystem::path> bills_path;
    /// Defaults to SOURCE_DATE_EPOCH when set, else the current time.
    std::optional<Timestamp> build_timestamp;
};

/// In-memory variant used by build_snapshot.
Snapshot assemble_snapshot(const PipelineConfig& config, std::vector<corpus::Document> ingested,
                           const sentiment::ValenceLexicon& lexicon, const std::vector<votes::Bill>& bills,
                           Timestamp build_timestamp);

/// ingest -> filter -> score -> timeseries -> grid/Gi* -> terms -> bills.
/// Module errors are rethrown with the failing input named in the message.
Snapshot build_snapshot(const PipelineConfig& config, const BuildInputs& inputs);

/// Geotagged documents within [from, to] joined onto a fresh grid, with Gi*
/// and classes. `status` receives "ok" or the error kind that left z unset.
geo::HexGrid hotspot_grid(const Snapshot& snapshot, Metric metric, std::optional<Day> from, std::optional<Day> to,
                          std::string* status = nullptr, std::size_t* skipped = nullptr);

std::string snapshot_to_json(const Snapshot& snapshot, int indent = -1);
std::string timeseries_to_json(const std::vector<sentiment::TimePoint>& points, int indent = -1);
std::string terms_to_json(const std::vector<terms::TermEntry>& entries, int indent = -1);

struct Response {
    int status = 200;
    std::string body;
};

using QueryParams = std::multimap<std::string, std::string>;

/// Read-only JSON endpoints over an immutable snapshot:
///   GET /api/meta
///   GET /api/timeseries?from&to&outlet&kind
///   GET /api/map?metric&from&to
///   GET /api/terms?day&limit
///   GET /api/legislators
///   GET /api/legislators/{id}/votes
class Api {
public:
    explicit Api(std::shared_ptr<const Snapshot> snapshot);

    Response handle(std::string_view path, const QueryParams& params) const;

    const Snapshot& snapshot() const { return *snapshot_; }

private:
    Response meta() const;
    Response timeseries(const QueryParams& params) const;
    Response map(const QueryParams& params) const;
    Response terms(const QueryParams& params) const;
    Response legislators() const;
    Response legislator_votes(const std::string& id) const;

    std::shared_ptr<const Snapshot> snapshot_;
};

struct ServeOptions {
    std::string host = "127.0.0.1";
    /// 0 picks a free port.
    int port = 8080;
    std::optional<std::filesystem::path> static_dir;
};

/// Background HTTP server; stops on destruction.
class HttpService {
public:
    HttpService(std::shared_ptr<const Snapshot> snapshot, ServeOptions options);
    ~HttpService();
    HttpService(const HttpService&) = delete;
    HttpService& operator=(const HttpService&) = delete;

    /// Binds and starts the listener thread; returns the bound port.
    /// Throws BindFailure.
    int start();
    void stop();
    /// Blocks until the listener exits.
    void wait();

private:
    Api api_;
    ServeOptions options_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
};

/// Blocking convenience wrapper around HttpService.
void serve(std::shared_ptr<const Snapshot> snapshot, const ServeOptions& options);

}  // namespace snapinfo::service
