#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "snapinfo/corpus.hpp"
#include "snapinfo/dates.hpp"
#include "snapinfo/sentiment.hpp"
#include "snapinfo/service.hpp"

namespace snapinfo::testing {

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(SNAPINFO_FIXTURE_DIR) / name;
}

inline corpus::Document make_doc(std::string id, std::string text, std::string published_at = "2017-03-01T12:00:00Z",
                                 int tier = 1) {
    corpus::Document d;
    d.id = std::move(id);
    d.kind = corpus::DocKind::article;
    d.text = std::move(text);
    d.source = "fixture";
    d.published_at = *parse_timestamp(published_at);
    d.traffic_tier = tier;
    return d;
}

inline sentiment::ValenceLexicon make_lexicon(std::initializer_list<std::pair<const char*, int>> entries) {
    sentiment::ValenceLexicon lex("fixture");
    for (const auto& [term, score] : entries) lex.add(term, score);
    return lex;
}

inline std::vector<std::string> norms(const std::vector<corpus::Token>& tokens) {
    std::vector<std::string> out;
    for (const auto& t : tokens) out.push_back(t.norm);
    return out;
}

/// The snapshot every service test runs against, with a pinned build time.
inline service::Snapshot fixture_snapshot(PipelineConfig config = {}) {
    service::BuildInputs in{fixture("docs.jsonl"), fixture("lexicon.tsv"), fixture("bills.json"),
                            Timestamp{std::chrono::seconds{1500000000}}};
    return service::build_snapshot(config, in);
}

}  // namespace snapinfo::testing
