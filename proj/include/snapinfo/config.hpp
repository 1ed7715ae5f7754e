#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "snapinfo/corpus.hpp"
#include "snapinfo/error.hpp"
#include "snapinfo/geo.hpp"
#include "snapinfo/sentiment.hpp"
#include "snapinfo/terms.hpp"

namespace snapinfo {

SNAPINFO_DEFINE_ERROR(ConfigError);

enum class Metric { compound, word_sum };
std::string_view to_string(Metric m);
std::optional<Metric> parse_metric(std::string_view s);

struct PipelineConfig {
    sentiment::ScoringConfig scoring;
    corpus::RelevanceFilter relevance;
    bool filter_relevant = true;

    geo::BBox bbox{-125.0, 24.0, -66.0, 50.0};
    double cell_size = 1.0;
    Metric metric = Metric::compound;

    terms::WordCloudParams wordcloud;
    std::optional<std::filesystem::path> stopwords_path;

    std::vector<std::string> bill_phrases;
    std::string cors_origin = "*";

    PipelineConfig();
};

/// `key = value` lines; `#` starts a comment. Lists are comma separated.
/// Unknown keys and unparsable values throw ConfigError.
PipelineConfig parse_config(std::istream& in);
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace snapinfo
