#include <sstream>

#include "doctest.h"
#include "snapinfo/config.hpp"
#include "snapinfo/votes.hpp"

using namespace snapinfo;

namespace {

PipelineConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

}  // namespace

TEST_CASE("empty config keeps defaults") {
    const auto cfg = parse("# nothing\n\n");
    CHECK(cfg.scoring.rules.alpha == 15.0);
    CHECK(cfg.scoring.kappa == 2.0);
    CHECK(cfg.cell_size == 1.0);
    CHECK(cfg.metric == Metric::compound);
    CHECK(cfg.bill_phrases == votes::default_phrases());
    CHECK(cfg.scoring.apply_doc_weight);
    CHECK_FALSE(cfg.scoring.negation_mode);
}

TEST_CASE("shipped example config matches the defaults") {
    const auto cfg = load_config(SNAPINFO_DATA_DIR "/snapinfo.conf");
    const PipelineConfig defaults;
    CHECK(cfg.scoring.rules.alpha == defaults.scoring.rules.alpha);
    CHECK(cfg.scoring.rules.negation_scalar == defaults.scoring.rules.negation_scalar);
    CHECK(cfg.scoring.key_terms == defaults.scoring.key_terms);
    CHECK(cfg.relevance.context_terms == defaults.relevance.context_terms);
    CHECK(cfg.bill_phrases == defaults.bill_phrases);
    CHECK(cfg.bbox.min_lon == defaults.bbox.min_lon);
    CHECK(cfg.bbox.max_lat == defaults.bbox.max_lat);
}

TEST_CASE("values are parsed and applied") {
    const auto cfg = parse(
        "alpha = 10  # inline comment\n"
        "negation_window=2\n"
        "key_terms = snap, wic\n"
        "kappa = 3\n"
        "negation_mode = on\n"
        "apply_doc_weight = false\n"
        "bbox = -90, 30, -80, 35\n"
        "cell_size = 0.5\n"
        "metric = word_sum\n"
        "day_bucket = no\n"
        "min_count = 2\n"
        "bill_phrases = wic\n");
    CHECK(cfg.scoring.rules.alpha == 10.0);
    CHECK(cfg.scoring.rules.negation_window == 2);
    CHECK(cfg.scoring.key_terms == std::vector<std::string>{"snap", "wic"});
    CHECK(cfg.relevance.key_terms == cfg.scoring.key_terms);
    CHECK(cfg.scoring.kappa == 3.0);
    CHECK(cfg.scoring.negation_mode);
    CHECK_FALSE(cfg.scoring.apply_doc_weight);
    CHECK(cfg.bbox.min_lon == -90.0);
    CHECK(cfg.bbox.max_lat == 35.0);
    CHECK(cfg.cell_size == 0.5);
    CHECK(cfg.metric == Metric::word_sum);
    CHECK_FALSE(cfg.wordcloud.day_bucket);
    CHECK(cfg.wordcloud.min_count == 2);
    CHECK(cfg.bill_phrases == std::vector<std::string>{"wic"});
}

TEST_CASE("bad configs are rejected") {
    CHECK_THROWS_AS(parse("colour = blue\n"), ConfigError);
    CHECK_THROWS_AS(parse("alpha\n"), ConfigError);
    CHECK_THROWS_AS(parse("alpha = fifteen\n"), ConfigError);
    CHECK_THROWS_AS(parse("alpha = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("but_before = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse("negation_window = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("kappa = 0.5\n"), ConfigError);
    CHECK_THROWS_AS(parse("cell_size = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse("bbox = 1, 2, 3\n"), ConfigError);
    CHECK_THROWS_AS(parse("metric = loudness\n"), ConfigError);
    CHECK_THROWS_AS(parse("negation_mode = maybe\n"), ConfigError);
    CHECK_THROWS_AS(parse("min_count = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("key_terms = \n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent.conf"), ConfigError);
}
