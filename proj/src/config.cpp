#include "snapinfo/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>

#include "snapinfo/votes.hpp"

namespace snapinfo {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) throw ConfigError(key + ": not a number: '" + v + "'");
    return out;
}

long to_int(const std::string& key, const std::string& v) {
    long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) throw ConfigError(key + ": not an integer: '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key + ": not a boolean: '" + v + "'");
}

std::vector<std::string> to_list(const std::string& v) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= v.size()) {
        const auto comma = v.find(',', start);
        const std::string item = trim(std::string_view(v).substr(start, comma - start));
        if (!item.empty()) out.push_back(item);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::size_t to_count(const std::string& key, const std::string& v) {
    const long n = to_int(key, v);
    if (n < 0) throw ConfigError(key + " must be >= 0");
    return static_cast<std::size_t>(n);
}

}  // namespace

std::string_view to_string(Metric m) { return m == Metric::compound ? "compound" : "word_sum"; }

std::optional<Metric> parse_metric(std::string_view s) {
    if (s == "compound") return Metric::compound;
    if (s == "word_sum") return Metric::word_sum;
    return std::nullopt;
}

PipelineConfig::PipelineConfig() : bill_phrases(votes::default_phrases()) {}

PipelineConfig parse_config(std::istream& in) {
    PipelineConfig cfg;
    auto& rules = cfg.scoring.rules;
    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> setters{
        {"alpha", [&](auto& k, auto& v) { rules.alpha = to_double(k, v); }},
        {"booster_delta", [&](auto& k, auto& v) { rules.booster_delta = to_double(k, v); }},
        {"negation_scalar", [&](auto& k, auto& v) { rules.negation_scalar = to_double(k, v); }},
        {"negation_window", [&](auto& k, auto& v) { rules.negation_window = static_cast<int>(to_int(k, v)); }},
        {"booster_window", [&](auto& k, auto& v) { rules.booster_window = static_cast<int>(to_int(k, v)); }},
        {"caps_delta", [&](auto& k, auto& v) { rules.caps_delta = to_double(k, v); }},
        {"exclaim_delta", [&](auto& k, auto& v) { rules.exclaim_delta = to_double(k, v); }},
        {"but_before", [&](auto& k, auto& v) { rules.but_before = to_double(k, v); }},
        {"but_after", [&](auto& k, auto& v) { rules.but_after = to_double(k, v); }},
        {"booster_terms", [&](auto&, auto& v) { rules.booster_terms = to_list(v); }},
        {"dampener_terms", [&](auto&, auto& v) { rules.dampener_terms = to_list(v); }},
        {"negation_cues", [&](auto&, auto& v) { rules.negation_cues = to_list(v); }},
        {"key_terms", [&](auto&, auto& v) {
             cfg.scoring.key_terms = to_list(v);
             cfg.relevance.key_terms = cfg.scoring.key_terms;
         }},
        {"context_terms", [&](auto&, auto& v) { cfg.relevance.context_terms = to_list(v); }},
        {"ambiguous_terms", [&](auto&, auto& v) { cfg.relevance.ambiguous_terms = to_list(v); }},
        {"kappa", [&](auto& k, auto& v) { cfg.scoring.kappa = to_double(k, v); }},
        {"negation_mode", [&](auto& k, auto& v) { cfg.scoring.negation_mode = to_bool(k, v); }},
        {"apply_doc_weight", [&](auto& k, auto& v) { cfg.scoring.apply_doc_weight = to_bool(k, v); }},
        {"filter_relevant", [&](auto& k, auto& v) { cfg.filter_relevant = to_bool(k, v); }},
        {"cell_size", [&](auto& k, auto& v) { cfg.cell_size = to_double(k, v); }},
        {"bbox", [&](auto& k, auto& v) {
             const auto parts = to_list(v);
             if (parts.size() != 4) throw ConfigError(k + ": expected min_lon,min_lat,max_lon,max_lat");
             cfg.bbox = {to_double(k, parts[0]), to_double(k, parts[1]), to_double(k, parts[2]), to_double(k, parts[3])};
         }},
        {"metric", [&](auto& k, auto& v) {
             const auto m = parse_metric(v);
             if (!m) throw ConfigError(k + ": expected compound or word_sum");
             cfg.metric = *m;
         }},
        {"day_bucket", [&](auto& k, auto& v) { cfg.wordcloud.day_bucket = to_bool(k, v); }},
        {"min_count", [&](auto& k, auto& v) { cfg.wordcloud.min_count = to_count(k, v); }},
        {"top_n", [&](auto& k, auto& v) { cfg.wordcloud.top_n = to_count(k, v); }},
        {"stopwords_path", [&](auto&, auto& v) { cfg.stopwords_path = v; }},
        {"bill_phrases", [&](auto&, auto& v) { cfg.bill_phrases = to_list(v); }},
        {"cors_origin", [&](auto&, auto& v) { cfg.cors_origin = v; }},
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        it->second(key, value);
    }

    try {
        cfg.scoring.rules.validate();
    } catch (const sentiment::InvalidConfig& e) {
        throw ConfigError(e.message());
    }
    if (cfg.scoring.kappa < 1.0) throw ConfigError("kappa must be >= 1");
    if (!(cfg.cell_size > 0.0)) throw ConfigError("cell_size must be > 0");
    if (cfg.wordcloud.min_count < 1) throw ConfigError("min_count must be >= 1");
    if (cfg.relevance.key_terms.empty()) throw ConfigError("key_terms must not be empty");
    if (cfg.bill_phrases.empty()) throw ConfigError("bill_phrases must not be empty");
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    return parse_config(in);
}

}  // namespace snapinfo
