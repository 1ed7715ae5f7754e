#include <pybind11/chrono.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "snapinfo/classifier.hpp"
#include "snapinfo/corpus.hpp"
#include "snapinfo/geo.hpp"
#include "snapinfo/sentiment.hpp"
#include "snapinfo/service.hpp"
#include "snapinfo/terms.hpp"
#include "snapinfo/votes.hpp"

namespace py = pybind11;
using namespace snapinfo;

namespace {

corpus::Document make_document(const std::string& text, const std::string& id, const std::string& published_at,
                               int traffic_tier, const std::string& kind, const std::string& source,
                               const std::optional<std::string>& label) {
    corpus::Document d;
    d.id = id;
    d.text = text;
    d.source = source;
    d.traffic_tier = traffic_tier;
    const auto k = corpus::parse_kind(kind);
    if (!k) throw std::invalid_argument("kind must be article or tweet");
    d.kind = *k;
    const auto ts = parse_timestamp(published_at);
    if (!ts) throw std::invalid_argument("published_at must be ISO-8601 with zone");
    d.published_at = *ts;
    if (label) {
        d.label = corpus::parse_label(*label);
        if (!d.label) throw std::invalid_argument("label must be positive, negative or neutral");
    }
    corpus::validate(d);
    return d;
}

}  // namespace

PYBIND11_MODULE(_snapinfo, m) {
    m.doc() = "Sentiment, term, hot-spot and vote analytics";

    static py::exception<Error> error(m, "Error");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    // corpus
    py::class_<corpus::Token>(m, "Token")
        .def_readonly("surface", &corpus::Token::surface)
        .def_readonly("norm", &corpus::Token::norm)
        .def_readonly("all_caps", &corpus::Token::all_caps)
        .def_readonly("trailing_exclaims", &corpus::Token::trailing_exclaims)
        .def("__repr__", [](const corpus::Token& t) { return "<Token " + t.norm + ">"; });

    py::class_<corpus::Sentence>(m, "Sentence")
        .def_readonly("doc_id", &corpus::Sentence::doc_id)
        .def_readonly("index", &corpus::Sentence::index)
        .def_readonly("tokens", &corpus::Sentence::tokens)
        .def_readonly("raw", &corpus::Sentence::raw);

    py::class_<corpus::Document>(m, "Document")
        .def(py::init(&make_document), py::arg("text"), py::arg("id") = "doc",
             py::arg("published_at") = "2017-03-01T00:00:00Z", py::arg("traffic_tier") = 1,
             py::arg("kind") = "article", py::arg("source") = "unknown",
             py::arg("label") = std::nullopt)
        .def_readonly("id", &corpus::Document::id)
        .def_readonly("text", &corpus::Document::text)
        .def_readonly("source", &corpus::Document::source)
        .def_readonly("traffic_tier", &corpus::Document::traffic_tier)
        .def_property_readonly("kind", [](const corpus::Document& d) { return std::string(corpus::to_string(d.kind)); })
        .def_property_readonly("published_at", [](const corpus::Document& d) { return format_timestamp(d.published_at); })
        .def_property_readonly("geotag", [](const corpus::Document& d) -> std::optional<std::pair<double, double>> {
            if (!d.geotag) return std::nullopt;
            return std::make_pair(d.geotag->lat, d.geotag->lon);
        })
        .def_property_readonly("label", [](const corpus::Document& d) -> std::optional<std::string> {
            if (!d.label) return std::nullopt;
            return std::string(corpus::to_string(*d.label));
        });

    m.def("load_documents", [](const std::string& path) { return corpus::load_documents(path); }, py::arg("path"));
    m.def("filter_relevant", [](const std::vector<corpus::Document>& docs) { return corpus::filter_relevant(docs); });
    m.def("tokenize", &corpus::tokenize, py::arg("text"));
    m.def("split_sentences", &corpus::split_sentences, py::arg("doc"));
    m.def("reading_grade", &corpus::reading_grade, py::arg("doc"));

    // sentiment
    py::class_<sentiment::ValenceLexicon>(m, "ValenceLexicon")
        .def(py::init([](const std::map<std::string, int>& entries) {
                 sentiment::ValenceLexicon lex("python");
                 for (const auto& [term, score] : entries) lex.add(term, score);
                 return lex;
             }),
             py::arg("entries"))
        .def("__len__", &sentiment::ValenceLexicon::size)
        .def("valence", &sentiment::ValenceLexicon::valence)
        .def_property_readonly("entries", &sentiment::ValenceLexicon::entries);
    m.def("load_lexicon", [](const std::string& path) { return sentiment::load_lexicon(path); }, py::arg("path"));

    py::class_<sentiment::RuleConfig>(m, "RuleConfig")
        .def(py::init<>())
        .def_readwrite("alpha", &sentiment::RuleConfig::alpha)
        .def_readwrite("booster_delta", &sentiment::RuleConfig::booster_delta)
        .def_readwrite("negation_scalar", &sentiment::RuleConfig::negation_scalar)
        .def_readwrite("negation_window", &sentiment::RuleConfig::negation_window)
        .def_readwrite("caps_delta", &sentiment::RuleConfig::caps_delta)
        .def_readwrite("exclaim_delta", &sentiment::RuleConfig::exclaim_delta)
        .def_readwrite("but_before", &sentiment::RuleConfig::but_before)
        .def_readwrite("but_after", &sentiment::RuleConfig::but_after);

    py::class_<sentiment::ScoringConfig>(m, "ScoringConfig")
        .def(py::init<>())
        .def_readwrite("rules", &sentiment::ScoringConfig::rules)
        .def_readwrite("key_terms", &sentiment::ScoringConfig::key_terms)
        .def_readwrite("kappa", &sentiment::ScoringConfig::kappa)
        .def_readwrite("negation_mode", &sentiment::ScoringConfig::negation_mode)
        .def_readwrite("apply_doc_weight", &sentiment::ScoringConfig::apply_doc_weight);

    py::class_<sentiment::DocumentScore>(m, "DocumentScore")
        .def_readonly("doc_id", &sentiment::DocumentScore::doc_id)
        .def_readonly("word_sum_avg", &sentiment::DocumentScore::word_sum_avg)
        .def_readonly("compound_avg", &sentiment::DocumentScore::compound_avg)
        .def_readonly("doc_weight", &sentiment::DocumentScore::doc_weight)
        .def_property_readonly("published_at",
                               [](const sentiment::DocumentScore& s) { return format_timestamp(s.published_at); });

    py::class_<sentiment::TimePoint>(m, "TimePoint")
        .def_property_readonly("day", [](const sentiment::TimePoint& p) { return format_day(p.day); })
        .def_readonly("avg_word_sum", &sentiment::TimePoint::avg_word_sum)
        .def_readonly("avg_compound", &sentiment::TimePoint::avg_compound)
        .def_readonly("n_docs", &sentiment::TimePoint::n_docs);

    m.def(
        "word_sum_score",
        [](const std::vector<corpus::Token>& tokens, const sentiment::ValenceLexicon& lex, bool negation_mode) {
            return sentiment::word_sum_score(tokens, lex, negation_mode);
        },
        py::arg("tokens"), py::arg("lexicon"), py::arg("negation_mode") = false);
    m.def(
        "compound_score",
        [](const std::vector<corpus::Token>& tokens, const sentiment::ValenceLexicon& lex,
           const sentiment::RuleConfig& cfg) { return sentiment::compound_score(tokens, lex, cfg); },
        py::arg("tokens"), py::arg("lexicon"), py::arg("config") = sentiment::RuleConfig{});
    m.def("normalize_compound", &sentiment::normalize_compound, py::arg("raw_sum"), py::arg("alpha") = 15.0);
    m.def("document_weight", &sentiment::document_weight, py::arg("traffic_tier"), py::arg("grade"));
    m.def("score_document", &sentiment::score_document, py::arg("doc"), py::arg("lexicon"),
          py::arg("config") = sentiment::ScoringConfig{});
    m.def(
        "corpus_timeseries",
        [](const std::vector<sentiment::DocumentScore>& scores, const std::string& from, const std::string& to) {
            const auto a = parse_day(from), b = parse_day(to);
            if (!a || !b) throw std::invalid_argument("dates must be YYYY-MM-DD");
            return sentiment::corpus_timeseries(scores, *a, *b);
        },
        py::arg("scores"), py::arg("from_day"), py::arg("to_day"));
    m.def(
        "tool_agreement",
        [](const std::vector<sentiment::DocumentScore>& scores) {
            const auto a = sentiment::tool_agreement(scores);
            return std::make_pair(a.pearson_r, a.sign_agreement);
        },
        py::arg("scores"));

    // classifier
    py::class_<classifier::NBModel>(m, "NBModel")
        .def_property_readonly("vocab", &classifier::NBModel::vocab)
        .def("to_json", &classifier::NBModel::to_json)
        .def_static("from_json", &classifier::NBModel::from_json);
    m.def("train", &classifier::train, py::arg("labeled"), py::arg("smoothing") = 1.0);
    m.def(
        "predict",
        [](const classifier::NBModel& model, const corpus::Document& doc) {
            const auto p = classifier::predict(model, doc);
            std::map<std::string, double> posterior;
            for (const auto& [label, prob] : p.posterior) posterior[std::string(corpus::to_string(label))] = prob;
            return std::make_pair(std::string(corpus::to_string(p.label)), posterior);
        },
        py::arg("model"), py::arg("doc"));
    m.def("cross_validate", &classifier::cross_validate, py::arg("labeled"), py::arg("k"), py::arg("smoothing") = 1.0);

    // terms
    m.def(
        "tfidf",
        [](const std::vector<corpus::Document>& docs) {
            std::map<std::pair<std::string, std::string>, double> out;
            for (const auto& [key, v] : terms::tfidf(docs)) out.emplace(key, v);
            return out;
        },
        py::arg("corpus"));
    m.def(
        "bigram_collocations",
        [](const std::vector<corpus::Document>& docs, std::size_t min_count, std::size_t top_n) {
            std::vector<std::tuple<std::string, double, std::size_t>> out;
            for (const auto& c : terms::bigram_collocations(docs, min_count, top_n))
                out.emplace_back(c.bigram, c.pmi, c.count);
            return out;
        },
        py::arg("corpus"), py::arg("min_count") = 3, py::arg("top_n") = 50);
    m.def(
        "lda_top_words",
        [](const std::vector<corpus::Document>& docs, int topics, int iterations, std::uint64_t seed, std::size_t n) {
            terms::LdaParams p;
            p.topics = topics;
            p.iterations = iterations;
            p.seed = seed;
            const auto model = terms::lda_fit(docs, p);
            std::vector<std::vector<std::pair<std::string, double>>> out;
            for (int k = 0; k < model.topics; ++k) out.push_back(model.top_words(k, n));
            return out;
        },
        py::arg("corpus"), py::arg("topics") = 10, py::arg("iterations") = 500, py::arg("seed") = terms::LdaParams{}.seed,
        py::arg("n") = 10);

    // geo
    m.def(
        "hotspots",
        [](const std::vector<std::tuple<double, double, double>>& points, double cell_size,
           std::tuple<double, double, double, double> bbox) {
            std::vector<geo::ScoredPoint> pts;
            for (const auto& [lat, lon, score] : points) pts.push_back({{lat, lon}, score});
            const auto [a, b, c, d] = bbox;
            auto joined = geo::spatial_join(geo::make_hex_grid({a, b, c, d}, cell_size), pts);
            return geo::to_geojson(geo::classify_hotspots(geo::gi_star(std::move(joined.grid))));
        },
        py::arg("points"), py::arg("cell_size"), py::arg("bbox"),
        "points are (lat, lon, score); returns a GeoJSON FeatureCollection string");
    m.def("hex_at", [](double lon, double lat, double size) {
        const auto a = geo::hex_at({lon, lat}, size);
        return std::make_pair(a.q, a.r);
    });

    // votes
    m.def(
        "filter_bills",
        [](const std::string& bills_json) {
            return votes::bills_to_json(votes::filter_bills(votes::parse_bills(bills_json)));
        },
        py::arg("bills_json"));

    // service
    m.def(
        "build_snapshot_json",
        [](const std::string& corpus_path, const std::string& lexicon_path, std::optional<std::string> bills_path,
           long long build_epoch) {
            service::BuildInputs in{corpus_path, lexicon_path, {}, Timestamp{std::chrono::seconds{build_epoch}}};
            if (bills_path) in.bills_path = *bills_path;
            return service::snapshot_to_json(service::build_snapshot(PipelineConfig{}, in));
        },
        py::arg("corpus_path"), py::arg("lexicon_path"), py::arg("bills_path") = std::nullopt,
        py::arg("build_epoch") = 0);
}
