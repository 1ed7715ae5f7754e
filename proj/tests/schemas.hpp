#pragma once

#include <initializer_list>
#include <string>

#include "json.hpp"
#include "snapinfo/dates.hpp"
#include "snapinfo/geo.hpp"

/// Structural checks for the HTTP API bodies. Each returns an empty string
/// when the document conforms, else the first problem found.
namespace snapinfo::schema {

using nlohmann::json;

inline std::string need(const json& j, const char* key, json::value_t type, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) return where + ": missing '" + key + "'";
    const auto t = j.at(key).type();
    const bool number_ok = type == json::value_t::number_float &&
                           (t == json::value_t::number_integer || t == json::value_t::number_unsigned);
    const bool unsigned_ok = type == json::value_t::number_integer && t == json::value_t::number_unsigned;
    if (t != type && !number_ok && !unsigned_ok) return where + ": '" + key + "' has type " + j.at(key).type_name();
    return {};
}

inline std::string need_day(const json& j, const char* key, const std::string& where) {
    if (auto e = need(j, key, json::value_t::string, where); !e.empty()) return e;
    if (!parse_day(j.at(key).get<std::string>())) return where + ": '" + key + "' is not YYYY-MM-DD";
    return {};
}

#define SNAPINFO_SCHEMA_TRY(expr)                 \
    do {                                          \
        if (auto e_ = (expr); !e_.empty()) return e_; \
    } while (0)

inline std::string meta(const json& j) {
    using T = json::value_t;
    SNAPINFO_SCHEMA_TRY(need(j, "n_ingested", T::number_integer, "meta"));
    SNAPINFO_SCHEMA_TRY(need(j, "n_docs", T::number_integer, "meta"));
    SNAPINFO_SCHEMA_TRY(need(j, "n_bills", T::number_integer, "meta"));
    SNAPINFO_SCHEMA_TRY(need(j, "doc_counts", T::object, "meta"));
    SNAPINFO_SCHEMA_TRY(need(j["doc_counts"], "by_kind", T::object, "meta.doc_counts"));
    SNAPINFO_SCHEMA_TRY(need(j["doc_counts"], "by_outlet", T::object, "meta.doc_counts"));
    SNAPINFO_SCHEMA_TRY(need(j, "grid", T::object, "meta"));
    SNAPINFO_SCHEMA_TRY(need(j["grid"], "cell_size", T::number_float, "meta.grid"));
    SNAPINFO_SCHEMA_TRY(need(j["grid"], "n_cells", T::number_integer, "meta.grid"));
    SNAPINFO_SCHEMA_TRY(need(j["grid"], "bbox", T::array, "meta.grid"));
    SNAPINFO_SCHEMA_TRY(need(j["grid"], "status", T::string, "meta.grid"));
    SNAPINFO_SCHEMA_TRY(need(j, "build_timestamp", T::string, "meta"));
    if (!parse_timestamp(j["build_timestamp"].get<std::string>())) return "meta: bad build_timestamp";
    if (!j.contains("date_range")) return "meta: missing 'date_range'";
    if (!j["date_range"].is_null()) {
        SNAPINFO_SCHEMA_TRY(need_day(j["date_range"], "from", "meta.date_range"));
        SNAPINFO_SCHEMA_TRY(need_day(j["date_range"], "to", "meta.date_range"));
    }
    return {};
}

inline std::string timeseries(const json& j) {
    using T = json::value_t;
    if (!j.is_array()) return "timeseries: not an array";
    std::string prev;
    for (const auto& p : j) {
        SNAPINFO_SCHEMA_TRY(need_day(p, "day", "timeseries[]"));
        SNAPINFO_SCHEMA_TRY(need(p, "avg_word_sum", T::number_float, "timeseries[]"));
        SNAPINFO_SCHEMA_TRY(need(p, "avg_compound", T::number_float, "timeseries[]"));
        SNAPINFO_SCHEMA_TRY(need(p, "n_docs", T::number_integer, "timeseries[]"));
        if (p["n_docs"].get<long>() < 1) return "timeseries[]: n_docs < 1";
        const double c = p["avg_compound"].get<double>();
        if (!(c >= -1.0 && c <= 1.0)) return "timeseries[]: avg_compound outside [-1, 1]";
        const auto day = p["day"].get<std::string>();
        if (day <= prev) return "timeseries: days not strictly increasing";
        prev = day;
    }
    return {};
}

inline std::string feature_collection(const json& j) {
    using T = json::value_t;
    if (j.value("type", "") != "FeatureCollection") return "map: type is not FeatureCollection";
    SNAPINFO_SCHEMA_TRY(need(j, "features", T::array, "map"));
    for (const auto& f : j["features"]) {
        if (f.value("type", "") != "Feature") return "map.features[]: type is not Feature";
        SNAPINFO_SCHEMA_TRY(need(f, "geometry", T::object, "map.features[]"));
        if (f["geometry"].value("type", "") != "Polygon") return "map.features[]: geometry is not a Polygon";
        SNAPINFO_SCHEMA_TRY(need(f, "properties", T::object, "map.features[]"));
        const auto& p = f["properties"];
        SNAPINFO_SCHEMA_TRY(need(p, "q", T::number_integer, "properties"));
        SNAPINFO_SCHEMA_TRY(need(p, "r", T::number_integer, "properties"));
        SNAPINFO_SCHEMA_TRY(need(p, "count", T::number_integer, "properties"));
        SNAPINFO_SCHEMA_TRY(need(p, "cls", T::string, "properties"));
        if (!p.contains("value") || !p.contains("z")) return "properties: missing value or z";
        const auto cls = geo::parse_hotspot_class(p["cls"].get<std::string>());
        if (!cls) return "properties: cls '" + p["cls"].get<std::string>() + "' outside the enum";
        const bool empty = p["count"].get<long>() == 0;
        if (empty != (*cls == geo::HotspotClass::empty)) return "properties: cls/count mismatch";
        if (!empty && !p["value"].is_number()) return "properties: value missing on a data cell";
        if (!p["z"].is_null() && !p["z"].is_number()) return "properties: z is neither null nor a number";
    }
    return {};
}

inline std::string terms(const json& j) {
    using T = json::value_t;
    if (!j.is_array()) return "terms: not an array";
    for (const auto& t : j) {
        SNAPINFO_SCHEMA_TRY(need(t, "term", T::string, "terms[]"));
        SNAPINFO_SCHEMA_TRY(need(t, "score", T::number_float, "terms[]"));
        SNAPINFO_SCHEMA_TRY(need(t, "origin", T::string, "terms[]"));
        if (t["term"].get<std::string>().empty()) return "terms[]: empty term";
        if (t["score"].get<double>() < 0) return "terms[]: negative score";
        const auto origin = t["origin"].get<std::string>();
        if (origin != "tfidf" && origin != "bigram" && origin != "entity") return "terms[]: bad origin";
        if (!t.contains("day")) return "terms[]: missing 'day'";
        if (!t["day"].is_null()) SNAPINFO_SCHEMA_TRY(need_day(t, "day", "terms[]"));
    }
    return {};
}

inline std::string legislators(const json& j) {
    using T = json::value_t;
    if (!j.is_array()) return "legislators: not an array";
    for (const auto& l : j) {
        SNAPINFO_SCHEMA_TRY(need(l, "id", T::string, "legislators[]"));
        SNAPINFO_SCHEMA_TRY(need(l, "name", T::string, "legislators[]"));
        SNAPINFO_SCHEMA_TRY(need(l, "chamber", T::string, "legislators[]"));
        const auto c = l["chamber"].get<std::string>();
        if (c != "house" && c != "senate") return "legislators[]: bad chamber";
    }
    return {};
}

inline std::string legislator_votes(const json& j) {
    using T = json::value_t;
    if (!j.is_array()) return "votes: not an array";
    for (const auto& v : j) {
        SNAPINFO_SCHEMA_TRY(need(v, "bill_id", T::string, "votes[]"));
        SNAPINFO_SCHEMA_TRY(need(v, "title", T::string, "votes[]"));
        SNAPINFO_SCHEMA_TRY(need(v, "session", T::string, "votes[]"));
        SNAPINFO_SCHEMA_TRY(need(v, "vote", T::string, "votes[]"));
        const auto vote = v["vote"].get<std::string>();
        if (vote != "yea" && vote != "nay" && vote != "other") return "votes[]: bad vote";
    }
    return {};
}

inline std::string error_body(const json& j) { return need(j, "error", json::value_t::string, "error"); }

#undef SNAPINFO_SCHEMA_TRY

}  // namespace snapinfo::schema
