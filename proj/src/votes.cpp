#include "snapinfo/votes.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "httplib.h"
#include "json.hpp"

namespace snapinfo::votes {

using nlohmann::json;

namespace {

std::string lowercase(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

std::optional<Chamber> parse_chamber(std::string_view s) {
    if (s == "house") return Chamber::house;
    if (s == "senate") return Chamber::senate;
    return std::nullopt;
}

std::optional<Vote> parse_vote(std::string_view s) {
    if (s == "yea") return Vote::yea;
    if (s == "nay") return Vote::nay;
    if (s == "other") return Vote::other;
    return std::nullopt;
}

std::string string_field(const json& j, const char* key, bool required) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        if (required) throw MalformedFile(std::string("missing field '") + key + "'");
        return {};
    }
    if (!it->is_string()) throw MalformedFile(std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

VoteRecord vote_from_json(const json& j) {
    if (!j.is_object()) throw MalformedFile("vote record must be an object");
    VoteRecord v;
    v.legislator_id = string_field(j, "legislator_id", true);
    v.name = string_field(j, "name", false);
    const auto chamber = parse_chamber(string_field(j, "chamber", true));
    if (!chamber) throw MalformedFile("chamber must be house or senate");
    v.chamber = *chamber;
    auto in_office = j.find("in_office");
    if (in_office == j.end() || !in_office->is_boolean()) throw MalformedFile("in_office must be a boolean");
    v.in_office = in_office->get<bool>();
    const auto vote = parse_vote(string_field(j, "vote", true));
    if (!vote) throw MalformedFile("vote must be yea, nay or other");
    v.vote = *vote;
    return v;
}

json vote_to_json(const VoteRecord& v) {
    return {{"legislator_id", v.legislator_id},
            {"name", v.name},
            {"chamber", to_string(v.chamber)},
            {"in_office", v.in_office},
            {"vote", to_string(v.vote)}};
}

}  // namespace

std::string_view to_string(Chamber c) { return c == Chamber::house ? "house" : "senate"; }

std::string_view to_string(Vote v) {
    switch (v) {
        case Vote::yea: return "yea";
        case Vote::nay: return "nay";
        case Vote::other: return "other";
    }
    return "other";
}

std::vector<std::string> default_phrases() {
    return {"food stamps", "snap", "food bank", "food desert", "hunger", "food insecurity", "georgia peach card"};
}

std::vector<Bill> parse_bills(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw MalformedFile(e.what());
    }
    if (!root.is_object() || !root.contains("bills") || !root["bills"].is_array())
        throw MalformedFile("expected an object with a 'bills' array");

    std::vector<Bill> bills;
    for (const auto& jb : root["bills"]) {
        if (!jb.is_object()) throw MalformedFile("bill must be an object");
        Bill b;
        b.id = string_field(jb, "id", true);
        b.title = string_field(jb, "title", true);
        b.description = string_field(jb, "description", false);
        b.session = string_field(jb, "session", true);
        if (auto it = jb.find("matched_phrases"); it != jb.end() && !it->is_null()) {
            if (!it->is_array()) throw MalformedFile("matched_phrases must be an array");
            for (const auto& p : *it) b.matched_phrases.push_back(p.get<std::string>());
        }
        auto votes = jb.find("votes");
        if (votes == jb.end() || !votes->is_array()) throw MalformedFile("bill '" + b.id + "' has no votes array");
        for (const auto& jv : *votes) b.votes.push_back(vote_from_json(jv));
        bills.push_back(std::move(b));
    }
    return bills;
}

std::vector<Bill> load_bills(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MalformedFile("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_bills(ss.str());
}

std::string bills_to_json(const std::vector<Bill>& bills, int indent) {
    json arr = json::array();
    for (const auto& b : bills) {
        json votes = json::array();
        for (const auto& v : b.votes) votes.push_back(vote_to_json(v));
        arr.push_back({{"id", b.id},
                       {"title", b.title},
                       {"description", b.description},
                       {"session", b.session},
                       {"matched_phrases", b.matched_phrases},
                       {"votes", std::move(votes)}});
    }
    return json{{"bills", std::move(arr)}}.dump(indent);
}

std::vector<Bill> filter_bills(const std::vector<Bill>& bills, const std::vector<std::string>& phrases) {
    std::vector<Bill> out;
    for (const auto& bill : bills) {
        const std::string haystack = lowercase(bill.title) + "\n" + lowercase(bill.description);
        Bill kept = bill;
        kept.matched_phrases.clear();
        for (const auto& p : phrases)
            if (haystack.find(lowercase(p)) != std::string::npos) kept.matched_phrases.push_back(lowercase(p));
        if (kept.matched_phrases.empty()) continue;
        std::erase_if(kept.votes, [](const VoteRecord& v) { return !v.in_office; });
        if (kept.votes.empty()) continue;
        out.push_back(std::move(kept));
    }
    return out;
}

std::vector<LegislatorVote> legislator_record(const std::vector<Bill>& bills, std::string_view legislator_id) {
    std::vector<std::pair<const Bill*, LegislatorVote>> rows;
    for (const auto& b : bills)
        for (const auto& v : b.votes)
            if (v.legislator_id == legislator_id) rows.push_back({&b, {b.id, b.title, b.session, v.vote}});
    if (rows.empty()) throw UnknownLegislator(std::string(legislator_id));
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return std::tie(a.second.session, a.second.bill_id) < std::tie(b.second.session, b.second.bill_id);
    });
    std::vector<LegislatorVote> out;
    for (auto& [_, row] : rows) out.push_back(std::move(row));
    return out;
}

std::vector<Legislator> legislators(const std::vector<Bill>& bills) {
    std::map<std::string, Legislator> seen;
    for (const auto& b : bills)
        for (const auto& v : b.votes) seen.emplace(v.legislator_id, Legislator{v.legislator_id, v.name, v.chamber});
    std::vector<Legislator> out;
    for (auto& [_, l] : seen) out.push_back(std::move(l));
    return out;
}

std::vector<Bill> normalize_provider_payload(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw MalformedFile(e.what());
    }
    if (!root.is_object() || !root.contains("results") || !root["results"].is_array())
        throw MalformedFile("provider payload has no 'results' array");

    std::vector<Bill> bills;
    for (const auto& r : root["results"]) {
        Bill b;
        b.id = r.value("identifier", r.value("id", std::string{}));
        b.title = r.value("title", std::string{});
        b.session = r.value("session", std::string{});
        if (auto abs = r.find("abstracts"); abs != r.end() && abs->is_array() && !abs->empty())
            b.description = (*abs)[0].value("abstract", std::string{});
        if (b.id.empty()) throw MalformedFile("provider bill without identifier");

        if (auto events = r.find("votes"); events != r.end() && events->is_array()) {
            for (const auto& ev : *events) {
                std::string classification;
                if (auto org = ev.find("organization"); org != ev.end() && org->is_object())
                    classification = org->value("classification", std::string{});
                const Chamber chamber = classification == "upper" ? Chamber::senate : Chamber::house;
                if (!ev.contains("votes") || !ev["votes"].is_array()) continue;
                for (const auto& pv : ev["votes"]) {
                    VoteRecord v;
                    v.chamber = chamber;
                    v.name = pv.value("voter_name", std::string{});
                    v.legislator_id = v.name;
                    if (auto voter = pv.find("voter"); voter != pv.end() && voter->is_object()) {
                        v.legislator_id = voter->value("id", v.name);
                        if (voter->contains("name") && (*voter)["name"].is_string()) v.name = (*voter)["name"];
                        if (auto role = voter->find("current_role"); role != voter->end()) v.in_office = !role->is_null();
                    }
                    if (v.legislator_id.empty()) continue;
                    const std::string option = pv.value("option", std::string{});
                    v.vote = option == "yes" ? Vote::yea : option == "no" ? Vote::nay : Vote::other;
                    b.votes.push_back(std::move(v));
                }
            }
        }
        bills.push_back(std::move(b));
    }
    return bills;
}

std::optional<FetchConfig> FetchConfig::from_env() {
    const char* base = std::getenv("BILLS_API_BASE");
    const char* key = std::getenv("BILLS_API_KEY");
    if (!base || !key || !*base || !*key) return std::nullopt;
    FetchConfig cfg{base, key};
    if (const char* j = std::getenv("BILLS_JURISDICTION"); j && *j) cfg.jurisdiction = j;
    return cfg;
}

std::vector<Bill> fetch_bills(const FetchConfig& cfg, const std::vector<std::string>& phrases) {
    httplib::Client client(cfg.base_url);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);
    const httplib::Headers headers{{"X-API-KEY", cfg.api_key}};

    std::map<std::string, Bill> merged;
    for (const auto& phrase : phrases) {
        for (int page = 1;; ++page) {
            const httplib::Params params{{"jurisdiction", cfg.jurisdiction}, {"q", phrase},
                                         {"include", "votes"},           {"page", std::to_string(page)},
                                         {"per_page", "20"}};
            auto res = client.Get("/bills", params, headers);
            if (!res) throw FetchFailed("transport error: " + httplib::to_string(res.error()));
            if (res->status != 200) throw FetchFailed("HTTP " + std::to_string(res->status) + " for q=" + phrase);
            for (auto& b : normalize_provider_payload(res->body)) merged.emplace(b.id, std::move(b));

            int max_page = 1;
            try {
                const auto root = json::parse(res->body);
                if (root.contains("pagination")) max_page = root["pagination"].value("max_page", 1);
            } catch (const json::exception&) {
            }
            if (page >= max_page) break;
        }
    }
    std::vector<Bill> out;
    for (auto& [_, b] : merged) out.push_back(std::move(b));
    return out;
}

}  // namespace snapinfo::votes
