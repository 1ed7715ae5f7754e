#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snapinfo/error.hpp"

namespace snapinfo::votes {

SNAPINFO_DEFINE_ERROR(MalformedFile);
SNAPINFO_DEFINE_ERROR(UnknownLegislator);
SNAPINFO_DEFINE_ERROR(FetchFailed);

enum class Chamber { house, senate };
enum class Vote { yea, nay, other };

std::string_view to_string(Chamber c);
std::string_view to_string(Vote v);

struct VoteRecord {
    std::string legislator_id;
    std::string name;
    Chamber chamber = Chamber::house;
    bool in_office = true;
    Vote vote = Vote::other;

    friend bool operator==(const VoteRecord&, const VoteRecord&) = default;
};

struct Bill {
    std::string id;
    std::string title;
    std::string description;
    std::string session;
    std::vector<std::string> matched_phrases;
    std::vector<VoteRecord> votes;

    friend bool operator==(const Bill&, const Bill&) = default;
};

struct LegislatorVote {
    std::string bill_id;
    std::string title;
    std::string session;
    Vote vote = Vote::other;
};

struct Legislator {
    std::string id;
    std::string name;
    Chamber chamber = Chamber::house;
};

std::vector<std::string> default_phrases();

/// `{"bills": [...]}`. Throws MalformedFile.
std::vector<Bill> parse_bills(std::string_view json_text);
std::vector<Bill> load_bills(const std::filesystem::path& path);
std::string bills_to_json(const std::vector<Bill>& bills, int indent = 2);

/// Case-insensitive substring match on title or description; out-of-office
/// votes are pruned and bills left without votes are dropped.
std::vector<Bill> filter_bills(const std::vector<Bill>& bills, const std::vector<std::string>& phrases = default_phrases());

/// Sorted by (session, bill id). Throws UnknownLegislator.
std::vector<LegislatorVote> legislator_record(const std::vector<Bill>& bills, std::string_view legislator_id);

/// Distinct voters, sorted by id.
std::vector<Legislator> legislators(const std::vector<Bill>& bills);

/// Maps an Open States style `{"results": [...]}` bill search payload to
/// Bills. A voter whose `current_role` is null is out of office; a voter
/// without the field is assumed to be in office.
std::vector<Bill> normalize_provider_payload(std::string_view json_text);

struct FetchConfig {
    std::string base_url;  ///< e.g. "https://v3.openstates.org"
    std::string api_key;
    std::string jurisdiction = "ga";

    /// BILLS_API_BASE, BILLS_API_KEY and BILLS_JURISDICTION; nullopt when the
    /// base URL or key is unset.
    static std::optional<FetchConfig> from_env();
};

/// Queries the provider once per phrase and merges results by bill id.
/// Throws FetchFailed on transport or HTTP errors; never writes files.
std::vector<Bill> fetch_bills(const FetchConfig& cfg, const std::vector<std::string>& phrases);

}  // namespace snapinfo::votes
