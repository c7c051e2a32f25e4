#pragma once

// Canonical data model shared by every pipeline stage. All structures are
// immutable after load; stages communicate through the documented file
// formats (see corpus_io.hpp).

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mineralize/common.hpp"
#include "mineralize/money.hpp"

namespace mineralize {

enum class SampleType { miner, ancillary, unclassified };

inline std::string to_string(SampleType t) {
    switch (t) {
        case SampleType::miner: return "miner";
        case SampleType::ancillary: return "ancillary";
        case SampleType::unclassified: return "unclassified";
    }
    return "unclassified";
}

inline std::optional<SampleType> sample_type_from_string(std::string_view s) {
    if (s == "miner") return SampleType::miner;
    if (s == "ancillary") return SampleType::ancillary;
    if (s == "unclassified") return SampleType::unclassified;
    return std::nullopt;
}

struct Endpoint {
    std::string host;  // domain or IPv4 literal, lowercase
    uint16_t port = 0;

    std::string str() const { return host + ":" + std::to_string(port); }
    friend bool operator==(const Endpoint&, const Endpoint&) = default;
    friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

enum class DnsRecordType { cname, a };

struct DnsRecord {
    std::string name;   // lowercase, trailing dot stripped
    DnsRecordType rtype = DnsRecordType::a;
    std::string value;  // domain or ip, lowercase, trailing dot stripped
    std::optional<Timestamp> first_observed;
    std::optional<Timestamp> last_observed;

    friend bool operator==(const DnsRecord&, const DnsRecord&) = default;
};

// One malware analysis record: the per-sample schema every loader and
// stage works from. Raw bytes live in a separate content-addressed blob
// store keyed by sha256; `blob_path` points there when bytes exist.
struct SampleRecord {
    std::string sha256;
    std::optional<std::string> md5;
    int64_t positives = 0;
    std::vector<std::string> av_labels;
    std::optional<Date> first_seen;  // absent = "unknown year", never guessed
    SampleType sample_type = SampleType::unclassified;
    std::string magic;  // first bytes of the file, raw (up to 8)
    std::vector<std::string> cmdlines;
    std::optional<std::string> pool_url;
    std::optional<std::string> login_user;
    std::optional<std::string> login_pass;
    std::optional<int64_t> nthreads;
    std::optional<std::string> agent;
    std::vector<Endpoint> dst_endpoints;
    std::vector<DnsRecord> dns_rr;
    std::vector<std::string> itw_urls;
    std::vector<std::string> parents;  // sha256, existence in corpus not required
    std::vector<std::string> dropped;  // sha256, existence in corpus not required
    std::optional<std::string> packer;
    std::vector<std::string> sources;
    std::optional<std::string> blob_path;
    std::vector<std::string> stratum_frames;  // pre-extracted transcript lines

    friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

enum class Currency { xmr, btc, zec, etn, eth, aeon, sumo, itns, trtl, bcn, other };

inline std::string to_string(Currency c) {
    switch (c) {
        case Currency::xmr: return "XMR";
        case Currency::btc: return "BTC";
        case Currency::zec: return "ZEC";
        case Currency::etn: return "ETN";
        case Currency::eth: return "ETH";
        case Currency::aeon: return "AEON";
        case Currency::sumo: return "SUMO";
        case Currency::itns: return "ITNS";
        case Currency::trtl: return "TRTL";
        case Currency::bcn: return "BCN";
        case Currency::other: return "other";
    }
    return "other";
}

inline std::optional<Currency> currency_from_string(std::string_view s) {
    std::string lower = to_lower(s);
    if (lower == "xmr") return Currency::xmr;
    if (lower == "btc") return Currency::btc;
    if (lower == "zec") return Currency::zec;
    if (lower == "etn") return Currency::etn;
    if (lower == "eth") return Currency::eth;
    if (lower == "aeon") return Currency::aeon;
    if (lower == "sumo") return Currency::sumo;
    if (lower == "itns") return Currency::itns;
    if (lower == "trtl") return Currency::trtl;
    if (lower == "bcn") return Currency::bcn;
    if (lower == "other") return Currency::other;
    return std::nullopt;
}

enum class IdentifierKind { wallet, email, unknown };

inline std::string to_string(IdentifierKind k) {
    switch (k) {
        case IdentifierKind::wallet: return "wallet";
        case IdentifierKind::email: return "email";
        case IdentifierKind::unknown: return "unknown";
    }
    return "unknown";
}

inline std::optional<IdentifierKind> identifier_kind_from_string(std::string_view s) {
    if (s == "wallet") return IdentifierKind::wallet;
    if (s == "email") return IdentifierKind::email;
    if (s == "unknown") return IdentifierKind::unknown;
    return std::nullopt;
}

// A classified pool-login identifier.
struct MiningIdentifier {
    std::string raw;
    IdentifierKind kind = IdentifierKind::unknown;
    std::optional<Currency> currency;  // present iff kind == wallet
    bool is_donation = false;          // true only for white-listed wallets

    friend bool operator==(const MiningIdentifier&, const MiningIdentifier&) = default;
};

struct PaymentRecord {
    Timestamp ts = 0;
    Piconero amount = 0;  // > 0

    friend bool operator==(const PaymentRecord&, const PaymentRecord&) = default;
    friend auto operator<=>(const PaymentRecord&, const PaymentRecord&) = default;
};

// Per-(pool, wallet) activity as fetched from a pool's public stats.
struct PoolWalletStats {
    std::string pool;
    std::string wallet;
    Piconero total_paid = 0;
    Piconero balance = 0;
    std::optional<Timestamp> last_share;
    std::optional<double> hashrate;  // hashes/second
    int64_t num_payments = 0;
    std::vector<PaymentRecord> payments;  // sorted ascending by ts after load
    bool payments_complete = false;       // pools expose partial windows
    Timestamp fetched_at = 0;
    bool unknown_pool = false;  // pool name not in the known-pool directory

    bool has_activity() const {
        return total_paid > 0 || balance > 0 || num_payments > 0 || last_share.has_value() ||
               (hashrate && *hashrate > 0);
    }
};

struct ExchangeRateTable {
    std::map<Date, MicroUsd> entries;       // date -> usd per xmr
    MicroUsd fallback_rate = 54 * kMicroPerUsd;  // average rate used when undated

    MicroUsd rate_for(const Date& d) const {
        auto it = entries.find(d);
        return it == entries.end() ? fallback_rate : it->second;
    }
};

// OSINT indicator set for one named operation. role=campaign sets add
// aggregation edges; role=ppi sets are post-aggregation enrichment only.
enum class IoCRole { campaign, ppi };

struct IoCSet {
    std::string operation_name;
    IoCRole role = IoCRole::campaign;
    std::set<std::string> domains;
    std::set<std::string> ips;
    std::set<std::string> hashes;
    std::set<std::string> wallets;

    bool empty() const {
        return domains.empty() && ips.empty() && hashes.empty() && wallets.empty();
    }
};

// Known mining pools and their registrable domains.
struct KnownPoolDirectory {
    struct PoolInfo {
        std::set<std::string> domains;
        bool opaque = false;  // no public wallet stats (e.g. minergate)
    };

    std::map<std::string, PoolInfo> pools;            // lowercase name -> info
    std::map<std::string, std::string> domain_to_pool;  // domain -> pool name

    bool add_pool(const std::string& name, const std::set<std::string>& domains, bool opaque) {
        std::string lname = to_lower(name);
        for (const auto& d : domains) {
            if (domain_to_pool.count(to_lower(d))) return false;  // domains unique across pools
        }
        auto& info = pools[lname];
        info.opaque = opaque;
        for (const auto& d : domains) {
            std::string ld = to_lower(d);
            info.domains.insert(ld);
            domain_to_pool[ld] = lname;
        }
        return true;
    }

    bool is_pool_domain(std::string_view host) const { return match_host(host).has_value(); }

    // Matches `host` or any of its parent domains on label boundaries,
    // e.g. pool.minexmr.com matches a directory entry minexmr.com.
    std::optional<std::string> match_host(std::string_view host) const {
        std::string h = to_lower(trim(host));
        while (!h.empty() && h.back() == '.') h.pop_back();
        std::string_view view = h;
        while (!view.empty()) {
            auto it = domain_to_pool.find(std::string(view));
            if (it != domain_to_pool.end()) return it->second;
            auto dot = view.find('.');
            if (dot == std::string_view::npos) break;
            view.remove_prefix(dot + 1);
        }
        return std::nullopt;
    }

    bool is_opaque(const std::string& pool) const {
        auto it = pools.find(pool);
        return it != pools.end() && it->second.opaque;
    }
};

// Donation white-list: wallets excluded from aggregation and earnings.
using DonationWhitelist = std::set<std::string>;

}  // namespace mineralize
