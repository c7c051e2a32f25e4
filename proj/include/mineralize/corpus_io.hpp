#pragma once

// File ingestion: corpus NDJSON, pool snapshots, exchange rates, DNS
// observations and the config files (known pools, donation white-list,
// currency rules, IoC sets).
//
// Loaders skip malformed records with a Diagnostic and never abort a
// batch; only an unreadable path raises InputError.

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "mineralize/common.hpp"
#include "mineralize/model.hpp"

namespace mineralize {

using json = nlohmann::json;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::optional<std::string> opt_string(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw std::runtime_error(std::string(key) + " must be a string");
    return it->get<std::string>();
}

inline std::vector<std::string> string_list(const json& j, const char* key) {
    std::vector<std::string> out;
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return out;
    if (!it->is_array()) throw std::runtime_error(std::string(key) + " must be an array");
    for (const auto& v : *it) {
        if (!v.is_string()) throw std::runtime_error(std::string(key) + " entries must be strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

inline std::string normalize_domain(std::string_view s) {
    std::string d = to_lower(trim(s));
    while (!d.empty() && d.back() == '.') d.pop_back();
    return d;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Corpus (corpus.ndjson): one sample per line, required key sha256.

struct CorpusLoadResult {
    std::vector<SampleRecord> records;  // input order, invariants hold
    Diagnostics diagnostics;            // one per skipped nonempty line
};

namespace detail {

inline SampleRecord parse_sample_json(const json& j) {
    if (!j.is_object()) throw std::runtime_error("record is not an object");
    SampleRecord r;
    auto sha = opt_string(j, "sha256");
    if (!sha || !is_sha256_hex(*sha)) throw std::runtime_error("missing or invalid sha256");
    r.sha256 = *sha;
    r.md5 = opt_string(j, "md5");
    if (r.md5 && (r.md5->size() != 32 || !is_hex_lower(*r.md5)))
        throw std::runtime_error("invalid md5");
    if (auto it = j.find("positives"); it != j.end() && !it->is_null()) {
        if (!it->is_number_integer()) throw std::runtime_error("positives must be an integer");
        r.positives = it->get<int64_t>();
        if (r.positives < 0) throw std::runtime_error("positives must be >= 0");
    }
    r.av_labels = string_list(j, "av_labels");
    if (auto fs = opt_string(j, "first_seen")) {
        auto d = parse_date(*fs);
        if (!d) throw std::runtime_error("invalid first_seen date");
        r.first_seen = d;
    }
    if (auto t = opt_string(j, "type")) {
        auto st = sample_type_from_string(*t);
        if (!st) throw std::runtime_error("invalid type");
        r.sample_type = *st;
    }
    if (auto m = opt_string(j, "magic")) {
        auto bytes = hex_decode(*m);
        if (!bytes || bytes->size() > 8) throw std::runtime_error("invalid magic");
        r.magic = *bytes;
    }
    r.cmdlines = string_list(j, "cmdlines");
    r.pool_url = opt_string(j, "pool_url");
    r.login_user = opt_string(j, "login_user");
    r.login_pass = opt_string(j, "login_pass");
    if (auto it = j.find("nthreads"); it != j.end() && !it->is_null()) {
        if (!it->is_number_integer()) throw std::runtime_error("nthreads must be an integer");
        int64_t n = it->get<int64_t>();
        if (n <= 0) throw std::runtime_error("nthreads must be positive");
        r.nthreads = n;
    }
    r.agent = opt_string(j, "agent");
    if (auto it = j.find("dst_endpoints"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) throw std::runtime_error("dst_endpoints must be an array");
        for (const auto& e : *it) {
            if (!e.is_object() || !e.contains("ip") || !e.contains("port"))
                throw std::runtime_error("dst_endpoints entries need ip and port");
            int64_t port = e.at("port").get<int64_t>();
            if (port < 0 || port > 65535) throw std::runtime_error("invalid port");
            r.dst_endpoints.push_back(
                Endpoint{to_lower(e.at("ip").get<std::string>()), static_cast<uint16_t>(port)});
        }
    }
    if (auto it = j.find("dns_rr"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) throw std::runtime_error("dns_rr must be an array");
        for (const auto& e : *it) {
            DnsRecord rec;
            rec.name = normalize_domain(e.at("name").get<std::string>());
            std::string rtype = to_lower(e.at("rtype").get<std::string>());
            if (rtype == "cname") rec.rtype = DnsRecordType::cname;
            else if (rtype == "a") rec.rtype = DnsRecordType::a;
            else throw std::runtime_error("dns_rr rtype must be CNAME or A");
            rec.value = normalize_domain(e.at("value").get<std::string>());
            if (auto f = opt_string(e, "first_observed")) {
                rec.first_observed = parse_timestamp(*f);
                if (!rec.first_observed) throw std::runtime_error("invalid first_observed");
            }
            if (auto l = opt_string(e, "last_observed")) {
                rec.last_observed = parse_timestamp(*l);
                if (!rec.last_observed) throw std::runtime_error("invalid last_observed");
            }
            r.dns_rr.push_back(std::move(rec));
        }
    }
    r.itw_urls = string_list(j, "itw_urls");
    r.parents = string_list(j, "parents");
    r.dropped = string_list(j, "dropped");
    for (const auto& p : r.parents)
        if (!is_sha256_hex(p)) throw std::runtime_error("invalid parent sha256");
    for (const auto& d : r.dropped)
        if (!is_sha256_hex(d)) throw std::runtime_error("invalid dropped sha256");
    r.packer = opt_string(j, "packer");
    r.sources = string_list(j, "sources");
    r.blob_path = opt_string(j, "blob_path");
    r.stratum_frames = string_list(j, "stratum_frames");
    if (r.sample_type == SampleType::miner && !r.login_user && r.stratum_frames.empty())
        throw std::runtime_error("miner record lacks login_user and stratum transcript");
    return r;
}

}  // namespace detail

inline CorpusLoadResult load_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read corpus " + path.string());
    CorpusLoadResult result;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        try {
            result.records.push_back(detail::parse_sample_json(json::parse(line)));
        } catch (const std::exception& e) {
            result.diagnostics.push_back({lineno, path.filename().string(), e.what()});
        }
    }
    return result;
}

// Canonical NDJSON form; load_corpus(serialize_corpus(x)) is field-identical.
inline json sample_to_json(const SampleRecord& r) {
    json j;
    j["sha256"] = r.sha256;
    if (r.md5) j["md5"] = *r.md5;
    j["positives"] = r.positives;
    if (!r.av_labels.empty()) j["av_labels"] = r.av_labels;
    if (r.first_seen) j["first_seen"] = format_date(*r.first_seen);
    if (r.sample_type != SampleType::unclassified) j["type"] = to_string(r.sample_type);
    if (!r.magic.empty()) j["magic"] = hex_encode(r.magic);
    if (!r.cmdlines.empty()) j["cmdlines"] = r.cmdlines;
    if (r.pool_url) j["pool_url"] = *r.pool_url;
    if (r.login_user) j["login_user"] = *r.login_user;
    if (r.login_pass) j["login_pass"] = *r.login_pass;
    if (r.nthreads) j["nthreads"] = *r.nthreads;
    if (r.agent) j["agent"] = *r.agent;
    if (!r.dst_endpoints.empty()) {
        json arr = json::array();
        for (const auto& e : r.dst_endpoints) arr.push_back({{"ip", e.host}, {"port", e.port}});
        j["dst_endpoints"] = arr;
    }
    if (!r.dns_rr.empty()) {
        json arr = json::array();
        for (const auto& rec : r.dns_rr) {
            json e{{"name", rec.name},
                   {"rtype", rec.rtype == DnsRecordType::cname ? "CNAME" : "A"},
                   {"value", rec.value}};
            if (rec.first_observed) e["first_observed"] = format_timestamp(*rec.first_observed);
            if (rec.last_observed) e["last_observed"] = format_timestamp(*rec.last_observed);
            arr.push_back(e);
        }
        j["dns_rr"] = arr;
    }
    if (!r.itw_urls.empty()) j["itw_urls"] = r.itw_urls;
    if (!r.parents.empty()) j["parents"] = r.parents;
    if (!r.dropped.empty()) j["dropped"] = r.dropped;
    if (r.packer) j["packer"] = *r.packer;
    if (!r.sources.empty()) j["sources"] = r.sources;
    if (r.blob_path) j["blob_path"] = *r.blob_path;
    if (!r.stratum_frames.empty()) j["stratum_frames"] = r.stratum_frames;
    return j;
}

inline std::string serialize_corpus(const std::vector<SampleRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += sample_to_json(r).dump();
        out += "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pool snapshots (pools/<pool>-<timestamp>.json)

struct SnapshotLoadResult {
    std::vector<PoolWalletStats> stats;
    Diagnostics diagnostics;
};

inline SnapshotLoadResult load_pool_snapshot(const std::filesystem::path& path,
                                             const KnownPoolDirectory* dir = nullptr) {
    SnapshotLoadResult result;
    json j;
    try {
        j = json::parse(detail::read_file(path));
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError("snapshot " + path.string() + ": " + e.what());
    }
    std::string file = path.filename().string();
    std::string pool;
    Timestamp fetched_at = 0;
    try {
        pool = to_lower(j.at("pool").get<std::string>());
        auto ts = parse_timestamp(j.at("fetched_at").get<std::string>());
        if (!ts) throw std::runtime_error("invalid fetched_at");
        fetched_at = *ts;
    } catch (const std::exception& e) {
        throw InputError("snapshot " + path.string() + ": " + e.what());
    }
    bool unknown = dir != nullptr && dir->pools.find(pool) == dir->pools.end();
    const json empty_array = json::array();
    const json& wallets = j.contains("wallets") ? j.at("wallets") : empty_array;
    std::map<std::tuple<std::string, std::string, Timestamp>, std::size_t> slot;
    std::size_t index = 0;
    for (const auto& w : wallets) {
        ++index;
        try {
            PoolWalletStats s;
            s.pool = pool;
            s.fetched_at = fetched_at;
            s.unknown_pool = unknown;
            s.wallet = w.at("wallet").get<std::string>();
            auto total = parse_xmr(w.at("total_paid_xmr").get<std::string>());
            if (!total || *total < 0) throw std::runtime_error("invalid total_paid_xmr");
            s.total_paid = *total;
            if (w.contains("balance_xmr")) {
                auto bal = parse_xmr(w.at("balance_xmr").get<std::string>());
                if (!bal || *bal < 0) throw std::runtime_error("invalid balance_xmr");
                s.balance = *bal;
            }
            if (auto ls = detail::opt_string(w, "last_share")) {
                s.last_share = parse_timestamp(*ls);
                if (!s.last_share) throw std::runtime_error("invalid last_share");
            }
            if (w.contains("hashrate_hs") && !w.at("hashrate_hs").is_null()) {
                double hr = w.at("hashrate_hs").get<double>();
                if (hr < 0) throw std::runtime_error("negative hashrate_hs");
                s.hashrate = hr;
            }
            if (w.contains("num_payments")) {
                s.num_payments = w.at("num_payments").get<int64_t>();
                if (s.num_payments < 0) throw std::runtime_error("negative num_payments");
            }
            if (w.contains("payments")) {
                for (const auto& p : w.at("payments")) {
                    auto ts = parse_timestamp(p.at("ts").get<std::string>());
                    auto amount = parse_xmr(p.at("amount_xmr").get<std::string>());
                    if (!ts) throw std::runtime_error("invalid payment ts");
                    if (!amount || *amount <= 0) throw std::runtime_error("payment amount must be > 0");
                    s.payments.push_back(PaymentRecord{*ts, *amount});
                }
            }
            if (w.contains("payments_complete"))
                s.payments_complete = w.at("payments_complete").get<bool>();
            std::sort(s.payments.begin(), s.payments.end());
            if (s.payments_complete) {
                Piconero sum = 0;
                for (const auto& p : s.payments) sum += p.amount;
                if (s.total_paid < sum)
                    throw std::runtime_error("payments_complete but total_paid < payment sum");
            }
            // duplicate (pool, wallet, fetched_at): latest-parsed occurrence wins
            auto key = std::make_tuple(s.pool, s.wallet, s.fetched_at);
            auto [it, inserted] = slot.try_emplace(key, result.stats.size());
            if (inserted) result.stats.push_back(std::move(s));
            else result.stats[it->second] = std::move(s);
        } catch (const std::exception& e) {
            result.diagnostics.push_back({index, file, e.what()});
        }
    }
    return result;
}

// Loads every *.json under a snapshot directory, sorted by filename for
// deterministic diagnostics. Missing directory yields an empty set.
inline SnapshotLoadResult load_snapshot_dir(const std::filesystem::path& dir_path,
                                            const KnownPoolDirectory* dir = nullptr) {
    SnapshotLoadResult result;
    if (!std::filesystem::exists(dir_path)) return result;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir_path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::map<std::tuple<std::string, std::string, Timestamp>, std::size_t> slot;
    for (const auto& f : files) {
        auto one = load_pool_snapshot(f, dir);
        for (auto& s : one.stats) {
            auto key = std::make_tuple(s.pool, s.wallet, s.fetched_at);
            auto [it, inserted] = slot.try_emplace(key, result.stats.size());
            if (inserted) result.stats.push_back(std::move(s));
            else result.stats[it->second] = std::move(s);
        }
        result.diagnostics.insert(result.diagnostics.end(), one.diagnostics.begin(),
                                  one.diagnostics.end());
    }
    return result;
}

// ---------------------------------------------------------------------------
// Exchange rates (rates.csv: date,usd_per_xmr)

struct RatesLoadResult {
    ExchangeRateTable table;
    Diagnostics diagnostics;
};

inline RatesLoadResult load_rates(const std::filesystem::path& path,
                                  MicroUsd fallback = 54 * kMicroPerUsd) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read rates " + path.string());
    RatesLoadResult result;
    result.table.fallback_rate = fallback;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = trim(line);
        if (sv.empty()) continue;
        if (lineno == 1 && starts_with(to_lower(sv), "date,")) continue;  // header
        auto parts = split(sv, ',');
        if (parts.size() != 2) {
            result.diagnostics.push_back({lineno, path.filename().string(), "expected date,usd_per_xmr"});
            continue;
        }
        auto date = parse_date(parts[0]);
        auto rate = parse_usd_rate(parts[1]);
        if (!date || !rate) {
            result.diagnostics.push_back({lineno, path.filename().string(), "unparseable date or rate"});
            continue;
        }
        if (*rate <= 0) {
            result.diagnostics.push_back({lineno, path.filename().string(), "rate must be positive"});
            continue;
        }
        result.table.entries[*date] = *rate;  // last occurrence wins
    }
    return result;
}

// ---------------------------------------------------------------------------
// DNS observations (dns.ndjson)

struct DnsLoadResult {
    std::vector<DnsRecord> records;
    Diagnostics diagnostics;
};

inline DnsLoadResult load_dns(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read dns " + path.string());
    DnsLoadResult result;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        try {
            json j = json::parse(line);
            DnsRecord rec;
            rec.name = detail::normalize_domain(j.at("name").get<std::string>());
            std::string rtype = to_lower(j.at("rtype").get<std::string>());
            if (rtype == "cname") rec.rtype = DnsRecordType::cname;
            else if (rtype == "a") rec.rtype = DnsRecordType::a;
            else throw std::runtime_error("rtype must be CNAME or A");
            rec.value = detail::normalize_domain(j.at("value").get<std::string>());
            if (rec.name.empty() || rec.value.empty()) throw std::runtime_error("empty name or value");
            if (auto f = detail::opt_string(j, "first_observed")) {
                rec.first_observed = parse_timestamp(*f);
                if (!rec.first_observed) throw std::runtime_error("invalid first_observed");
            }
            if (auto l = detail::opt_string(j, "last_observed")) {
                rec.last_observed = parse_timestamp(*l);
                if (!rec.last_observed) throw std::runtime_error("invalid last_observed");
            }
            result.records.push_back(std::move(rec));
        } catch (const std::exception& e) {
            result.diagnostics.push_back({lineno, path.filename().string(), e.what()});
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Config files

// known_pools.conf: sections [pool-name] with keys
//   domains = d1 d2 ...     (also accepts commas)
//   opaque  = true|false
struct PoolDirectoryLoadResult {
    KnownPoolDirectory directory;
    Diagnostics diagnostics;
};

inline PoolDirectoryLoadResult load_known_pools(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read known pools " + path.string());
    PoolDirectoryLoadResult result;
    std::string line, current;
    std::set<std::string> domains;
    bool opaque = false;
    std::size_t lineno = 0;
    auto flush = [&](std::size_t at) {
        if (current.empty()) return;
        if (!result.directory.add_pool(current, domains, opaque))
            result.diagnostics.push_back({at, path.filename().string(),
                                          "duplicate domain across pools in [" + current + "]"});
        current.clear();
        domains.clear();
        opaque = false;
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = trim(line);
        if (sv.empty() || sv[0] == '#') continue;
        if (sv.front() == '[' && sv.back() == ']') {
            flush(lineno);
            current = to_lower(trim(sv.substr(1, sv.size() - 2)));
            continue;
        }
        auto eq = sv.find('=');
        if (eq == std::string_view::npos || current.empty()) {
            result.diagnostics.push_back({lineno, path.filename().string(), "expected key = value"});
            continue;
        }
        std::string key = to_lower(trim(sv.substr(0, eq)));
        std::string value(trim(sv.substr(eq + 1)));
        if (key == "domains") {
            std::replace(value.begin(), value.end(), ',', ' ');
            for (const auto& d : split_ws(value)) domains.insert(detail::normalize_domain(d));
        } else if (key == "opaque") {
            opaque = to_lower(trim(value)) == "true";
        } else {
            result.diagnostics.push_back({lineno, path.filename().string(), "unknown key " + key});
        }
    }
    flush(lineno);
    return result;
}

// One entry per line; '#' starts a comment.
inline std::set<std::string> load_line_set(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path.string());
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view sv = trim(line);
        if (auto hash = sv.find('#'); hash != std::string_view::npos) sv = trim(sv.substr(0, hash));
        if (!sv.empty()) out.insert(std::string(sv));
    }
    return out;
}

// iocs/<operation>.json
inline IoCSet load_ioc_set(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(detail::read_file(path));
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError("ioc set " + path.string() + ": " + e.what());
    }
    IoCSet set;
    try {
        set.operation_name = j.at("operation").get<std::string>();
        std::string role = to_lower(j.at("role").get<std::string>());
        if (role == "campaign") set.role = IoCRole::campaign;
        else if (role == "ppi") set.role = IoCRole::ppi;
        else throw std::runtime_error("role must be campaign or ppi");
        for (const auto& d : detail::string_list(j, "domains"))
            set.domains.insert(detail::normalize_domain(d));
        for (const auto& ip : detail::string_list(j, "ips")) set.ips.insert(to_lower(trim(ip)));
        for (const auto& h : detail::string_list(j, "hashes")) set.hashes.insert(to_lower(trim(h)));
        for (const auto& w : detail::string_list(j, "wallets")) set.wallets.insert(std::string(trim(w)));
    } catch (const std::exception& e) {
        throw InputError("ioc set " + path.string() + ": " + e.what());
    }
    if (set.empty()) throw InputError("ioc set " + path.string() + ": all indicator sets empty");
    return set;
}

inline std::vector<IoCSet> load_ioc_dir(const std::filesystem::path& dir) {
    std::vector<IoCSet> sets;
    if (!std::filesystem::exists(dir)) return sets;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) sets.push_back(load_ioc_set(f));
    return sets;
}

}  // namespace mineralize
