#pragma once

// Pool endpoint normalization and mining-proxy detection.

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mineralize/common.hpp"
#include "mineralize/dns_alias.hpp"
#include "mineralize/identify.hpp"
#include "mineralize/model.hpp"

namespace mineralize {

inline bool is_ipv4_literal(std::string_view host) {
    auto parts = split(host, '.');
    if (parts.size() != 4) return false;
    for (const auto& p : parts) {
        if (p.empty() || p.size() > 3) return false;
        auto n = parse_int(p);
        if (!n || *n < 0 || *n > 255) return false;
    }
    return true;
}

// "stratum+tcp://pool.minexmr.com:4444" -> host "pool.minexmr.com", port 4444
inline Endpoint parse_endpoint(std::string_view hostport) {
    std::string hp = detail::strip_url_to_hostport(hostport);
    Endpoint ep;
    auto colon = hp.rfind(':');
    if (colon != std::string::npos) {
        if (auto port = parse_int(std::string_view(hp).substr(colon + 1));
            port && *port >= 0 && *port <= 65535) {
            ep.port = static_cast<uint16_t>(*port);
            hp = hp.substr(0, colon);
        }
    }
    ep.host = to_lower(trim(hp));
    while (!ep.host.empty() && ep.host.back() == '.') ep.host.pop_back();
    return ep;
}

// Strips scheme and port, matches the registrable domain against the
// directory, then falls back to CNAME alias resolution. Absent for
// unknown hosts (typically proxies or private pools).
inline std::optional<std::string> normalize_pool_domain(std::string_view hostport,
                                                        const KnownPoolDirectory& dir,
                                                        const AliasIndex& aliases) {
    Endpoint ep = parse_endpoint(hostport);
    if (ep.host.empty()) return std::nullopt;
    if (auto pool = dir.match_host(ep.host)) return pool;
    auto entries = aliases.resolve(ep.host);
    if (!entries.empty()) return entries.front().pool;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Proxy detection

// (pool, wallet) pairs with recorded mining activity.
struct StatsIndex {
    std::set<std::pair<std::string, std::string>> active;  // (pool, wallet)
    std::set<std::string> active_wallets;

    void add(const PoolWalletStats& s) {
        if (s.unknown_pool || !s.has_activity()) return;
        active.insert({s.pool, s.wallet});
        active_wallets.insert(s.wallet);
    }

    static StatsIndex build(const std::vector<PoolWalletStats>& stats) {
        StatsIndex idx;
        for (const auto& s : stats) idx.add(s);
        return idx;
    }

    bool wallet_active_in_known_pool(const std::string& wallet) const {
        return active_wallets.count(wallet) > 0;
    }
};

// Distinct from false: a sample with no login identifier cannot be
// assessed for proxy usage at all.
enum class ProxyVerdict { not_applicable, no, yes };

// A miner is using a proxy when its observed endpoint does not normalize
// to a known pool while its wallet shows activity in at least one known
// pool. Monotone in the stats index: adding activity never flips yes->no.
inline ProxyVerdict detect_proxy_usage(const SampleRecord& sample, const StatsIndex& stats,
                                       const KnownPoolDirectory& dir, const AliasIndex& aliases) {
    if (!sample.login_user) return ProxyVerdict::not_applicable;
    std::vector<std::string> endpoints;
    if (sample.pool_url) endpoints.push_back(*sample.pool_url);
    for (const auto& ep : sample.dst_endpoints) endpoints.push_back(ep.str());
    bool has_unknown = false;
    for (const auto& e : endpoints) {
        if (!normalize_pool_domain(e, dir, aliases)) {
            has_unknown = true;
            break;
        }
    }
    if (!has_unknown) return ProxyVerdict::no;
    return stats.wallet_active_in_known_pool(*sample.login_user) ? ProxyVerdict::yes
                                                                 : ProxyVerdict::no;
}

}  // namespace mineralize
