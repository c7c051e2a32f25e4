#pragma once

// Per-sample evidence extraction: identifiers, Stratum logins, pool
// observations, alias contacts and proxy-candidate endpoints. Pure per
// sample, so extraction parallelizes with no shared mutable state.

#include <string>
#include <vector>

#include "mineralize/dns_alias.hpp"
#include "mineralize/identify.hpp"
#include "mineralize/model.hpp"
#include "mineralize/pool_resolve.hpp"

namespace mineralize {

enum class ObservationVia { cmdline, traffic, dns };

inline std::string to_string(ObservationVia v) {
    switch (v) {
        case ObservationVia::cmdline: return "cmdline";
        case ObservationVia::traffic: return "traffic";
        case ObservationVia::dns: return "dns";
    }
    return "cmdline";
}

inline std::optional<ObservationVia> observation_via_from_string(std::string_view s) {
    if (s == "cmdline") return ObservationVia::cmdline;
    if (s == "traffic") return ObservationVia::traffic;
    if (s == "dns") return ObservationVia::dns;
    return std::nullopt;
}

struct PoolObservation {
    Endpoint endpoint;
    std::optional<std::string> resolved_pool;  // through the directory or a CNAME alias
    ObservationVia via = ObservationVia::cmdline;
};

struct ExtractedSample {
    SampleRecord rec;
    std::vector<MiningIdentifier> identifiers;  // deduped, first-seen order
    std::vector<StratumLogin> logins;
    std::vector<PoolObservation> observations;
    std::vector<std::string> alias_domains;     // contacted CNAME aliases of pools
    std::vector<Endpoint> unknown_endpoints;    // neither pool nor alias
    ProxyVerdict proxy = ProxyVerdict::not_applicable;
    Diagnostics diagnostics;                    // malformed stratum frames etc.

    // Donation wallets belong to tool developers, so they do not count
    // as the sample's own wallet.
    bool has_wallet() const {
        for (const auto& id : identifiers)
            if (id.kind == IdentifierKind::wallet && !id.is_donation) return true;
        return false;
    }
};

class SampleExtractor {
public:
    SampleExtractor(const IdentifierClassifier& classifier, const KnownPoolDirectory& dir,
                    const AliasIndex& aliases)
        : classifier_(classifier), dir_(dir), aliases_(aliases) {}

    ExtractedSample extract(const SampleRecord& rec) const {
        ExtractedSample out;
        out.rec = rec;

        std::vector<std::string> raw_ids;
        if (rec.login_user) raw_ids.push_back(*rec.login_user);

        std::vector<std::pair<std::string, ObservationVia>> endpoints;
        if (rec.pool_url) endpoints.push_back({*rec.pool_url, ObservationVia::cmdline});
        for (const auto& cmd : rec.cmdlines) {
            auto ext = extract_from_cmdline(cmd);
            if (ext.login_user) raw_ids.push_back(*ext.login_user);
            if (ext.pool_url) endpoints.push_back({*ext.pool_url, ObservationVia::cmdline});
        }
        auto stratum = parse_stratum_transcript(rec.stratum_frames);
        out.logins = std::move(stratum.logins);
        out.diagnostics = std::move(stratum.diagnostics);
        for (const auto& l : out.logins) raw_ids.push_back(l.login);
        for (const auto& ep : rec.dst_endpoints) endpoints.push_back({ep.str(), ObservationVia::traffic});
        for (const auto& rr : rec.dns_rr) endpoints.push_back({rr.name, ObservationVia::dns});

        for (const auto& raw : raw_ids) {
            MiningIdentifier id = classifier_.classify(raw);
            if (id.raw.empty()) continue;
            bool seen = false;
            for (const auto& existing : out.identifiers) seen = seen || existing.raw == id.raw;
            if (!seen) out.identifiers.push_back(std::move(id));
        }

        for (const auto& [raw_ep, via] : endpoints) {
            PoolObservation obs;
            obs.endpoint = parse_endpoint(raw_ep);
            if (obs.endpoint.host.empty()) continue;
            obs.via = via;
            obs.resolved_pool = normalize_pool_domain(raw_ep, dir_, aliases_);
            bool is_alias = aliases_.contains(obs.endpoint.host);
            if (is_alias) {
                bool seen = false;
                for (const auto& a : out.alias_domains) seen = seen || a == obs.endpoint.host;
                if (!seen) out.alias_domains.push_back(obs.endpoint.host);
            }
            if (!obs.resolved_pool && via != ObservationVia::dns) {
                bool seen = false;
                for (const auto& e : out.unknown_endpoints) seen = seen || e == obs.endpoint;
                if (!seen) out.unknown_endpoints.push_back(obs.endpoint);
            }
            out.observations.push_back(std::move(obs));
        }
        return out;
    }

private:
    const IdentifierClassifier& classifier_;
    const KnownPoolDirectory& dir_;
    const AliasIndex& aliases_;
};

// Fills in proxy verdicts once pool activity is known. A sample with no
// identifier stays not_applicable.
inline void annotate_proxies(std::vector<ExtractedSample>& samples, const StatsIndex& stats) {
    for (auto& s : samples) {
        if (s.identifiers.empty()) {
            s.proxy = ProxyVerdict::not_applicable;
            continue;
        }
        bool active = false;
        for (const auto& id : s.identifiers)
            active = active || stats.wallet_active_in_known_pool(id.raw);
        s.proxy = (!s.unknown_endpoints.empty() && active) ? ProxyVerdict::yes : ProxyVerdict::no;
    }
}

}  // namespace mineralize
