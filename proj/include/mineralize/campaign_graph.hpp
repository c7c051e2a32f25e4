#pragma once

// The heterogeneous aggregation graph. Samples and infrastructure are
// nodes; the six grouping features add edges; each connected component
// of the result is one campaign.
//
// Donation wallets never become identifier nodes, so a white-listed
// wallet can never merge two otherwise unrelated campaigns.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mineralize/common.hpp"
#include "mineralize/extract.hpp"
#include "mineralize/model.hpp"
#include "mineralize/union_find.hpp"

namespace mineralize {

enum class NodeKind {
    sample,
    identifier,
    host_url,
    host_ip,
    cname_alias,
    proxy_endpoint,
    known_operation
};

inline std::string to_string(NodeKind k) {
    switch (k) {
        case NodeKind::sample: return "sample";
        case NodeKind::identifier: return "identifier";
        case NodeKind::host_url: return "host_url";
        case NodeKind::host_ip: return "host_ip";
        case NodeKind::cname_alias: return "cname_alias";
        case NodeKind::proxy_endpoint: return "proxy_endpoint";
        case NodeKind::known_operation: return "known_operation";
    }
    return "sample";
}

enum class EdgeFeature {
    same_identifier,
    ancestor,
    hosting,
    known_campaign,
    domain_alias,
    proxy
};

inline std::string to_string(EdgeFeature f) {
    switch (f) {
        case EdgeFeature::same_identifier: return "same_identifier";
        case EdgeFeature::ancestor: return "ancestor";
        case EdgeFeature::hosting: return "hosting";
        case EdgeFeature::known_campaign: return "known_campaign";
        case EdgeFeature::domain_alias: return "domain_alias";
        case EdgeFeature::proxy: return "proxy";
    }
    return "ancestor";
}

struct Node {
    NodeKind kind = NodeKind::sample;
    std::string key;

    friend bool operator==(const Node&, const Node&) = default;
    friend auto operator<=>(const Node&, const Node&) = default;
};

struct GraphEdge {
    uint32_t a = 0;
    uint32_t b = 0;
    EdgeFeature feature = EdgeFeature::ancestor;

    friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

class CampaignGraph {
public:
    uint32_t add_node(NodeKind kind, const std::string& key) {
        auto [it, inserted] = index_.try_emplace(Node{kind, key}, 0);
        if (inserted) {
            it->second = static_cast<uint32_t>(nodes_.size());
            nodes_.push_back(Node{kind, key});
        }
        return it->second;
    }

    std::optional<uint32_t> find_node(NodeKind kind, const std::string& key) const {
        auto it = index_.find(Node{kind, key});
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    void add_edge(uint32_t a, uint32_t b, EdgeFeature feature) {
        if (a == b) return;  // no self-loops
        edges_.push_back({a, b, feature});
    }

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<GraphEdge>& edges() const { return edges_; }

private:
    std::vector<Node> nodes_;
    std::vector<GraphEdge> edges_;
    std::map<Node, uint32_t> index_;
};

// ---------------------------------------------------------------------------
// Graph construction

// Hosts matched case-insensitively against entries that are either an
// exact host or a "*.suffix" pattern.
struct PublicRepoMatcher {
    std::set<std::string> exact;
    std::set<std::string> suffixes;  // matched on label boundaries

    static PublicRepoMatcher from_patterns(const std::set<std::string>& patterns) {
        PublicRepoMatcher m;
        for (const auto& p : patterns) {
            std::string lower = to_lower(trim(p));
            if (starts_with(lower, "*.")) m.suffixes.insert(lower.substr(2));
            else m.exact.insert(lower);
        }
        return m;
    }

    bool matches(std::string_view host) const {
        std::string h = to_lower(trim(host));
        if (exact.count(h)) return true;
        for (std::string_view view = h; !view.empty();) {
            if (suffixes.count(std::string(view))) return true;
            auto dot = view.find('.');
            if (dot == std::string_view::npos) break;
            view.remove_prefix(dot + 1);
        }
        return false;
    }
};

// Exact-match canonical form: scheme and host lowercased, path and query
// kept byte-exact (a query parameter often uniquely identifies the
// hosted resource, so it must participate in the match).
inline std::string canonicalize_url(std::string_view url) {
    std::string_view s = trim(url);
    auto scheme_end = s.find("://");
    std::string out;
    std::string_view rest = s;
    if (scheme_end != std::string_view::npos) {
        out += to_lower(s.substr(0, scheme_end));
        out += "://";
        rest = s.substr(scheme_end + 3);
    }
    auto path_start = rest.find('/');
    std::string_view hostport = path_start == std::string_view::npos ? rest : rest.substr(0, path_start);
    out += to_lower(hostport);
    if (path_start != std::string_view::npos) out += std::string(rest.substr(path_start));
    return out;
}

inline std::string url_host(std::string_view url) {
    std::string_view s = trim(url);
    if (auto scheme = s.find("://"); scheme != std::string_view::npos) s = s.substr(scheme + 3);
    if (auto slash = s.find('/'); slash != std::string_view::npos) s = s.substr(0, slash);
    if (auto colon = s.rfind(':'); colon != std::string_view::npos) {
        if (parse_int(s.substr(colon + 1))) s = s.substr(0, colon);
    }
    return to_lower(s);
}

struct GraphBuildConfig {
    PublicRepoMatcher public_repos;
    // A records available for the "IP resolves to a public repo" check.
    std::vector<DnsRecord> dns_a_records;
};

inline bool matches_ioc(const ExtractedSample& s, const IoCSet& ioc) {
    if (ioc.hashes.count(s.rec.sha256)) return true;
    if (s.rec.md5 && ioc.hashes.count(*s.rec.md5)) return true;
    for (const auto& id : s.identifiers)
        if (ioc.wallets.count(id.raw)) return true;
    for (const auto& obs : s.observations) {
        if (is_ipv4_literal(obs.endpoint.host)) {
            if (ioc.ips.count(obs.endpoint.host)) return true;
        } else if (ioc.domains.count(obs.endpoint.host)) {
            return true;
        }
    }
    for (const auto& rr : s.rec.dns_rr) {
        if (ioc.domains.count(rr.name)) return true;
        if (rr.rtype == DnsRecordType::a && ioc.ips.count(rr.value)) return true;
    }
    for (const auto& url : s.rec.itw_urls) {
        std::string host = url_host(url);
        if (is_ipv4_literal(host) ? ioc.ips.count(host) > 0 : ioc.domains.count(host) > 0)
            return true;
    }
    return false;
}

// Applies the six grouping features. Ancillaries participate through
// the lineage feature; alias contacts and proxy verdicts must already
// be annotated on the extracted samples.
inline CampaignGraph build_graph(const std::vector<ExtractedSample>& miners,
                                 const std::vector<ExtractedSample>& ancillaries,
                                 const std::vector<IoCSet>& iocs,
                                 const GraphBuildConfig& cfg = {}) {
    CampaignGraph g;

    std::vector<const ExtractedSample*> all;
    for (const auto& m : miners) all.push_back(&m);
    for (const auto& a : ancillaries) all.push_back(&a);

    // IPs that reverse to a public-repo domain, through the global DNS
    // feed or any sample-local resolution.
    std::set<std::string> repo_ips;
    auto note_repo_ip = [&](const DnsRecord& rr) {
        if (rr.rtype == DnsRecordType::a && cfg.public_repos.matches(rr.name))
            repo_ips.insert(rr.value);
    };
    for (const auto& rr : cfg.dns_a_records) note_repo_ip(rr);
    for (const auto* s : all)
        for (const auto& rr : s->rec.dns_rr) note_repo_ip(rr);

    std::map<std::string, uint32_t> sample_ids;
    for (const auto* s : all)
        sample_ids[s->rec.sha256] = g.add_node(NodeKind::sample, s->rec.sha256);

    // Feature 2 bookkeeping: samples sharing a parent (or archive) are
    // siblings even when the parent itself is missing from the corpus.
    std::map<std::string, std::vector<uint32_t>> lineage_groups;

    for (const auto* s : all) {
        uint32_t self = sample_ids[s->rec.sha256];

        // (1) same identifier — donation wallets excluded from the graph
        for (const auto& id : s->identifiers) {
            if (id.is_donation) continue;
            g.add_edge(self, g.add_node(NodeKind::identifier, id.raw),
                       EdgeFeature::same_identifier);
        }

        // (2) ancestors / packed together
        for (const auto& parent : s->rec.parents) {
            lineage_groups[parent].push_back(self);
            if (auto it = sample_ids.find(parent); it != sample_ids.end())
                g.add_edge(it->second, self, EdgeFeature::ancestor);
        }
        for (const auto& child : s->rec.dropped) {
            if (auto it = sample_ids.find(child); it != sample_ids.end())
                g.add_edge(self, it->second, EdgeFeature::ancestor);
        }

        // (3) hosting: exact URL always; bare-IP host only when the IP
        // does not resolve to a public repository
        for (const auto& url : s->rec.itw_urls) {
            std::string canon = canonicalize_url(url);
            if (canon.empty()) continue;
            g.add_edge(self, g.add_node(NodeKind::host_url, canon), EdgeFeature::hosting);
            std::string host = url_host(url);
            if (is_ipv4_literal(host) && !repo_ips.count(host))
                g.add_edge(self, g.add_node(NodeKind::host_ip, host), EdgeFeature::hosting);
        }

        // (4) known mining operations (role=campaign IoCs)
        for (const auto& ioc : iocs) {
            if (ioc.role != IoCRole::campaign || !matches_ioc(*s, ioc)) continue;
            g.add_edge(self, g.add_node(NodeKind::known_operation, ioc.operation_name),
                       EdgeFeature::known_campaign);
        }

        // (5) domain aliases
        for (const auto& alias : s->alias_domains)
            g.add_edge(self, g.add_node(NodeKind::cname_alias, alias), EdgeFeature::domain_alias);

        // (6) shared proxies, keyed by endpoint (ip:port granularity)
        if (s->proxy == ProxyVerdict::yes) {
            for (const auto& ep : s->unknown_endpoints)
                g.add_edge(self, g.add_node(NodeKind::proxy_endpoint, ep.str()),
                           EdgeFeature::proxy);
        }
    }

    for (const auto& [key, members] : lineage_groups) {
        (void)key;
        for (std::size_t i = 1; i < members.size(); ++i)
            g.add_edge(members[0], members[i], EdgeFeature::ancestor);
    }
    return g;
}

// ---------------------------------------------------------------------------
// Connected components

struct Campaign {
    uint32_t id = 0;  // ordinal after sorting components by smallest sample sha256
    std::vector<uint32_t> node_ids;
    std::vector<std::string> samples;      // sha256, sorted
    std::vector<std::string> identifiers;  // raw keys, sorted
    std::vector<Node> infrastructure;      // everything else, sorted
    std::vector<GraphEdge> edges;          // edge multiset within the component

    bool has_node_kind(NodeKind kind) const {
        for (const auto& n : infrastructure)
            if (n.kind == kind) return true;
        return false;
    }
};

// Exact partition into maximal connected components with deterministic
// ids: components ordered by their lexicographically smallest member
// sha256, numbered from 1.
inline std::vector<Campaign> connected_components(const CampaignGraph& g) {
    const auto& nodes = g.nodes();
    UnionFind uf(nodes.size());
    for (const auto& e : g.edges()) uf.unite(e.a, e.b);

    std::map<std::size_t, Campaign> by_root;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        Campaign& c = by_root[uf.find(i)];
        c.node_ids.push_back(static_cast<uint32_t>(i));
        switch (nodes[i].kind) {
            case NodeKind::sample: c.samples.push_back(nodes[i].key); break;
            case NodeKind::identifier: c.identifiers.push_back(nodes[i].key); break;
            default: c.infrastructure.push_back(nodes[i]); break;
        }
    }
    for (const auto& e : g.edges()) by_root[uf.find(e.a)].edges.push_back(e);

    std::vector<Campaign> campaigns;
    campaigns.reserve(by_root.size());
    for (auto& [root, c] : by_root) {
        (void)root;
        std::sort(c.samples.begin(), c.samples.end());
        std::sort(c.identifiers.begin(), c.identifiers.end());
        std::sort(c.infrastructure.begin(), c.infrastructure.end());
        campaigns.push_back(std::move(c));
    }
    auto sort_key = [](const Campaign& c) -> const std::string& {
        static const std::string empty;
        if (!c.samples.empty()) return c.samples.front();
        if (!c.identifiers.empty()) return c.identifiers.front();
        if (!c.infrastructure.empty()) return c.infrastructure.front().key;
        return empty;
    };
    std::sort(campaigns.begin(), campaigns.end(),
              [&](const Campaign& a, const Campaign& b) { return sort_key(a) < sort_key(b); });
    for (std::size_t i = 0; i < campaigns.size(); ++i)
        campaigns[i].id = static_cast<uint32_t>(i + 1);
    return campaigns;
}

// ---------------------------------------------------------------------------
// Donation-pattern candidates (report only, no graph effect)

struct DonationCandidate {
    std::string wallet;
    int64_t co_wallet_count = 0;  // distinct other wallets seen alongside
    int64_t sample_count = 0;     // samples where it co-occurs with another wallet
};

// A non-white-listed donation wallet shows up next to many different
// miscreant wallets: flag wallets co-occurring with >= 3 distinct other
// wallets across >= 3 samples.
inline std::vector<DonationCandidate> detect_donation_candidates(
    const std::vector<ExtractedSample>& miners) {
    std::map<std::string, std::set<std::string>> co_wallets;
    std::map<std::string, int64_t> co_samples;
    for (const auto& m : miners) {
        std::vector<std::string> wallets;
        for (const auto& id : m.identifiers)
            if (id.kind == IdentifierKind::wallet) wallets.push_back(id.raw);
        if (wallets.size() < 2) continue;
        for (const auto& w : wallets) {
            bool any_other = false;
            for (const auto& other : wallets) {
                if (other == w) continue;
                co_wallets[w].insert(other);
                any_other = true;
            }
            if (any_other) ++co_samples[w];
        }
    }
    std::vector<DonationCandidate> out;
    for (const auto& [wallet, others] : co_wallets) {
        int64_t samples = co_samples[wallet];
        if (static_cast<int64_t>(others.size()) >= 3 && samples >= 3)
            out.push_back({wallet, static_cast<int64_t>(others.size()), samples});
    }
    return out;
}

// ---------------------------------------------------------------------------
// DOT export

inline std::string dot_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

inline const char* dot_shape(NodeKind k) {
    switch (k) {
        case NodeKind::sample: return "ellipse";
        case NodeKind::identifier: return "box";
        case NodeKind::host_url: return "house";
        case NodeKind::host_ip: return "house";
        case NodeKind::cname_alias: return "diamond";
        case NodeKind::proxy_endpoint: return "hexagon";
        case NodeKind::known_operation: return "octagon";
    }
    return "ellipse";
}

inline std::string to_dot(const CampaignGraph& g) {
    std::string out = "graph campaigns {\n";
    const auto& nodes = g.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        out += "  n" + std::to_string(i) + " [label=\"" + dot_escape(nodes[i].key) +
               "\", shape=" + dot_shape(nodes[i].kind) + "];\n";
    }
    for (const auto& e : g.edges()) {
        out += "  n" + std::to_string(e.a) + " -- n" + std::to_string(e.b) + " [label=\"" +
               to_string(e.feature) + "\"];\n";
    }
    out += "}\n";
    return out;
}

}  // namespace mineralize
