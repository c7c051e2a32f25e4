#pragma once

// CNAME alias resolution: maps attacker-controlled domains to the known
// mining pools they alias, using current and historical DNS answers.
// Chains are followed transitively to depth 8 with cycle detection, so
// index construction terminates on any record set.

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mineralize/common.hpp"
#include "mineralize/model.hpp"

namespace mineralize {

// Observation window; a missing bound means "always" in that direction
// (historical DNS feeds often omit timestamps).
struct AliasWindow {
    std::optional<Timestamp> begin;
    std::optional<Timestamp> end;

    friend bool operator==(const AliasWindow&, const AliasWindow&) = default;

    static std::optional<AliasWindow> intersect(const AliasWindow& a, const AliasWindow& b) {
        AliasWindow out;
        out.begin = a.begin ? (b.begin ? std::optional(std::max(*a.begin, *b.begin)) : a.begin)
                            : b.begin;
        out.end = a.end ? (b.end ? std::optional(std::min(*a.end, *b.end)) : a.end) : b.end;
        if (out.begin && out.end && *out.begin > *out.end) return std::nullopt;
        return out;
    }

    bool overlaps_or_touches(const AliasWindow& other) const {
        bool left_ok = !end || !other.begin || *other.begin <= *end;
        bool right_ok = !begin || !other.end || *begin <= *other.end;
        return left_ok && right_ok;
    }
};

struct AliasEntry {
    std::string pool;
    AliasWindow window;

    friend bool operator==(const AliasEntry&, const AliasEntry&) = default;
};

struct AliasIndex {
    std::map<std::string, std::vector<AliasEntry>> by_alias;  // entries ordered by window start

    bool contains(std::string_view domain) const {
        return by_alias.count(to_lower(trim(domain))) > 0;
    }

    // Exact-domain lookup; empty for unknown domains.
    std::vector<AliasEntry> resolve(std::string_view domain) const {
        auto it = by_alias.find(to_lower(trim(domain)));
        if (it == by_alias.end()) return {};
        return it->second;
    }
};

struct AliasIndexResult {
    AliasIndex index;
    Diagnostics diagnostics;  // CNAME cycles
};

inline constexpr int kMaxCnameChainDepth = 8;

// Builds the alias index: an entry exists iff a CNAME chain (depth <= 8)
// from the alias terminates at a domain of a known pool. Pool domains
// themselves never become aliases.
inline AliasIndexResult build_alias_index(const std::vector<DnsRecord>& records,
                                          const KnownPoolDirectory& dir) {
    AliasIndexResult result;
    // name -> CNAME targets with windows
    std::map<std::string, std::vector<std::pair<std::string, AliasWindow>>> cnames;
    for (const auto& r : records) {
        if (r.rtype != DnsRecordType::cname) continue;
        if (r.name.empty() || r.value.empty() || r.name == r.value) continue;
        cnames[r.name].push_back({r.value, AliasWindow{r.first_observed, r.last_observed}});
    }

    for (const auto& [alias, targets] : cnames) {
        if (dir.is_pool_domain(alias)) continue;
        std::vector<AliasEntry> entries;
        bool cycle_reported = false;

        // Iterative DFS over (domain, accumulated window, path) states.
        struct State {
            std::string domain;
            AliasWindow window;
            int depth;
            std::set<std::string> path;
        };
        std::vector<State> stack;
        stack.push_back({alias, AliasWindow{}, 0, {alias}});
        while (!stack.empty()) {
            State st = std::move(stack.back());
            stack.pop_back();
            if (auto pool = dir.match_host(st.domain); pool && st.depth > 0) {
                entries.push_back({*pool, st.window});
                continue;
            }
            if (st.depth >= kMaxCnameChainDepth) continue;
            auto it = cnames.find(st.domain);
            if (it == cnames.end()) continue;
            for (const auto& [target, window] : it->second) {
                if (st.path.count(target)) {
                    if (!cycle_reported) {
                        result.diagnostics.push_back(
                            {0, "dns", "CNAME cycle at " + alias + " via " + target});
                        cycle_reported = true;
                    }
                    continue;
                }
                auto merged = AliasWindow::intersect(st.window, window);
                if (!merged) continue;  // windows never coexist
                State next{target, *merged, st.depth + 1, st.path};
                next.path.insert(target);
                stack.push_back(std::move(next));
            }
        }
        if (entries.empty()) continue;

        // Normalize: merge overlapping windows per pool, then order by start.
        auto window_start = [](const AliasWindow& w) {
            return w.begin ? *w.begin : std::numeric_limits<Timestamp>::min();
        };
        std::stable_sort(entries.begin(), entries.end(), [&](const auto& a, const auto& b) {
            if (a.pool != b.pool) return a.pool < b.pool;
            return window_start(a.window) < window_start(b.window);
        });
        std::vector<AliasEntry> merged;
        for (auto& e : entries) {
            if (!merged.empty() && merged.back().pool == e.pool &&
                merged.back().window.overlaps_or_touches(e.window)) {
                auto& w = merged.back().window;
                if (w.begin && e.window.begin) w.begin = std::min(*w.begin, *e.window.begin);
                else w.begin = std::nullopt;
                if (w.end && e.window.end) w.end = std::max(*w.end, *e.window.end);
                else w.end = std::nullopt;
            } else {
                merged.push_back(std::move(e));
            }
        }
        std::stable_sort(merged.begin(), merged.end(), [&](const auto& a, const auto& b) {
            return window_start(a.window) < window_start(b.window);
        });
        result.index.by_alias[alias] = std::move(merged);
    }
    return result;
}

inline std::vector<AliasEntry> resolve_alias(std::string_view domain, const AliasIndex& index) {
    return index.resolve(domain);
}

}  // namespace mineralize
