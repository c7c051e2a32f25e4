#pragma once

// Corpus triage: is it executable, is it malware, is it a miner.
//
// The gate runs in two passes. Pass 1 collects the illicit-wallet set
// from samples flagged by at least `malware_min_positives` AV vendors;
// pass 2 keeps low-positive samples that carry one of those wallets,
// routes wallet-less lineage of miners into the ancillary set, and
// rejects the rest with a reason code. Deterministic and
// order-independent: outputs are sorted by sha256.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mineralize/extract.hpp"
#include "mineralize/model.hpp"

namespace mineralize {

inline bool is_executable(std::string_view magic) {
    if (magic.size() < 4) return false;
    if (starts_with(magic, "MZ")) return true;                    // PE
    if (starts_with(magic, "\x7F" "ELF")) return true;            // ELF
    if (starts_with(magic, "PK\x03\x04")) return true;            // ZIP/JAR
    return false;
}

enum class RejectReason { not_executable, not_malware, not_miner, whitelisted_tool };

inline std::string to_string(RejectReason r) {
    switch (r) {
        case RejectReason::not_executable: return "not-executable";
        case RejectReason::not_malware: return "not-malware";
        case RejectReason::not_miner: return "not-miner";
        case RejectReason::whitelisted_tool: return "whitelisted-tool";
    }
    return "not-malware";
}

struct GateConfig {
    std::set<std::string> stock_whitelist;  // sha256 of known mining tools
    std::set<std::string> miner_label_tokens{"miner", "coinmine", "bitcoinminer", "xmrig",
                                             "coinhive"};
    int64_t malware_min_positives = 10;
    int64_t miner_label_min = 10;  // labels with a miner token needed for route (c)
};

inline bool is_malware(const ExtractedSample& s, const std::set<std::string>& illicit_wallets,
                       const GateConfig& cfg) {
    if (cfg.stock_whitelist.count(s.rec.sha256)) return false;
    if (s.rec.positives >= cfg.malware_min_positives) return true;
    for (const auto& id : s.identifiers)
        if (illicit_wallets.count(id.raw)) return true;
    return false;
}

inline bool is_miner(const ExtractedSample& s, const GateConfig& cfg) {
    for (const auto& obs : s.observations)
        if (obs.resolved_pool) return true;
    if (!s.alias_domains.empty()) return true;
    if (!s.logins.empty()) return true;
    int64_t label_hits = 0;
    for (const auto& label : s.rec.av_labels) {
        std::string lower = to_lower(label);
        for (const auto& token : cfg.miner_label_tokens) {
            if (lower.find(token) != std::string::npos) {
                ++label_hits;
                break;
            }
        }
    }
    return label_hits >= cfg.miner_label_min;
}

struct RejectedSample {
    ExtractedSample sample;
    RejectReason reason;
};

struct GateResult {
    std::vector<ExtractedSample> miners;
    std::vector<ExtractedSample> ancillaries;
    std::vector<RejectedSample> rejected;
    std::set<std::string> illicit_wallets;
};

inline GateResult run_gate(std::vector<ExtractedSample> samples, const GateConfig& cfg) {
    GateResult result;
    std::sort(samples.begin(), samples.end(),
              [](const auto& a, const auto& b) { return a.rec.sha256 < b.rec.sha256; });

    // Pass 1: the illicit identifier set. Donation wallets belong to tool
    // developers and white-listed stock tools are not malware, so neither
    // contributes.
    for (const auto& s : samples) {
        if (s.rec.positives < cfg.malware_min_positives) continue;
        if (cfg.stock_whitelist.count(s.rec.sha256)) continue;
        for (const auto& id : s.identifiers)
            if (!id.is_donation) result.illicit_wallets.insert(id.raw);
    }

    // Pass 2a: decide miners.
    std::vector<char> miner_flag(samples.size(), 0);
    std::set<std::string> miner_shas;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (!is_executable(s.rec.magic)) continue;
        if (cfg.stock_whitelist.count(s.rec.sha256)) continue;
        if (!is_malware(s, result.illicit_wallets, cfg)) continue;
        if (!is_miner(s, cfg)) continue;
        miner_flag[i] = 1;
        miner_shas.insert(s.rec.sha256);
    }

    // Lineage neighbourhood of the miner set, from either side of the
    // parent/dropped relation (corpus may be partial).
    std::set<std::string> linked_to_miner;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!miner_flag[i]) continue;
        for (const auto& p : samples[i].rec.parents) linked_to_miner.insert(p);
        for (const auto& d : samples[i].rec.dropped) linked_to_miner.insert(d);
    }

    // Pass 2b: route everything.
    for (std::size_t i = 0; i < samples.size(); ++i) {
        ExtractedSample& s = samples[i];
        if (miner_flag[i]) {
            s.rec.sample_type = SampleType::miner;
            result.miners.push_back(std::move(s));
            continue;
        }
        if (!is_executable(s.rec.magic)) {
            result.rejected.push_back({std::move(s), RejectReason::not_executable});
            continue;
        }
        if (cfg.stock_whitelist.count(s.rec.sha256)) {
            result.rejected.push_back({std::move(s), RejectReason::whitelisted_tool});
            continue;
        }
        if (!is_malware(s, result.illicit_wallets, cfg)) {
            result.rejected.push_back({std::move(s), RejectReason::not_malware});
            continue;
        }
        bool lineage = linked_to_miner.count(s.rec.sha256) > 0;
        for (const auto& p : s.rec.parents) lineage = lineage || miner_shas.count(p) > 0;
        for (const auto& d : s.rec.dropped) lineage = lineage || miner_shas.count(d) > 0;
        if (lineage && !s.has_wallet()) {
            s.rec.sample_type = SampleType::ancillary;
            result.ancillaries.push_back(std::move(s));
        } else {
            result.rejected.push_back({std::move(s), RejectReason::not_miner});
        }
    }
    return result;
}

}  // namespace mineralize
