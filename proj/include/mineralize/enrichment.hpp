#pragma once

// Post-aggregation annotation: stock-miner attribution via fuzzy
// hashing, obfuscation verdicts from packer labels and byte entropy,
// and PPI-service tagging. None of this changes campaign membership.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "mineralize/campaign_graph.hpp"
#include "mineralize/corpus_io.hpp"
#include "mineralize/ctph.hpp"
#include "mineralize/entropy.hpp"
#include "mineralize/extract.hpp"
#include "mineralize/model.hpp"

namespace mineralize {

inline constexpr double kEntropyObfuscationThreshold = 7.5;  // strict-greater rule
inline constexpr double kStockMinerDistanceThreshold = 0.1;  // strict-less rule
inline constexpr double kCampaignObfuscationFraction = 0.80;

// Compression is not obfuscation: these labels never trip the packer rule.
inline bool is_compression_label(std::string_view label) {
    std::string l = to_lower(trim(label));
    return l == "cab" || l == "arj" || l == "zip" || l == "gzip";
}

enum class ObfuscationBasis { known_packer, entropy, none };

inline std::string to_string(ObfuscationBasis b) {
    switch (b) {
        case ObfuscationBasis::known_packer: return "known_packer";
        case ObfuscationBasis::entropy: return "entropy";
        case ObfuscationBasis::none: return "none";
    }
    return "none";
}

struct ObfuscationVerdict {
    std::optional<std::string> packer;
    std::optional<double> entropy;  // in [0, 8] when present
    bool obfuscated = false;
    ObfuscationBasis basis = ObfuscationBasis::none;
    bool missing_data = false;  // neither packer label nor bytes available
};

// A non-compression packer label decides on its own; otherwise entropy
// strictly above 7.5 does. With neither signal the verdict is negative
// and flagged as missing data.
inline ObfuscationVerdict classify_obfuscation(std::optional<std::string> packer,
                                               std::optional<double> entropy) {
    ObfuscationVerdict v;
    v.packer = std::move(packer);
    v.entropy = entropy;
    if (v.packer && !is_compression_label(*v.packer)) {
        v.obfuscated = true;
        v.basis = ObfuscationBasis::known_packer;
        return v;
    }
    if (entropy && *entropy > kEntropyObfuscationThreshold) {
        v.obfuscated = true;
        v.basis = ObfuscationBasis::entropy;
        return v;
    }
    v.missing_data = !v.packer && !entropy;
    return v;
}

inline ObfuscationVerdict classify_obfuscation(const SampleRecord& rec,
                                               std::optional<std::string_view> blob) {
    std::optional<double> entropy;
    if (blob && !blob->empty()) entropy = shannon_entropy(*blob);
    return classify_obfuscation(rec.packer, entropy);
}

// ---------------------------------------------------------------------------
// Stock mining software

struct StockTool {
    std::string tool;
    std::string version;
    std::string sha256;
    FuzzyDigest digest;
};

struct StockMatch {
    std::string tool;
    std::string version;
    double distance = 1.0;
};

// Minimum-distance entry, only when strictly below the threshold; ties
// broken by (tool, version) lexicographic order.
inline std::optional<StockMatch> match_stock_miner(
    const FuzzyDigest& sample, const std::vector<StockTool>& corpus,
    double threshold = kStockMinerDistanceThreshold) {
    std::optional<StockMatch> best;
    for (const auto& entry : corpus) {
        double d = ctph_distance(sample, entry.digest);
        if (d >= threshold) continue;
        if (!best || d < best->distance ||
            (d == best->distance &&
             std::tie(entry.tool, entry.version) < std::tie(best->tool, best->version))) {
            best = StockMatch{entry.tool, entry.version, d};
        }
    }
    return best;
}

inline std::optional<StockMatch> match_stock_miner(
    std::string_view sample_bytes, const std::vector<StockTool>& corpus,
    double threshold = kStockMinerDistanceThreshold) {
    return match_stock_miner(ctph_digest(sample_bytes), corpus, threshold);
}

// stock/manifest.ndjson lines: {tool, version, sha256, blob_path};
// digests are computed from the referenced blobs at load time.
struct StockCorpusLoadResult {
    std::vector<StockTool> tools;
    Diagnostics diagnostics;
};

inline StockCorpusLoadResult load_stock_corpus(const std::filesystem::path& manifest,
                                               const std::filesystem::path& blob_root) {
    std::ifstream in(manifest, std::ios::binary);
    if (!in) throw InputError("cannot read stock manifest " + manifest.string());
    StockCorpusLoadResult result;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        try {
            json j = json::parse(line);
            StockTool t;
            t.tool = j.at("tool").get<std::string>();
            t.version = j.at("version").get<std::string>();
            t.sha256 = j.at("sha256").get<std::string>();
            if (!is_sha256_hex(t.sha256)) throw std::runtime_error("invalid sha256");
            std::filesystem::path blob = blob_root / j.at("blob_path").get<std::string>();
            std::string bytes = detail::read_file(blob);
            if (bytes.empty()) throw std::runtime_error("empty blob " + blob.string());
            t.digest = ctph_digest(bytes);
            result.tools.push_back(std::move(t));
        } catch (const std::exception& e) {
            result.diagnostics.push_back({lineno, manifest.filename().string(), e.what()});
        }
    }
    std::sort(result.tools.begin(), result.tools.end(), [](const auto& a, const auto& b) {
        return std::tie(a.tool, a.version, a.sha256) < std::tie(b.tool, b.version, b.sha256);
    });
    return result;
}

// ---------------------------------------------------------------------------
// Campaign-level annotation

struct CampaignAnnotations {
    uint32_t campaign_id = 0;
    bool obfuscated = false;          // >= 80% of member samples obfuscated
    double obfuscated_fraction = 0.0;
    std::set<std::string> ppi;        // matching role=ppi operations
    std::set<std::string> mining_sw;  // distinct matched stock tools
    bool cname_usage = false;
    bool proxy_usage = false;
};

// Informative only: PPI and stock-tool matches never alter membership.
inline CampaignAnnotations campaign_flags(
    const Campaign& campaign, const std::map<std::string, ObfuscationVerdict>& verdicts,
    const std::vector<IoCSet>& ppi_iocs,
    const std::map<std::string, StockMatch>& stock_matches,
    const std::map<std::string, const ExtractedSample*>& samples_by_sha) {
    CampaignAnnotations a;
    a.campaign_id = campaign.id;
    std::size_t obfuscated = 0;
    for (const auto& sha : campaign.samples) {
        if (auto it = verdicts.find(sha); it != verdicts.end() && it->second.obfuscated)
            ++obfuscated;
        if (auto it = stock_matches.find(sha); it != stock_matches.end())
            a.mining_sw.insert(it->second.tool);
        if (auto it = samples_by_sha.find(sha); it != samples_by_sha.end()) {
            for (const auto& ioc : ppi_iocs) {
                if (ioc.role == IoCRole::ppi && matches_ioc(*it->second, ioc))
                    a.ppi.insert(ioc.operation_name);
            }
        }
    }
    if (!campaign.samples.empty())
        a.obfuscated_fraction = static_cast<double>(obfuscated) /
                                static_cast<double>(campaign.samples.size());
    a.obfuscated = a.obfuscated_fraction >= kCampaignObfuscationFraction;
    a.cname_usage = campaign.has_node_kind(NodeKind::cname_alias);
    a.proxy_usage = campaign.has_node_kind(NodeKind::proxy_endpoint);
    return a;
}

}  // namespace mineralize
