#pragma once

// Report assembly: per-campaign demographics, profit-bucket summary
// tables, pool popularity and packer counts, rendered as CSV and
// human-readable text.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mineralize/campaign_graph.hpp"
#include "mineralize/enrichment.hpp"
#include "mineralize/model.hpp"
#include "mineralize/profit.hpp"

namespace mineralize {

// Aggregated demographics for one campaign.
struct CampaignReport {
    uint32_t id = 0;
    int64_t n_samples = 0;
    int64_t n_wallets = 0;
    std::optional<Date> start;
    std::optional<Date> end;  // date of the last payment
    int years_active = 0;
    Piconero xmr = 0;
    MicroUsd usd = 0;
    std::vector<std::pair<Date, bool>> survived_pow;
    bool active = false;  // survived the most recent PoW change
    CampaignAnnotations annotations;
};

inline CampaignReport make_campaign_report(const Campaign& campaign,
                                           const CampaignEarnings& earnings,
                                           const ActivityProfile& activity,
                                           const CampaignAnnotations& annotations) {
    CampaignReport r;
    r.id = campaign.id;
    r.n_samples = static_cast<int64_t>(campaign.samples.size());
    r.n_wallets = static_cast<int64_t>(campaign.identifiers.size());
    r.start = activity.start;
    if (activity.last_payment) r.end = date_of(*activity.last_payment);
    r.years_active = activity.years_active;
    r.xmr = earnings.total_xmr;
    r.usd = earnings.total_usd;
    r.survived_pow = activity.survived_pow;
    r.active = !activity.survived_pow.empty() && activity.survived_pow.back().second;
    r.annotations = annotations;
    return r;
}

// campaign_earnings.csv, sorted by xmr descending (ties by id).
inline std::string campaign_earnings_csv(std::vector<CampaignReport> reports) {
    std::sort(reports.begin(), reports.end(), [](const auto& a, const auto& b) {
        if (a.xmr != b.xmr) return a.xmr > b.xmr;
        return a.id < b.id;
    });
    std::string out = "campaign_id,samples,wallets,start,end,xmr,usd,active\n";
    for (const auto& r : reports) {
        out += std::to_string(r.id) + "," + std::to_string(r.n_samples) + "," +
               std::to_string(r.n_wallets) + "," + (r.start ? format_date(*r.start) : "") + "," +
               (r.end ? format_date(*r.end) : "") + "," + format_xmr(r.xmr) + "," +
               format_usd(r.usd) + "," + (r.active ? "true" : "false") + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Profit buckets (<100, [100-1k), [1k-10k), >10k XMR)

inline constexpr std::size_t kProfitBucketCount = 4;

inline const char* profit_bucket_label(std::size_t i) {
    static constexpr const char* labels[] = {"<100", "[100-1k)", "[1k-10k)", ">10k"};
    return labels[i];
}

inline std::size_t profit_bucket(Piconero xmr) {
    if (xmr < 100 * kPiconeroPerXmr) return 0;
    if (xmr < 1000 * kPiconeroPerXmr) return 1;
    if (xmr < 10000 * kPiconeroPerXmr) return 2;
    return 3;
}

struct BucketSummary {
    struct Row {
        std::string name;
        // counts per bucket plus the ALL column
        std::array<int64_t, kProfitBucketCount + 1> counts{};
    };
    std::array<int64_t, kProfitBucketCount + 1> campaign_counts{};
    std::vector<Row> rows;
};

inline BucketSummary bucket_summary(const std::vector<CampaignReport>& reports) {
    BucketSummary s;
    std::vector<std::size_t> bucket_of;
    bucket_of.reserve(reports.size());
    for (const auto& r : reports) {
        std::size_t b = profit_bucket(r.xmr);
        bucket_of.push_back(b);
        ++s.campaign_counts[b];
        ++s.campaign_counts[kProfitBucketCount];
    }

    auto add_row = [&](const std::string& name, auto predicate) {
        BucketSummary::Row row;
        row.name = name;
        for (std::size_t i = 0; i < reports.size(); ++i) {
            if (!predicate(reports[i])) continue;
            ++row.counts[bucket_of[i]];
            ++row.counts[kProfitBucketCount];
        }
        s.rows.push_back(std::move(row));
    };

    add_row("PPI", [](const CampaignReport& r) { return !r.annotations.ppi.empty(); });
    add_row("Mining SW", [](const CampaignReport& r) { return !r.annotations.mining_sw.empty(); });
    add_row("Both", [](const CampaignReport& r) {
        return !r.annotations.ppi.empty() && !r.annotations.mining_sw.empty();
    });
    add_row("Obfuscation", [](const CampaignReport& r) { return r.annotations.obfuscated; });
    add_row("CNAMEs", [](const CampaignReport& r) { return r.annotations.cname_usage; });
    add_row("Proxies", [](const CampaignReport& r) { return r.annotations.proxy_usage; });

    // Survival rows, in configured PoW-date order.
    std::size_t pow_count = reports.empty() ? 0 : reports.front().survived_pow.size();
    for (std::size_t d = 0; d < pow_count; ++d) {
        std::string name = "+ " + format_date(reports.front().survived_pow[d].first);
        add_row(name, [d](const CampaignReport& r) {
            return d < r.survived_pow.size() && r.survived_pow[d].second;
        });
    }

    std::set<int> start_years;
    int max_years = 0;
    for (const auto& r : reports) {
        if (r.start) start_years.insert(r.start->year);
        max_years = std::max(max_years, r.years_active);
    }
    for (int y : start_years) {
        add_row("Start: " + std::to_string(y),
                [y](const CampaignReport& r) { return r.start && r.start->year == y; });
    }
    for (int y = 0; y <= max_years; ++y) {
        add_row("Years: " + std::to_string(y),
                [y](const CampaignReport& r) { return r.years_active == y; });
    }
    return s;
}

inline std::string format_percent(int64_t count, int64_t total) {
    if (total == 0) return "0.0%";
    double pct = 100.0 * static_cast<double>(count) / static_cast<double>(total);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.1f%%", pct);
    return buf;
}

inline std::string bucket_summary_csv(const BucketSummary& s) {
    std::string out = "row";
    for (std::size_t b = 0; b < kProfitBucketCount; ++b)
        out += std::string(",") + profit_bucket_label(b);
    out += ",ALL\n#Campaigns";
    for (std::size_t b = 0; b <= kProfitBucketCount; ++b)
        out += "," + std::to_string(s.campaign_counts[b]);
    out += "\n";
    for (const auto& row : s.rows) {
        out += row.name;
        for (std::size_t b = 0; b <= kProfitBucketCount; ++b)
            out += "," + format_percent(row.counts[b], s.campaign_counts[b]);
        out += "\n";
    }
    return out;
}

inline std::string bucket_summary_text(const BucketSummary& s) {
    auto pad = [](std::string v, std::size_t w) {
        if (v.size() < w) v.insert(0, w - v.size(), ' ');
        return v;
    };
    std::string out = pad("XMR mined", 16);
    for (std::size_t b = 0; b < kProfitBucketCount; ++b) out += pad(profit_bucket_label(b), 11);
    out += pad("ALL", 11) + "\n" + pad("#Campaigns", 16);
    for (std::size_t b = 0; b <= kProfitBucketCount; ++b)
        out += pad(std::to_string(s.campaign_counts[b]), 11);
    out += "\n";
    for (const auto& row : s.rows) {
        out += pad(row.name, 16);
        for (std::size_t b = 0; b <= kProfitBucketCount; ++b)
            out += pad(format_percent(row.counts[b], s.campaign_counts[b]), 11);
        out += "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pool popularity and packer tables

inline std::string pool_popularity_csv(const std::vector<PoolPopularity>& pools) {
    std::string out = "pool,xmr_mined,wallets,usd\n";
    for (const auto& p : pools) {
        out += p.pool + "," + format_xmr(p.xmr_mined) + "," + std::to_string(p.wallet_count) +
               "," + format_usd(p.usd) + "\n";
    }
    return out;
}

using PackerHistogram = std::map<std::string, int64_t>;

inline PackerHistogram packer_histogram(const std::vector<SampleRecord>& samples) {
    PackerHistogram h;
    for (const auto& s : samples) {
        if (s.packer && !s.packer->empty()) ++h[*s.packer];
        else ++h["Not packed"];
    }
    return h;
}

// Sorted by count descending (ties by label); "Not packed" always last.
inline std::string packer_histogram_csv(const PackerHistogram& h) {
    std::vector<std::pair<std::string, int64_t>> rows(h.begin(), h.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        bool a_np = a.first == "Not packed", b_np = b.first == "Not packed";
        if (a_np != b_np) return b_np;
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::string out = "packer,samples\n";
    for (const auto& [label, count] : rows) out += label + "," + std::to_string(count) + "\n";
    return out;
}

}  // namespace mineralize
