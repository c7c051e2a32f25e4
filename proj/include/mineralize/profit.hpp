#pragma once

// Earnings accounting from pool snapshots. All sums are fixed-point
// (piconero / micro-USD), so conservation holds exactly and reruns are
// bit-identical.
//
// Per (pool, wallet) the latest snapshot wins for totals while payment
// histories are unioned across snapshots (pools expose rolling windows).
// Dated payments convert at that date's rate; undated value — including
// the residual total_paid not covered by dated payments — converts at
// the fallback rate (54 USD/XMR by default).

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "mineralize/campaign_graph.hpp"
#include "mineralize/common.hpp"
#include "mineralize/model.hpp"
#include "mineralize/money.hpp"

namespace mineralize {

struct PoolPayment {
    std::string pool;
    Timestamp ts = 0;
    Piconero amount = 0;

    friend auto operator<=>(const PoolPayment&, const PoolPayment&) = default;
};

struct WalletEarnings {
    std::string wallet;
    std::map<std::string, Piconero> per_pool;  // pool -> total_paid (latest snapshot)
    std::vector<PoolPayment> payments;         // merged, chronological
    Piconero total_xmr = 0;
    MicroUsd total_usd = 0;
    std::optional<Timestamp> last_share;  // max across latest snapshots

    std::optional<Timestamp> last_payment() const {
        if (payments.empty()) return std::nullopt;
        return payments.back().ts;
    }
};

namespace detail {

// Latest snapshot per (pool, wallet); ties on fetched_at keep the
// later-parsed occurrence.
inline std::map<std::pair<std::string, std::string>, const PoolWalletStats*> latest_stats(
    const std::vector<PoolWalletStats>& snapshots) {
    std::map<std::pair<std::string, std::string>, const PoolWalletStats*> latest;
    for (const auto& s : snapshots) {
        auto key = std::make_pair(s.pool, s.wallet);
        auto it = latest.find(key);
        if (it == latest.end() || s.fetched_at >= it->second->fetched_at) latest[key] = &s;
    }
    return latest;
}

// Earnings from this wallet's own snapshots (in original parse order).
inline WalletEarnings wallet_earnings_from(const std::string& wallet,
                                           const std::vector<const PoolWalletStats*>& own,
                                           const ExchangeRateTable& rates) {
    WalletEarnings e;
    e.wallet = wallet;

    // latest snapshot per pool wins for totals; ties keep the later parse
    std::map<std::string, const PoolWalletStats*> latest;
    // payment histories union across all snapshots, (pool, ts, amount) dedup
    std::set<PoolPayment> merged;
    for (const auto* s : own) {
        auto it = latest.find(s->pool);
        if (it == latest.end() || s->fetched_at >= it->second->fetched_at) latest[s->pool] = s;
        for (const auto& p : s->payments) merged.insert({s->pool, p.ts, p.amount});
    }

    for (const auto& [pool, stats] : latest) {
        e.per_pool[pool] += stats->total_paid;
        e.total_xmr += stats->total_paid;
        if (stats->last_share && (!e.last_share || *stats->last_share > *e.last_share))
            e.last_share = stats->last_share;
    }

    std::map<std::string, Piconero> dated_per_pool;
    for (const auto& p : merged) {
        e.payments.push_back(p);
        dated_per_pool[p.pool] += p.amount;
        e.total_usd += usd_value(p.amount, rates.rate_for(date_of(p.ts)));
    }
    std::sort(e.payments.begin(), e.payments.end(), [](const auto& a, const auto& b) {
        return std::tie(a.ts, a.pool, a.amount) < std::tie(b.ts, b.pool, b.amount);
    });

    // Residual total_paid with no dated payment record.
    for (const auto& [pool, total] : e.per_pool) {
        Piconero residual = total - dated_per_pool[pool];
        if (residual > 0) e.total_usd += usd_value(residual, rates.fallback_rate);
    }
    return e;
}

}  // namespace detail

inline WalletEarnings wallet_earnings(const std::string& wallet,
                                      const std::vector<PoolWalletStats>& snapshots,
                                      const ExchangeRateTable& rates) {
    std::vector<const PoolWalletStats*> own;
    for (const auto& s : snapshots)
        if (s.wallet == wallet) own.push_back(&s);
    return detail::wallet_earnings_from(wallet, own, rates);
}

// ---------------------------------------------------------------------------
// Campaign aggregation

using WalletEarningsIndex = std::map<std::string, WalletEarnings>;

inline WalletEarningsIndex build_wallet_earnings_index(const std::set<std::string>& wallets,
                                                       const std::vector<PoolWalletStats>& snapshots,
                                                       const ExchangeRateTable& rates) {
    std::map<std::string, std::vector<const PoolWalletStats*>> by_wallet;
    for (const auto& s : snapshots) by_wallet[s.wallet].push_back(&s);
    WalletEarningsIndex index;
    static const std::vector<const PoolWalletStats*> none;
    for (const auto& w : wallets) {
        auto it = by_wallet.find(w);
        index.emplace(w, detail::wallet_earnings_from(w, it == by_wallet.end() ? none : it->second,
                                                      rates));
    }
    return index;
}

struct CampaignEarnings {
    uint32_t campaign_id = 0;
    Piconero total_xmr = 0;
    MicroUsd total_usd = 0;
    std::map<std::string, Piconero> per_wallet;
    std::optional<Timestamp> last_payment;
    std::optional<Timestamp> last_share;
};

// Each wallet counts once no matter how many samples share it.
inline CampaignEarnings campaign_earnings(const Campaign& campaign,
                                          const WalletEarningsIndex& index) {
    CampaignEarnings e;
    e.campaign_id = campaign.id;
    std::set<std::string> seen;
    for (const auto& wallet : campaign.identifiers) {
        if (!seen.insert(wallet).second) continue;
        auto it = index.find(wallet);
        if (it == index.end()) {
            e.per_wallet[wallet] = 0;
            continue;
        }
        e.per_wallet[wallet] = it->second.total_xmr;
        e.total_xmr += it->second.total_xmr;
        e.total_usd += it->second.total_usd;
        if (auto lp = it->second.last_payment(); lp && (!e.last_payment || *lp > *e.last_payment))
            e.last_payment = lp;
        if (it->second.last_share &&
            (!e.last_share || *it->second.last_share > *e.last_share))
            e.last_share = it->second.last_share;
    }
    return e;
}

// ---------------------------------------------------------------------------
// Activity periods and PoW survival

// Monero PoW algorithm changes; un-updated miners die at each one.
inline std::vector<Date> default_pow_dates() {
    return {Date{2018, 4, 6}, Date{2018, 10, 18}, Date{2019, 3, 9}};
}

struct ActivityProfile {
    std::optional<Date> start;         // earliest first_seen; absent if all unknown
    std::optional<Timestamp> last_payment;
    int years_active = 0;
    std::vector<std::pair<Date, bool>> survived_pow;  // strict-after per date
};

inline ActivityProfile activity_profile(const Campaign& campaign,
                                        const std::map<std::string, const SampleRecord*>& records,
                                        const CampaignEarnings& earnings,
                                        const std::vector<Date>& pow_dates = default_pow_dates()) {
    ActivityProfile p;
    for (const auto& sha : campaign.samples) {
        auto it = records.find(sha);
        if (it == records.end() || !it->second->first_seen) continue;
        if (!p.start || *it->second->first_seen < *p.start) p.start = it->second->first_seen;
    }
    p.last_payment = earnings.last_payment;

    // Survival considers the last payment or share, strictly after the date.
    std::optional<Timestamp> last_activity = earnings.last_payment;
    if (earnings.last_share && (!last_activity || *earnings.last_share > *last_activity))
        last_activity = earnings.last_share;
    for (const auto& d : pow_dates) {
        bool survived = last_activity && date_of(*last_activity) > d;
        p.survived_pow.push_back({d, survived});
    }

    if (p.start && p.last_payment) {
        Date end = date_of(*p.last_payment);
        p.years_active = years_between(*p.start, end);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Pool popularity (per-pool totals over illicit wallets only)

struct PoolPopularity {
    std::string pool;
    Piconero xmr_mined = 0;
    int64_t wallet_count = 0;  // distinct wallets with any recorded activity
    MicroUsd usd = 0;
};

inline std::vector<PoolPopularity> pool_popularity(const std::vector<PoolWalletStats>& snapshots,
                                                   const std::set<std::string>& illicit_wallets,
                                                   const ExchangeRateTable& rates) {
    auto latest = detail::latest_stats(snapshots);

    std::map<std::string, PoolPopularity> per_pool;
    std::map<std::string, std::set<std::string>> active_wallets;
    std::map<std::pair<std::string, std::string>, Piconero> dated;

    // every pool with snapshot data gets a row, zeros when nothing illicit
    for (const auto& s : snapshots) per_pool[s.pool].pool = s.pool;

    std::set<std::pair<std::string, std::string>> wallet_pools;
    for (const auto& [key, stats] : latest) {
        if (!illicit_wallets.count(key.second)) continue;
        auto& p = per_pool[key.first];
        p.xmr_mined += stats->total_paid;
        if (stats->has_activity()) active_wallets[key.first].insert(key.second);
        wallet_pools.insert(key);
    }
    // USD per pool: dated payments at their rate, residual at fallback.
    std::set<std::tuple<std::string, std::string, Timestamp, Piconero>> seen_payments;
    for (const auto& s : snapshots) {
        if (!illicit_wallets.count(s.wallet)) continue;
        for (const auto& p : s.payments) {
            if (!seen_payments.insert({s.pool, s.wallet, p.ts, p.amount}).second) continue;
            per_pool[s.pool].usd += usd_value(p.amount, rates.rate_for(date_of(p.ts)));
            dated[{s.pool, s.wallet}] += p.amount;
        }
    }
    for (const auto& key : wallet_pools) {
        Piconero residual = latest[key]->total_paid - dated[key];
        if (residual > 0) per_pool[key.first].usd += usd_value(residual, rates.fallback_rate);
    }

    std::vector<PoolPopularity> out;
    for (auto& [pool, p] : per_pool) {
        p.wallet_count = static_cast<int64_t>(active_wallets[pool].size());
        out.push_back(std::move(p));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.xmr_mined != b.xmr_mined) return a.xmr_mined > b.xmr_mined;
        return a.pool < b.pool;
    });
    return out;
}

}  // namespace mineralize
