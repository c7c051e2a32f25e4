#include <doctest.h>

#include <map>
#include <set>

#include <mineralize/profit.hpp>
#include <mineralize/report.hpp>

#include "support/test_env.hpp"

using namespace mineralize;

namespace {

PoolWalletStats stats(const std::string& pool, const std::string& wallet, const std::string& paid,
                      std::vector<std::pair<std::string, std::string>> payments = {},
                      const std::string& fetched = "2019-04-01") {
    PoolWalletStats s;
    s.pool = pool;
    s.wallet = wallet;
    s.total_paid = *parse_xmr(paid);
    for (const auto& [ts, amount] : payments)
        s.payments.push_back({*parse_timestamp(ts), *parse_xmr(amount)});
    std::sort(s.payments.begin(), s.payments.end());
    s.num_payments = static_cast<int64_t>(s.payments.size());
    s.fetched_at = *parse_timestamp(fetched);
    return s;
}

ExchangeRateTable rates_with(std::vector<std::pair<std::string, std::string>> entries) {
    ExchangeRateTable t;
    for (const auto& [date, rate] : entries) t.entries[*parse_date(date)] = *parse_usd_rate(rate);
    return t;
}

Campaign campaign_with(uint32_t id, std::vector<std::string> wallets,
                       std::vector<std::string> samples = {}) {
    Campaign c;
    c.id = id;
    c.identifiers = std::move(wallets);
    c.samples = std::move(samples);
    return c;
}

}  // namespace

TEST_CASE("wallet_earnings: dated payment uses that day's rate") {
    auto table = rates_with({{"2017-01-01", "10"}});
    auto e = wallet_earnings("W", {stats("minexmr", "W", "2", {{"2017-01-01", "2"}})}, table);
    CHECK(e.total_xmr == 2 * kPiconeroPerXmr);
    CHECK(e.total_usd == 20 * kMicroPerUsd);
}

TEST_CASE("wallet_earnings: undated payment falls back to 54") {
    ExchangeRateTable table;  // empty: everything at the fallback
    auto e = wallet_earnings("W", {stats("minexmr", "W", "1", {{"2017-01-01", "1"}})}, table);
    CHECK(e.total_usd == 54 * kMicroPerUsd);
}

TEST_CASE("wallet_earnings: cross-pool sums and merged payment stream") {
    ExchangeRateTable table;
    auto e = wallet_earnings("W",
                             {stats("poolA", "W", "5", {{"2018-01-02", "5"}}),
                              stats("poolB", "W", "3", {{"2018-01-01", "3"}})},
                             table);
    CHECK(e.total_xmr == 8 * kPiconeroPerXmr);
    CHECK(e.per_pool.at("poolA") == 5 * kPiconeroPerXmr);
    CHECK(e.per_pool.at("poolB") == 3 * kPiconeroPerXmr);
    REQUIRE(e.payments.size() == 2);
    CHECK(e.payments[0].pool == "poolB");  // chronological across pools
    CHECK(e.last_payment() == parse_timestamp("2018-01-02"));
}

TEST_CASE("wallet_earnings: latest snapshot wins, histories union") {
    ExchangeRateTable table;
    auto early = stats("minexmr", "W", "4", {{"2018-01-01", "4"}}, "2018-06-01");
    auto late = stats("minexmr", "W", "7", {{"2018-05-01", "3"}}, "2019-01-01");
    auto e = wallet_earnings("W", {early, late}, table);
    CHECK(e.total_xmr == 7 * kPiconeroPerXmr);       // latest total_paid only
    CHECK(e.payments.size() == 2);                   // union of both windows
    // 7 XMR total: 7 dated at fallback; residual 0
    CHECK(e.total_usd == 7 * 54 * kMicroPerUsd);
}

TEST_CASE("wallet_earnings: residual valued at the fallback rate") {
    auto table = rates_with({{"2018-01-01", "100"}});
    // total 10, dated 4 at rate 100, residual 6 at 54
    auto e = wallet_earnings("W", {stats("minexmr", "W", "10", {{"2018-01-01", "4"}})}, table);
    CHECK(e.total_usd == (4 * 100 + 6 * 54) * kMicroPerUsd);

    // duplicated payment rows collapse before pricing
    auto dup = wallet_earnings(
        "W", {stats("minexmr", "W", "4", {{"2018-01-01", "4"}, {"2018-01-01", "4"}})}, table);
    CHECK(dup.payments.size() == 1);
    CHECK(dup.total_usd == 4 * 100 * kMicroPerUsd);
}

TEST_CASE("wallet_earnings: absent wallet yields zeros") {
    ExchangeRateTable table;
    auto e = wallet_earnings("missing", {stats("minexmr", "W", "5")}, table);
    CHECK(e.total_xmr == 0);
    CHECK(e.total_usd == 0);
    CHECK(e.payments.empty());
}

TEST_CASE("campaign_earnings: wallets counted once") {
    ExchangeRateTable table;
    WalletEarningsIndex index;
    index["W1"] = wallet_earnings("W1", {stats("minexmr", "W1", "10")}, table);
    index["W2"] = wallet_earnings("W2", {stats("minexmr", "W2", "5")}, table);

    auto c = campaign_with(1, {"W1", "W2"});
    auto e = campaign_earnings(c, index);
    CHECK(e.total_xmr == 15 * kPiconeroPerXmr);

    auto empty = campaign_earnings(campaign_with(2, {}), index);
    CHECK(empty.total_xmr == 0);
    CHECK(empty.total_usd == 0);
}

TEST_CASE("property: additivity and monotonicity of earnings") {
    auto rng = testenv::rng(50);
    ExchangeRateTable table = rates_with({{"2018-01-01", "120.5"}, {"2018-06-01", "81.25"}});
    for (int round = 0; round < 30; ++round) {
        std::vector<std::pair<std::string, std::string>> part1, part2;
        auto day = [&](int i) { return i % 2 ? std::string("2018-01-01") : std::string("2018-06-01"); };
        int n1 = 1 + static_cast<int>(rng() % 6), n2 = 1 + static_cast<int>(rng() % 6);
        Piconero sum1 = 0, sum2 = 0;
        for (int i = 0; i < n1; ++i) {
            std::string amt = std::to_string(1 + rng() % 5) + "." + std::to_string(rng() % 10);
            part1.push_back({day(i) + "T0" + std::to_string(i) + ":00:00", amt});
            sum1 += *parse_xmr(amt);
        }
        for (int i = 0; i < n2; ++i) {
            std::string amt = std::to_string(1 + rng() % 5) + "." + std::to_string(rng() % 10);
            part2.push_back({day(i) + "T1" + std::to_string(i) + ":00:00", amt});
            sum2 += *parse_xmr(amt);
        }
        auto a = wallet_earnings("W", {stats("p1", "W", format_xmr(sum1), part1)}, table);
        auto b = wallet_earnings("W", {stats("p2", "W", format_xmr(sum2), part2)}, table);
        auto merged = wallet_earnings("W",
                                      {stats("p1", "W", format_xmr(sum1), part1),
                                       stats("p2", "W", format_xmr(sum2), part2)},
                                      table);
        CHECK(merged.total_xmr == a.total_xmr + b.total_xmr);
        CHECK(merged.total_usd == a.total_usd + b.total_usd);
        CHECK(merged.total_usd >= a.total_usd);  // adding payments never decreases
    }
}

TEST_CASE("re-running earnings is bit-identical") {
    auto rng = testenv::rng(51);
    ExchangeRateTable table = rates_with({{"2018-01-01", "33.333333"}});
    std::vector<PoolWalletStats> snapshots;
    for (int i = 0; i < 20; ++i) {
        snapshots.push_back(stats("pool" + std::to_string(rng() % 3), "W",
                                  std::to_string(rng() % 100) + ".25",
                                  {{"2018-01-01", std::to_string(1 + rng() % 9) + ".125"}}));
    }
    auto a = wallet_earnings("W", snapshots, table);
    auto b = wallet_earnings("W", snapshots, table);
    CHECK(a.total_xmr == b.total_xmr);
    CHECK(a.total_usd == b.total_usd);
    CHECK(a.payments.size() == b.payments.size());
}

// ---------------------------------------------------------------------------
// Activity profiles and PoW survival

TEST_CASE("activity_profile: survival flags use the strict-after rule") {
    std::map<std::string, const SampleRecord*> no_records;
    CampaignEarnings e;
    e.last_payment = parse_timestamp("2018-11-01");
    auto profile = activity_profile(campaign_with(1, {}), no_records, e);
    REQUIRE(profile.survived_pow.size() == 3);
    CHECK(profile.survived_pow[0].second);   // after 2018-04-06
    CHECK(profile.survived_pow[1].second);   // after 2018-10-18
    CHECK(!profile.survived_pow[2].second);  // not after 2019-03-09
}

TEST_CASE("activity_profile: no payments means no survival") {
    std::map<std::string, const SampleRecord*> no_records;
    auto profile = activity_profile(campaign_with(1, {}), no_records, CampaignEarnings{});
    for (const auto& [date, survived] : profile.survived_pow) CHECK(!survived);
    CHECK(profile.years_active == 0);
    CHECK(!profile.start.has_value());
}

TEST_CASE("activity_profile: years active and start date") {
    SampleRecord r1, r2;
    r1.sha256 = std::string(64, 'a');
    r1.first_seen = Date{2014, 8, 30};
    r2.sha256 = std::string(64, 'b');  // first_seen unknown: ignored
    std::map<std::string, const SampleRecord*> records{{r1.sha256, &r1}, {r2.sha256, &r2}};

    CampaignEarnings e;
    e.last_payment = parse_timestamp("2019-04-01");
    auto profile = activity_profile(campaign_with(1, {}, {r1.sha256, r2.sha256}), records, e);
    CHECK(profile.start == Date{2014, 8, 30});
    CHECK(profile.years_active == 4);
    for (const auto& [date, survived] : profile.survived_pow) CHECK(survived);
}

TEST_CASE("activity_profile: last share counts for survival") {
    std::map<std::string, const SampleRecord*> no_records;
    CampaignEarnings e;
    e.last_payment = parse_timestamp("2018-01-01");
    e.last_share = parse_timestamp("2019-03-10");
    auto profile = activity_profile(campaign_with(1, {}), no_records, e);
    CHECK(profile.survived_pow[2].second);  // share after the last PoW change
}

// ---------------------------------------------------------------------------
// Pool popularity

TEST_CASE("pool_popularity: restricted to illicit wallets") {
    ExchangeRateTable table;
    std::vector<PoolWalletStats> snapshots = {
        stats("minexmr", "W1", "10"),
        stats("minexmr", "W2", "5"),
        stats("crypto-pool", "W1", "7"),
        stats("minexmr", "benign", "100"),
    };
    auto pools = pool_popularity(snapshots, {"W1", "W2"}, table);
    REQUIRE(pools.size() == 2);
    CHECK(pools[0].pool == "minexmr");
    CHECK(pools[0].xmr_mined == 15 * kPiconeroPerXmr);
    CHECK(pools[0].wallet_count == 2);
    CHECK(pools[1].pool == "crypto-pool");
    CHECK(pools[1].wallet_count == 1);  // one wallet active in both pools counts in each

    // pools with snapshots but no illicit wallets render as zero rows
    auto none = pool_popularity(snapshots, {"other"}, table);
    REQUIRE(none.size() == 2);
    for (const auto& p : none) {
        CHECK(p.xmr_mined == 0);
        CHECK(p.wallet_count == 0);
        CHECK(p.usd == 0);
    }
}

TEST_CASE("pool_popularity: zero-activity wallets are not counted") {
    ExchangeRateTable table;
    auto idle = stats("minexmr", "W1", "0");
    auto pools = pool_popularity({idle}, {"W1"}, table);
    REQUIRE(pools.size() == 1);
    CHECK(pools[0].wallet_count == 0);
    CHECK(pools[0].xmr_mined == 0);
}

// ---------------------------------------------------------------------------
// Report tables

namespace {

CampaignReport report_with(uint32_t id, const std::string& xmr, bool cname = false) {
    CampaignReport r;
    r.id = id;
    r.xmr = *parse_xmr(xmr);
    r.annotations.cname_usage = cname;
    return r;
}

}  // namespace

TEST_CASE("campaign_earnings_csv: sorted by xmr, tie-break by id") {
    std::vector<CampaignReport> reports = {report_with(3, "5"), report_with(1, "10"),
                                           report_with(2, "10")};
    auto csv = campaign_earnings_csv(reports);
    auto lines = split(csv, '\n');
    REQUIRE(lines.size() >= 4);
    CHECK(lines[0] == "campaign_id,samples,wallets,start,end,xmr,usd,active");
    CHECK(lines[1].substr(0, 2) == "1,");
    CHECK(lines[2].substr(0, 2) == "2,");
    CHECK(lines[3].substr(0, 2) == "3,");
}

TEST_CASE("bucket_summary: single >10k campaign with CNAMEs") {
    std::vector<CampaignReport> reports = {report_with(1, "20000", true)};
    auto s = bucket_summary(reports);
    CHECK(s.campaign_counts[3] == 1);
    auto csv = bucket_summary_csv(s);
    CHECK(csv.find("CNAMEs,0.0%,0.0%,0.0%,100.0%,100.0%") != std::string::npos);
}

TEST_CASE("bucket_summary: empty campaign set renders zero counts") {
    auto s = bucket_summary({});
    for (auto c : s.campaign_counts) CHECK(c == 0);
    auto csv = bucket_summary_csv(s);
    CHECK(csv.find("#Campaigns,0,0,0,0,0") != std::string::npos);
}

TEST_CASE("bucket boundaries") {
    CHECK(profit_bucket(*parse_xmr("99.999")) == 0);
    CHECK(profit_bucket(*parse_xmr("100")) == 1);
    CHECK(profit_bucket(*parse_xmr("999.999999")) == 1);
    CHECK(profit_bucket(*parse_xmr("1000")) == 2);
    CHECK(profit_bucket(*parse_xmr("10000")) == 3);
}

TEST_CASE("packer histogram replicates published counts") {
    // Label distribution as reported for the full corpus; the CSV view
    // must carry the counts through exactly.
    PackerHistogram table7 = {
        {"UPX", 328493}, {"NSIS", 17464},   {"maxorder", 5988}, {"SFX", 3928},
        {"INNO", 2423},  {"eval", 2032},    {"docwrite", 1490}, {"ARJ", 858},
        {"CAB", 721},    {"Enigma", 710},   {"Others", 4019},   {"Not packed", 862712},
    };
    auto csv = packer_histogram_csv(table7);
    auto lines = split(csv, '\n');
    CHECK(lines[1] == "UPX,328493");
    CHECK(csv.find("Not packed,862712") != std::string::npos);
    // counting path: histogram from records
    std::vector<SampleRecord> samples(5);
    samples[0].packer = "UPX";
    samples[1].packer = "UPX";
    samples[2].packer = "NSIS";
    auto h = packer_histogram(samples);
    CHECK(h["UPX"] == 2);
    CHECK(h["NSIS"] == 1);
    CHECK(h["Not packed"] == 2);
}
