// Acceptance suite: fixture round-trips on published corpus-level
// numbers plus property checks, one pass/fail line per criterion.
// Returns nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <mineralize/mineralize.hpp>

#include "support/corpus_gen.hpp"
#include "support/oracles.hpp"
#include "support/reference_ctph.hpp"

using namespace mineralize;

namespace {

struct CriterionFailure {
    std::string message;
};

void require(bool ok, const std::string& message) {
    if (!ok) throw CriterionFailure{message};
}

uint64_t g_seed = 20190401;

// --------------------------------------------------------------------------
// Shared fixture helpers

std::string fixture_sha(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%08x", i);
    return std::string(56, '0') + buf;
}

// Structurally valid XMR wallet, unique per index.
std::string fixture_wallet(int i) {
    static constexpr char alphabet[] = "123456789ABC";
    std::string suffix(6, '1');
    for (int pos = 5; pos >= 0; --pos) {
        suffix[pos] = alphabet[i % 12];
        i /= 12;
    }
    return "4" + std::string(88, 'A') + suffix;
}

PoolWalletStats fixture_stats(const std::string& pool, const std::string& wallet,
                              Piconero total_paid) {
    PoolWalletStats s;
    s.pool = pool;
    s.wallet = wallet;
    s.total_paid = total_paid;
    s.num_payments = total_paid > 0 ? 1 : 0;
    s.fetched_at = *parse_timestamp("2019-04-01T00:00:00Z");
    return s;
}

SampleRecord fixture_miner(int id, const std::string& wallet) {
    SampleRecord r;
    r.sha256 = fixture_sha(id);
    r.positives = 12;
    r.magic = std::string("MZ\x90", 3) + std::string(1, '\0');
    r.login_user = wallet;
    r.pool_url = "mine.crypto-pool.fr:3333";
    return r;
}

KnownPoolDirectory fixture_pools() {
    KnownPoolDirectory dir;
    dir.add_pool("crypto-pool", {"crypto-pool.fr"}, false);
    dir.add_pool("minexmr", {"minexmr.com"}, false);
    dir.add_pool("dwarfpool", {"dwarfpool.com"}, false);
    return dir;
}

// --------------------------------------------------------------------------
// 1. Table 5 round-trip

void criterion_table5() {
    struct Row {
        const char* pool;
        int64_t xmr;
        int wallets;
    };
    // published per-pool totals: XMR mined by malware and wallet counts
    const std::vector<Row> rows = {
        {"crypto-pool", 429393, 487}, {"dwarfpool", 168796, 461}, {"minexmr", 74396, 608},
        {"poolto", 29044, 38},        {"prohash", 12833, 54},     {"nanopool", 5205, 375},
        {"monerohash", 4046, 217},    {"ppxxmr", 3860, 185},      {"supportxmr", 3217, 241},
    };
    std::vector<PoolWalletStats> snapshots;
    std::set<std::string> illicit;
    int wallet_id = 0;
    for (const auto& row : rows) {
        Piconero remaining = row.xmr * kPiconeroPerXmr;
        for (int w = 0; w < row.wallets; ++w) {
            Piconero amount = (w == row.wallets - 1) ? remaining : kPiconeroPerXmr;
            remaining -= amount;
            std::string wallet = fixture_wallet(wallet_id++) ;
            illicit.insert(wallet);
            snapshots.push_back(fixture_stats(row.pool, wallet, amount));
        }
    }
    ExchangeRateTable rates;
    auto popularity = pool_popularity(snapshots, illicit, rates);
    require(popularity.size() == rows.size(), "pool count mismatch");

    auto find = [&](const std::string& pool) -> const PoolPopularity& {
        for (const auto& p : popularity)
            if (p.pool == pool) return p;
        throw CriterionFailure{"missing pool " + pool};
    };
    require(find("crypto-pool").xmr_mined == 429393 * kPiconeroPerXmr,
            "crypto-pool XMR != 429,393");
    require(find("crypto-pool").wallet_count == 487, "crypto-pool wallets != 487");
    require(find("minexmr").xmr_mined == 74396 * kPiconeroPerXmr, "minexmr XMR != 74,396");
    require(find("minexmr").wallet_count == 608, "minexmr wallets != 608");
    require(popularity[0].pool == "crypto-pool", "ranking should start at crypto-pool");
}

// --------------------------------------------------------------------------
// 2. Table 6 round-trip

void criterion_table6() {
    struct Row {
        int samples;
        int wallets;
        int64_t xmr;
    };
    const std::vector<Row> top10 = {
        {66, 7, 163756}, {20, 2, 59620}, {134, 4, 42069}, {59, 1, 32886},  {106, 2, 27985},
        {91, 14, 27086}, {6, 1, 23300},  {9, 1, 22520},   {46, 1, 21389},  {25, 1, 20694},
    };
    const int total_campaigns = 2235;
    const int64_t total_xmr = 740927;

    int64_t top_sum = 0;
    for (const auto& r : top10) top_sum += r.xmr;
    require(top_sum == 441305, "top-10 sum should be 441,305");
    int filler_count = total_campaigns - static_cast<int>(top10.size());
    int64_t filler_total = total_xmr - top_sum;  // 299,622
    int64_t filler_each = filler_total / filler_count;
    int64_t filler_last = filler_total - filler_each * (filler_count - 1);

    std::vector<SampleRecord> corpus;
    std::vector<PoolWalletStats> snapshots;
    int sample_id = 0, wallet_id = 0;

    auto plant = [&](int samples, int wallets, int64_t xmr) {
        std::vector<std::string> ws;
        for (int w = 0; w < wallets; ++w) ws.push_back(fixture_wallet(wallet_id++));
        Piconero remaining = xmr * kPiconeroPerXmr;
        for (int w = 0; w < wallets; ++w) {
            Piconero amount = (w == wallets - 1) ? remaining : kPiconeroPerXmr;
            remaining -= amount;
            snapshots.push_back(fixture_stats("crypto-pool", ws[w], amount));
        }
        for (int s = 0; s < samples; ++s) {
            auto rec = fixture_miner(sample_id++, ws[s % wallets]);
            if (s < wallets - 1)  // bridge consecutive wallets into one component
                rec.cmdlines.push_back("xmrig -u " + ws[s + 1]);
            corpus.push_back(std::move(rec));
        }
    };

    for (const auto& r : top10) plant(r.samples, r.wallets, r.xmr);
    for (int f = 0; f < filler_count; ++f)
        plant(1, 1, f + 1 == filler_count ? filler_last : filler_each);

    auto pools = fixture_pools();
    AliasIndex aliases;
    IdentifierClassifier classifier;
    SampleExtractor extractor(classifier, pools, aliases);
    std::vector<ExtractedSample> extracted;
    extracted.reserve(corpus.size());
    for (const auto& r : corpus) extracted.push_back(extractor.extract(r));
    auto gate = run_gate(std::move(extracted), GateConfig{});
    require(gate.rejected.empty(), "fixture samples must pass the gate");

    auto graph = build_graph(gate.miners, gate.ancillaries, {});
    auto campaigns = connected_components(graph);
    require(static_cast<int>(campaigns.size()) == total_campaigns,
            "expected 2,235 campaigns, got " + std::to_string(campaigns.size()));

    std::set<std::string> wallets;
    for (const auto& c : campaigns) wallets.insert(c.identifiers.begin(), c.identifiers.end());
    ExchangeRateTable rates;
    auto index = build_wallet_earnings_index(wallets, snapshots, rates);

    std::map<std::string, const SampleRecord*> records;
    for (const auto& m : gate.miners) records[m.rec.sha256] = &m.rec;

    std::vector<CampaignReport> reports;
    Piconero sum = 0;
    for (const auto& c : campaigns) {
        auto earnings = campaign_earnings(c, index);
        auto activity = activity_profile(c, records, earnings);
        CampaignAnnotations a;
        a.campaign_id = c.id;
        reports.push_back(make_campaign_report(c, earnings, activity, a));
        sum += earnings.total_xmr;
    }
    require(sum == total_xmr * kPiconeroPerXmr,
            "ALL total != 740,927 XMR exactly (got " + format_xmr(sum) + ")");

    auto csv = campaign_earnings_csv(reports);
    std::istringstream in(csv);
    std::string header, top_row;
    std::getline(in, header);
    std::getline(in, top_row);
    auto fields = split(top_row, ',');
    require(fields.size() == 8, "csv row shape");
    require(fields[1] == "66", "top campaign samples != 66");
    require(fields[2] == "7", "top campaign wallets != 7");
    require(fields[5] == "163756", "top campaign XMR != 163,756");
}

// --------------------------------------------------------------------------
// 3. Campaign recovery with ARI over seeded runs

void criterion_recovery() {
    std::mt19937_64 rng(g_seed);
    const int ks[] = {5, 12, 40};
    for (int run = 0; run < 50; ++run) {
        int k = ks[run % 3];
        int base = std::max(200, k * 12);
        int n = base + static_cast<int>(rng() % static_cast<uint64_t>(5000 - base + 1));
        corpusgen::GeneratorOptions opt;
        opt.campaigns = k;
        opt.samples = n;
        opt.inject_donation = true;  // shared white-listed wallet everywhere
        auto corpus = corpusgen::generate(g_seed + run, opt);
        auto pipeline = corpusgen::run_pipeline(corpus);

        require(static_cast<int>(pipeline.campaigns.size()) == k,
                "run " + std::to_string(run) + ": recovered " +
                    std::to_string(pipeline.campaigns.size()) + " components, planted " +
                    std::to_string(k));

        std::vector<int> truth, recovered;
        for (const auto& c : pipeline.campaigns) {
            for (const auto& sha : c.samples) {
                auto it = corpus.truth.find(sha);
                require(it != corpus.truth.end(), "sample missing from ground truth");
                truth.push_back(it->second);
                recovered.push_back(static_cast<int>(c.id));
            }
        }
        require(truth.size() == corpus.records.size(), "every sample must be clustered");
        double ari = oracles::adjusted_rand_index(truth, recovered);
        require(ari == 1.0, "run " + std::to_string(run) + ": ARI " + std::to_string(ari));
    }
}

// --------------------------------------------------------------------------
// 4. Donation exclusion

void criterion_donation_exclusion() {
    std::mt19937_64 rng(g_seed + 100);
    for (int run = 0; run < 10; ++run) {
        corpusgen::GeneratorOptions plain;
        plain.campaigns = 3 + static_cast<int>(rng() % 6);
        plain.samples = 200 + static_cast<int>(rng() % 400);
        plain.inject_donation = false;
        corpusgen::GeneratorOptions injected = plain;
        injected.inject_donation = true;

        uint64_t seed = g_seed + 200 + run;
        auto without = corpusgen::run_pipeline(corpusgen::generate(seed, plain));
        auto with = corpusgen::run_pipeline(corpusgen::generate(seed, injected));

        auto partition = [](const std::vector<Campaign>& campaigns) {
            std::set<std::vector<std::string>> parts;
            for (const auto& c : campaigns) parts.insert(c.samples);
            return parts;
        };
        require(partition(without.campaigns) == partition(with.campaigns),
                "donation wallet changed a component boundary");

        auto donation = corpusgen::generate(seed, injected).donation_wallet;
        for (const auto& c : with.campaigns)
            for (const auto& id : c.identifiers)
                require(id != donation, "donation wallet appeared as an identifier node");
    }
}

// --------------------------------------------------------------------------
// 5. Union-find vs BFS oracle

void criterion_graph_oracle() {
    std::mt19937_64 rng(g_seed + 300);
    for (int run = 0; run < 1000; ++run) {
        std::size_t n = 2 + rng() % 10000;
        std::size_t m = rng() % 50001;
        std::vector<std::pair<uint32_t, uint32_t>> edges;
        edges.reserve(m);
        UnionFind uf(n);
        for (std::size_t e = 0; e < m; ++e) {
            uint32_t a = static_cast<uint32_t>(rng() % n);
            uint32_t b = static_cast<uint32_t>(rng() % n);
            edges.push_back({a, b});
            uf.unite(a, b);
        }
        auto bfs = oracles::bfs_components(n, edges);
        std::map<std::size_t, std::size_t> root_to_bfs;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t root = uf.find(i);
            auto [it, inserted] = root_to_bfs.try_emplace(root, bfs[i]);
            require(it->second == bfs[i], "union-find and BFS disagree");
        }
        std::set<std::size_t> bfs_labels(bfs.begin(), bfs.end());
        require(root_to_bfs.size() == bfs_labels.size(), "component counts differ");

        // full component assembly on a subset of the runs
        if (run % 100 == 0) {
            CampaignGraph g;
            for (std::size_t i = 0; i < n; ++i)
                g.add_node(NodeKind::sample, std::to_string(1000000 + i));
            for (const auto& [a, b] : edges) g.add_edge(a, b, EdgeFeature::ancestor);
            auto campaigns = connected_components(g);
            require(campaigns.size() == bfs_labels.size(), "assembled component count differs");
            std::size_t covered = 0;
            for (const auto& c : campaigns) covered += c.node_ids.size();
            require(covered == n, "assembled components must partition the nodes");
        }
    }
}

// --------------------------------------------------------------------------
// 6. CTPH conformance

void criterion_ctph() {
    std::mt19937_64 rng(g_seed + 400);
    auto random_blob = [&](std::size_t size) {
        std::vector<unsigned char> blob(size);
        for (auto& b : blob) b = static_cast<unsigned char>(rng() & 0xFF);
        return blob;
    };
    auto view = [](const std::vector<unsigned char>& v) {
        return std::string_view(reinterpret_cast<const char*>(v.data()), v.size());
    };

    for (int file = 0; file < 100; ++file) {
        std::size_t size = 1 + rng() % (64 * 1024);
        auto blob = random_blob(size);
        if (file % 10 == 0) std::fill(blob.begin(), blob.end(), static_cast<unsigned char>(file));
        auto mine = ctph_digest(view(blob));
        auto ref = refctph::digest(blob);
        require(mine.block_size == ref.block_size && mine.sig1 == ref.sig1 &&
                    mine.sig2 == ref.sig2,
                "digest mismatch vs reference on file " + std::to_string(file));
        require(ctph_distance(mine, mine) == 0.0, "distance(x,x) != 0");
    }

    int close = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        auto blob = random_blob(64 * 1024);
        auto grown = blob;
        auto extra = random_blob(blob.size() / 200);
        grown.insert(grown.end(), extra.begin(), extra.end());
        if (ctph_distance(ctph_digest(view(blob)), ctph_digest(view(grown))) < 0.1) ++close;
    }
    std::cout << "      (ctph perturbation: " << close << "/" << trials
              << " trials below distance 0.1)\n";
    require(close >= 90, "perturbation rate below 90%: " + std::to_string(close));
}

// --------------------------------------------------------------------------
// 7. Entropy checks

void criterion_entropy() {
    require(shannon_entropy(std::string(4096, '\0')) == 0.0, "all-zero entropy != 0");

    std::string all_bytes;
    for (int i = 0; i < 256; ++i) all_bytes.push_back(static_cast<char>(i));
    require(shannon_entropy(all_bytes) == 8.0, "256-distinct entropy != 8");

    std::string two(1000, 'a');
    two.append(1000, 'b');
    require(shannon_entropy(two) == 1.0, "two-symbol entropy != 1");

    std::mt19937_64 rng(g_seed + 500);
    std::string big(1 << 20, '\0');
    for (auto& c : big) c = static_cast<char>(rng() & 0xFF);
    double uniform = shannon_entropy(big);
    require(uniform >= 7.99 && uniform <= 8.0, "1 MiB uniform entropy out of [7.99, 8]");

    require(!classify_obfuscation(std::nullopt, 7.5).obfuscated, "entropy 7.5 must not flag");
    require(classify_obfuscation(std::nullopt, 7.5 + 1e-6).obfuscated,
            "entropy 7.5+1e-6 must flag");
}

// --------------------------------------------------------------------------
// 8. Profit conservation

void criterion_profit_conservation() {
    std::mt19937_64 rng(g_seed + 600);
    for (int run = 0; run < 100; ++run) {
        int wallet_count = 2 + static_cast<int>(rng() % 30);
        int campaign_count = 1 + static_cast<int>(rng() % wallet_count);

        ExchangeRateTable rates;
        rates.entries[*parse_date("2018-02-03")] = *parse_usd_rate("123.45");

        std::vector<PoolWalletStats> snapshots;
        std::set<std::string> wallets;
        for (int w = 0; w < wallet_count; ++w) {
            std::string wallet = fixture_wallet(w);
            wallets.insert(wallet);
            Piconero dated = static_cast<Piconero>(rng() % 1000000) * 1000000;  // exact picos
            Piconero total = dated + static_cast<Piconero>(rng() % 1000000) * 1000000;
            auto s = fixture_stats("crypto-pool", wallet, total);
            if (dated > 0) s.payments.push_back({*parse_timestamp("2018-02-03T12:00:00"), dated});
            snapshots.push_back(std::move(s));
        }
        auto index = build_wallet_earnings_index(wallets, snapshots, rates);

        // random partition of wallets into campaigns
        std::vector<Campaign> campaigns(campaign_count);
        for (int c = 0; c < campaign_count; ++c) campaigns[c].id = static_cast<uint32_t>(c + 1);
        int w = 0;
        for (const auto& wallet : wallets)
            campaigns[w++ % campaign_count].identifiers.push_back(wallet);

        Piconero wallet_sum = 0;
        for (const auto& [wallet, e] : index) wallet_sum += e.total_xmr;
        Piconero campaign_sum = 0;
        for (const auto& c : campaigns) campaign_sum += campaign_earnings(c, index).total_xmr;
        require(campaign_sum == wallet_sum, "campaign/wallet XMR sums diverge");
    }

    // dated payments use the dated rate; undated use 54
    ExchangeRateTable rates;
    rates.entries[*parse_date("2017-01-01")] = 10 * kMicroPerUsd;
    auto dated = fixture_stats("crypto-pool", "W", 2 * kPiconeroPerXmr);
    dated.payments.push_back({*parse_timestamp("2017-01-01"), 2 * kPiconeroPerXmr});
    require(wallet_earnings("W", {dated}, rates).total_usd == 20 * kMicroPerUsd,
            "dated payment must use that date's rate");
    auto undated = fixture_stats("crypto-pool", "W", kPiconeroPerXmr);
    undated.payments.push_back({*parse_timestamp("2016-06-06"), kPiconeroPerXmr});
    require(wallet_earnings("W", {undated}, rates).total_usd == 54 * kMicroPerUsd,
            "undated payment must fall back to 54 USD/XMR");
}

// --------------------------------------------------------------------------
// 9. PoW survival boundaries

void criterion_pow_survival() {
    struct Case {
        const char* last_payment;  // nullptr = no payments
        bool apr, oct, mar;
    };
    const std::vector<Case> cases = {
        {nullptr, false, false, false},      {"2018-01-01", false, false, false},
        {"2018-04-06", false, false, false}, {"2018-04-07", true, false, false},
        {"2018-10-18", true, false, false},  {"2018-10-19", true, true, false},
        {"2019-03-09", true, true, false},   {"2019-03-10", true, true, true},
    };
    std::map<std::string, const SampleRecord*> no_records;
    for (const auto& c : cases) {
        CampaignEarnings e;
        if (c.last_payment) e.last_payment = parse_timestamp(c.last_payment);
        Campaign campaign;
        campaign.id = 1;
        auto profile = activity_profile(campaign, no_records, e);
        require(profile.survived_pow.size() == 3, "expected three PoW dates");
        std::string tag = c.last_payment ? c.last_payment : "none";
        require(profile.survived_pow[0].second == c.apr, tag + ": Apr-18 flag wrong");
        require(profile.survived_pow[1].second == c.oct, tag + ": Oct-18 flag wrong");
        require(profile.survived_pow[2].second == c.mar, tag + ": Mar-19 flag wrong");
    }
}

// --------------------------------------------------------------------------
// 10. Sanity-gate illicit-wallet exception

void criterion_gate_exception() {
    auto pools = fixture_pools();
    AliasIndex aliases;
    IdentifierClassifier classifier;
    SampleExtractor extractor(classifier, pools, aliases);

    std::string wallet = fixture_wallet(7001);
    auto anchor = fixture_miner(1, wallet);
    anchor.positives = 15;
    auto low = fixture_miner(2, wallet);
    low.positives = 3;

    auto gate = [&](std::vector<SampleRecord> corpus) {
        std::vector<ExtractedSample> extracted;
        for (const auto& r : corpus) extracted.push_back(extractor.extract(r));
        return run_gate(std::move(extracted), GateConfig{});
    };

    auto kept = gate({anchor, low});
    require(kept.miners.size() == 2, "low-positive sample with illicit wallet must be retained");

    auto low_other = fixture_miner(2, fixture_wallet(7002));
    low_other.positives = 3;
    auto dropped = gate({anchor, low_other});
    require(dropped.miners.size() == 1, "unrelated low-positive sample must not be retained");
    require(dropped.rejected.size() == 1 &&
                dropped.rejected[0].reason == RejectReason::not_malware,
            "rejection reason must be not-malware");
}

// --------------------------------------------------------------------------
// 11. Freebuf fixture

void criterion_freebuf() {
    KnownPoolDirectory pools;
    pools.add_pool("minexmr", {"minexmr.com"}, false);
    pools.add_pool("crypto-pool", {"crypto-pool.fr"}, false);

    std::vector<DnsRecord> dns = {
        {"xt.freebuf.info", DnsRecordType::cname, "pool.minexmr.com",
         parse_timestamp("2016-06-01"), std::nullopt},
        {"x.alibuf.com", DnsRecordType::cname, "pool.minexmr.com", parse_timestamp("2016-06-01"),
         parse_timestamp("2017-06-01")},
        {"x.alibuf.com", DnsRecordType::cname, "mine.crypto-pool.fr",
         parse_timestamp("2017-07-01"), std::nullopt},
        {"xmr.honker.info", DnsRecordType::cname, "pool.minexmr.com",
         parse_timestamp("2016-06-01"), std::nullopt},
    };
    auto aliases = build_alias_index(dns, pools).index;
    require(resolve_alias("xt.freebuf.info", aliases).size() == 1 &&
                resolve_alias("xt.freebuf.info", aliases)[0].pool == "minexmr",
            "xt.freebuf.info must alias minexmr");
    require(resolve_alias("x.alibuf.com", aliases).size() == 2,
            "x.alibuf.com must alias two pools across time");

    IdentifierClassifier classifier;
    SampleExtractor extractor(classifier, pools, aliases);

    // three alias-anchored clusters chained through shared wallets
    // (freebuf {w0,w1,w2}, alibuf {w3,w0}, honker {w4,w3}), plus an
    // ancestor-linked tail bringing in w5 and w6 via w1
    std::vector<SampleRecord> corpus;
    auto wallet = [](int i) { return fixture_wallet(7100 + i); };
    const char* alias_hosts[] = {"xt.freebuf.info", "x.alibuf.com", "xmr.honker.info"};
    const std::vector<std::vector<int>> cluster_wallets = {{0, 1, 2}, {3, 0}, {4, 3}};
    int id = 0;
    for (int cluster = 0; cluster < 3; ++cluster) {
        for (int w : cluster_wallets[cluster]) {
            SampleRecord r;
            r.sha256 = fixture_sha(9000 + id++);
            r.positives = 14;
            r.magic = std::string("MZxx", 4);
            r.login_user = wallet(w);
            r.pool_url = std::string(alias_hosts[cluster]) + ":4444";
            corpus.push_back(std::move(r));
        }
    }
    std::string dropper_sha = fixture_sha(9900);
    const int tail_wallets[] = {5, 6, 1};
    for (int w : tail_wallets) {
        SampleRecord r;
        r.sha256 = fixture_sha(9100 + id++);
        r.positives = 14;
        r.magic = std::string("MZxx", 4);
        r.login_user = wallet(w);
        r.parents = {dropper_sha};
        r.pool_url = "pool.minexmr.com:4444";
        corpus.push_back(std::move(r));
    }

    std::vector<ExtractedSample> extracted;
    for (const auto& r : corpus) extracted.push_back(extractor.extract(r));
    auto gate = run_gate(std::move(extracted), GateConfig{});
    require(gate.miners.size() == corpus.size(), "fixture miners must pass the gate");

    auto graph = build_graph(gate.miners, gate.ancillaries, {});
    auto campaigns = connected_components(graph);
    require(campaigns.size() == 1,
            "freebuf fixture must form one campaign, got " + std::to_string(campaigns.size()));

    std::map<std::string, const ExtractedSample*> by_sha;
    for (const auto& m : gate.miners) by_sha[m.rec.sha256] = &m;
    auto flags = campaign_flags(campaigns[0], {}, {}, {}, by_sha);
    require(flags.cname_usage, "freebuf campaign must flag cname_usage");
    require(campaigns[0].identifiers.size() == 7, "freebuf fixture carries 7 wallets");
}

// --------------------------------------------------------------------------

struct Criterion {
    int number;
    const char* description;
    std::function<void()> run;
    double budget_seconds;  // 0 = no budget
};

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--seed" && i + 1 < argc) g_seed = std::strtoull(argv[i + 1], nullptr, 10);
        else if (arg.rfind("--seed=", 0) == 0) g_seed = std::strtoull(arg.c_str() + 7, nullptr, 10);
    }

    const std::vector<Criterion> criteria = {
        {1, "Table 5 round-trip (crypto-pool 429,393/487; minexmr 74,396/608)", criterion_table5, 1.0},
        {2, "Table 6 round-trip (top 163,756 XMR, 66/7; ALL 740,927 XMR)", criterion_table6, 1.0},
        {3, "campaign recovery: K in {5,12,40}, ARI 1.0 over 50 seeded runs", criterion_recovery, 30.0},
        {4, "donation exclusion preserves every component boundary", criterion_donation_exclusion, 0},
        {5, "union-find equals BFS labeling on 1,000 random graphs", criterion_graph_oracle, 20.0},
        {6, "CTPH conformance vs independent reference; append-perturbation rate", criterion_ctph, 0},
        {7, "entropy exact values and 7.5 strict-greater boundary", criterion_entropy, 0},
        {8, "profit conservation; dated and fallback rates", criterion_profit_conservation, 0},
        {9, "PoW survival strict-after flags on all boundaries", criterion_pow_survival, 0},
        {10, "sanity-gate illicit-wallet exception", criterion_gate_exception, 0},
        {11, "freebuf fixture: one campaign with cname_usage", criterion_freebuf, 0},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            c.run();
        } catch (const CriterionFailure& f) {
            error = f.message;
        } catch (const std::exception& e) {
            error = std::string("exception: ") + e.what();
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (error.empty() && c.budget_seconds > 0 && elapsed > c.budget_seconds) {
            error = "runtime " + std::to_string(elapsed) + "s exceeds " +
                    std::to_string(c.budget_seconds) + "s";
        }
        char timing[32];
        std::snprintf(timing, sizeof(timing), "%.2fs", elapsed);
        if (error.empty()) {
            std::cout << "PASS criterion " << c.number << " (" << timing << "): "
                      << c.description << "\n";
        } else {
            std::cout << "FAIL criterion " << c.number << " (" << timing << "): "
                      << c.description << " -- " << error << "\n";
            ++failures;
        }
    }
    if (failures == 0) std::cout << "all " << criteria.size() << " acceptance criteria passed\n";
    else std::cout << failures << " acceptance criteria FAILED\n";
    return failures == 0 ? 0 : 1;
}
