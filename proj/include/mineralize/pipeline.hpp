#pragma once

// Stage orchestration shared by the CLI. Stages communicate only
// through the documented files, so deleting an intermediate store and
// re-running reproduces it byte-identically:
//
//   extract    corpus.ndjson (+dns, configs)       -> extraction.ndjson
//   aggregate  extraction (+corpus, dns, snapshots) -> campaigns.ndjson, graph.dot
//   enrich     campaigns (+corpus, blobs, stock)    -> enrichment.ndjson, verdicts.ndjson
//   profit     campaigns (+snapshots, rates)        -> earnings.ndjson, campaign_earnings.csv
//   report     all of the above                     -> report.txt, campaign_buckets.csv,
//                                                      pool_popularity.csv, packer_counts.csv

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mineralize/campaign_graph.hpp"
#include "mineralize/corpus_io.hpp"
#include "mineralize/enrichment.hpp"
#include "mineralize/extract.hpp"
#include "mineralize/profit.hpp"
#include "mineralize/report.hpp"
#include "mineralize/sanity_gate.hpp"

namespace mineralize {

namespace fs = std::filesystem;

// Config directory layout; every file is optional and falls back to a
// built-in default.
struct PipelineConfig {
    KnownPoolDirectory pools;
    DonationWhitelist donations;
    std::vector<CurrencyRule> currency_rules = default_currency_rules();
    GateConfig gate;
    PublicRepoMatcher public_repos;
    std::vector<IoCSet> iocs;
    std::vector<Date> pow_dates = default_pow_dates();
    MicroUsd fallback_rate = 54 * kMicroPerUsd;

    static PipelineConfig load(const fs::path& dir) {
        PipelineConfig cfg;
        if (fs::exists(dir / "known_pools.conf"))
            cfg.pools = load_known_pools(dir / "known_pools.conf").directory;
        if (fs::exists(dir / "donation_wallets.txt"))
            cfg.donations = load_line_set(dir / "donation_wallets.txt");
        if (fs::exists(dir / "currencies.rules")) {
            auto rules = load_currency_rules(dir / "currencies.rules");
            if (!rules.rules.empty()) cfg.currency_rules = std::move(rules.rules);
        }
        if (fs::exists(dir / "stock_whitelist.txt"))
            cfg.gate.stock_whitelist = load_line_set(dir / "stock_whitelist.txt");
        if (fs::exists(dir / "miner_tokens.txt")) {
            auto tokens = load_line_set(dir / "miner_tokens.txt");
            if (!tokens.empty()) {
                cfg.gate.miner_label_tokens.clear();
                for (const auto& t : tokens) cfg.gate.miner_label_tokens.insert(to_lower(t));
            }
        }
        std::set<std::string> repo_patterns{"github.com",    "*.amazonaws.com", "dropbox.com",
                                            "*.google.com",  "4sync.com",       "bitbucket.org"};
        if (fs::exists(dir / "public_repos.txt")) repo_patterns = load_line_set(dir / "public_repos.txt");
        cfg.public_repos = PublicRepoMatcher::from_patterns(repo_patterns);
        cfg.iocs = load_ioc_dir(dir / "iocs");
        if (fs::exists(dir / "pow_dates.txt")) {
            std::vector<Date> dates;
            for (const auto& line : load_line_set(dir / "pow_dates.txt"))
                if (auto d = parse_date(line)) dates.push_back(*d);
            if (!dates.empty()) {
                std::sort(dates.begin(), dates.end());
                cfg.pow_dates = std::move(dates);
            }
        }
        return cfg;
    }
};

namespace detail {

inline void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    out << content;
}

// Deterministic parallel map: results land by index regardless of the
// number of workers.
template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& inputs, unsigned jobs, Fn fn) {
    using Out = decltype(fn(inputs.front()));
    std::vector<Out> outputs(inputs.size());
    if (jobs <= 1 || inputs.size() < 2) {
        for (std::size_t i = 0; i < inputs.size(); ++i) outputs[i] = fn(inputs[i]);
        return outputs;
    }
    std::vector<std::thread> workers;
    std::size_t chunk = (inputs.size() + jobs - 1) / jobs;
    for (unsigned w = 0; w < jobs; ++w) {
        std::size_t begin = w * chunk, end = std::min(inputs.size(), begin + chunk);
        if (begin >= end) break;
        workers.emplace_back([&, begin, end] {
            for (std::size_t i = begin; i < end; ++i) outputs[i] = fn(inputs[i]);
        });
    }
    for (auto& t : workers) t.join();
    return outputs;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Extraction store (extraction.ndjson)

inline json extracted_to_json(const ExtractedSample& s,
                              std::optional<RejectReason> reject = std::nullopt) {
    json j;
    j["sha256"] = s.rec.sha256;
    j["type"] = reject ? "rejected" : to_string(s.rec.sample_type);
    if (reject) j["reject_reason"] = to_string(*reject);
    if (!s.identifiers.empty()) {
        json ids = json::array();
        for (const auto& id : s.identifiers) {
            json e{{"raw", id.raw}, {"kind", to_string(id.kind)}};
            if (id.currency) e["currency"] = to_string(*id.currency);
            if (id.is_donation) e["donation"] = true;
            ids.push_back(e);
        }
        j["identifiers"] = ids;
    }
    if (!s.logins.empty()) {
        json logins = json::array();
        for (const auto& l : s.logins) {
            json e{{"login", l.login}, {"method", l.method}};
            if (l.pass) e["pass"] = *l.pass;
            if (l.agent) e["agent"] = *l.agent;
            logins.push_back(e);
        }
        j["stratum_logins"] = logins;
    }
    if (!s.observations.empty()) {
        json obs = json::array();
        for (const auto& o : s.observations) {
            json e{{"endpoint", o.endpoint.str()}, {"via", to_string(o.via)}};
            if (o.resolved_pool) e["pool"] = *o.resolved_pool;
            obs.push_back(e);
        }
        j["pool_observations"] = obs;
    }
    if (!s.alias_domains.empty()) j["alias_domains"] = s.alias_domains;
    if (!s.unknown_endpoints.empty()) {
        json eps = json::array();
        for (const auto& e : s.unknown_endpoints) eps.push_back(e.str());
        j["unknown_endpoints"] = eps;
    }
    return j;
}

struct ExtractStageResult {
    GateResult gate;
    Diagnostics diagnostics;
    std::size_t corpus_size = 0;
};

// Loads the corpus, extracts evidence from every sample and runs the
// sanity gate. Writes extraction.ndjson when an output dir is given.
inline ExtractStageResult run_extract_stage(const fs::path& corpus_path,
                                            const std::optional<fs::path>& dns_path,
                                            const PipelineConfig& cfg,
                                            const std::optional<fs::path>& out_dir,
                                            unsigned jobs = 1) {
    ExtractStageResult result;
    auto corpus = load_corpus(corpus_path);
    result.diagnostics = corpus.diagnostics;
    result.corpus_size = corpus.records.size();

    AliasIndex aliases;
    if (dns_path && fs::exists(*dns_path)) {
        auto dns = load_dns(*dns_path);
        auto built = build_alias_index(dns.records, cfg.pools);
        aliases = std::move(built.index);
    }

    IdentifierClassifier classifier(cfg.currency_rules, cfg.donations);
    SampleExtractor extractor(classifier, cfg.pools, aliases);
    auto extracted = detail::parallel_map(corpus.records, jobs, [&](const SampleRecord& rec) {
        return extractor.extract(rec);
    });
    result.gate = run_gate(std::move(extracted), cfg.gate);

    if (out_dir) {
        std::string ndjson;
        for (const auto& m : result.gate.miners) ndjson += extracted_to_json(m).dump() + "\n";
        for (const auto& a : result.gate.ancillaries) ndjson += extracted_to_json(a).dump() + "\n";
        for (const auto& r : result.gate.rejected)
            ndjson += extracted_to_json(r.sample, r.reason).dump() + "\n";
        detail::write_file(*out_dir / "extraction.ndjson", ndjson);
    }
    return result;
}

// Reads extraction.ndjson back, joining each line with its corpus record
// (graph construction needs lineage, URLs and DNS data that live on the
// record). Store lines whose sha is missing from the corpus are skipped
// with a diagnostic.
inline ExtractStageResult load_extraction_store(const fs::path& path,
                                                const std::vector<SampleRecord>& corpus,
                                                const GateConfig& cfg = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read extraction store " + path.string());

    std::map<std::string, const SampleRecord*> by_sha;
    for (const auto& r : corpus) by_sha[r.sha256] = &r;

    ExtractStageResult result;
    result.corpus_size = corpus.size();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        try {
            json j = json::parse(line);
            std::string sha = j.at("sha256").get<std::string>();
            std::string type = j.at("type").get<std::string>();
            auto it = by_sha.find(sha);
            if (it == by_sha.end()) throw std::runtime_error("sha absent from corpus: " + sha);
            ExtractedSample s;
            s.rec = *it->second;
            if (type != "rejected") {
                auto st = sample_type_from_string(type);
                if (!st) throw std::runtime_error("invalid type " + type);
                s.rec.sample_type = *st;
            }
            if (j.contains("identifiers")) {
                for (const auto& e : j.at("identifiers")) {
                    MiningIdentifier id;
                    id.raw = e.at("raw").get<std::string>();
                    auto kind = identifier_kind_from_string(e.at("kind").get<std::string>());
                    if (!kind) throw std::runtime_error("invalid identifier kind");
                    id.kind = *kind;
                    if (e.contains("currency"))
                        id.currency = currency_from_string(e.at("currency").get<std::string>());
                    id.is_donation = e.value("donation", false);
                    s.identifiers.push_back(std::move(id));
                }
            }
            if (j.contains("stratum_logins")) {
                for (const auto& e : j.at("stratum_logins")) {
                    StratumLogin l;
                    l.login = e.at("login").get<std::string>();
                    l.method = e.at("method").get<std::string>();
                    if (e.contains("pass")) l.pass = e.at("pass").get<std::string>();
                    if (e.contains("agent")) l.agent = e.at("agent").get<std::string>();
                    s.logins.push_back(std::move(l));
                }
            }
            if (j.contains("pool_observations")) {
                for (const auto& e : j.at("pool_observations")) {
                    PoolObservation o;
                    o.endpoint = parse_endpoint(e.at("endpoint").get<std::string>());
                    auto via = observation_via_from_string(e.at("via").get<std::string>());
                    if (!via) throw std::runtime_error("invalid observation via");
                    o.via = *via;
                    if (e.contains("pool")) o.resolved_pool = e.at("pool").get<std::string>();
                    s.observations.push_back(std::move(o));
                }
            }
            if (j.contains("alias_domains"))
                s.alias_domains = detail::string_list(j, "alias_domains");
            if (j.contains("unknown_endpoints")) {
                for (const auto& e : detail::string_list(j, "unknown_endpoints"))
                    s.unknown_endpoints.push_back(parse_endpoint(e));
            }
            if (type == "rejected") {
                RejectReason reason = RejectReason::not_miner;
                std::string code = j.value("reject_reason", "");
                if (code == "not-executable") reason = RejectReason::not_executable;
                else if (code == "not-malware") reason = RejectReason::not_malware;
                else if (code == "whitelisted-tool") reason = RejectReason::whitelisted_tool;
                result.gate.rejected.push_back({std::move(s), reason});
            } else if (s.rec.sample_type == SampleType::ancillary) {
                result.gate.ancillaries.push_back(std::move(s));
            } else {
                result.gate.miners.push_back(std::move(s));
            }
        } catch (const std::exception& e) {
            result.diagnostics.push_back({lineno, path.filename().string(), e.what()});
        }
    }

    // the illicit set is recomputable from the joined data
    auto collect = [&](const ExtractedSample& s) {
        if (s.rec.positives < cfg.malware_min_positives) return;
        if (cfg.stock_whitelist.count(s.rec.sha256)) return;
        for (const auto& id : s.identifiers)
            if (!id.is_donation) result.gate.illicit_wallets.insert(id.raw);
    };
    for (const auto& s : result.gate.miners) collect(s);
    for (const auto& s : result.gate.ancillaries) collect(s);
    for (const auto& r : result.gate.rejected)
        if (r.reason != RejectReason::whitelisted_tool) collect(r.sample);
    return result;
}

// ---------------------------------------------------------------------------
// Aggregation

struct AggregateStageResult {
    CampaignGraph graph;
    std::vector<Campaign> campaigns;
};

inline AggregateStageResult run_aggregate_stage(ExtractStageResult& extract,
                                                const std::optional<fs::path>& dns_path,
                                                const std::optional<fs::path>& snapshots_dir,
                                                const PipelineConfig& cfg,
                                                const std::optional<fs::path>& out_dir) {
    AggregateStageResult result;

    std::vector<DnsRecord> dns_records;
    if (dns_path && fs::exists(*dns_path)) {
        auto dns = load_dns(*dns_path);
        dns_records = std::move(dns.records);
    }
    StatsIndex stats;
    if (snapshots_dir) {
        auto snapshots = load_snapshot_dir(*snapshots_dir, &cfg.pools);
        stats = StatsIndex::build(snapshots.stats);
    }
    annotate_proxies(extract.gate.miners, stats);
    annotate_proxies(extract.gate.ancillaries, stats);

    GraphBuildConfig gcfg;
    gcfg.public_repos = cfg.public_repos;
    gcfg.dns_a_records = dns_records;
    result.graph = build_graph(extract.gate.miners, extract.gate.ancillaries, cfg.iocs, gcfg);
    result.campaigns = connected_components(result.graph);

    if (out_dir) {
        std::string ndjson;
        for (const auto& c : result.campaigns) {
            json j;
            j["id"] = c.id;
            j["samples"] = c.samples;
            j["identifiers"] = c.identifiers;
            json infra = json::array();
            for (const auto& n : c.infrastructure)
                infra.push_back({{"kind", to_string(n.kind)}, {"key", n.key}});
            j["infrastructure"] = infra;
            ndjson += j.dump() + "\n";
        }
        detail::write_file(*out_dir / "campaigns.ndjson", ndjson);
        detail::write_file(*out_dir / "graph.dot", to_dot(result.graph));

        // report-only flags for possibly missed donation wallets
        std::string candidates = "wallet,co_wallets,samples\n";
        for (const auto& c : detect_donation_candidates(extract.gate.miners)) {
            candidates += c.wallet + "," + std::to_string(c.co_wallet_count) + "," +
                          std::to_string(c.sample_count) + "\n";
        }
        detail::write_file(*out_dir / "donation_candidates.csv", candidates);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Enrichment

struct EnrichStageResult {
    std::map<std::string, ObfuscationVerdict> verdicts;      // by sha256
    std::map<std::string, StockMatch> stock_matches;         // by sha256
    std::map<uint32_t, CampaignAnnotations> annotations;     // by campaign id
};

inline EnrichStageResult run_enrich_stage(const ExtractStageResult& extract,
                                          const AggregateStageResult& aggregate,
                                          const std::optional<fs::path>& blob_root,
                                          const std::vector<StockTool>& stock,
                                          const PipelineConfig& cfg,
                                          const std::optional<fs::path>& out_dir,
                                          unsigned jobs = 1) {
    EnrichStageResult result;

    std::vector<const ExtractedSample*> members;
    std::map<std::string, const ExtractedSample*> by_sha;
    for (const auto& m : extract.gate.miners) members.push_back(&m);
    for (const auto& a : extract.gate.ancillaries) members.push_back(&a);
    for (const auto* s : members) by_sha[s->rec.sha256] = s;

    struct SampleEnrichment {
        ObfuscationVerdict verdict;
        std::optional<StockMatch> stock;
        std::optional<FuzzyDigest> digest;
    };
    auto enriched = detail::parallel_map(members, jobs, [&](const ExtractedSample* s) {
        SampleEnrichment e;
        std::optional<std::string> bytes;
        if (blob_root && s->rec.blob_path) {
            fs::path blob = *blob_root / *s->rec.blob_path;
            if (fs::exists(blob)) bytes = detail::read_file(blob);
        }
        e.verdict = classify_obfuscation(
            s->rec, bytes && !bytes->empty() ? std::optional<std::string_view>(*bytes)
                                             : std::nullopt);
        if (bytes && !bytes->empty()) {
            e.digest = ctph_digest(*bytes);
            if (!stock.empty()) e.stock = match_stock_miner(*e.digest, stock);
        }
        return e;
    });
    std::map<std::string, std::string> digests;
    for (std::size_t i = 0; i < members.size(); ++i) {
        result.verdicts[members[i]->rec.sha256] = enriched[i].verdict;
        if (enriched[i].stock) result.stock_matches[members[i]->rec.sha256] = *enriched[i].stock;
        if (enriched[i].digest) digests[members[i]->rec.sha256] = enriched[i].digest->str();
    }

    std::vector<IoCSet> ppi_iocs;
    for (const auto& ioc : cfg.iocs)
        if (ioc.role == IoCRole::ppi) ppi_iocs.push_back(ioc);
    for (const auto& c : aggregate.campaigns)
        result.annotations[c.id] = campaign_flags(c, result.verdicts, ppi_iocs,
                                                  result.stock_matches, by_sha);

    if (out_dir) {
        std::string verdicts_out;
        for (const auto* s : members) {
            const auto& v = result.verdicts[s->rec.sha256];
            json j{{"sha256", s->rec.sha256},
                   {"obfuscated", v.obfuscated},
                   {"basis", to_string(v.basis)}};
            if (v.packer) j["packer"] = *v.packer;
            if (v.entropy) j["entropy"] = *v.entropy;
            if (v.missing_data) j["missing_data"] = true;
            if (auto it = digests.find(s->rec.sha256); it != digests.end())
                j["ctph"] = it->second;
            if (auto it = result.stock_matches.find(s->rec.sha256);
                it != result.stock_matches.end()) {
                j["stock_tool"] = it->second.tool;
                j["stock_version"] = it->second.version;
                j["stock_distance"] = it->second.distance;
            }
            verdicts_out += j.dump() + "\n";
        }
        detail::write_file(*out_dir / "verdicts.ndjson", verdicts_out);

        std::string enrichment_out;
        for (const auto& c : aggregate.campaigns) {
            const auto& a = result.annotations[c.id];
            json j{{"id", c.id},
                   {"obfuscated", a.obfuscated},
                   {"obfuscated_fraction", a.obfuscated_fraction},
                   {"ppi", std::vector<std::string>(a.ppi.begin(), a.ppi.end())},
                   {"mining_sw", std::vector<std::string>(a.mining_sw.begin(), a.mining_sw.end())},
                   {"cname_usage", a.cname_usage},
                   {"proxy_usage", a.proxy_usage}};
            enrichment_out += j.dump() + "\n";
        }
        detail::write_file(*out_dir / "enrichment.ndjson", enrichment_out);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Profit

struct ProfitStageResult {
    WalletEarningsIndex wallet_index;
    std::map<uint32_t, CampaignEarnings> earnings;       // by campaign id
    std::map<uint32_t, ActivityProfile> activity;        // by campaign id
    std::vector<PoolPopularity> popularity;
    ExchangeRateTable rates;
};

inline std::vector<CampaignReport> build_campaign_reports(
    const AggregateStageResult& aggregate, const ProfitStageResult& profit,
    const std::map<uint32_t, CampaignAnnotations>& annotations);

inline ProfitStageResult run_profit_stage(const ExtractStageResult& extract,
                                          const AggregateStageResult& aggregate,
                                          const std::optional<fs::path>& snapshots_dir,
                                          const std::optional<fs::path>& rates_path,
                                          const PipelineConfig& cfg,
                                          const std::optional<fs::path>& out_dir) {
    ProfitStageResult result;
    result.rates.fallback_rate = cfg.fallback_rate;
    if (rates_path && fs::exists(*rates_path))
        result.rates = load_rates(*rates_path, cfg.fallback_rate).table;

    std::vector<PoolWalletStats> snapshots;
    if (snapshots_dir) snapshots = load_snapshot_dir(*snapshots_dir, &cfg.pools).stats;

    std::set<std::string> wallets;
    for (const auto& c : aggregate.campaigns)
        wallets.insert(c.identifiers.begin(), c.identifiers.end());
    result.wallet_index = build_wallet_earnings_index(wallets, snapshots, result.rates);

    std::map<std::string, const SampleRecord*> records;
    for (const auto& m : extract.gate.miners) records[m.rec.sha256] = &m.rec;
    for (const auto& a : extract.gate.ancillaries) records[a.rec.sha256] = &a.rec;

    for (const auto& c : aggregate.campaigns) {
        auto earnings = campaign_earnings(c, result.wallet_index);
        result.activity[c.id] = activity_profile(c, records, earnings, cfg.pow_dates);
        result.earnings[c.id] = std::move(earnings);
    }
    result.popularity = pool_popularity(snapshots, extract.gate.illicit_wallets, result.rates);

    if (out_dir) {
        std::string earnings_out;
        for (const auto& [wallet, e] : result.wallet_index) {
            json j;
            j["wallet"] = wallet;
            j["total_xmr"] = format_xmr(e.total_xmr);
            j["total_usd"] = format_usd(e.total_usd);
            json per_pool = json::object();
            for (const auto& [pool, xmr] : e.per_pool) per_pool[pool] = format_xmr(xmr);
            j["per_pool"] = per_pool;
            j["num_payments"] = e.payments.size();
            if (auto lp = e.last_payment()) j["last_payment"] = format_timestamp(*lp);
            earnings_out += j.dump() + "\n";
        }
        detail::write_file(*out_dir / "earnings.ndjson", earnings_out);
        detail::write_file(*out_dir / "campaign_earnings.csv",
                           campaign_earnings_csv(build_campaign_reports(aggregate, result, {})));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Report

inline std::vector<CampaignReport> build_campaign_reports(
    const AggregateStageResult& aggregate, const ProfitStageResult& profit,
    const std::map<uint32_t, CampaignAnnotations>& annotations) {
    std::vector<CampaignReport> reports;
    reports.reserve(aggregate.campaigns.size());
    for (const auto& c : aggregate.campaigns) {
        CampaignAnnotations a;
        if (auto it = annotations.find(c.id); it != annotations.end()) a = it->second;
        else {
            a.campaign_id = c.id;
            a.cname_usage = c.has_node_kind(NodeKind::cname_alias);
            a.proxy_usage = c.has_node_kind(NodeKind::proxy_endpoint);
        }
        reports.push_back(make_campaign_report(c, profit.earnings.at(c.id),
                                               profit.activity.at(c.id), a));
    }
    return reports;
}

struct ReportStageResult {
    std::vector<CampaignReport> reports;
    BucketSummary buckets;
};

inline ReportStageResult run_report_stage(const ExtractStageResult& extract,
                                          const AggregateStageResult& aggregate,
                                          const EnrichStageResult& enrich,
                                          const ProfitStageResult& profit,
                                          const std::optional<fs::path>& out_dir) {
    ReportStageResult result;
    result.reports = build_campaign_reports(aggregate, profit, enrich.annotations);
    result.buckets = bucket_summary(result.reports);

    if (out_dir) {
        detail::write_file(*out_dir / "campaign_buckets.csv", bucket_summary_csv(result.buckets));
        detail::write_file(*out_dir / "pool_popularity.csv",
                           pool_popularity_csv(profit.popularity));

        std::vector<SampleRecord> records;
        for (const auto& m : extract.gate.miners) records.push_back(m.rec);
        for (const auto& a : extract.gate.ancillaries) records.push_back(a.rec);
        detail::write_file(*out_dir / "packer_counts.csv",
                           packer_histogram_csv(packer_histogram(records)));

        Piconero total_xmr = 0;
        MicroUsd total_usd = 0;
        for (const auto& r : result.reports) {
            total_xmr += r.xmr;
            total_usd += r.usd;
        }
        std::string text = "Campaign summary\n================\n";
        text += "campaigns: " + std::to_string(result.reports.size()) + "\n";
        text += "samples:   " + std::to_string(extract.gate.miners.size()) + " miners, " +
                std::to_string(extract.gate.ancillaries.size()) + " ancillaries\n";
        text += "earnings:  " + format_xmr(total_xmr) + " XMR (" + format_usd(total_usd) +
                " USD)\n\n";
        text += bucket_summary_text(result.buckets);
        detail::write_file(*out_dir / "report.txt", text);
    }
    return result;
}

}  // namespace mineralize
