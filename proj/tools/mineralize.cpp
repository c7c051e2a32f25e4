// mineralize — corpus-analysis pipeline for crypto-mining malware.
//
// Subcommands mirror the pipeline stages (extract, aggregate, enrich,
// profit, report). Each command is a pure function of its input files:
// re-running with unchanged inputs reproduces byte-identical outputs.
//
// Exit codes: 0 success, 1 usage error, 2 input error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <mineralize/mineralize.hpp>

namespace fs = std::filesystem;
using namespace mineralize;

namespace {

struct CommonOpts {
    std::string config_dir;
    std::string out_dir;
    std::string corpus;
    std::string dns;
    std::string snapshots;
    std::string rates;
    std::string blobs;
    std::string stock_manifest;
    std::string fallback_rate;
    std::string extraction;  // pre-computed extraction store for aggregate
    unsigned jobs = 1;
};

std::string default_config_dir() {
    if (const char* env = std::getenv("MINERALIZE_CONFIG")) return env;
    return "config";
}

std::optional<fs::path> opt_path(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return fs::path(s);
}

PipelineConfig load_config(const CommonOpts& opts) {
    fs::path dir(opts.config_dir);
    PipelineConfig cfg = fs::exists(dir) ? PipelineConfig::load(dir) : PipelineConfig{};
    if (!opts.fallback_rate.empty()) {
        auto rate = parse_usd_rate(opts.fallback_rate);
        if (!rate || *rate <= 0) throw InputError("invalid --fallback-rate " + opts.fallback_rate);
        cfg.fallback_rate = *rate;
    }
    return cfg;
}

void print_diagnostics(const Diagnostics& diagnostics, std::size_t limit = 10) {
    for (std::size_t i = 0; i < diagnostics.size() && i < limit; ++i)
        std::cerr << "warning: " << diagnostics[i].str() << "\n";
    if (diagnostics.size() > limit)
        std::cerr << "warning: ... " << diagnostics.size() - limit << " more\n";
}

int run_pipeline(const CommonOpts& opts, const std::string& upto) {
    PipelineConfig cfg = load_config(opts);
    auto out = opt_path(opts.out_dir);

    if (opts.corpus.empty() || !fs::exists(opts.corpus)) {
        std::cerr << "error: corpus file not found: " << opts.corpus << "\n";
        return 2;
    }

    ExtractStageResult extract;
    if (!opts.extraction.empty()) {
        if (!fs::exists(opts.extraction)) {
            std::cerr << "usage error: extraction store not found: " << opts.extraction << "\n";
            return 1;
        }
        auto corpus = load_corpus(opts.corpus);
        extract = load_extraction_store(opts.extraction, corpus.records, cfg.gate);
    } else {
        extract = run_extract_stage(opts.corpus, opt_path(opts.dns), cfg,
                                    upto == "extract" ? out : std::nullopt, opts.jobs);
    }
    print_diagnostics(extract.diagnostics);
    if (upto == "extract") {
        std::cout << "extract: " << extract.corpus_size << " records -> "
                  << extract.gate.miners.size() << " miners, "
                  << extract.gate.ancillaries.size() << " ancillaries, "
                  << extract.gate.rejected.size() << " rejected; "
                  << extract.gate.illicit_wallets.size() << " illicit identifiers\n";
        return 0;
    }

    if (!opts.snapshots.empty() && !fs::exists(opts.snapshots))
        std::cerr << "warning: snapshots directory not found: " << opts.snapshots << "\n";
    auto aggregate = run_aggregate_stage(extract, opt_path(opts.dns), opt_path(opts.snapshots),
                                         cfg, upto == "aggregate" ? out : std::nullopt);
    if (upto == "aggregate") {
        std::cout << "aggregate: " << aggregate.graph.nodes().size() << " nodes, "
                  << aggregate.graph.edges().size() << " edges -> "
                  << aggregate.campaigns.size() << " campaigns\n";
        return 0;
    }

    if (upto == "enrich") {
        std::vector<StockTool> stock;
        if (!opts.stock_manifest.empty()) {
            if (!fs::exists(opts.stock_manifest)) {
                std::cerr << "error: stock manifest not found: " << opts.stock_manifest << "\n";
                return 2;
            }
            fs::path manifest(opts.stock_manifest);
            auto loaded = load_stock_corpus(manifest, manifest.parent_path());
            print_diagnostics(loaded.diagnostics);
            stock = std::move(loaded.tools);
        }
        auto enrich = run_enrich_stage(extract, aggregate, opt_path(opts.blobs), stock, cfg, out,
                                       opts.jobs);
        std::size_t obfuscated = 0;
        for (const auto& [sha, v] : enrich.verdicts) obfuscated += v.obfuscated ? 1 : 0;
        std::cout << "enrich: " << enrich.verdicts.size() << " samples (" << obfuscated
                  << " obfuscated), " << enrich.stock_matches.size() << " stock-tool matches\n";
        return 0;
    }

    if (upto == "profit") {
        auto profit = run_profit_stage(extract, aggregate, opt_path(opts.snapshots),
                                       opt_path(opts.rates), cfg, out);
        Piconero total = 0;
        for (const auto& [id, e] : profit.earnings) total += e.total_xmr;
        std::cout << "profit: " << profit.wallet_index.size() << " wallets, "
                  << format_xmr(total) << " XMR across " << profit.earnings.size()
                  << " campaigns\n";
        return 0;
    }

    // report: run the remaining stages without re-writing their outputs
    std::vector<StockTool> stock;
    if (!opts.stock_manifest.empty() && fs::exists(opts.stock_manifest)) {
        fs::path manifest(opts.stock_manifest);
        stock = load_stock_corpus(manifest, manifest.parent_path()).tools;
    }
    auto enrich = run_enrich_stage(extract, aggregate, opt_path(opts.blobs), stock, cfg,
                                   std::nullopt, opts.jobs);
    auto profit = run_profit_stage(extract, aggregate, opt_path(opts.snapshots),
                                   opt_path(opts.rates), cfg, std::nullopt);
    auto report = run_report_stage(extract, aggregate, enrich, profit, out);
    std::cout << "report: " << report.reports.size() << " campaigns summarized\n";
    return 0;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_dir, "Config directory")
        ->default_val(default_config_dir());
    cmd->add_option("--out", opts.out_dir, "Output directory")->required();
    cmd->add_option("--corpus", opts.corpus, "Corpus NDJSON file")->required();
    cmd->add_option("--dns", opts.dns, "DNS observations NDJSON");
    cmd->add_option("--jobs", opts.jobs, "Worker threads")->default_val(1);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crypto-mining malware corpus analysis pipeline"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string stage;

    auto* extract = app.add_subcommand("extract", "Triage corpus and extract mining evidence");
    add_common(extract, opts);
    extract->callback([&] { stage = "extract"; });

    auto* aggregate = app.add_subcommand("aggregate", "Build campaign graph and components");
    add_common(aggregate, opts);
    aggregate->add_option("--snapshots", opts.snapshots, "Pool snapshot directory");
    aggregate->add_option("--extraction", opts.extraction,
                          "Use a previously written extraction.ndjson instead of re-extracting");
    aggregate->callback([&] { stage = "aggregate"; });

    auto* enrich = app.add_subcommand("enrich", "Annotate campaigns (obfuscation, PPI, tools)");
    add_common(enrich, opts);
    enrich->add_option("--snapshots", opts.snapshots, "Pool snapshot directory");
    enrich->add_option("--blobs", opts.blobs, "Content-addressed blob directory");
    enrich->add_option("--stock", opts.stock_manifest, "Stock mining tool manifest NDJSON");
    enrich->callback([&] { stage = "enrich"; });

    auto* profit = app.add_subcommand("profit", "Compute wallet and campaign earnings");
    add_common(profit, opts);
    profit->add_option("--snapshots", opts.snapshots, "Pool snapshot directory");
    profit->add_option("--rates", opts.rates, "Exchange-rate CSV");
    profit->add_option("--fallback-rate", opts.fallback_rate,
                       "USD/XMR rate for undated value (default 54)");
    profit->callback([&] { stage = "profit"; });

    auto* report = app.add_subcommand("report", "Emit summary tables");
    add_common(report, opts);
    report->add_option("--snapshots", opts.snapshots, "Pool snapshot directory");
    report->add_option("--rates", opts.rates, "Exchange-rate CSV");
    report->add_option("--fallback-rate", opts.fallback_rate,
                       "USD/XMR rate for undated value (default 54)");
    report->add_option("--blobs", opts.blobs, "Content-addressed blob directory");
    report->add_option("--stock", opts.stock_manifest, "Stock mining tool manifest NDJSON");
    report->callback([&] { stage = "report"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        return run_pipeline(opts, stage);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
