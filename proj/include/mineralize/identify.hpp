#pragma once

// Identifier classification and extraction from command lines and
// Stratum transcripts.
//
// Wallet detection is structural (length, alphabet, prefix) — there is
// deliberately no per-currency checksum crypto here. Rules are loaded
// from currencies.rules and tried longest-first; email detection runs
// only after every wallet rule has failed.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mineralize/common.hpp"
#include "mineralize/corpus_io.hpp"
#include "mineralize/model.hpp"

namespace mineralize {

// ---------------------------------------------------------------------------
// Currency rules

enum class Alphabet { base58, bech32, hex, alnum };

inline std::optional<Alphabet> alphabet_from_string(std::string_view s) {
    std::string l = to_lower(s);
    if (l == "base58") return Alphabet::base58;
    if (l == "bech32") return Alphabet::bech32;
    if (l == "hex") return Alphabet::hex;
    if (l == "alnum") return Alphabet::alnum;
    return std::nullopt;
}

inline bool alphabet_contains(Alphabet a, char c) {
    switch (a) {
        case Alphabet::base58:
            if (c == '0' || c == 'O' || c == 'I' || c == 'l') return false;
            return (c >= '1' && c <= '9') || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
        case Alphabet::bech32:
            return std::string_view("qpzry9x8gf2tvdw0s3jn54khce6mua7l").find(c) !=
                   std::string_view::npos;
        case Alphabet::hex:
            return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
        case Alphabet::alnum:
            return (c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
    }
    return false;
}

struct CurrencyRule {
    Currency currency = Currency::other;
    std::size_t min_len = 0;
    std::size_t max_len = 0;
    Alphabet alphabet = Alphabet::base58;
    std::vector<std::string> prefixes;  // at least one must match; alphabet applies after it

    bool matches(std::string_view s) const {
        if (s.size() < min_len || s.size() > max_len) return false;
        for (const auto& prefix : prefixes) {
            if (!starts_with(s, prefix)) continue;
            std::string_view rest = s.substr(prefix.size());
            if (std::all_of(rest.begin(), rest.end(),
                            [&](char c) { return alphabet_contains(alphabet, c); }))
                return true;
        }
        return false;
    }
};

// Built-in rule set; currencies.rules overrides it when present.
inline std::vector<CurrencyRule> default_currency_rules() {
    return {
        {Currency::xmr, 95, 95, Alphabet::base58, {"4", "8"}},
        {Currency::btc, 25, 34, Alphabet::base58, {"1", "3"}},
        {Currency::btc, 42, 62, Alphabet::bech32, {"bc1"}},
        {Currency::eth, 42, 42, Alphabet::hex, {"0x"}},
        {Currency::zec, 35, 35, Alphabet::base58, {"t1", "t3"}},
        {Currency::etn, 98, 98, Alphabet::base58, {"etn"}},
        {Currency::aeon, 97, 97, Alphabet::base58, {"Wm"}},
        {Currency::sumo, 99, 99, Alphabet::base58, {"Sumoo"}},
        {Currency::itns, 97, 97, Alphabet::base58, {"iz"}},
        {Currency::trtl, 99, 99, Alphabet::base58, {"TRTL"}},
        {Currency::bcn, 95, 95, Alphabet::base58, {"2"}},
    };
}

// currencies.rules lines: name, min_len, max_len, alphabet, prefixes
// with prefixes separated by spaces or '|'.
struct CurrencyRulesLoadResult {
    std::vector<CurrencyRule> rules;
    Diagnostics diagnostics;
};

inline CurrencyRulesLoadResult load_currency_rules(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read currency rules " + path.string());
    CurrencyRulesLoadResult result;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = trim(line);
        if (sv.empty() || sv[0] == '#') continue;
        auto parts = split(sv, ',');
        if (parts.size() != 5) {
            result.diagnostics.push_back({lineno, path.filename().string(),
                                          "expected name, min_len, max_len, alphabet, prefixes"});
            continue;
        }
        CurrencyRule rule;
        auto currency = currency_from_string(trim(parts[0]));
        auto min_len = parse_int(parts[1]);
        auto max_len = parse_int(parts[2]);
        auto alphabet = alphabet_from_string(trim(parts[3]));
        std::string prefixes(parts[4]);
        std::replace(prefixes.begin(), prefixes.end(), '|', ' ');
        if (!currency || !min_len || !max_len || !alphabet || *min_len <= 0 ||
            *max_len < *min_len) {
            result.diagnostics.push_back({lineno, path.filename().string(), "unparseable rule"});
            continue;
        }
        rule.currency = *currency;
        rule.min_len = static_cast<std::size_t>(*min_len);
        rule.max_len = static_cast<std::size_t>(*max_len);
        rule.alphabet = *alphabet;
        for (const auto& p : split_ws(prefixes)) rule.prefixes.push_back(p);
        if (rule.prefixes.empty()) {
            result.diagnostics.push_back({lineno, path.filename().string(), "rule has no prefixes"});
            continue;
        }
        result.rules.push_back(std::move(rule));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Classification

class IdentifierClassifier {
public:
    explicit IdentifierClassifier(std::vector<CurrencyRule> rules = default_currency_rules(),
                                  DonationWhitelist donations = {})
        : rules_(std::move(rules)), donations_(std::move(donations)) {
        // longest-match first; ties keep the configured order
        std::stable_sort(rules_.begin(), rules_.end(),
                         [](const CurrencyRule& a, const CurrencyRule& b) {
                             return a.max_len > b.max_len;
                         });
    }

    // Total and deterministic; surrounding whitespace is ignored.
    MiningIdentifier classify(std::string_view raw) const {
        std::string_view s = trim(raw);
        MiningIdentifier id;
        id.raw = std::string(s);
        for (const auto& rule : rules_) {
            if (rule.matches(s)) {
                id.kind = IdentifierKind::wallet;
                id.currency = rule.currency;
                id.is_donation = donations_.count(id.raw) > 0;
                return id;
            }
        }
        if (is_email(s)) {
            id.kind = IdentifierKind::email;
            return id;
        }
        id.kind = IdentifierKind::unknown;
        return id;
    }

    bool is_donation_wallet(std::string_view raw) const {
        return donations_.count(std::string(trim(raw))) > 0;
    }

    static bool is_email(std::string_view s) {
        auto at = s.find('@');
        if (at == std::string_view::npos || at == 0 || at + 1 >= s.size()) return false;
        return s.find('@', at + 1) == std::string_view::npos;
    }

private:
    std::vector<CurrencyRule> rules_;
    DonationWhitelist donations_;
};

// ---------------------------------------------------------------------------
// Command-line extraction

struct CmdlineExtraction {
    std::optional<std::string> login_user;
    std::optional<std::string> login_pass;
    std::optional<std::string> pool_url;  // host:port, scheme stripped
    std::optional<int64_t> nthreads;
};

namespace detail {

// Splits a command line on whitespace honoring single/double quotes.
inline std::vector<std::string> tokenize_cmdline(std::string_view cmd) {
    std::vector<std::string> tokens;
    std::string cur;
    char quote = 0;
    for (char c : cmd) {
        if (quote != 0) {
            if (c == quote) quote = 0;
            else cur.push_back(c);
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) tokens.push_back(std::move(cur)), cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

// "stratum+tcp://pool:4444/x" -> "pool:4444"
inline std::string strip_url_to_hostport(std::string_view url) {
    std::string_view s = trim(url);
    if (auto scheme = s.find("://"); scheme != std::string_view::npos) s = s.substr(scheme + 3);
    if (auto slash = s.find('/'); slash != std::string_view::npos) s = s.substr(0, slash);
    return std::string(s);
}

}  // namespace detail

// Recognizes the common miner flag families; later occurrences override
// earlier ones, unparseable tokens are ignored.
inline CmdlineExtraction extract_from_cmdline(std::string_view cmd) {
    static const std::vector<std::string> url_flags{"-o", "--url", "-url", "--pool"};
    static const std::vector<std::string> user_flags{"-u", "--user", "-user", "--wallet"};
    static const std::vector<std::string> pass_flags{"-p", "--pass", "-pass", "--password"};
    static const std::vector<std::string> thread_flags{"-t", "--threads", "-threads"};

    CmdlineExtraction out;
    auto tokens = detail::tokenize_cmdline(cmd);
    auto match = [](const std::string& token, const std::vector<std::string>& flags,
                    const std::vector<std::string>& next,
                    std::size_t i) -> std::optional<std::string> {
        for (const auto& flag : flags) {
            if (token == flag) {
                if (i + 1 < next.size()) return next[i + 1];
                return std::nullopt;
            }
            if (starts_with(token, flag + "=")) return token.substr(flag.size() + 1);
        }
        return std::nullopt;
    };
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string& tok = tokens[i];
        if (auto v = match(tok, url_flags, tokens, i)) {
            if (!v->empty()) out.pool_url = detail::strip_url_to_hostport(*v);
        } else if (auto u = match(tok, user_flags, tokens, i)) {
            if (!u->empty()) out.login_user = *u;
        } else if (auto p = match(tok, pass_flags, tokens, i)) {
            if (!p->empty()) out.login_pass = *p;
        } else if (auto t = match(tok, thread_flags, tokens, i)) {
            if (auto n = parse_int(*t); n && *n > 0) out.nthreads = *n;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Stratum transcript parsing

struct StratumLogin {
    std::string login;
    std::optional<std::string> pass;
    std::optional<std::string> agent;
    std::string method;     // "login" or an authorize equivalent
    std::string raw_frame;

    friend bool operator==(const StratumLogin&, const StratumLogin&) = default;
};

struct StratumParseResult {
    std::vector<StratumLogin> logins;
    Diagnostics diagnostics;  // index = 1-based frame number
};

// Yields one StratumLogin per login/authorize frame; job, submit and
// keepalive frames are ignored. Other dialects (ethproxy, nicehash)
// are out of scope.
inline StratumParseResult parse_stratum_transcript(const std::vector<std::string>& frames) {
    StratumParseResult result;
    std::size_t index = 0;
    for (const auto& frame : frames) {
        ++index;
        if (trim(frame).empty()) continue;
        json j = json::parse(frame, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            result.diagnostics.push_back({index, "frame", "not a JSON-RPC object"});
            continue;
        }
        std::string method = j.value("method", "");
        if (method != "login" && method != "authorize" && method != "mining.authorize") continue;
        StratumLogin login;
        login.method = method;
        login.raw_frame = frame;
        const auto params = j.find("params");
        if (params == j.end()) {
            result.diagnostics.push_back({index, "frame", "login frame without params"});
            continue;
        }
        if (params->is_object()) {
            login.login = params->value("login", params->value("user", ""));
            if (params->contains("pass") && params->at("pass").is_string())
                login.pass = params->at("pass").get<std::string>();
            if (params->contains("agent") && params->at("agent").is_string())
                login.agent = params->at("agent").get<std::string>();
        } else if (params->is_array() && !params->empty() && params->at(0).is_string()) {
            login.login = params->at(0).get<std::string>();
            if (params->size() > 1 && params->at(1).is_string())
                login.pass = params->at(1).get<std::string>();
        }
        if (j.contains("agent") && j.at("agent").is_string())
            login.agent = j.at("agent").get<std::string>();
        if (login.login.empty()) {
            result.diagnostics.push_back({index, "frame", "login frame with empty login"});
            continue;
        }
        result.logins.push_back(std::move(login));
    }
    return result;
}

}  // namespace mineralize
