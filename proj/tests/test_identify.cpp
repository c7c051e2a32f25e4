#include <doctest.h>

#include <fstream>
#include <regex>
#include <set>

#include <mineralize/identify.hpp>

#include "support/test_env.hpp"

using namespace mineralize;

namespace {

std::string pick(std::mt19937_64& rng, std::string_view alphabet, std::size_t n) {
    std::string out(n, ' ');
    for (auto& c : out) c = alphabet[rng() % alphabet.size()];
    return out;
}

constexpr std::string_view kBase58 = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz";
constexpr std::string_view kBech32 = "qpzry9x8gf2tvdw0s3jn54khce6mua7l";
constexpr std::string_view kHex = "0123456789abcdef";

// Structural generators, one per currency rule family.
std::vector<std::pair<Currency, std::string>> generate_addresses(std::mt19937_64& rng) {
    return {
        {Currency::xmr, (rng() % 2 ? "4" : "8") + pick(rng, kBase58, 94)},
        {Currency::btc, (rng() % 2 ? "1" : "3") + pick(rng, kBase58, 24 + rng() % 10)},
        {Currency::btc, "bc1" + pick(rng, kBech32, 39)},
        {Currency::eth, "0x" + pick(rng, kHex, 40)},
        {Currency::zec, (rng() % 2 ? "t1" : "t3") + pick(rng, kBase58, 33)},
        {Currency::etn, "etn" + pick(rng, kBase58, 95)},
        {Currency::aeon, "Wm" + pick(rng, kBase58, 95)},
        {Currency::sumo, "Sumoo" + pick(rng, kBase58, 94)},
        {Currency::itns, "iz" + pick(rng, kBase58, 95)},
        {Currency::trtl, "TRTL" + pick(rng, kBase58, 95)},
        {Currency::bcn, "2" + pick(rng, kBase58, 94)},
    };
}

// Independent validator for Monero addresses, used to sanity-check the
// generated test vector before asserting its classification.
bool independent_xmr_check(const std::string& s) {
    static const std::regex re("^[48][1-9A-HJ-NP-Za-km-z]{94}$");
    return std::regex_match(s, re);
}

}  // namespace

TEST_CASE("classify_identifier: monero wallet with the in-the-wild prefix") {
    // 95-char base58 with prefix '4'; stem observed in real samples,
    // extended to full length and cross-checked structurally.
    auto rng = testenv::rng(10);
    std::string wallet = "46G5yoqAPP" + pick(rng, kBase58, 85);
    REQUIRE(wallet.size() == 95);
    REQUIRE(independent_xmr_check(wallet));

    IdentifierClassifier classifier;
    auto id = classifier.classify(wallet);
    CHECK(id.kind == IdentifierKind::wallet);
    CHECK(id.currency == Currency::xmr);
    CHECK(!id.is_donation);
}

TEST_CASE("classify_identifier: email, eth, unknown") {
    IdentifierClassifier classifier;

    auto email = classifier.classify("bob@mail.example");
    CHECK(email.kind == IdentifierKind::email);
    CHECK(!email.currency.has_value());

    auto eth = classifier.classify("0x" + std::string(40, 'a'));
    CHECK(eth.kind == IdentifierKind::wallet);
    CHECK(eth.currency == Currency::eth);

    auto unknown = classifier.classify("hello-world-42");
    CHECK(unknown.kind == IdentifierKind::unknown);

    // exactly one '@' with nonempty parts
    CHECK(classifier.classify("@mail.example").kind == IdentifierKind::unknown);
    CHECK(classifier.classify("bob@").kind == IdentifierKind::unknown);
    CHECK(classifier.classify("a@b@c").kind == IdentifierKind::unknown);
}

TEST_CASE("classify_identifier: donation flag from white-list") {
    auto rng = testenv::rng(11);
    std::string donation = "4" + pick(rng, kBase58, 94);
    IdentifierClassifier classifier(default_currency_rules(), {donation});
    CHECK(classifier.classify(donation).is_donation);
    CHECK(!classifier.classify("4" + pick(rng, kBase58, 94)).is_donation);
    // white-list only marks wallets that are actually listed
    CHECK(classifier.classify("  " + donation + " ").is_donation);  // trimmed first
}

TEST_CASE("classify_identifier: total, deterministic, whitespace-invariant") {
    auto rng = testenv::rng(12);
    IdentifierClassifier classifier;
    for (int i = 0; i < 200; ++i) {
        std::string s = pick(rng, "abcXYZ049@._- ", rng() % 120);
        auto a = classifier.classify(s);
        auto b = classifier.classify(" \t" + s + "\n");
        CHECK(a.kind == b.kind);
        CHECK(a.currency == b.currency);
        CHECK(a.raw == b.raw);
    }
}

TEST_CASE("property: generated addresses classify as their currency, never two") {
    auto rng = testenv::rng(13);
    IdentifierClassifier classifier;
    auto rules = default_currency_rules();
    for (int round = 0; round < 100; ++round) {
        for (const auto& [currency, address] : generate_addresses(rng)) {
            auto id = classifier.classify(address);
            CHECK(id.kind == IdentifierKind::wallet);
            CHECK(id.currency == currency);

            std::set<Currency> matched;
            for (const auto& rule : rules)
                if (rule.matches(address)) matched.insert(rule.currency);
            CHECK(matched.size() == 1);
        }
    }
}

TEST_CASE("currency rules load from config") {
    testenv::TempDir tmp("rules");
    auto path = tmp.path() / "currencies.rules";
    {
        std::ofstream out(path);
        out << "# name, min_len, max_len, alphabet, prefixes\n";
        out << "xmr, 95, 95, base58, 4 8\n";
        out << "eth, 42, 42, hex, 0x\n";
        out << "bogus line\n";
    }
    auto result = load_currency_rules(path);
    CHECK(result.rules.size() == 2);
    CHECK(result.diagnostics.size() == 1);
    IdentifierClassifier classifier(result.rules);
    CHECK(classifier.classify("0x" + std::string(40, '1')).currency == Currency::eth);
    // btc rule absent from this config: falls through to unknown
    CHECK(classifier.classify("1" + std::string(30, '1')).kind == IdentifierKind::unknown);
}

TEST_CASE("extract_from_cmdline: common miner flag families") {
    auto rng = testenv::rng(14);
    std::string wallet = "4" + pick(rng, kBase58, 94);
    auto r = extract_from_cmdline("xmrig -o stratum+tcp://pool.minexmr.com:4444 -u " + wallet +
                                  " -p x -t 2");
    CHECK(r.login_user == wallet);
    CHECK(r.login_pass == "x");
    CHECK(r.pool_url == "pool.minexmr.com:4444");
    CHECK(r.nthreads == 2);
}

TEST_CASE("extract_from_cmdline: no mining flags") {
    auto r = extract_from_cmdline("notepad.exe file.txt");
    CHECK(!r.login_user);
    CHECK(!r.login_pass);
    CHECK(!r.pool_url);
    CHECK(!r.nthreads);
}

TEST_CASE("extract_from_cmdline: key=value forms") {
    auto r = extract_from_cmdline("miner --url=etn.4i7i.com:3333 --user=W");
    CHECK(r.login_user == "W");
    CHECK(!r.login_pass);
    CHECK(r.pool_url == "etn.4i7i.com:3333");
    CHECK(!r.nthreads);
}

TEST_CASE("extract_from_cmdline: quoting, overrides, junk tolerance") {
    auto r = extract_from_cmdline("run -u \"user one\" -u second -t banana --pass");
    CHECK(r.login_user == "second");  // later flags override
    CHECK(!r.nthreads);               // unparseable count ignored
    CHECK(!r.login_pass);             // dangling flag ignored
}

TEST_CASE("parse_stratum_transcript: login frame") {
    auto result = parse_stratum_transcript(
        {R"({"id":1,"method":"login","params":{"login":"W","pass":"x","agent":"xmrig/2.8"}})"});
    REQUIRE(result.logins.size() == 1);
    CHECK(result.diagnostics.empty());
    CHECK(result.logins[0].login == "W");
    CHECK(result.logins[0].pass == "x");
    CHECK(result.logins[0].agent == "xmrig/2.8");
    CHECK(result.logins[0].method == "login");
}

TEST_CASE("parse_stratum_transcript: non-login methods ignored") {
    auto result = parse_stratum_transcript(
        {R"({"id":2,"method":"submit","params":{"job_id":"1","nonce":"abc"}})",
         R"({"id":3,"method":"job","params":{}})",
         R"({"id":4,"method":"keepalived","params":{}})"});
    CHECK(result.logins.empty());
    CHECK(result.diagnostics.empty());
}

TEST_CASE("parse_stratum_transcript: garbled line skipped with diagnostic") {
    auto result = parse_stratum_transcript(
        {"%%% not json %%%", R"({"id":1,"method":"login","params":{"login":"W"}})"});
    REQUIRE(result.logins.size() == 1);
    REQUIRE(result.diagnostics.size() == 1);
    CHECK(result.diagnostics[0].index == 1);
}

TEST_CASE("parse_stratum_transcript: authorize array params") {
    auto result = parse_stratum_transcript(
        {R"({"id":1,"method":"mining.authorize","params":["worker1","pw"]})"});
    REQUIRE(result.logins.size() == 1);
    CHECK(result.logins[0].login == "worker1");
    CHECK(result.logins[0].pass == "pw");
}

TEST_CASE("property: stratum output bounded, logins nonempty") {
    auto rng = testenv::rng(15);
    for (int round = 0; round < 50; ++round) {
        std::vector<std::string> frames;
        std::size_t n = rng() % 20;
        for (std::size_t i = 0; i < n; ++i) {
            switch (rng() % 4) {
                case 0: frames.push_back(R"({"method":"login","params":{"login":"W"}})"); break;
                case 1: frames.push_back(R"({"method":"submit","params":{}})"); break;
                case 2: frames.push_back("junk " + std::to_string(rng())); break;
                case 3: frames.push_back(R"({"method":"login","params":{"login":""}})"); break;
            }
        }
        auto result = parse_stratum_transcript(frames);
        CHECK(result.logins.size() <= frames.size());
        for (const auto& l : result.logins) CHECK(!l.login.empty());
    }
}
