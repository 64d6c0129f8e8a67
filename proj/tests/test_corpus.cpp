#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "intentcl/corpus.hpp"
#include "intentcl/errors.hpp"
#include "intentcl/random.hpp"

using namespace intentcl;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
    auto dir = fs::temp_directory_path() / "intentcl_test_corpus";
    fs::create_directories(dir);
    auto path = dir / name;
    std::ofstream(path, std::ios::binary) << content;
    return path;
}

Dataset grid_dataset(int intents, int per_intent, const std::string& domain = "") {
    Dataset d;
    d.name = "grid";
    for (int i = 0; i < intents; ++i) d.labels.push_back({i, "intent_" + std::to_string(i), "intent " + std::to_string(i)});
    for (int i = 0; i < intents; ++i)
        for (int j = 0; j < per_intent; ++j)
            d.examples.push_back({"utt " + std::to_string(i) + " " + std::to_string(j), i,
                                  domain.empty() ? std::nullopt : std::optional<std::string>(domain)});
    return d;
}

std::string error_of(auto&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("csv with two rows and two labels") {
    auto p = write_temp("two.csv", "text,category\nwhere is my card,card_arrival\nhow much do I have,balance\n");
    auto d = load_dataset(p, DataFormat::csv);
    CHECK(d.num_intents() == 2);
    CHECK(d.size() == 2);
    CHECK(d.labels[0].surface == "card arrival");
    CHECK(d.labels[1].raw_name == "balance");
    CHECK(d.examples[1].intent_id == 1);
    CHECK(d.name == "two");
}

TEST_CASE("csv quoting, CRLF and first-appearance label order") {
    auto p = write_temp("quoted.csv",
                        "text,category\r\n\"hi, there \"\"friend\"\"\",greet\r\nbye,farewell\r\nhello,greet\r\n");
    auto d = load_dataset(p, DataFormat::csv);
    REQUIRE(d.size() == 3);
    CHECK(d.examples[0].text == "hi, there \"friend\"");
    CHECK(d.labels[0].raw_name == "greet");
    CHECK(d.examples[2].intent_id == 0);
}

TEST_CASE("empty text reports its line number") {
    auto p = write_temp("empty.csv", "text,category\nfine,a\n   ,b\n");
    auto msg = error_of([&] { load_dataset(p, DataFormat::csv); });
    CHECK(msg.find(":3:") != std::string::npos);
    CHECK_THROWS_AS(load_dataset(p, DataFormat::csv), DataError);
}

TEST_CASE("malformed rows and missing inputs") {
    CHECK_THROWS_AS(load_dataset("/nonexistent/x.csv", DataFormat::csv), DataError);
    auto bad_fields = write_temp("fields.csv", "text,category\na,b,c\n");
    CHECK(error_of([&] { load_dataset(bad_fields, DataFormat::csv); }).find(":2:") != std::string::npos);
    auto header_only = write_temp("header.csv", "text,category\n");
    CHECK_THROWS_AS(load_dataset(header_only, DataFormat::csv), DataError);
    auto no_header = write_temp("nohdr.csv", "utterance,intent\na,b\n");
    CHECK_THROWS_AS(load_dataset(no_header, DataFormat::csv), DataError);
    auto bad_json = write_temp("bad.jsonl", "{\"text\":\"a\",\"label\":\"x\"}\n{oops\n");
    CHECK(error_of([&] { load_dataset(bad_json, DataFormat::jsonl); }).find(":2:") != std::string::npos);
}

TEST_CASE("jsonl with optional domain") {
    auto p = write_temp("d.jsonl",
                        "{\"text\":\"wake me up\",\"label\":\"alarm_set\",\"domain\":\"alarm\"}\n\n"
                        "{\"text\":\"play a song\",\"label\":\"PlayMusic\"}\n");
    auto d = load_dataset(p, DataFormat::jsonl);
    REQUIRE(d.size() == 2);
    CHECK(d.examples[0].domain == std::optional<std::string>("alarm"));
    CHECK_FALSE(d.examples[1].domain.has_value());
    CHECK(d.labels[1].surface == "play music");
}

TEST_CASE("label inventory fixes order and rejects strangers") {
    auto p = write_temp("inv.csv", "text,category\na,x\nb,y\n");
    std::vector<std::string> inv{"y", "z", "x"};
    auto d = load_dataset(p, DataFormat::csv, &inv);
    CHECK(d.num_intents() == 3);
    CHECK(d.examples[0].intent_id == 2);
    CHECK(d.examples[1].intent_id == 0);
    std::vector<std::string> partial{"x"};
    CHECK_THROWS_AS(load_dataset(p, DataFormat::csv, &partial), DataError);

    auto inv_file = write_temp("inv.txt", "y\n\nz\nx\n");
    CHECK(load_label_inventory(inv_file) == inv);
}

TEST_CASE("format detection") {
    CHECK(data_format_from("csv") == DataFormat::csv);
    CHECK(data_format_from("a/b/train.jsonl") == DataFormat::jsonl);
    CHECK_THROWS_AS(data_format_from("data.parquet"), UsageError);
}

TEST_CASE("normalize_label examples") {
    CHECK(normalize_label("card_arrival") == "card arrival");
    CHECK(normalize_label("balance") == "balance");
    CHECK(normalize_label("PlayMusic") == "play music");
    CHECK(normalize_label("get-physical__card") == "get physical card");
    CHECK(normalize_label("HTTPServer") == "http server");
    CHECK(normalize_label("  Top Up  ") == "top up");
    CHECK_THROWS_AS(normalize_label(""), DataError);
    CHECK_THROWS_AS(normalize_label("_-_"), DataError);
}

TEST_CASE("normalize_label is idempotent") {
    const std::string alphabet = "abcXYZ_- 09Q";
    Rng rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
        std::string raw;
        auto len = 1 + rng.uniform_index(14);
        for (std::size_t i = 0; i < len; ++i) raw += alphabet[rng.uniform_index(alphabet.size())];
        std::string once;
        try {
            once = normalize_label(raw);
        } catch (const DataError&) {
            continue;
        }
        CHECK(normalize_label(once) == once);
        CHECK(once.find('_') == std::string::npos);
        CHECK(std::none_of(once.begin(), once.end(), [](char c) { return std::isupper(static_cast<unsigned char>(c)); }));
    }
}

TEST_CASE("sample_few_shot sizes, determinism and subset property") {
    auto d = grid_dataset(77, 9);
    auto s = sample_few_shot(d, 5, 42);
    CHECK(s.size() == 385);
    auto again = sample_few_shot(d, 5, 42);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.examples[i].text == again.examples[i].text);
    auto other = sample_few_shot(d, 5, 43);
    bool differs = false;
    for (std::size_t i = 0; i < s.size(); ++i) differs |= s.examples[i].text != other.examples[i].text;
    CHECK(differs);

    std::map<int, std::set<std::string>> per;
    std::set<std::string> source;
    for (const auto& ex : d.examples) source.insert(ex.text);
    for (const auto& ex : s.examples) {
        CHECK(source.count(ex.text));
        per[ex.intent_id].insert(ex.text);
    }
    for (auto& [intent, texts] : per) CHECK(texts.size() == 5);  // no replacement
}

TEST_CASE("sample_few_shot names the short intent") {
    auto d = grid_dataset(3, 3);
    auto msg = error_of([&] { sample_few_shot(d, 10, 1); });
    CHECK(msg.find("intent_0") != std::string::npos);
    CHECK_THROWS_AS(sample_few_shot(d, 10, 1), DataError);
}

TEST_CASE("split_dev arithmetic and partition") {
    auto d = grid_dataset(10, 10);
    auto [train, dev] = split_dev(d, 0.10, 7);
    CHECK(train.size() == 90);
    CHECK(dev.size() == 10);
    CHECK(train.labels.size() == dev.labels.size());

    std::multiset<std::string> all;
    for (const auto& ex : train.examples) all.insert(ex.text);
    for (const auto& ex : dev.examples) {
        CHECK(all.count(ex.text) == 0);
        all.insert(ex.text);
    }
    CHECK(all.size() == 100);

    auto small = grid_dataset(2, 5);
    auto [t2, d2] = split_dev(small, 0.10, 7);
    CHECK(t2.size() == 9);
    CHECK(d2.size() == 1);

    auto [t3, d3] = split_dev(d, 0.10, 7);
    for (std::size_t i = 0; i < dev.size(); ++i) CHECK(d3.examples[i].text == dev.examples[i].text);

    CHECK_THROWS_AS(split_dev(d, 1.0, 7), UsageError);
    CHECK_THROWS_AS(split_dev(d, 0.0, 7), UsageError);
}

TEST_CASE("build_ood: union arithmetic, merge and exclusion") {
    Dataset target = grid_dataset(2, 1);
    target.name = "target";

    const std::pair<std::string, std::string> a_rows[] = {{"wake me", "alarm_set"}, {"weather?", "weather"}};
    const std::pair<std::string, std::string> b_rows[] = {{"pay bill", "pay_bill"}, {"set an alarm", "AlarmSet"}};
    auto a = make_dataset("a", a_rows);
    auto b = make_dataset("b", b_rows);
    const Dataset both[] = {a, b};
    auto merged = build_ood(target, both, {});
    CHECK(merged.num_intents() == 3);  // "alarm set" merged
    CHECK(merged.size() == 4);
    CHECK(merged.examples[3].intent_id == merged.examples[0].intent_id);

    auto disjoint1 = grid_dataset(3, 2);
    auto disjoint2 = grid_dataset(4, 2);
    for (auto& l : disjoint2.labels) l.surface += " other";
    const Dataset pair[] = {disjoint1, disjoint2};
    CHECK(build_ood(target, pair, {}).num_intents() == 7);

    auto banking = grid_dataset(2, 3, "Banking");
    auto travel = grid_dataset(3, 3, "travel");
    for (auto& l : travel.labels) l.surface = "travel " + l.surface;
    const Dataset sources[] = {banking, travel};
    const std::string excluded[] = {"banking", "credit cards"};
    auto ood = build_ood(target, sources, excluded);
    CHECK(ood.num_intents() == 3);
    for (const auto& ex : ood.examples) CHECK(*ex.domain == "travel");

    const Dataset only_banking[] = {banking};
    CHECK_THROWS_AS(build_ood(target, only_banking, excluded), DataError);
    CHECK_THROWS_AS(build_ood(target, std::span<const Dataset>{}, excluded), UsageError);
}

TEST_CASE("csv and jsonl writers round-trip") {
    auto d = grid_dataset(3, 2, "dom");
    d.examples[0].text = "with, comma \"quoted\"";
    auto csv = fs::temp_directory_path() / "intentcl_test_corpus" / "rt.csv";
    auto jsonl = fs::temp_directory_path() / "intentcl_test_corpus" / "rt.jsonl";
    write_csv(d, csv);
    write_jsonl(d, jsonl);
    for (auto back : {load_dataset(csv, DataFormat::csv), load_dataset(jsonl, DataFormat::jsonl)}) {
        REQUIRE(back.size() == d.size());
        for (std::size_t i = 0; i < d.size(); ++i) {
            CHECK(back.examples[i].text == d.examples[i].text);
            CHECK(back.labels[back.examples[i].intent_id].raw_name == d.labels[d.examples[i].intent_id].raw_name);
        }
    }
    CHECK(load_dataset(jsonl, DataFormat::jsonl).examples[0].domain == std::optional<std::string>("dom"));
}
