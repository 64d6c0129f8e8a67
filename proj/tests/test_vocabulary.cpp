#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "intentcl/errors.hpp"

using namespace intentcl;

TEST_CASE("word_tokens") {
    using V = std::vector<std::string>;
    CHECK(word_tokens("Where's my CARD?!") == V{"where", "s", "my", "card"});
    CHECK(word_tokens("top-up 20EUR") == V{"top", "up", "20eur"});
    CHECK(word_tokens("  ...  ").empty());
    CHECK(word_tokens("caf\xc3\xa9 ok") == V{"caf\xc3\xa9", "ok"});
}

TEST_CASE("reserved ids and lookups") {
    Vocabulary v;
    CHECK(v.size() == 4);
    CHECK(v.token(Vocabulary::kPad) == "<pad>");
    CHECK(v.token(Vocabulary::kUnk) == "<unk>");
    CHECK(v.token(Vocabulary::kSep) == "<sep>");
    CHECK(v.token(Vocabulary::kPlh) == "<plh>");
    const int card = v.add("card");
    CHECK(card == 4);
    CHECK(v.add("card") == 4);
    CHECK(v.id("card") == 4);
    CHECK(v.id("nowhere") == Vocabulary::kUnk);
    CHECK_FALSE(v.contains("nowhere"));
}

TEST_CASE("from_tokens validates its input") {
    auto v = Vocabulary::from_tokens({"<pad>", "<unk>", "<sep>", "<plh>", "a", "b"});
    CHECK(v.id("b") == 5);
    CHECK_THROWS_AS(Vocabulary::from_tokens({"<pad>", "<unk>"}), DataError);
    CHECK_THROWS_AS(Vocabulary::from_tokens({"<unk>", "<pad>", "<sep>", "<plh>"}), DataError);
    CHECK_THROWS_AS(Vocabulary::from_tokens({"<pad>", "<unk>", "<sep>", "<plh>", "a", "a"}), DataError);
}

TEST_CASE("build_vocab: min_count keeps label words") {
    const std::vector<std::string> texts{"pay my bill", "pay the card", "rare word"};
    const std::vector<std::string> surfaces{"card arrival"};
    auto v = build_vocab(texts, surfaces, 2);
    CHECK(v.contains("pay"));
    CHECK(v.contains("card"));
    CHECK(v.contains("arrival"));
    CHECK_FALSE(v.contains("rare"));
    CHECK(v.id("card") < v.id("pay"));  // label words come first

    auto all = build_vocab(texts, surfaces, 1);
    CHECK(all.contains("rare"));
    CHECK_THROWS_AS(build_vocab(std::span<const std::string>{}, std::span<const std::string>{}), DataError);
}

TEST_CASE("tokenize lays out utterance, separators and placeholders") {
    auto ls = fixtures::labels({"card arrival", "balance", "top up"});
    auto v = fixtures::vocab_for(ls, {"where is my card"});
    auto groups = partition_intents(ls, 2);
    auto plans = build_plans({"where is my card", 1, std::nullopt}, groups);

    auto seq = tokenize(plans[0], ls, v);
    CHECK(seq.utterance_span == TokenSpan{0, 4});
    REQUIRE(seq.k() == 2);
    CHECK(seq.token_ids[4] == Vocabulary::kSep);
    CHECK(seq.slot_spans[0] == TokenSpan{5, 7});
    CHECK(seq.token_ids[7] == Vocabulary::kSep);
    CHECK(seq.slot_spans[1] == TokenSpan{8, 9});
    CHECK(seq.gold_slot == 1);
    CHECK(seq.token_ids.size() == 9);

    auto last = tokenize(plans[1], ls, v);
    CHECK_FALSE(last.gold_slot.has_value());
    CHECK(last.placeholder == std::vector<bool>{false, true});
    CHECK(last.slot_spans[1].size() == 1);
    CHECK(last.token_ids[last.slot_spans[1].begin] == Vocabulary::kPlh);

    // Rendered order follows slot_order.
    auto shuffled = plans[0];
    shuffled.slot_order = {1, 0};
    shuffled.gold_slot = 0;
    auto rs = tokenize(shuffled, ls, v);
    CHECK(rs.slot_spans[0].size() == 1);
    CHECK(rs.token_ids[rs.slot_spans[0].begin] == v.id("balance"));
}

TEST_CASE("tokenize errors") {
    auto ls = fixtures::labels({"alpha", "beta"});
    auto v = fixtures::vocab_for(ls, {"text"});
    auto groups = partition_intents(ls, 2);
    CHECK_THROWS_AS(tokenize(build_plans({"?!", 0, std::nullopt}, groups)[0], ls, v), DataError);

    auto bad = fixtures::labels({"alpha", "..."});
    CHECK_THROWS_AS(tokenize(build_plans({"text", 0, std::nullopt}, partition_intents(bad, 2))[0], bad, v), DataError);

    auto plan = build_plans({"text", 0, std::nullopt}, groups)[0];
    plan.group.slots[1] = 7;
    CHECK_THROWS_AS(tokenize(plan, ls, v), DataError);

    // Out-of-vocabulary words become UNK rather than failing.
    auto seq = tokenize(build_plans({"unseen words", 0, std::nullopt}, groups)[0], ls, v);
    CHECK(seq.token_ids[0] == Vocabulary::kUnk);
}
