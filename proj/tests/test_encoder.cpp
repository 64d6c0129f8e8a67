#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>

#include "fixtures.hpp"
#include "intentcl/encoder.hpp"

using namespace intentcl;

namespace {

struct World {
    std::vector<IntentLabel> ls = fixtures::labels({"card arrival", "balance", "top up", "lost card", "exchange rate"});
    Vocabulary vocab = fixtures::vocab_for(ls, {"where is my new card", "what is my balance"});
};

}  // namespace

TEST_CASE("init_params: shapes, range and seeding") {
    auto shape = ModelShape::make(30, 8, 6, 4, 3, true);
    auto p = init_params<double>(shape, 5);
    CHECK(p.shape() == shape);
    CHECK(p.embedding.rows() == 30);
    REQUIRE(p.projector.size() == 3);
    CHECK(p.projector[0].weight.rows() == 6);
    CHECK(p.projector[0].weight.cols() == 8);
    CHECK(p.projector[2].weight.rows() == 4);
    CHECK(p.num_parameters() == 30 * 8 + 3 * 64 + (6 * 8 + 6) + (6 * 6 + 6) + (4 * 6 + 4));
    bool in_range = true;
    p.for_each_array([&](const auto& a) { in_range = in_range && a.cwiseAbs().maxCoeff() <= 0.1; });
    CHECK(in_range);
    CHECK(init_params<double>(shape, 5) == p);
    CHECK_FALSE(init_params<double>(shape, 6) == p);
    CHECK_THROWS_AS(init_params<double>(ModelShape::make(30, 8, 6, 1), 1), UsageError);
    CHECK_THROWS_AS(ModelShape::make(30, 8, 6, 4, 0), UsageError);
}

TEST_CASE("mean pooling and a single affine projector") {
    World w;
    auto seqs = fixtures::sequences("where is my new card", 0, w.ls, 5, w.vocab);
    auto shape = ModelShape::make(w.vocab.size(), 6, 6, 3, 1);
    auto p = init_params<double>(shape, 9);
    auto emb = encode(p, seqs[0]);
    CHECK(emb.k() == 5);

    Vector<double> mean = Vector<double>::Zero(6);
    for (const char* word : {"where", "is", "my", "new", "card"}) mean += p.embedding.row(w.vocab.id(word)).transpose();
    mean /= 5.0;
    CHECK((emb.z_utterance() - mean).norm() < 1e-14);

    Vector<double> h = p.projector[0].weight * mean + p.projector[0].bias;
    CHECK((emb.h_utterance() - h).norm() < 1e-14);

    Vector<double> slot0 = (p.embedding.row(w.vocab.id("card")) + p.embedding.row(w.vocab.id("arrival"))).transpose() / 2.0;
    CHECK((emb.z_slot(0) - slot0).norm() < 1e-14);
}

TEST_CASE("tanh between projector layers only") {
    World w;
    auto seqs = fixtures::sequences("what is my balance", 1, w.ls, 5, w.vocab);
    auto p = init_params<double>(ModelShape::make(w.vocab.size(), 5, 7, 3, 2), 2, 0.8);
    auto emb = encode(p, seqs[0]);
    Vector<double> hidden = (p.projector[0].weight * emb.z_utterance() + p.projector[0].bias).array().tanh().matrix();
    Vector<double> out = p.projector[1].weight * hidden + p.projector[1].bias;
    CHECK((emb.h_utterance() - out).norm() < 1e-14);
}

TEST_CASE("slot order permutes columns and nothing else") {
    World w;
    for (bool attention : {false, true}) {
        auto p = init_params<double>(ModelShape::make(w.vocab.size(), 6, 6, 4, 2, attention), 3, 0.5);
        auto groups = partition_intents(w.ls, 5);
        auto plan = build_plans({"where is my new card", 3, std::nullopt}, groups)[0];
        auto base = encode(p, tokenize(plan, w.ls, w.vocab));
        for (const auto& variant : augment_shuffles(plan, 10, 4)) {
            auto emb = encode(p, tokenize(variant, w.ls, w.vocab));
            CHECK((emb.h_utterance() - base.h_utterance()).norm() < 1e-12);
            for (int pos = 0; pos < 5; ++pos) {
                const int original = variant.slot_order[pos];
                CHECK((emb.h_slot(pos) - base.h_slot(original)).norm() < 1e-12);
            }
        }
    }
}

TEST_CASE("attention changes the utterance encoding with context") {
    World w;
    auto p = init_params<double>(ModelShape::make(w.vocab.size(), 6, 6, 4, 2, true), 3, 0.5);
    auto no_att = p;
    no_att.attention.reset();
    auto seq = fixtures::sequences("where is my new card", 0, w.ls, 5, w.vocab)[0];
    CHECK((encode(p, seq).z_utterance() - encode(no_att, seq).z_utterance()).norm() > 1e-6);
}

TEST_CASE("encoder rejects bad inputs") {
    World w;
    auto p = init_params<double>(ModelShape::make(w.vocab.size(), 4, 4, 3), 1);
    auto seq = fixtures::sequences("where is my card", 0, w.ls, 5, w.vocab)[0];

    auto nan_params = p;
    nan_params.embedding(seq.token_ids[0], 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(encode(nan_params, seq), NumericError);

    auto inf_weights = p;
    inf_weights.projector[1].bias[0] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(encode(inf_weights, seq), NumericError);

    auto bad_id = seq;
    bad_id.token_ids[0] = 10000;
    CHECK_THROWS_AS(encode(p, bad_id), DataError);

    // A NaN in an unused embedding row does not matter.
    auto unused = p;
    unused.embedding(Vocabulary::kPad, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_NOTHROW(encode(unused, seq));
}

TEST_CASE("float and double agree") {
    World w;
    auto pd = init_params<double>(ModelShape::make(w.vocab.size(), 6, 6, 4), 8);
    auto pf = init_params<float>(ModelShape::make(w.vocab.size(), 6, 6, 4), 8);
    auto seq = fixtures::sequences("where is my card", 0, w.ls, 5, w.vocab)[0];
    auto ed = encode(pd, seq);
    auto ef = encode(pf, seq);
    CHECK((ed.projected - ef.projected.cast<double>()).cwiseAbs().maxCoeff() < 1e-5);
}
