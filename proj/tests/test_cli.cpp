#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "intentcl/checkpoint.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path& workdir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "intentcl_test_cli";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

// Runs the CLI inside the work directory and returns its exit code.
int run(const std::string& args) {
    const std::string cmd = "cd '" + workdir().string() + "' && '" INTENTCL_CLI "' " + args + " >/dev/null 2>stderr.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(workdir() / p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<json> records(const fs::path& p) {
    std::vector<json> out;
    std::ifstream in(workdir() / p);
    for (std::string line; std::getline(in, line);) out.push_back(json::parse(line));
    return out;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(workdir() / p, std::ios::binary) << text; }

// Small model so every command finishes quickly.
const char* kSmall = "--config small.ini";

struct Setup {
    Setup() {
        write("small.ini", "# tiny model\nd_emb = 16\nd_hidden = 16\nd_out = 16\nepochs = 3\n");
        REQUIRE(run("synth --intents 6 --shots 4 --noise 2 --test-per-intent 5 --seed 3 --out-dir syn --out syn/m.jsonl") == 0);
    }
};

const Setup& setup() {
    static const Setup s;
    return s;
}

}  // namespace

TEST_CASE("usage errors exit 1") {
    CHECK(run("") == 1);
    CHECK(run("frobnicate") == 1);
    CHECK(run("train") == 1);
    CHECK(run("train --help") == 0);
    write("bad.ini", "no_such_option = 1\n");
    setup();
    CHECK(run("train --data syn/train.csv --config bad.ini") == 1);
    write("broken.ini", "just words\n");
    CHECK(run("train --data syn/train.csv --config broken.ini") == 1);
    CHECK(run("train --data syn/train.csv --optimizer lbfgs") == 1);
    CHECK(run("eval --test syn/test.csv") == 1);
}

TEST_CASE("data errors exit 2") {
    setup();
    CHECK(run("train --data missing.csv") == 2);
    CHECK(run("train --data syn/train.csv --config missing.ini") == 2);
    write("empty_text.csv", "text,category\n,x\n");
    CHECK(run("ingest --data empty_text.csv") == 2);
    write("garbage.ckpt", "not a checkpoint");
    CHECK(run("zeroshot --test syn/test.csv --ckpt garbage.ckpt") == 2);
}

TEST_CASE("numeric failures exit 3") {
    setup();
    CHECK(run("train --data syn/train.csv --init-scale 1e200 --epochs 1") == 3);
}

TEST_CASE("synth, train, eval pipeline") {
    setup();
    REQUIRE(run(std::string("train --data syn/train.csv --ckpt model.ckpt --seed 3 --out train.jsonl ") + kSmall) == 0);
    auto train_log = records("train.jsonl");
    REQUIRE(train_log.size() == 1 + 3 + 1);  // config, epochs, summary
    CHECK(train_log[0]["event"] == "config");
    CHECK(train_log[0]["config"]["epochs"] == "3");
    CHECK(train_log[0]["config"]["d-emb"] == "16");
    CHECK(train_log[0]["config"]["seed"] == "3");
    CHECK(train_log[1]["event"] == "epoch");
    CHECK(train_log.back()["final_loss"].get<double>() < train_log.back()["initial_loss"].get<double>());

    REQUIRE(run("eval --ckpt model.ckpt --test syn/test.csv --predictions preds.jsonl --out eval.jsonl") == 0);
    auto eval_log = records("eval.jsonl");
    REQUIRE(eval_log.size() == 2);
    CHECK(eval_log[1].contains("accuracy"));
    CHECK(eval_log[1]["mode"] == "checkpoint");
    auto preds = records("preds.jsonl");
    CHECK(preds.size() == 30);
    CHECK(preds[0]["top"].size() == 5);

    REQUIRE(run(std::string("eval --train syn/train.csv --test syn/test.csv --shots 2 --runs 2 --out fs.jsonl ") + kSmall) == 0);
    auto fs_log = records("fs.jsonl");
    CHECK(fs_log[1]["run_accuracy"].size() == 2);
    CHECK(fs_log[1]["seeds"] == json::array({0, 1}));

    REQUIRE(run("diagnose-topk --ckpt model.ckpt --test syn/test.csv --top 2 --out diag.jsonl") == 0);
    CHECK(records("diag.jsonl")[1].contains("recovered_count"));
}

TEST_CASE("flags override the config file") {
    setup();
    REQUIRE(run(std::string("train --data syn/train.csv --epochs 1 --out over.jsonl ") + kSmall) == 0);
    auto log = records("over.jsonl");
    CHECK(log[0]["config"]["epochs"] == "1");
    CHECK(log.size() == 1 + 1 + 1);
}

TEST_CASE("repeated runs are byte-identical") {
    setup();
    const std::string cmd = std::string("train --data syn/train.csv --dev-fraction 0.25 --ckpt det.ckpt --seed 11 --out det.jsonl ") + kSmall;
    REQUIRE(run(cmd) == 0);
    const auto metrics = slurp("det.jsonl");
    const auto ckpt = slurp("det.ckpt");
    REQUIRE(run(cmd) == 0);
    CHECK(slurp("det.jsonl") == metrics);
    CHECK(slurp("det.ckpt") == ckpt);

    const std::string other = std::string("train --data syn/train.csv --dev-fraction 0.25 --ckpt det.ckpt --seed 12 --out det.jsonl ") + kSmall;
    REQUIRE(run(other) == 0);
    CHECK(slurp("det.ckpt") != ckpt);
}

TEST_CASE("paraphrase pretraining feeds fine-tuning with its vocabulary") {
    REQUIRE(run("synth --kind paraphrase --pairs 30 --intents 4 --seed 2 --out-dir para --out para/m.jsonl") == 0);
    REQUIRE(run(std::string("pretrain-para --pairs para/pairs.tsv --n-target 6 --plans-out para/plans.jsonl "
                            "--ckpt para/pre.ckpt --out para/pre.jsonl ") + kSmall) == 0);
    auto log = records("para/pre.jsonl");
    CHECK(log.back()["instances"] == 60);
    CHECK(log.back()["negatives_per_instance"] == 5);
    CHECK(records("para/plans.jsonl").size() == 60);

    REQUIRE(run(std::string("train --data para/test.csv --init para/pre.ckpt --ckpt para/ft.ckpt ") + kSmall) == 0);
    auto pre = intentcl::load_checkpoint(workdir() / "para/pre.ckpt");
    auto ft = intentcl::load_checkpoint(workdir() / "para/ft.ckpt");
    CHECK(ft.vocab == pre.vocab);
    CHECK_FALSE(ft.params == pre.params);

    REQUIRE(run("zeroshot --test para/test.csv --ckpt para/pre.ckpt --out para/zs.jsonl") == 0);
    auto zs = records("para/zs.jsonl");
    CHECK(zs[1]["mode"] == "zero-shot");
    CHECK(zs[1]["chance"] == 25.0);
}

TEST_CASE("out-of-domain pretraining") {
    write("target.jsonl", "{\"text\":\"where is my card\",\"label\":\"card_arrival\",\"domain\":\"banking\"}\n");
    write("src1.jsonl",
          "{\"text\":\"wake me at six\",\"label\":\"alarm_set\",\"domain\":\"alarm\"}\n"
          "{\"text\":\"block my card\",\"label\":\"card_block\",\"domain\":\"banking\"}\n"
          "{\"text\":\"rain tomorrow?\",\"label\":\"weather\",\"domain\":\"weather\"}\n");
    write("src2.jsonl", "{\"text\":\"set an alarm\",\"label\":\"AlarmSet\",\"domain\":\"alarm\"}\n");
    REQUIRE(run(std::string("pretrain-ood --target target.jsonl --ood src1.jsonl --ood src2.jsonl "
                            "--exclude-domain Banking --ckpt ood.ckpt --out ood.jsonl ") + kSmall) == 0);
    auto log = records("ood.jsonl");
    CHECK(log.back()["ood_intents"] == 2);
    CHECK(log.back()["ood_examples"] == 3);
    CHECK(log[0]["config"]["ood"] == json::array({"src1.jsonl", "src2.jsonl"}));
    auto ckpt = intentcl::load_checkpoint(workdir() / "ood.ckpt");
    CHECK(ckpt.vocab.contains("arrival"));  // target words join the vocabulary

    CHECK(run("pretrain-ood --target target.jsonl --ood src1.jsonl --exclude-domain alarm --exclude-domain weather "
              "--exclude-domain banking --ckpt never.ckpt") == 2);
}

TEST_CASE("ingest and sweep-k") {
    setup();
    REQUIRE(run("ingest --data syn/train.csv --export syn/train.jsonl --out ingest.jsonl") == 0);
    auto r = records("ingest.jsonl")[1];
    CHECK(r["examples"] == 24);
    CHECK(r["intents"] == 6);
    CHECK(r["k"] == 6);
    CHECK(fs::exists(workdir() / "syn/train.jsonl"));

    REQUIRE(run("sweep-k --n 77 --k-values 2,26 --out sweep.jsonl") == 0);
    auto rows = records("sweep.jsonl");
    REQUIRE(rows.size() == 4);
    CHECK(rows[1]["m"] == 39);
    CHECK(rows[2]["m"] == 3);
    CHECK(rows[3]["k"] == 26);
    CHECK(run("sweep-k --k-values 2") == 1);
}
