#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "intentcl/checkpoint.hpp"
#include "intentcl/errors.hpp"
#include "intentcl/evaluator.hpp"
#include "intentcl/pretrain.hpp"
#include "intentcl/synthetic.hpp"
#include "run_config.hpp"

using namespace intentcl;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Options every subcommand shares.
struct Common {
    std::uint64_t seed = 0;
    std::string out;
    std::string config;
};

struct DataArgs {
    std::string path;
    std::string format;  // empty: from the file extension
    std::string labels;  // optional inventory file
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help, Common& common) {
    auto* sub = app.add_subcommand(name, help);
    sub->option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--seed", common.seed, "Seed for every random choice");
    sub->add_option("--out", common.out, "Metrics JSONL path (stdout when omitted)");
    sub->add_option("--config", common.config, "Flat `key = value` file; flags override it");
    return sub;
}

void add_data_option(CLI::App* sub, const std::string& flag, DataArgs& d, const std::string& help, bool required) {
    sub->add_option(flag, d.path, help)->required(required);
}

Dataset load(const std::string& path, const std::string& format, const std::vector<std::string>* inventory) {
    if (!fs::exists(path)) throw DataError("no such file: " + path);
    return load_dataset(path, data_format_from(format.empty() ? path : format), inventory);
}

Dataset load(const DataArgs& d, const std::vector<std::string>* inventory = nullptr) {
    if (!d.labels.empty() && !inventory) {
        auto inv = load_label_inventory(d.labels);
        return load(d.path, d.format, &inv);
    }
    return load(d.path, d.format, inventory);
}

// Header record of every metrics file: command, seed and resolved config.
json header(const std::string& command, const Common& c, const CLI::App& sub) {
    return {{"event", "config"}, {"command", command}, {"seed", c.seed}, {"config", cli::resolved_config(sub)}};
}

json record(const std::string& event, const Common& c) { return {{"event", event}, {"seed", c.seed}}; }

// Human-readable output goes to stdout only when metrics go to a file.
void say(const Common& c, const std::string& text) {
    if (!c.out.empty()) std::cout << text;
}

Checkpoint load_init(const std::string& path) {
    if (!fs::exists(path)) throw DataError("no such checkpoint: " + path);
    return load_checkpoint(path);
}

std::vector<std::uint64_t> run_seeds(std::uint64_t seed, int runs) {
    if (runs < 1) throw UsageError("--runs must be at least 1");
    std::vector<std::uint64_t> seeds;
    for (int r = 0; r < runs; ++r) seeds.push_back(seed + static_cast<std::uint64_t>(r));
    return seeds;
}

void write_predictions(const std::string& path, std::span<const Prediction> preds, std::span<const IntentLabel> labels) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path);
    for (const auto& p : preds) out << to_json(p, labels).dump() << '\n';
}

json train_report_json(const TrainReport& r) {
    return {{"k", r.k},
            {"selection", to_string(r.selection)},
            {"initial_loss", r.initial_loss},
            {"final_loss", r.final_loss},
            {"best_epoch", r.best_epoch},
            {"epoch_loss", r.epoch_loss},
            {"epoch_metric", r.epoch_metric}};
}

EpochCallback epoch_logger(cli::MetricsSink& sink, const Common& c) {
    return [&sink, &c](const EpochRecord& e) {
        auto r = record("epoch", c);
        r["epoch"] = e.epoch;
        r["train_loss"] = e.train_loss;
        r["metric"] = e.metric;
        r["selection"] = to_string(e.selection);
        r["steps"] = e.steps;
        sink.write(r);
    };
}

std::vector<std::string> all_texts(std::span<const Dataset> corpora) {
    std::vector<std::string> texts;
    for (const auto& d : corpora) {
        for (const auto& ex : d.examples) texts.push_back(ex.text);
        for (const auto& l : d.labels) texts.push_back(l.surface);
    }
    return texts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Few-shot intent detection with label-aware contrastive training"};
    app.require_subcommand(1);
    Common common;
    TrainConfig cfg;

    // ingest
    DataArgs ingest_data;
    std::string ingest_export;
    auto* ingest = add_command(app, "ingest", "Load a dataset and report its statistics", common);
    add_data_option(ingest, "--data", ingest_data, "Dataset (csv or jsonl)", true);
    ingest->add_option("--format", ingest_data.format, "csv or jsonl (default: file extension)");
    ingest->add_option("--labels", ingest_data.labels, "Label inventory, one raw label per line");
    ingest->add_option("--export", ingest_export, "Write the parsed dataset as JSONL");
    ingest->add_option("--k-min", cfg.k_min, "Smallest group size considered");
    ingest->add_option("--k-max", cfg.k_max, "Largest group size considered");

    // synth
    std::string synth_kind = "intents", synth_dir;
    int synth_intents = 20, synth_shots = 5, synth_noise = 3, synth_test = 20, synth_pairs = 200;
    auto* synth = add_command(app, "synth", "Generate a synthetic intent task or paraphrase corpus", common);
    synth->add_option("--kind", synth_kind, "intents or paraphrase")->check(CLI::IsMember({"intents", "paraphrase"}));
    synth->add_option("--intents", synth_intents, "Number of intents");
    synth->add_option("--shots", synth_shots, "Training utterances per intent");
    synth->add_option("--noise", synth_noise, "Filler words per utterance");
    synth->add_option("--test-per-intent", synth_test, "Test utterances per intent");
    synth->add_option("--pairs", synth_pairs, "Paraphrase pairs (paraphrase kind)");
    synth->add_option("--out-dir", synth_dir, "Output directory")->required();

    // train
    DataArgs train_data, train_dev;
    double train_dev_fraction = 0;
    std::string train_init, train_ckpt;
    int train_min_count = 1;
    auto* train_cmd = add_command(app, "train", "Fine-tune on an intent dataset", common);
    add_data_option(train_cmd, "--data", train_data, "Training dataset", true);
    train_cmd->add_option("--format", train_data.format, "csv or jsonl (default: file extension)");
    train_cmd->add_option("--labels", train_data.labels, "Label inventory, one raw label per line");
    add_data_option(train_cmd, "--dev", train_dev, "Dev dataset for model selection", false);
    train_cmd->add_option("--dev-fraction", train_dev_fraction, "Hold out this fraction of --data as dev");
    train_cmd->add_option("--init", train_init, "Start from this checkpoint (its vocabulary is kept)");
    train_cmd->add_option("--ckpt", train_ckpt, "Write the selected model here");
    train_cmd->add_option("--min-count", train_min_count, "Vocabulary frequency cutoff");
    cli::add_train_options(*train_cmd, cfg);

    // pretrain-ood
    DataArgs ood_target;
    std::vector<std::string> ood_sources, ood_excluded, ood_vocab_from;
    std::string ood_ckpt;
    auto* ood_cmd = add_command(app, "pretrain-ood", "Pretrain on the union of out-of-domain datasets", common);
    add_data_option(ood_cmd, "--target", ood_target, "Target dataset (names the set, extends the vocabulary)", true);
    ood_cmd->add_option("--ood", ood_sources, "Out-of-domain dataset (repeatable)")
        ->required()
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    ood_cmd->add_option("--exclude-domain", ood_excluded, "Drop examples of this domain (repeatable)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    ood_cmd->add_option("--vocab-from", ood_vocab_from, "Extra dataset whose words join the vocabulary (repeatable)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    ood_cmd->add_option("--ckpt", ood_ckpt, "Checkpoint output")->required();
    cli::add_train_options(*ood_cmd, cfg);

    // pretrain-para
    std::string para_pairs, para_plans, para_ckpt;
    std::vector<std::string> para_vocab_from;
    int para_n_target = 20;
    bool para_no_filter = false;
    std::size_t para_max_words = 10, para_max_chars = 40;
    auto* para_cmd = add_command(app, "pretrain-para", "Pretrain on paraphrase pairs with mined negatives", common);
    para_cmd->add_option("--pairs", para_pairs, "TSV of anchor<TAB>paraphrase")->required();
    para_cmd->add_option("--n-target", para_n_target, "Candidates per anchor (gold plus n-1 negatives)");
    para_cmd->add_flag("--no-filter", para_no_filter, "Keep pairs of any length");
    para_cmd->add_option("--max-words", para_max_words, "Length filter: words per side");
    para_cmd->add_option("--max-chars", para_max_chars, "Length filter: characters per side");
    para_cmd->add_option("--plans-out", para_plans, "Write the mined instances as JSONL");
    para_cmd->add_option("--vocab-from", para_vocab_from, "Extra dataset whose words join the vocabulary (repeatable)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    para_cmd->add_option("--ckpt", para_ckpt, "Checkpoint output")->required();
    cli::add_train_options(*para_cmd, cfg);

    // eval
    DataArgs eval_train, eval_test, eval_dev;
    std::string eval_ckpt, eval_predictions;
    int eval_shots = 5, eval_runs = 1;
    double eval_dev_fraction = 0;
    auto* eval_cmd = add_command(app, "eval", "Score a checkpoint, or run repeated few-shot experiments", common);
    add_data_option(eval_cmd, "--test", eval_test, "Test dataset", true);
    eval_cmd->add_option("--labels", eval_test.labels, "Label inventory shared by every split");
    add_data_option(eval_cmd, "--train", eval_train, "Pool to draw few-shot samples from", false);
    add_data_option(eval_cmd, "--dev", eval_dev, "Dev dataset for model selection", false);
    eval_cmd->add_option("--dev-fraction", eval_dev_fraction, "Hold out this fraction of --train as dev");
    eval_cmd->add_option("--ckpt", eval_ckpt, "Model to score, or warm start for few-shot runs");
    eval_cmd->add_option("--shots", eval_shots, "Examples per intent in each few-shot run");
    eval_cmd->add_option("--runs", eval_runs, "Repetitions with seeds seed, seed+1, ...");
    eval_cmd->add_option("--predictions", eval_predictions, "Write per-utterance top-5 predictions (first run)");
    cli::add_train_options(*eval_cmd, cfg);

    // zeroshot
    DataArgs zs_test;
    std::string zs_ckpt, zs_predictions;
    int zs_runs = 1;
    auto* zs_cmd = add_command(app, "zeroshot", "Evaluate without any target-task training", common);
    add_data_option(zs_cmd, "--test", zs_test, "Test dataset", true);
    zs_cmd->add_option("--labels", zs_test.labels, "Label inventory");
    zs_cmd->add_option("--ckpt", zs_ckpt, "Pretrained model (untrained parameters when omitted)");
    zs_cmd->add_option("--runs", zs_runs, "Repetitions with seeds seed, seed+1, ...");
    zs_cmd->add_option("--predictions", zs_predictions, "Write per-utterance top-5 predictions (first run)");
    cli::add_train_options(*zs_cmd, cfg);

    // sweep-k
    DataArgs sweep_data, sweep_dev;
    std::vector<int> sweep_ks{2, 5, 10, 20};
    int sweep_n = 0;
    double sweep_dev_fraction = 0.2;
    auto* sweep_cmd = add_command(app, "sweep-k", "Group-size arithmetic, and dev accuracy per k", common);
    sweep_cmd->add_option("--n", sweep_n, "Number of intents (arithmetic only)");
    add_data_option(sweep_cmd, "--data", sweep_data, "Training dataset (enables training per k)", false);
    add_data_option(sweep_cmd, "--dev", sweep_dev, "Dev dataset", false);
    sweep_cmd->add_option("--dev-fraction", sweep_dev_fraction, "Dev share of --data when --dev is absent");
    sweep_cmd->add_option("--k-values", sweep_ks, "Group sizes to try")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    cli::add_train_options(*sweep_cmd, cfg);

    // diagnose-topk
    DataArgs diag_test;
    std::string diag_ckpt;
    int diag_top = 10;
    auto* diag_cmd = add_command(app, "diagnose-topk", "Errors a tf-idf top-k label filter makes that the model avoids", common);
    add_data_option(diag_cmd, "--test", diag_test, "Labeled dataset", true);
    diag_cmd->add_option("--labels", diag_test.labels, "Label inventory");
    diag_cmd->add_option("--ckpt", diag_ckpt, "Model checkpoint")->required();
    diag_cmd->add_option("--top", diag_top, "Filter depth");
    cli::add_train_options(*diag_cmd, cfg);

    try {
        const auto args = cli::expand_config(argc, argv);
        std::vector<const char*> cargs;
        for (const auto& a : args) cargs.push_back(a.c_str());
        try {
            app.parse(static_cast<int>(cargs.size()), cargs.data());
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e);
            return code == 0 ? 0 : 1;
        }
        cfg.seed = common.seed;

        CLI::App* sub = app.get_subcommands().front();
        const std::string command = sub->get_name();
        cli::MetricsSink sink(common.out);
        sink.write(header(command, common, *sub));

        if (command == "ingest") {
            auto d = load(ingest_data);
            std::map<int, int> per;
            std::set<std::string> domains;
            for (const auto& ex : d.examples) {
                ++per[ex.intent_id];
                if (ex.domain) domains.insert(*ex.domain);
            }
            int lo = d.size() ? per.begin()->second : 0, hi = 0;
            for (auto [id, n] : per) lo = std::min(lo, n), hi = std::max(hi, n);
            const int n = static_cast<int>(d.num_intents());
            const int k = choose_k(n, cfg.k_min, cfg.k_max);
            const Dataset corpora[] = {d};
            auto r = record("ingest", common);
            r.update({{"dataset", d.name},
                      {"examples", d.size()},
                      {"intents", n},
                      {"min_per_intent", lo},
                      {"max_per_intent", hi},
                      {"k", k},
                      {"m", group_count(n, k)},
                      {"padding", padding(n, k)},
                      {"vocab_size", build_vocab(corpora).size()},
                      {"domains", domains}});
            sink.write(r);
            if (!ingest_export.empty()) write_jsonl(d, ingest_export);
            say(common, d.name + ": " + std::to_string(d.size()) + " examples, " + std::to_string(n) +
                            " intents, k = " + std::to_string(k) + "\n");
        } else if (command == "synth") {
            fs::create_directories(synth_dir);
            const fs::path dir(synth_dir);
            auto r = record("synth", common);
            Dataset test;
            if (synth_kind == "intents") {
                auto task = generate_synthetic(synth_intents, synth_shots, synth_noise, common.seed, synth_test);
                write_csv(task.train, dir / "train.csv");
                r["train_examples"] = task.train.size();
                test = std::move(task.test);
            } else {
                auto world = generate_paraphrase_world(synth_pairs, synth_intents, synth_noise, common.seed, synth_test);
                write_paraphrase_pairs(world.pairs, dir / "pairs.tsv");
                r["pairs"] = world.pairs.size();
                test = std::move(world.zero_shot_test);
            }
            write_csv(test, dir / "test.csv");
            write_label_inventory(test, dir / "labels.txt");
            r["test_examples"] = test.size();
            r["intents"] = test.num_intents();
            sink.write(r);
            say(common, "wrote " + synth_kind + " task to " + synth_dir + "\n");
        } else if (command == "train") {
            auto data = load(train_data);
            const auto inventory = data.raw_label_names();
            std::optional<Dataset> dev;
            if (!train_dev.path.empty()) dev = load(train_dev.path, train_dev.format, &inventory);
            else if (train_dev_fraction > 0) {
                auto [t, d] = split_dev(data, train_dev_fraction, common.seed);
                data = std::move(t);
                dev = std::move(d);
            }
            std::optional<Checkpoint> init;
            Vocabulary vocab;
            if (!train_init.empty()) {
                init = load_init(train_init);
                vocab = init->vocab;
            } else {
                const Dataset corpora[] = {data};
                vocab = build_vocab(corpora, train_min_count);
            }
            auto result = train(data, dev ? &*dev : nullptr, vocab, cfg, init ? &init->params : nullptr,
                                epoch_logger(sink, common));
            if (!train_ckpt.empty()) save_checkpoint(result.params, vocab, train_ckpt);
            auto r = record("train", common);
            r.update(train_report_json(result.report));
            r["vocab_size"] = vocab.size();
            r["parameters"] = result.params.num_parameters();
            r["examples"] = data.size();
            r["dev_examples"] = dev ? static_cast<int>(dev->size()) : 0;
            sink.write(r);
            say(common, "trained k = " + std::to_string(result.report.k) + ", loss " +
                            std::to_string(result.report.initial_loss) + " -> " +
                            std::to_string(result.report.final_loss) + "\n");
        } else if (command == "pretrain-ood") {
            auto target = load(ood_target);
            std::vector<Dataset> sources;
            for (const auto& p : ood_sources) sources.push_back(load(p, "", nullptr));
            auto ood = build_ood(target, sources, ood_excluded);
            std::vector<Dataset> vocab_corpora{ood, target};
            for (const auto& p : ood_vocab_from) vocab_corpora.push_back(load(p, "", nullptr));
            auto vocab = build_vocab(vocab_corpora);
            const int k = cfg.resolve_k(static_cast<int>(ood.num_intents()));
            auto items = build_ood_pretrain(ood, k);
            auto result = train_planned(items, vocab, cfg, nullptr, nullptr, 0, epoch_logger(sink, common));
            save_checkpoint(result.params, vocab, ood_ckpt);
            auto r = record("pretrain-ood", common);
            r.update(train_report_json(result.report));
            r["ood_name"] = ood.name;
            r["ood_intents"] = ood.num_intents();
            r["ood_examples"] = ood.size();
            r["vocab_size"] = vocab.size();
            sink.write(r);
            say(common, ood.name + ": " + std::to_string(ood.num_intents()) + " intents, " +
                            std::to_string(ood.size()) + " examples\n");
        } else if (command == "pretrain-para") {
            if (!fs::exists(para_pairs)) throw DataError("no such file: " + para_pairs);
            auto pairs = load_paraphrase_pairs(para_pairs);
            const auto total_pairs = pairs.size();
            if (!para_no_filter) pairs = filter_pairs(pairs, para_max_words, para_max_chars);
            if (pairs.empty()) throw DataError("no paraphrase pairs survive the length filter");
            const int k = cfg.resolve_k(para_n_target);
            auto set = build_paraphrase_instances(pairs, para_n_target, k, common.seed);
            if (!para_plans.empty()) write_pretrain_jsonl(set, para_plans);

            std::vector<std::string> texts;
            for (const auto& p : pairs) texts.insert(texts.end(), {p.anchor, p.paraphrase});
            std::vector<Dataset> extra;
            for (const auto& p : para_vocab_from) extra.push_back(load(p, "", nullptr));
            auto extra_texts = all_texts(extra);
            texts.insert(texts.end(), extra_texts.begin(), extra_texts.end());
            auto vocab = build_vocab(texts, std::span<const std::string>{});

            auto result = train_planned(set.examples, vocab, cfg, nullptr, nullptr, 0, epoch_logger(sink, common));
            save_checkpoint(result.params, vocab, para_ckpt);
            auto r = record("pretrain-para", common);
            r.update(train_report_json(result.report));
            r["pairs_read"] = total_pairs;
            r["pairs_kept"] = pairs.size();
            r["instances"] = set.instances.size();
            r["negatives_per_instance"] = para_n_target - 1;
            r["vocab_size"] = vocab.size();
            sink.write(r);
            say(common, std::to_string(set.instances.size()) + " instances from " + std::to_string(pairs.size()) +
                            " pairs, loss " + std::to_string(result.report.initial_loss) + " -> " +
                            std::to_string(result.report.final_loss) + "\n");
        } else if (command == "eval" || command == "zeroshot") {
            const bool few_shot = command == "eval" && !eval_train.path.empty();
            const DataArgs& test_args = command == "eval" ? eval_test : zs_test;
            const std::string& ckpt_path = command == "eval" ? eval_ckpt : zs_ckpt;
            const std::string& pred_path = command == "eval" ? eval_predictions : zs_predictions;
            const int runs = command == "eval" ? eval_runs : zs_runs;

            std::optional<Checkpoint> ckpt;
            if (!ckpt_path.empty()) ckpt = load_init(ckpt_path);
            if (command == "eval" && !few_shot && !ckpt)
                throw UsageError("eval needs --ckpt, or --train for few-shot runs");

            EvalTask task;
            EvalOptions opt;
            opt.seeds = run_seeds(common.seed, runs);
            opt.init = ckpt ? &*ckpt : nullptr;
            if (few_shot) {
                task.train_pool = load(eval_train);
                const auto inventory = task.train_pool.raw_label_names();
                task.test = load(test_args.path, test_args.format, &inventory);
                if (!eval_dev.path.empty()) task.dev = load(eval_dev.path, eval_dev.format, &inventory);
                else if (eval_dev_fraction > 0) {
                    auto [t, d] = split_dev(task.train_pool, eval_dev_fraction, common.seed);
                    task.train_pool = std::move(t);
                    task.dev = std::move(d);
                }
                opt.mode = EvalMode::few_shot;
                opt.shots = eval_shots;
            } else {
                task.test = load(test_args);
                task.train_pool = task.test;
                opt.mode = EvalMode::zero_shot;
            }
            std::vector<std::vector<Prediction>> preds;
            auto report = evaluate_runs(task, cfg, opt, &preds);
            if (command == "eval" && !few_shot) report.mode = "checkpoint";
            write_predictions(pred_path, preds.front(), task.test.labels);
            auto r = record(command, common);
            r.update(to_json(report));
            r["k"] = cfg.resolve_k(static_cast<int>(task.test.num_intents()));
            r["test_examples"] = task.test.size();
            r["chance"] = 100.0 / static_cast<double>(task.test.num_intents());
            sink.write(r);
            say(common, to_text(report));
        } else if (command == "sweep-k") {
            std::vector<SweepRow> rows;
            int n = sweep_n;
            if (!sweep_data.path.empty()) {
                auto data = load(sweep_data);
                const auto inventory = data.raw_label_names();
                Dataset dev;
                if (!sweep_dev.path.empty()) dev = load(sweep_dev.path, sweep_dev.format, &inventory);
                else {
                    auto [t, d] = split_dev(data, sweep_dev_fraction, common.seed);
                    data = std::move(t);
                    dev = std::move(d);
                }
                const Dataset corpora[] = {data};
                auto vocab = build_vocab(corpora);
                n = static_cast<int>(data.num_intents());
                rows = sweep_k(data, dev, vocab, cfg, sweep_ks);
            } else {
                if (n < 1) throw UsageError("sweep-k needs --n or --data");
                rows = sweep_k_table(n, sweep_ks);
            }
            for (const auto& row : rows) {
                auto r = record("sweep-k", common);
                const SweepRow one[] = {row};
                r.update(to_json(std::span<const SweepRow>(one))[0]);
                r["n"] = n;
                sink.write(r);
            }
            auto r = record("choose-k", common);
            r["n"] = n;
            r["k"] = choose_k(n, cfg.k_min, cfg.k_max);
            sink.write(r);
            say(common, to_text(std::span<const SweepRow>(rows)));
        } else if (command == "diagnose-topk") {
            auto ckpt = load_init(diag_ckpt);
            auto test = load(diag_test);
            const int k = cfg.resolve_k(static_cast<int>(test.num_intents()));
            auto preds = predict_dataset(ckpt.params, ckpt.vocab, test, k);
            auto filter = tfidf_label_filter(test);
            auto miss = topk_miss(preds, filter, diag_top);
            auto r = record("diagnose-topk", common);
            r.update({{"top", diag_top},
                      {"examples", test.size()},
                      {"miss_count", miss.miss_count},
                      {"recovered_count", miss.recovered_count},
                      {"model_accuracy", accuracy(preds)},
                      {"filter_accuracy", accuracy(filter)}});
            sink.write(r);
            say(common, "tf-idf top-" + std::to_string(diag_top) + " misses " + std::to_string(miss.miss_count) +
                            ", model recovers " + std::to_string(miss.recovered_count) + "\n");
        }
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
