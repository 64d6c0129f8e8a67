#include "intentcl/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "intentcl/encoder.hpp"
#include "intentcl/errors.hpp"
#include "intentcl/objective.hpp"
#include "intentcl/pretrain.hpp"

namespace intentcl {

int Prediction::rank_of(int intent_id) const {
    for (std::size_t r = 0; r < ranking.size(); ++r)
        if (ranking[r].intent_id == intent_id) return static_cast<int>(r);
    return -1;
}

namespace {

void sort_ranking(std::vector<ScoredIntent>& ranking) {
    std::sort(ranking.begin(), ranking.end(), [](const ScoredIntent& a, const ScoredIntent& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.intent_id < b.intent_id;
    });
}

}  // namespace

Prediction rank_plans(const ModelParams<double>& params, const Vocabulary& vocab, std::span<const SequencePlan> plans,
                      std::span<const IntentLabel> labels) {
    if (plans.empty()) throw UsageError("prediction needs at least one sequence plan");
    Prediction pred;
    pred.text = plans.front().utterance.text;
    std::vector<bool> seen(labels.size(), false);
    for (const auto& plan : plans) {
        auto seq = tokenize(plan, labels, vocab);
        auto emb = encode(params, seq);
        for (int p = 0; p < emb.k(); ++p) {
            const int intent = plan.slot_at(p);
            if (intent == kPlaceholder) continue;
            if (seen[intent]) throw DataError("intent " + std::to_string(intent) + " appears in several groups");
            seen[intent] = true;
            pred.ranking.push_back({intent, cosine_sim(emb.h_utterance(), emb.h_slot(p))});
        }
    }
    sort_ranking(pred.ranking);
    return pred;
}

Prediction predict(const ModelParams<double>& params, const Vocabulary& vocab, const std::string& text,
                   const LabelSpace& space) {
    if (word_tokens(text).empty()) throw DataError("cannot predict for an empty utterance");
    auto plans = inference_plans(text, space.groups);
    return rank_plans(params, vocab, plans, space.labels);
}

Prediction predict(const ModelParams<double>& params, const Vocabulary& vocab, const std::string& text,
                   std::span<const IntentLabel> labels, int k) {
    auto space = make_label_space({labels.begin(), labels.end()}, k);
    return predict(params, vocab, text, *space);
}

std::vector<Prediction> predict_dataset(const ModelParams<double>& params, const Vocabulary& vocab,
                                        const Dataset& data, int k) {
    auto space = make_label_space(data.labels, k);
    std::vector<Prediction> out;
    out.reserve(data.examples.size());
    for (std::size_t i = 0; i < data.examples.size(); ++i) {
        auto p = predict(params, vocab, data.examples[i].text, *space);
        p.index = static_cast<int>(i);
        p.gold = data.examples[i].intent_id;
        out.push_back(std::move(p));
    }
    return out;
}

double accuracy(std::span<const Prediction> predictions) {
    if (predictions.empty()) return 0.0;
    std::size_t correct = 0;
    for (const auto& p : predictions) correct += p.predicted() == p.gold;
    return 100.0 * static_cast<double>(correct) / static_cast<double>(predictions.size());
}

EvalReport summarize_runs(std::string mode, std::span<const std::uint64_t> seeds,
                          std::span<const std::vector<Prediction>> runs, std::span<const IntentLabel> labels) {
    EvalReport r;
    r.mode = std::move(mode);
    r.seeds.assign(seeds.begin(), seeds.end());
    std::vector<std::size_t> hit(labels.size(), 0), total(labels.size(), 0);
    for (const auto& run : runs) {
        r.run_accuracy.push_back(accuracy(run));
        for (const auto& p : run) {
            if (p.gold < 0 || p.gold >= static_cast<int>(labels.size())) continue;
            ++total[p.gold];
            hit[p.gold] += p.predicted() == p.gold;
        }
    }
    if (!r.run_accuracy.empty()) {
        double sum = 0;
        for (double a : r.run_accuracy) sum += a;
        r.mean = sum / static_cast<double>(r.run_accuracy.size());
        double var = 0;
        for (double a : r.run_accuracy) var += (a - r.mean) * (a - r.mean);
        r.stddev = std::sqrt(var / static_cast<double>(r.run_accuracy.size()));
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        r.intent_names.push_back(labels[i].raw_name);
        r.per_intent_accuracy.push_back(total[i] ? 100.0 * static_cast<double>(hit[i]) / static_cast<double>(total[i])
                                                 : std::nan(""));
    }
    return r;
}

EvalReport evaluate_runs(const EvalTask& task, const TrainConfig& cfg, const EvalOptions& opt,
                         std::vector<std::vector<Prediction>>* predictions) {
    if (opt.seeds.empty()) throw UsageError("evaluation needs at least one seed");
    if (task.test.labels.size() != task.train_pool.labels.size() && opt.mode == EvalMode::few_shot)
        throw DataError("train and test label inventories differ");
    const int k = cfg.resolve_k(static_cast<int>(task.test.num_intents()));

    std::vector<std::vector<Prediction>> runs;
    for (auto seed : opt.seeds) {
        TrainConfig run_cfg = cfg;
        run_cfg.seed = seed;
        if (opt.mode == EvalMode::zero_shot) {
            if (opt.init) {
                runs.push_back(predict_dataset(opt.init->params, opt.init->vocab, task.test, k));
            } else {
                const Dataset corpora[] = {task.test};
                auto vocab = build_vocab(corpora);
                auto params = init_params<double>(run_cfg.shape(vocab.size()), derive_seed(seed, {0x1417}),
                                                  run_cfg.init_scale);
                runs.push_back(predict_dataset(params, vocab, task.test, k));
            }
            continue;
        }
        auto sample = sample_few_shot(task.train_pool, opt.shots, seed);
        Vocabulary vocab;
        const ModelParams<double>* init = nullptr;
        if (opt.init) {
            vocab = opt.init->vocab;
            init = &opt.init->params;
        } else {
            const Dataset corpora[] = {sample};
            vocab = build_vocab(corpora);
        }
        auto result = train(sample, task.dev ? &*task.dev : nullptr, vocab, run_cfg, init);
        runs.push_back(predict_dataset(result.params, vocab, task.test, k));
    }
    auto report = summarize_runs(opt.mode == EvalMode::zero_shot ? "zero-shot" : "few-shot", opt.seeds, runs,
                                 task.test.labels);
    if (predictions) *predictions = std::move(runs);
    return report;
}

TopkMiss topk_miss(std::span<const Prediction> predictions, std::span<const Prediction> filter, int k_top) {
    if (k_top < 1) throw UsageError("k_top must be at least 1");
    if (predictions.size() != filter.size()) throw UsageError("prediction and filter lists are not aligned");
    TopkMiss out;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const int gold = predictions[i].gold;
        const int rank = filter[i].rank_of(gold);
        if (rank >= 0 && rank < k_top) continue;
        ++out.miss_count;
        out.recovered_count += predictions[i].predicted() == gold;
    }
    return out;
}

std::vector<Prediction> tfidf_label_filter(const Dataset& data) {
    std::vector<std::string> surfaces;
    for (const auto& l : data.labels) surfaces.push_back(l.surface);
    TfidfIndex index(surfaces);
    std::vector<Prediction> out;
    for (std::size_t i = 0; i < data.examples.size(); ++i) {
        Prediction p;
        p.index = static_cast<int>(i);
        p.text = data.examples[i].text;
        p.gold = data.examples[i].intent_id;
        for (const auto& l : data.labels) p.ranking.push_back({l.id, index.similarity(p.text, l.surface)});
        sort_ranking(p.ranking);
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<SweepRow> sweep_k_table(int n, std::span<const int> k_values) {
    if (n < 1) throw UsageError("sweep needs n >= 1");
    std::vector<SweepRow> rows;
    for (int k : k_values) {
        if (k < 1) throw UsageError("k values must be positive");
        rows.push_back({k, group_count(n, k), padding(n, k), std::nullopt});
    }
    return rows;
}

std::vector<SweepRow> sweep_k(const Dataset& train_data, const Dataset& dev_data, const Vocabulary& vocab,
                              const TrainConfig& cfg, std::span<const int> k_values) {
    auto rows = sweep_k_table(static_cast<int>(train_data.num_intents()), k_values);
    for (auto& row : rows) {
        TrainConfig run_cfg = cfg;
        run_cfg.k = row.k;
        auto result = train(train_data, nullptr, vocab, run_cfg);
        row.dev_accuracy = accuracy(predict_dataset(result.params, vocab, dev_data, row.k));
    }
    return rows;
}

nlohmann::json to_json(const EvalReport& r) {
    nlohmann::json per_intent = nlohmann::json::object();
    for (std::size_t i = 0; i < r.intent_names.size(); ++i) per_intent[r.intent_names[i]] = r.per_intent_accuracy[i];
    return {{"mode", r.mode},      {"seeds", r.seeds},    {"run_accuracy", r.run_accuracy},
            {"accuracy", r.mean},  {"std", r.stddev},     {"per_intent_accuracy", std::move(per_intent)}};
}

nlohmann::json to_json(std::span<const SweepRow> rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json j = {{"k", row.k}, {"m", row.m}, {"padding", row.padding}};
        j["dev_accuracy"] = row.dev_accuracy ? nlohmann::json(*row.dev_accuracy) : nlohmann::json(nullptr);
        out.push_back(std::move(j));
    }
    return out;
}

nlohmann::json to_json(const Prediction& p, std::span<const IntentLabel> labels, int top) {
    nlohmann::json ranked = nlohmann::json::array();
    for (int r = 0; r < top && r < static_cast<int>(p.ranking.size()); ++r)
        ranked.push_back({{"intent", labels[p.ranking[r].intent_id].raw_name}, {"score", p.ranking[r].score}});
    nlohmann::json j = {{"utterance", p.text}, {"top", std::move(ranked)}};
    j["gold"] = p.gold >= 0 ? nlohmann::json(labels[p.gold].raw_name) : nlohmann::json(nullptr);
    return j;
}

std::string to_text(const EvalReport& r) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2);
    out << "mode      " << r.mode << '\n';
    for (std::size_t i = 0; i < r.run_accuracy.size(); ++i)
        out << "run " << std::setw(3) << i << "   seed " << std::setw(6) << r.seeds[i] << "   accuracy "
            << std::setw(6) << r.run_accuracy[i] << '\n';
    out << "mean      " << r.mean << " (std " << r.stddev << ")\n";
    return out.str();
}

std::string to_text(std::span<const SweepRow> rows) {
    std::ostringstream out;
    out << std::setw(6) << "k" << std::setw(6) << "m" << std::setw(9) << "padding" << std::setw(14) << "dev_accuracy"
        << '\n';
    out << std::fixed << std::setprecision(2);
    for (const auto& row : rows) {
        out << std::setw(6) << row.k << std::setw(6) << row.m << std::setw(9) << row.padding << std::setw(14);
        if (row.dev_accuracy) out << *row.dev_accuracy;
        else out << "-";
        out << '\n';
    }
    return out.str();
}

}  // namespace intentcl
