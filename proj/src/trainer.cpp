#include "intentcl/trainer.hpp"

#include <cmath>
#include <numeric>

#include "intentcl/errors.hpp"
#include "intentcl/gradient.hpp"
#include "intentcl/inference.hpp"
#include "intentcl/random.hpp"

namespace intentcl {

Optimizer parse_optimizer(const std::string& s) {
    if (s == "adam") return Optimizer::adam;
    if (s == "sgd") return Optimizer::sgd;
    throw UsageError("unknown optimizer '" + s + "' (expected adam or sgd)");
}

Selection parse_selection(const std::string& s) {
    if (s == "dev_accuracy") return Selection::dev_accuracy;
    if (s == "train_loss") return Selection::train_loss;
    throw UsageError("unknown selection '" + s + "' (expected dev_accuracy or train_loss)");
}

const char* to_string(Optimizer o) { return o == Optimizer::adam ? "adam" : "sgd"; }
const char* to_string(Selection s) { return s == Selection::dev_accuracy ? "dev_accuracy" : "train_loss"; }

void TrainConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw UsageError(std::string("invalid training configuration: ") + what);
    };
    require(k >= 0, "k must be non-negative");
    require(k_min >= 1 && k_min <= k_max, "k range");
    require(tau > 0, "tau must be positive");
    require(batch_size >= 1, "batch_size must be positive");
    require(learning_rate > 0, "learning_rate must be positive");
    require(epochs >= 0, "epochs must be non-negative");
    require(shuffles_per_sequence >= 0, "shuffles_per_sequence must be non-negative");
    require(d_emb >= 1 && d_hidden >= 1 && d_out >= 2 && depth >= 1, "model dimensions");
    require(init_scale > 0, "init_scale must be positive");
    require(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1 && adam_eps > 0, "adam constants");
}

OptimizerState::OptimizerState(const ModelParams<double>& like, const TrainConfig& cfg)
    : kind_(cfg.optimizer),
      lr_(cfg.learning_rate),
      beta1_(cfg.beta1),
      beta2_(cfg.beta2),
      eps_(cfg.adam_eps),
      m_(like.zeros_like()),
      v_(like.zeros_like()) {}

void OptimizerState::step(ModelParams<double>& params, const ModelParams<double>& grad) {
    ++t_;
    auto p = params.views();
    auto g = const_cast<ModelParams<double>&>(grad).views();
    if (kind_ == Optimizer::sgd) {
        for (std::size_t i = 0; i < p.size(); ++i) p[i] -= lr_ * g[i];
        return;
    }
    auto m = m_.views();
    auto v = v_.views();
    const double c1 = 1 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < p.size(); ++i) {
        m[i] = beta1_ * m[i] + (1 - beta1_) * g[i];
        v[i] = beta2_ * v[i] + (1 - beta2_) * g[i].cwiseAbs2();
        p[i].array() -= lr_ * (m[i].array() / c1) / ((v[i].array() / c2).sqrt() + eps_);
    }
}

namespace {

std::vector<TokenizedSequence> canonical_sequences(std::span<const PlannedExample> items, const Vocabulary& vocab) {
    std::vector<TokenizedSequence> out;
    for (const auto& item : items)
        for (const auto& plan : item.plans) out.push_back(tokenize(plan, item.space->labels, vocab));
    return out;
}

}  // namespace

double planned_loss(const ModelParams<double>& params, std::span<const PlannedExample> items, const Vocabulary& vocab,
                    const LossConfig& cfg) {
    auto seqs = canonical_sequences(items, vocab);
    if (seqs.empty()) throw DataError("no training sequences");
    return batch_loss_value(params, std::span<const TokenizedSequence>(seqs), cfg);
}

TrainResult train_planned(std::span<const PlannedExample> items, const Vocabulary& vocab, const TrainConfig& cfg,
                          const ModelParams<double>* init, const Dataset* dev, int dev_k,
                          const EpochCallback& on_epoch) {
    cfg.validate();
    if (items.empty()) throw DataError("training set is empty");

    ModelParams<double> params;
    if (init) {
        if (init->embedding.rows() != vocab.size())
            throw DimensionError("initial parameters cover " + std::to_string(init->embedding.rows()) +
                                 " tokens but the vocabulary has " + std::to_string(vocab.size()));
        params = *init;
    } else {
        params = init_params<double>(cfg.shape(vocab.size()), derive_seed(cfg.seed, {0x1417}), cfg.init_scale);
    }

    TrainReport report;
    report.k = items.front().space->k;
    const bool use_dev = cfg.selection == Selection::dev_accuracy && dev != nullptr &&
                         static_cast<int>(dev->size()) >= cfg.min_dev_size;
    report.selection = use_dev ? Selection::dev_accuracy : Selection::train_loss;
    const LossConfig loss_cfg = cfg.loss();
    report.initial_loss = planned_loss(params, items, vocab, loss_cfg);

    if (cfg.epochs == 0) {
        report.final_loss = report.initial_loss;
        return {std::move(params), std::move(report)};
    }

    OptimizerState opt(params, cfg);
    ModelParams<double> best = params;
    double best_metric = 0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::vector<TokenizedSequence> pool;
        for (std::size_t i = 0; i < items.size(); ++i) {
            const auto& item = items[i];
            const int count = cfg.shuffles_per_sequence > 0 ? cfg.shuffles_per_sequence : item.space->k;
            for (std::size_t p = 0; p < item.plans.size(); ++p) {
                auto variants = augment_shuffles(item.plans[p], count, derive_seed(cfg.seed, {0xa06, static_cast<std::uint64_t>(epoch), i, p}));
                for (const auto& v : variants) pool.push_back(tokenize(v, item.space->labels, vocab));
            }
        }
        Rng rng(derive_seed(cfg.seed, {0xb47c, static_cast<std::uint64_t>(epoch)}));
        rng.shuffle(std::span(pool));

        double loss_sum = 0;
        std::size_t seen = 0;
        int batch_index = 0;
        for (std::size_t start = 0; start < pool.size(); start += cfg.batch_size, ++batch_index) {
            const std::size_t len = std::min<std::size_t>(cfg.batch_size, pool.size() - start);
            std::span<const TokenizedSequence> batch(pool.data() + start, len);
            auto lg = loss_and_gradient(params, batch, loss_cfg);
            if (!std::isfinite(lg.loss) || !lg.grad.all_finite())
                throw NumericError("training diverged at epoch " + std::to_string(epoch) + ", batch " +
                                   std::to_string(batch_index));
            opt.step(params, lg.grad);
            loss_sum += lg.loss * static_cast<double>(len);
            seen += len;
        }
        const double epoch_loss = loss_sum / static_cast<double>(seen);
        if (!params.all_finite())
            throw NumericError("training diverged at epoch " + std::to_string(epoch) + " (non-finite parameters)");

        double metric = epoch_loss;
        if (use_dev) {
            auto preds = predict_dataset(params, vocab, *dev, dev_k > 0 ? dev_k : report.k);
            metric = accuracy(preds);
        }
        report.epoch_loss.push_back(epoch_loss);
        report.epoch_metric.push_back(metric);
        const bool better = report.best_epoch < 0 || (use_dev ? metric > best_metric : metric < best_metric);
        if (better) {
            best_metric = metric;
            report.best_epoch = epoch;
            best = params;
        }
        if (on_epoch) on_epoch({epoch, epoch_loss, metric, report.selection, static_cast<int>(opt.steps())});
    }

    report.final_loss = planned_loss(best, items, vocab, loss_cfg);
    return {std::move(best), std::move(report)};
}

TrainResult train(const Dataset& train_data, const Dataset* dev_data, const Vocabulary& vocab, const TrainConfig& cfg,
                  const ModelParams<double>* init, const EpochCallback& on_epoch) {
    if (train_data.examples.empty()) throw DataError("training set is empty");
    const int k = cfg.resolve_k(static_cast<int>(train_data.num_intents()));
    auto items = plan_dataset(train_data, k);
    return train_planned(items, vocab, cfg, init, dev_data, k, on_epoch);
}

}  // namespace intentcl
