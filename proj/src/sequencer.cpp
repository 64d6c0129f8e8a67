#include "intentcl/sequencer.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>

#include "intentcl/errors.hpp"
#include "intentcl/random.hpp"

namespace intentcl {

bool IntentGroup::contains(int intent_id) const {
    return std::find(slots.begin(), slots.end(), intent_id) != slots.end();
}

int IntentGroup::real_slots() const {
    return static_cast<int>(std::count_if(slots.begin(), slots.end(), [](int s) { return s != kPlaceholder; }));
}

int choose_k(int n, int k_min, int k_max) {
    if (n < 1) throw UsageError("choose_k: n must be positive");
    if (k_min < 1 || k_min > k_max)
        throw UsageError("choose_k: infeasible range [" + std::to_string(k_min) + ", " + std::to_string(k_max) + "]");
    if (k_min > n) return n;
    const int hi = std::min(k_max, n);
    int best = k_min;
    for (int k = k_min + 1; k <= hi; ++k) {
        auto key = [n](int c) { return std::tuple(padding(n, c), group_count(n, c), -c); };
        if (key(k) < key(best)) best = k;
    }
    return best;
}

std::vector<IntentGroup> partition_intents(std::span<const IntentLabel> labels, int k) {
    if (labels.empty()) throw UsageError("partition_intents: empty label inventory");
    if (k < 1) throw UsageError("partition_intents: k must be positive");
    const int n = static_cast<int>(labels.size());
    const int m = group_count(n, k);
    std::vector<IntentGroup> groups(m);
    for (int g = 0; g < m; ++g) {
        groups[g].index = g;
        groups[g].slots.reserve(k);
        for (int s = 0; s < k; ++s) {
            int pos = g * k + s;
            groups[g].slots.push_back(pos < n ? labels[pos].id : kPlaceholder);
        }
    }
    return groups;
}

namespace {

std::vector<int> identity_order(int k) {
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    return order;
}

void derive_gold(SequencePlan& plan) {
    plan.gold_slot.reset();
    plan.has_gold = false;
    for (int p = 0; p < plan.group.k(); ++p) {
        if (plan.slot_at(p) != kPlaceholder && plan.slot_at(p) == plan.utterance.intent_id) {
            plan.has_gold = true;
            plan.gold_slot = p;
            return;
        }
    }
}

}  // namespace

std::vector<SequencePlan> build_plans(const LabeledUtterance& u, std::span<const IntentGroup> groups) {
    std::vector<SequencePlan> plans;
    plans.reserve(groups.size());
    int gold_plans = 0;
    for (const auto& g : groups) {
        SequencePlan plan{u, g, identity_order(g.k()), false, std::nullopt};
        derive_gold(plan);
        gold_plans += plan.has_gold;
        plans.push_back(std::move(plan));
    }
    if (gold_plans != 1)
        throw DataError("utterance '" + u.text + "': intent " + std::to_string(u.intent_id) +
                        (gold_plans == 0 ? " is absent from every group" : " appears in several groups"));
    return plans;
}

std::vector<SequencePlan> inference_plans(const std::string& text, std::span<const IntentGroup> groups) {
    std::vector<SequencePlan> plans;
    plans.reserve(groups.size());
    for (const auto& g : groups)
        plans.push_back({LabeledUtterance{text, kPlaceholder, std::nullopt}, g, identity_order(g.k()), false, std::nullopt});
    return plans;
}

std::vector<SequencePlan> augment_shuffles(const SequencePlan& plan, int count, std::uint64_t seed) {
    if (count < 1) throw UsageError("augment_shuffles: count must be positive");
    Rng rng(derive_seed(seed, {0x5eed}));
    std::vector<SequencePlan> out;
    out.reserve(count);
    for (int c = 0; c < count; ++c) {
        SequencePlan variant = plan;
        variant.slot_order = identity_order(plan.group.k());
        rng.shuffle(std::span(variant.slot_order));
        derive_gold(variant);
        out.push_back(std::move(variant));
    }
    return out;
}

std::shared_ptr<const LabelSpace> make_label_space(std::vector<IntentLabel> labels, int k) {
    auto space = std::make_shared<LabelSpace>();
    space->groups = partition_intents(labels, k);
    space->labels = std::move(labels);
    space->k = k;
    return space;
}

std::vector<PlannedExample> plan_dataset(const Dataset& data, int k) {
    auto space = make_label_space(data.labels, k);
    std::vector<PlannedExample> out;
    out.reserve(data.examples.size());
    for (const auto& ex : data.examples) out.push_back({space, build_plans(ex, space->groups)});
    return out;
}

}  // namespace intentcl
