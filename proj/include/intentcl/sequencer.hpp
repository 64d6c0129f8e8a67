#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "intentcl/corpus.hpp"

namespace intentcl {

inline constexpr int kPlaceholder = -1;

struct IntentGroup {
    int index = 0;
    std::vector<int> slots;  // intent ids or kPlaceholder, exactly k entries

    int k() const { return static_cast<int>(slots.size()); }
    bool contains(int intent_id) const;
    int real_slots() const;
};

/// An utterance paired with one group. Position p of the rendered sequence
/// holds group.slots[slot_order[p]]; gold_slot is such a position.
struct SequencePlan {
    LabeledUtterance utterance;
    IntentGroup group;
    std::vector<int> slot_order;
    bool has_gold = false;
    std::optional<int> gold_slot;

    int slot_at(int position) const { return group.slots[slot_order[position]]; }
};

inline int group_count(int n, int k) { return (n + k - 1) / k; }
inline int padding(int n, int k) { return group_count(n, k) * k - n; }

/// k in [k_min, min(k_max, n)] with the fewest placeholders; ties go to the
/// fewest groups, then the largest k. Returns n when k_min exceeds n.
int choose_k(int n, int k_min = 20, int k_max = 35);

std::vector<IntentGroup> partition_intents(std::span<const IntentLabel> labels, int k);

/// One plan per group in canonical slot order; exactly one carries the gold.
std::vector<SequencePlan> build_plans(const LabeledUtterance& u, std::span<const IntentGroup> groups);

/// Plans for an unlabeled utterance (no gold in any group).
std::vector<SequencePlan> inference_plans(const std::string& text, std::span<const IntentGroup> groups);

std::vector<SequencePlan> augment_shuffles(const SequencePlan& plan, int count, std::uint64_t seed);

/// A candidate inventory together with its fixed grouping.
struct LabelSpace {
    std::vector<IntentLabel> labels;
    std::vector<IntentGroup> groups;
    int k = 0;
};

std::shared_ptr<const LabelSpace> make_label_space(std::vector<IntentLabel> labels, int k);

/// Unit of training: the m canonical plans of one utterance over its space.
struct PlannedExample {
    std::shared_ptr<const LabelSpace> space;
    std::vector<SequencePlan> plans;
};

std::vector<PlannedExample> plan_dataset(const Dataset& data, int k);

}  // namespace intentcl
