#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace intentcl {

struct IntentLabel {
    int id = 0;
    std::string raw_name;
    std::string surface;  // normalized words fed to the encoder
};

struct LabeledUtterance {
    std::string text;
    int intent_id = 0;
    std::optional<std::string> domain;
};

struct Dataset {
    std::string name;
    std::vector<IntentLabel> labels;
    std::vector<LabeledUtterance> examples;

    std::size_t num_intents() const { return labels.size(); }
    std::size_t size() const { return examples.size(); }
    std::vector<std::string> raw_label_names() const;
};

enum class DataFormat { csv, jsonl };

/// Parses "csv" / "jsonl"; otherwise infers from the file extension.
DataFormat data_format_from(std::string_view name_or_path);

/// Reads an intent dataset.
///
/// CSV needs a `text,category` header; JSONL records carry `text`, `label`
/// and an optional `domain`. Labels are enumerated in first-appearance order
/// unless `inventory` (raw label names) fixes the order, in which case any
/// label outside it is a data error. Malformed rows report their line number.
Dataset load_dataset(const std::filesystem::path& path, DataFormat format,
                     const std::vector<std::string>* inventory = nullptr);

/// One raw label per line; blank lines ignored.
std::vector<std::string> load_label_inventory(const std::filesystem::path& path);

void write_csv(const Dataset& data, const std::filesystem::path& path);
void write_jsonl(const Dataset& data, const std::filesystem::path& path);
void write_label_inventory(const Dataset& data, const std::filesystem::path& path);

/// card_arrival -> "card arrival", PlayMusic -> "play music". Idempotent.
std::string normalize_label(std::string_view raw);

/// Builds a dataset from raw (text, label) rows, enumerating labels in
/// first-appearance order.
Dataset make_dataset(std::string name, std::span<const std::pair<std::string, std::string>> rows);

/// Exactly `shots` examples per intent, uniform without replacement.
Dataset sample_few_shot(const Dataset& data, int shots, std::uint64_t seed);

/// Global random split; returns (train, dev) with dev = floor(fraction * size).
std::pair<Dataset, Dataset> split_dev(const Dataset& data, double fraction, std::uint64_t seed);

/// Union of `others` minus examples from excluded domains (case-insensitive).
/// Labels sharing a normalized surface are merged into one intent.
Dataset build_ood(const Dataset& target, std::span<const Dataset> others,
                  std::span<const std::string> excluded_domains);

}  // namespace intentcl
