#include "intentcl/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "intentcl/errors.hpp"
#include "intentcl/random.hpp"

namespace intentcl {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CsvRecord {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

// RFC 4180: quoted fields may contain commas, doubled quotes and newlines.
std::vector<CsvRecord> parse_csv(const std::string& text, const std::string& where) {
    std::vector<CsvRecord> records;
    std::size_t line = 1;
    std::size_t i = 0;
    if (text.rfind("\xEF\xBB\xBF", 0) == 0) i = 3;
    while (i < text.size()) {
        CsvRecord rec;
        rec.line = line;
        std::string field;
        bool quoted = false, was_quoted = false;
        for (;;) {
            if (i >= text.size()) {
                if (quoted) throw DataError(where + ":" + std::to_string(rec.line) + ": unterminated quoted field");
                rec.fields.push_back(std::move(field));
                break;
            }
            char c = text[i++];
            if (quoted) {
                if (c == '"') {
                    if (i < text.size() && text[i] == '"') {
                        field += '"';
                        ++i;
                    } else {
                        quoted = false;
                    }
                } else {
                    if (c == '\n') ++line;
                    field += c;
                }
            } else if (c == '"' && field.empty() && !was_quoted) {
                quoted = was_quoted = true;
            } else if (c == ',') {
                rec.fields.push_back(std::move(field));
                field.clear();
                was_quoted = false;
            } else if (c == '\n' || c == '\r') {
                if (c == '\r' && i < text.size() && text[i] == '\n') ++i;
                ++line;
                rec.fields.push_back(std::move(field));
                break;
            } else {
                field += c;
            }
        }
        bool blank = rec.fields.size() == 1 && trim(rec.fields[0]).empty();
        if (!blank) records.push_back(std::move(rec));
    }
    return records;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// Assigns label ids either from a fixed inventory or by first appearance.
class LabelTable {
public:
    explicit LabelTable(const std::vector<std::string>* inventory) : fixed_(inventory != nullptr) {
        if (inventory) {
            for (const auto& raw : *inventory) {
                if (index_.count(raw)) throw DataError("duplicate label in inventory: " + raw);
                add(raw);
            }
        }
    }

    int id_for(const std::string& raw, const std::string& where) {
        if (auto it = index_.find(raw); it != index_.end()) return it->second;
        if (fixed_) throw DataError(where + ": label '" + raw + "' is not in the label inventory");
        return add(raw);
    }

    std::vector<IntentLabel> take() { return std::move(labels_); }

private:
    int add(const std::string& raw) {
        int id = static_cast<int>(labels_.size());
        labels_.push_back({id, raw, normalize_label(raw)});
        index_.emplace(raw, id);
        return id;
    }

    bool fixed_;
    std::vector<IntentLabel> labels_;
    std::unordered_map<std::string, int> index_;
};

}  // namespace

std::vector<std::string> Dataset::raw_label_names() const {
    std::vector<std::string> names;
    names.reserve(labels.size());
    for (const auto& l : labels) names.push_back(l.raw_name);
    return names;
}

DataFormat data_format_from(std::string_view name_or_path) {
    std::string s = lower(name_or_path);
    if (s == "csv") return DataFormat::csv;
    if (s == "jsonl") return DataFormat::jsonl;
    auto ext = lower(std::filesystem::path(std::string(name_or_path)).extension().string());
    if (ext == ".jsonl" || ext == ".json") return DataFormat::jsonl;
    if (ext == ".csv") return DataFormat::csv;
    throw UsageError("cannot determine data format of '" + std::string(name_or_path) + "'");
}

std::string normalize_label(std::string_view raw) {
    auto is_upper = [](char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; };
    auto is_lower = [](char c) { return std::islower(static_cast<unsigned char>(c)) != 0; };
    auto is_digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };

    std::string spaced;
    spaced.reserve(raw.size() + 8);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        char c = raw[i];
        if (c == '_' || c == '-') {
            spaced += ' ';
            continue;
        }
        if (is_upper(c) && i > 0) {
            char prev = raw[i - 1];
            bool next_lower = i + 1 < raw.size() && is_lower(raw[i + 1]);
            // playMusic, top10Songs, HTTPServer
            if (is_lower(prev) || is_digit(prev) || (is_upper(prev) && next_lower)) spaced += ' ';
        }
        spaced += c;
    }

    std::string out;
    out.reserve(spaced.size());
    for (char c : spaced) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!out.empty() && out.back() != ' ') out += ' ';
        } else {
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    if (!out.empty() && out.back() == ' ') out.pop_back();
    if (out.empty()) throw DataError("label '" + std::string(raw) + "' is empty after normalization");
    return out;
}

Dataset load_dataset(const std::filesystem::path& path, DataFormat format,
                     const std::vector<std::string>* inventory) {
    if (!std::filesystem::exists(path)) throw DataError("dataset not found: " + path.string());
    const std::string where = path.string();
    const std::string content = read_file(path);

    Dataset data;
    data.name = path.stem().string();
    LabelTable table(inventory);

    auto add_example = [&](std::string text, const std::string& label, std::optional<std::string> domain,
                           std::size_t line) {
        const std::string at = where + ":" + std::to_string(line);
        text = trim(text);
        if (text.empty()) throw DataError(at + ": empty text field");
        std::string raw = trim(label);
        if (raw.empty()) throw DataError(at + ": empty label field");
        int id = table.id_for(raw, at);
        data.examples.push_back({std::move(text), id, std::move(domain)});
    };

    if (format == DataFormat::csv) {
        auto records = parse_csv(content, where);
        if (records.empty()) throw DataError(where + ": empty dataset");
        const auto& header = records.front().fields;
        int text_col = -1, label_col = -1;
        for (std::size_t c = 0; c < header.size(); ++c) {
            auto h = lower(trim(header[c]));
            if (h == "text") text_col = static_cast<int>(c);
            if (h == "category") label_col = static_cast<int>(c);
        }
        if (text_col < 0 || label_col < 0)
            throw DataError(where + ":" + std::to_string(records.front().line) + ": header must contain text,category");
        for (std::size_t r = 1; r < records.size(); ++r) {
            const auto& rec = records[r];
            if (rec.fields.size() != header.size())
                throw DataError(where + ":" + std::to_string(rec.line) + ": expected " +
                                std::to_string(header.size()) + " fields, found " + std::to_string(rec.fields.size()));
            add_example(rec.fields[text_col], rec.fields[label_col], std::nullopt, rec.line);
        }
    } else {
        std::istringstream in(content);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (trim(line).empty()) continue;
            const std::string at = where + ":" + std::to_string(line_no);
            nlohmann::json rec;
            try {
                rec = nlohmann::json::parse(line);
            } catch (const nlohmann::json::parse_error&) {
                throw DataError(at + ": malformed JSON record");
            }
            if (!rec.is_object() || !rec.contains("text") || !rec["text"].is_string() || !rec.contains("label") ||
                !rec["label"].is_string())
                throw DataError(at + ": record needs string fields 'text' and 'label'");
            std::optional<std::string> domain;
            if (rec.contains("domain") && !rec["domain"].is_null()) {
                if (!rec["domain"].is_string()) throw DataError(at + ": 'domain' must be a string");
                domain = rec["domain"].get<std::string>();
            }
            add_example(rec["text"].get<std::string>(), rec["label"].get<std::string>(), std::move(domain), line_no);
        }
    }

    data.labels = table.take();
    if (data.examples.empty()) throw DataError(where + ": empty dataset");
    return data;
}

std::vector<std::string> load_label_inventory(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::vector<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (!t.empty()) names.push_back(std::move(t));
    }
    if (names.empty()) throw DataError(path.string() + ": empty label inventory");
    return names;
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << "text,category\n";
    for (const auto& ex : data.examples)
        out << csv_quote(ex.text) << ',' << csv_quote(data.labels.at(ex.intent_id).raw_name) << '\n';
}

void write_jsonl(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& ex : data.examples) {
        nlohmann::json rec = {{"text", ex.text}, {"label", data.labels.at(ex.intent_id).raw_name}};
        if (ex.domain) rec["domain"] = *ex.domain;
        out << rec.dump() << '\n';
    }
}

void write_label_inventory(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& l : data.labels) out << l.raw_name << '\n';
}

Dataset make_dataset(std::string name, std::span<const std::pair<std::string, std::string>> rows) {
    Dataset data;
    data.name = std::move(name);
    LabelTable table(nullptr);
    for (const auto& [text, label] : rows) {
        if (trim(text).empty()) throw DataError("empty utterance text");
        data.examples.push_back({text, table.id_for(label, data.name), std::nullopt});
    }
    data.labels = table.take();
    if (data.examples.empty()) throw DataError(data.name + ": empty dataset");
    return data;
}

Dataset sample_few_shot(const Dataset& data, int shots, std::uint64_t seed) {
    if (shots < 1) throw UsageError("shots must be positive");
    std::vector<std::vector<std::size_t>> by_intent(data.labels.size());
    for (std::size_t i = 0; i < data.examples.size(); ++i) by_intent[data.examples[i].intent_id].push_back(i);

    Dataset out;
    out.name = data.name + "-" + std::to_string(shots) + "shot";
    out.labels = data.labels;
    out.examples.reserve(static_cast<std::size_t>(shots) * data.labels.size());
    for (std::size_t intent = 0; intent < by_intent.size(); ++intent) {
        auto& pool = by_intent[intent];
        if (pool.size() < static_cast<std::size_t>(shots))
            throw DataError("intent '" + data.labels[intent].raw_name + "' has " + std::to_string(pool.size()) +
                            " examples, fewer than " + std::to_string(shots) + " shots");
        Rng rng(derive_seed(seed, {0x5a3f, intent}));
        // Partial Fisher-Yates: the first `shots` positions are the sample.
        for (int s = 0; s < shots; ++s) {
            std::size_t j = s + rng.uniform_index(pool.size() - s);
            std::swap(pool[s], pool[j]);
            out.examples.push_back(data.examples[pool[s]]);
        }
    }
    return out;
}

std::pair<Dataset, Dataset> split_dev(const Dataset& data, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw UsageError("dev fraction must lie in (0, 1)");
    if (data.examples.empty()) throw DataError(data.name + ": cannot split an empty dataset");
    const std::size_t n = data.examples.size();
    const auto n_dev = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
    if (n_dev >= n) throw DataError(data.name + ": dev fraction leaves no training examples");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(seed, {0xde5}));
    rng.shuffle(std::span(order));
    std::vector<bool> is_dev(n, false);
    for (std::size_t i = 0; i < n_dev; ++i) is_dev[order[i]] = true;

    Dataset train, dev;
    train.name = data.name + "-train";
    dev.name = data.name + "-dev";
    train.labels = dev.labels = data.labels;
    for (std::size_t i = 0; i < n; ++i) (is_dev[i] ? dev : train).examples.push_back(data.examples[i]);
    return {std::move(train), std::move(dev)};
}

Dataset build_ood(const Dataset& target, std::span<const Dataset> others,
                  std::span<const std::string> excluded_domains) {
    if (others.empty()) throw UsageError("OOD construction needs at least one source dataset");
    std::set<std::string> excluded;
    for (const auto& d : excluded_domains) excluded.insert(lower(trim(d)));

    Dataset out;
    out.name = "ood-for-" + target.name;
    std::map<std::string, int> by_surface;
    for (const auto& src : others) {
        for (const auto& ex : src.examples) {
            if (ex.domain && excluded.count(lower(trim(*ex.domain)))) continue;
            const auto& label = src.labels.at(ex.intent_id);
            auto [it, inserted] = by_surface.emplace(label.surface, static_cast<int>(out.labels.size()));
            if (inserted) out.labels.push_back({it->second, label.raw_name, label.surface});
            out.examples.push_back({ex.text, it->second, ex.domain});
        }
    }
    if (out.examples.empty()) throw DataError(out.name + ": no examples survive domain exclusion");
    return out;
}

}  // namespace intentcl
