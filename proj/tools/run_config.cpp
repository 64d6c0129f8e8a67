#include "run_config.hpp"

#include <iostream>

#include "intentcl/errors.hpp"

namespace intentcl::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file " + path.string());
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    for (int line_no = 1; std::getline(in, line); ++line_no) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path.string() + ":" + std::to_string(line_no) + ": expected `key = value`");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw UsageError(path.string() + ":" + std::to_string(line_no) + ": empty key");
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        for (char& c : key)
            if (c == '_') c = '-';
        entries.emplace_back(std::move(key), std::move(value));
    }
    return entries;
}

std::vector<std::string> expand_config(int argc, const char* const* argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::string config_path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    if (config_path.empty() || args.size() < 2) return args;

    std::vector<std::string> injected;
    for (auto& [key, value] : read_config_file(config_path)) injected.push_back("--" + key + "=" + value);
    args.insert(args.begin() + 2, injected.begin(), injected.end());
    return args;
}

nlohmann::json resolved_config(const CLI::App& sub) {
    nlohmann::json out = nlohmann::json::object();
    for (const CLI::Option* opt : sub.get_options()) {
        if (opt->get_lnames().empty()) continue;
        const std::string& name = opt->get_lnames().front();
        if (name == "help") continue;
        const bool many = opt->get_multi_option_policy() == CLI::MultiOptionPolicy::TakeAll;
        if (opt->get_expected_max() == 0) {
            out[name] = opt->count() > 0 && opt->as<bool>() ? "true" : "false";
        } else if (opt->count() > 0) {
            auto values = opt->reduced_results();
            if (many) out[name] = values;
            else out[name] = values.empty() ? std::string() : values.back();
        } else {
            out[name] = many ? nlohmann::json::array() : nlohmann::json(opt->get_default_str());
        }
    }
    return out;
}

void add_train_options(CLI::App& sub, TrainConfig& cfg) {
    const char* group = "Training";
    sub.add_option("--k", cfg.k, "Group size (0: pick in [k-min, k-max] with the least padding)")->group(group);
    sub.add_option("--k-min", cfg.k_min, "Smallest group size considered")->group(group);
    sub.add_option("--k-max", cfg.k_max, "Largest group size considered")->group(group);
    sub.add_option("--tau", cfg.tau, "Softmax temperature")->group(group);
    sub.add_flag("--include-placeholders", cfg.include_placeholders, "Keep <plh> slots in the loss denominator")
        ->group(group);
    sub.add_option("--batch-size", cfg.batch_size, "Sequences per optimizer step")->group(group);
    sub.add_option("--learning-rate", cfg.learning_rate, "Step size")->group(group);
    sub.add_option("--epochs", cfg.epochs, "Passes over the training set")->group(group);
    sub.add_option("--shuffles", cfg.shuffles_per_sequence, "Shuffled copies per sequence and epoch (0: k)")
        ->group(group);
    sub.add_option_function<std::string>(
           "--optimizer", [&cfg](const std::string& s) { cfg.optimizer = parse_optimizer(s); }, "adam or sgd")
        ->default_str(to_string(cfg.optimizer))
        ->group(group);
    sub.add_option_function<std::string>(
           "--selection", [&cfg](const std::string& s) { cfg.selection = parse_selection(s); },
           "dev_accuracy or train_loss")
        ->default_str(to_string(cfg.selection))
        ->group(group);
    sub.add_option("--min-dev-size", cfg.min_dev_size, "Smaller dev sets select by train loss")->group(group);
    sub.add_option("--d-emb", cfg.d_emb, "Embedding width")->group(group);
    sub.add_option("--d-hidden", cfg.d_hidden, "Projector hidden width")->group(group);
    sub.add_option("--d-out", cfg.d_out, "Projector output width")->group(group);
    sub.add_option("--depth", cfg.depth, "Affine maps in the projector")->group(group);
    sub.add_flag("--attention", cfg.attention, "Add a self-attention layer before pooling")->group(group);
    sub.add_option("--init-scale", cfg.init_scale, "Uniform init range")->group(group);
    sub.add_option("--beta1", cfg.beta1)->group(group);
    sub.add_option("--beta2", cfg.beta2)->group(group);
    sub.add_option("--adam-eps", cfg.adam_eps)->group(group);
}

MetricsSink::MetricsSink(const std::string& path) : to_stdout_(path.empty()) {
    if (to_stdout_) return;
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw DataError("cannot write metrics to " + path);
}

void MetricsSink::write(const nlohmann::json& record) {
    std::ostream& out = to_stdout_ ? std::cout : file_;
    out << record.dump() << '\n';
    out.flush();
}

}  // namespace intentcl::cli
