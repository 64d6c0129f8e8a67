#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <span>
#include <vector>

#include "intentcl/encoder.hpp"
#include "intentcl/objective.hpp"

namespace intentcl {

template <typename Scalar>
struct LossAndGradient {
    Scalar loss = 0;
    ModelParams<Scalar> grad;
};

/// Mean contrastive loss over `batch` and its exact gradient.
template <typename Scalar>
LossAndGradient<Scalar> loss_and_gradient(const ModelParams<Scalar>& params, std::span<const TokenizedSequence> batch,
                                          const LossConfig& cfg) {
    std::vector<EncoderTrace<Scalar>> traces;
    std::vector<SequenceEmbeddings<Scalar>> embs;
    traces.reserve(batch.size());
    embs.reserve(batch.size());
    for (const auto& seq : batch) {
        traces.push_back(encode_traced(params, seq));
        embs.push_back(traces.back().emb);
    }
    auto bl = batch_loss<Scalar>(embs, cfg);
    LossAndGradient<Scalar> out{bl.value, params.zeros_like()};
    for (std::size_t i = 0; i < batch.size(); ++i) encoder_backward(params, batch[i], traces[i], bl.d_projected[i], out.grad);
    return out;
}

template <typename Scalar>
Scalar batch_loss_value(const ModelParams<Scalar>& params, std::span<const TokenizedSequence> batch,
                        const LossConfig& cfg) {
    if (batch.empty()) throw UsageError("batch_loss: empty batch");
    Scalar total = 0;
    for (const auto& seq : batch) total += sequence_loss(encode(params, seq), cfg);
    return total / static_cast<Scalar>(batch.size());
}

struct GradCheckOptions {
    double eps = 1e-4;
    std::uint64_t seed = 0;
    int coordinates = 256;
};

/// Max relative error between the analytic gradient and central differences,
/// over a seeded sample of coordinates the batch can influence (every
/// attention/projector entry plus embedding rows of tokens in the batch).
/// Relative error uses max(|g|, |g_fd|, 1e-8) as denominator.
inline double grad_check(const ModelParams<double>& params, std::span<const TokenizedSequence> batch,
                         const LossConfig& cfg, const GradCheckOptions& opt = {}) {
    if (!(opt.eps > 0)) throw UsageError("grad_check: eps must be positive");
    auto analytic = loss_and_gradient(params, batch, cfg);
    if (!std::isfinite(analytic.loss)) throw NumericError("grad_check: non-finite loss");

    // Flat index space over all arrays in checkpoint order.
    std::vector<std::size_t> active;
    {
        std::set<int> used;
        for (const auto& seq : batch) used.insert(seq.token_ids.begin(), seq.token_ids.end());
        const auto d = static_cast<std::size_t>(params.embedding.cols());
        for (int row : used)
            for (std::size_t c = 0; c < d; ++c) active.push_back(static_cast<std::size_t>(row) * d + c);
        const auto total = static_cast<std::size_t>(params.num_parameters());
        for (std::size_t i = static_cast<std::size_t>(params.embedding.size()); i < total; ++i) active.push_back(i);
    }
    Rng rng(derive_seed(opt.seed, {0x9c4e}));
    rng.shuffle(std::span(active));
    active.resize(std::min<std::size_t>(active.size(), static_cast<std::size_t>(std::max(opt.coordinates, 1))));
    std::sort(active.begin(), active.end());

    auto flat_ref = [](ModelParams<double>& p, std::size_t flat) -> double& {
        for (auto& v : p.views()) {
            if (flat < static_cast<std::size_t>(v.size())) return v[static_cast<Eigen::Index>(flat)];
            flat -= static_cast<std::size_t>(v.size());
        }
        throw UsageError("grad_check: coordinate out of range");
    };

    ModelParams<double> probe = params;
    ModelParams<double> grad = analytic.grad;
    double worst = 0;
    for (std::size_t flat : active) {
        double& x = flat_ref(probe, flat);
        const double saved = x;
        x = saved + opt.eps;
        const double up = batch_loss_value(probe, batch, cfg);
        x = saved - opt.eps;
        const double down = batch_loss_value(probe, batch, cfg);
        x = saved;
        if (!std::isfinite(up) || !std::isfinite(down)) throw NumericError("grad_check: non-finite loss");
        const double numeric = (up - down) / (2 * opt.eps);
        const double exact = flat_ref(grad, flat);
        const double denom = std::max({std::abs(exact), std::abs(numeric), 1e-8});
        worst = std::max(worst, std::abs(exact - numeric) / denom);
    }
    return worst;
}

}  // namespace intentcl
