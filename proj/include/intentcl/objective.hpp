#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "intentcl/encoder.hpp"
#include "intentcl/errors.hpp"

namespace intentcl {

struct LossConfig {
    double tau = 0.1;
    bool include_placeholders = false;  // literal all-k denominator when true
};

/// u.v / (|u||v|), clamped to [-1, 1].
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine_sim(const Eigen::MatrixBase<DerivedA>& u, const Eigen::MatrixBase<DerivedB>& v) {
    using Scalar = typename DerivedA::Scalar;
    const Scalar nu = u.norm();
    const Scalar nv = v.norm();
    if (!(nu > 0) || !(nv > 0)) throw NumericError("cosine similarity of a zero-norm vector");
    return std::clamp(u.dot(v) / (nu * nv), Scalar(-1), Scalar(1));
}

/// Contrastive loss over precomputed similarities.
///
/// With a gold position: -log softmax_gold(sims / tau) over the candidates.
/// Without one the numerator is 1, leaving log sum exp(sims / tau). When
/// `d_sims` is given it receives d(loss)/d(sims) (zero off the candidates).
template <typename Scalar>
Scalar contrastive_loss(std::span<const Scalar> sims, const std::vector<bool>& candidate, std::optional<int> gold,
                        double tau, std::vector<Scalar>* d_sims = nullptr) {
    if (!(tau > 0)) throw UsageError("temperature must be positive");
    Scalar max_logit = -std::numeric_limits<Scalar>::infinity();
    bool any = false;
    for (std::size_t j = 0; j < sims.size(); ++j) {
        if (!candidate[j]) continue;
        any = true;
        max_logit = std::max(max_logit, sims[j] / static_cast<Scalar>(tau));
    }
    if (!any) throw NumericError("contrastive loss over an empty candidate set");
    if (gold && !candidate[*gold]) throw NumericError("gold slot is not a candidate");

    Scalar sum = 0;
    std::vector<Scalar> weights(sims.size(), Scalar(0));
    for (std::size_t j = 0; j < sims.size(); ++j) {
        if (!candidate[j]) continue;
        weights[j] = std::exp(sims[j] / static_cast<Scalar>(tau) - max_logit);
        sum += weights[j];
    }
    const Scalar log_sum = max_logit + std::log(sum);
    const Scalar loss = gold ? log_sum - sims[*gold] / static_cast<Scalar>(tau) : log_sum;

    if (d_sims) {
        d_sims->assign(sims.size(), Scalar(0));
        for (std::size_t j = 0; j < sims.size(); ++j) {
            if (!candidate[j]) continue;
            Scalar g = weights[j] / sum;
            if (gold && static_cast<int>(j) == *gold) g -= 1;
            (*d_sims)[j] = g / static_cast<Scalar>(tau);
        }
    }
    return loss;
}

template <typename Scalar>
struct SequenceLoss {
    Scalar value = 0;
    Matrix<Scalar> d_projected;  // same shape as emb.projected
};

namespace detail {

template <typename Scalar>
std::vector<bool> candidate_mask(const SequenceEmbeddings<Scalar>& emb, const LossConfig& cfg) {
    std::vector<bool> mask(emb.k());
    for (int p = 0; p < emb.k(); ++p) mask[p] = cfg.include_placeholders || !emb.placeholder[p];
    return mask;
}

}  // namespace detail

template <typename Scalar>
SequenceLoss<Scalar> sequence_loss_and_grad(const SequenceEmbeddings<Scalar>& emb, const LossConfig& cfg,
                                            bool want_grad = true) {
    const int k = emb.k();
    const auto mask = detail::candidate_mask(emb, cfg);

    const auto u = emb.h_utterance();
    std::vector<Scalar> sims(k, Scalar(0));
    for (int p = 0; p < k; ++p)
        if (mask[p]) sims[p] = cosine_sim(u, emb.h_slot(p));

    SequenceLoss<Scalar> out;
    std::vector<Scalar> d_sims;
    out.value = contrastive_loss<Scalar>(sims, mask, emb.gold_slot, cfg.tau, want_grad ? &d_sims : nullptr);
    if (!want_grad) return out;

    out.d_projected = Matrix<Scalar>::Zero(emb.projected.rows(), emb.projected.cols());
    const Scalar nu = u.norm();
    for (int p = 0; p < k; ++p) {
        if (!mask[p] || d_sims[p] == Scalar(0)) continue;
        const auto v = emb.h_slot(p);
        const Scalar nv = v.norm();
        const Scalar c = u.dot(v) / (nu * nv);
        // d cos / du = v / (|u||v|) - cos * u / |u|^2, symmetric in v.
        out.d_projected.col(0) += d_sims[p] * (v / (nu * nv) - c * u / (nu * nu));
        out.d_projected.col(p + 1) += d_sims[p] * (u / (nu * nv) - c * v / (nv * nv));
    }
    return out;
}

/// Loss of one sequence under the configured candidate set.
template <typename Scalar>
Scalar sequence_loss(const SequenceEmbeddings<Scalar>& emb, const LossConfig& cfg) {
    return sequence_loss_and_grad(emb, cfg, false).value;
}

template <typename Scalar>
struct BatchLoss {
    Scalar value = 0;
    std::vector<Matrix<Scalar>> d_projected;  // one per sequence
};

/// Mean loss over the batch and its partials w.r.t. every projected vector.
template <typename Scalar>
BatchLoss<Scalar> batch_loss(std::span<const SequenceEmbeddings<Scalar>> batch, const LossConfig& cfg) {
    if (batch.empty()) throw UsageError("batch_loss: empty batch");
    BatchLoss<Scalar> out;
    const auto n = static_cast<Scalar>(batch.size());
    out.d_projected.reserve(batch.size());
    for (const auto& emb : batch) {
        auto s = sequence_loss_and_grad(emb, cfg);
        out.value += s.value;
        out.d_projected.push_back(s.d_projected / n);
    }
    out.value /= n;
    return out;
}

}  // namespace intentcl
