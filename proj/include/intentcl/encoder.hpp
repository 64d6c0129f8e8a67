#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "intentcl/model.hpp"
#include "intentcl/vocabulary.hpp"

namespace intentcl {

/// Pooled (z) and projected (h) representations of one sequence. Column 0 is
/// the utterance; column 1 + p is the slot at rendered position p.
template <typename Scalar>
struct SequenceEmbeddings {
    Matrix<Scalar> pooled;     // d_emb x (k + 1)
    Matrix<Scalar> projected;  // d_out x (k + 1)
    std::vector<bool> placeholder;
    std::optional<int> gold_slot;

    int k() const { return static_cast<int>(projected.cols()) - 1; }
    auto z_utterance() const { return pooled.col(0); }
    auto z_slot(int p) const { return pooled.col(p + 1); }
    auto h_utterance() const { return projected.col(0); }
    auto h_slot(int p) const { return projected.col(p + 1); }
};

/// Forward intermediates kept for the backward pass.
template <typename Scalar>
struct EncoderTrace {
    SequenceEmbeddings<Scalar> emb;
    Matrix<Scalar> inputs;  // L x d_emb embedding rows
    Matrix<Scalar> query, key, value, attention;  // only with self-attention
    std::vector<Matrix<Scalar>> activations;      // [pooled, layer1, ..., projected]
};

namespace detail {

template <typename Scalar>
void check_finite_params(const ModelParams<Scalar>& params, const TokenizedSequence& seq) {
    for (int id : seq.token_ids) {
        if (id < 0 || id >= params.embedding.rows())
            throw DataError("token id " + std::to_string(id) + " outside the embedding table");
        if (!params.embedding.row(id).allFinite()) throw NumericError("non-finite embedding row " + std::to_string(id));
    }
    bool ok = true;
    for (const auto& layer : params.projector) ok = ok && layer.weight.allFinite() && layer.bias.allFinite();
    if (params.attention)
        ok = ok && params.attention->query.allFinite() && params.attention->key.allFinite() &&
             params.attention->value.allFinite();
    if (!ok) throw NumericError("non-finite model parameters");
}

template <typename Scalar>
std::vector<TokenSpan> pooled_spans(const TokenizedSequence& seq) {
    std::vector<TokenSpan> spans;
    spans.reserve(seq.slot_spans.size() + 1);
    spans.push_back(seq.utterance_span);
    spans.insert(spans.end(), seq.slot_spans.begin(), seq.slot_spans.end());
    return spans;
}

}  // namespace detail

template <typename Scalar>
EncoderTrace<Scalar> encode_traced(const ModelParams<Scalar>& params, const TokenizedSequence& seq) {
    detail::check_finite_params(params, seq);
    const auto length = static_cast<Eigen::Index>(seq.token_ids.size());
    const Eigen::Index d = params.embedding.cols();

    EncoderTrace<Scalar> t;
    t.inputs.resize(length, d);
    for (Eigen::Index i = 0; i < length; ++i) t.inputs.row(i) = params.embedding.row(seq.token_ids[i]);

    Matrix<Scalar> hidden;
    if (params.attention) {
        const auto& att = *params.attention;
        t.query = t.inputs * att.query;
        t.key = t.inputs * att.key;
        t.value = t.inputs * att.value;
        Matrix<Scalar> scores = (t.query * t.key.transpose()) / std::sqrt(static_cast<Scalar>(d));
        scores.colwise() -= scores.rowwise().maxCoeff();
        t.attention = scores.array().exp().matrix();
        t.attention.array().colwise() /= t.attention.rowwise().sum().array();
        hidden = t.inputs + t.attention * t.value;
    } else {
        hidden = t.inputs;
    }

    const auto spans = detail::pooled_spans<Scalar>(seq);
    Matrix<Scalar> pooled = Matrix<Scalar>::Zero(d, static_cast<Eigen::Index>(spans.size()));
    for (std::size_t c = 0; c < spans.size(); ++c) {
        const auto& s = spans[c];
        if (s.size() <= 0) throw DataError("empty token span");
        for (int i = s.begin; i < s.end; ++i) pooled.col(c) += hidden.row(i).transpose();
        pooled.col(c) /= static_cast<Scalar>(s.size());
    }

    t.activations.reserve(params.projector.size() + 1);
    t.activations.push_back(std::move(pooled));
    for (std::size_t l = 0; l < params.projector.size(); ++l) {
        const auto& layer = params.projector[l];
        Matrix<Scalar> pre = layer.weight * t.activations.back();
        pre.colwise() += layer.bias;
        if (l + 1 < params.projector.size()) pre = pre.array().tanh().matrix();
        t.activations.push_back(std::move(pre));
    }

    t.emb.pooled = t.activations.front();
    t.emb.projected = t.activations.back();
    t.emb.placeholder = seq.placeholder;
    t.emb.gold_slot = seq.gold_slot;
    if (!t.emb.projected.allFinite()) throw NumericError("non-finite encoder output");
    return t;
}

/// Span mean pooling followed by the shared projector.
template <typename Scalar>
SequenceEmbeddings<Scalar> encode(const ModelParams<Scalar>& params, const TokenizedSequence& seq) {
    return std::move(encode_traced(params, seq).emb);
}

/// Accumulates d(loss)/d(params) into `grad` given d(loss)/d(projected).
template <typename Scalar>
void encoder_backward(const ModelParams<Scalar>& params, const TokenizedSequence& seq, const EncoderTrace<Scalar>& t,
                      const Matrix<Scalar>& d_projected, ModelParams<Scalar>& grad) {
    Matrix<Scalar> upstream = d_projected;
    for (std::size_t l = params.projector.size(); l-- > 0;) {
        const bool last = l + 1 == params.projector.size();
        Matrix<Scalar> d_pre =
            last ? upstream
                 : Matrix<Scalar>(upstream.array() * (1 - t.activations[l + 1].array().square()));
        grad.projector[l].weight.noalias() += d_pre * t.activations[l].transpose();
        grad.projector[l].bias += d_pre.rowwise().sum();
        upstream = params.projector[l].weight.transpose() * d_pre;
    }

    const auto length = static_cast<Eigen::Index>(seq.token_ids.size());
    Matrix<Scalar> d_hidden = Matrix<Scalar>::Zero(length, params.embedding.cols());
    const auto spans = detail::pooled_spans<Scalar>(seq);
    for (std::size_t c = 0; c < spans.size(); ++c) {
        const auto& s = spans[c];
        const Scalar inv = Scalar(1) / static_cast<Scalar>(s.size());
        for (int i = s.begin; i < s.end; ++i) d_hidden.row(i) += inv * upstream.col(c).transpose();
    }

    Matrix<Scalar> d_inputs = d_hidden;
    if (params.attention) {
        const auto& att = *params.attention;
        auto& g = *grad.attention;
        const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(params.embedding.cols()));
        Matrix<Scalar> d_weights = d_hidden * t.value.transpose();
        Matrix<Scalar> d_value = t.attention.transpose() * d_hidden;
        Vector<Scalar> row_dot = (d_weights.array() * t.attention.array()).rowwise().sum();
        Matrix<Scalar> d_scores = t.attention.array() * (d_weights.array().colwise() - row_dot.array());
        d_scores *= scale;
        Matrix<Scalar> d_query = d_scores * t.key;
        Matrix<Scalar> d_key = d_scores.transpose() * t.query;
        g.query.noalias() += t.inputs.transpose() * d_query;
        g.key.noalias() += t.inputs.transpose() * d_key;
        g.value.noalias() += t.inputs.transpose() * d_value;
        d_inputs.noalias() += d_query * att.query.transpose();
        d_inputs.noalias() += d_key * att.key.transpose();
        d_inputs.noalias() += d_value * att.value.transpose();
    }
    for (Eigen::Index i = 0; i < length; ++i) grad.embedding.row(seq.token_ids[i]) += d_inputs.row(i);
}

}  // namespace intentcl
