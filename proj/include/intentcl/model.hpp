#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "intentcl/errors.hpp"
#include "intentcl/random.hpp"

namespace intentcl {

struct ModelShape {
    int vocab_size = 0;
    int d_emb = 64;
    std::vector<int> projector_dims{64, 64};  // output size of each affine map
    bool attention = false;

    int d_out() const { return projector_dims.back(); }

    /// depth affine maps: d_emb -> d_hidden -> ... -> d_out.
    static ModelShape make(int vocab_size, int d_emb, int d_hidden, int d_out, int depth = 2,
                           bool attention = false) {
        if (depth < 1) throw UsageError("projector depth must be at least 1");
        ModelShape s;
        s.vocab_size = vocab_size;
        s.d_emb = d_emb;
        s.projector_dims.assign(depth - 1, d_hidden);
        s.projector_dims.push_back(d_out);
        s.attention = attention;
        return s;
    }

    bool operator==(const ModelShape&) const = default;
};

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct AffineMap {
    RowMatrix<Scalar> weight;  // out x in
    Vector<Scalar> bias;
};

// Single-head self-attention with a residual connection and no positional
// information: Y = X + softmax(X Wq (X Wk)^T / sqrt(d)) X Wv.
template <typename Scalar>
struct SelfAttention {
    RowMatrix<Scalar> query;
    RowMatrix<Scalar> key;
    RowMatrix<Scalar> value;
};

/// Trainable state: embedding table, optional attention, shared projector.
/// Also used as the container for gradients and optimizer moments.
template <typename Scalar>
struct ModelParams {
    RowMatrix<Scalar> embedding;  // |V| x d_emb
    std::optional<SelfAttention<Scalar>> attention;
    std::vector<AffineMap<Scalar>> projector;

    ModelShape shape() const {
        ModelShape s;
        s.vocab_size = static_cast<int>(embedding.rows());
        s.d_emb = static_cast<int>(embedding.cols());
        s.projector_dims.clear();
        for (const auto& layer : projector) s.projector_dims.push_back(static_cast<int>(layer.weight.rows()));
        s.attention = attention.has_value();
        return s;
    }

    // Visits every array in checkpoint order. Each array's data() is
    // contiguous and row-major.
    template <typename F>
    void for_each_array(F&& f) {
        f(embedding);
        if (attention) {
            f(attention->query);
            f(attention->key);
            f(attention->value);
        }
        for (auto& layer : projector) {
            f(layer.weight);
            f(layer.bias);
        }
    }

    template <typename F>
    void for_each_array(F&& f) const {
        const_cast<ModelParams*>(this)->for_each_array([&](const auto& a) { f(a); });
    }

    /// Flat views of every array, in checkpoint order.
    std::vector<Eigen::Map<Vector<Scalar>>> views() {
        std::vector<Eigen::Map<Vector<Scalar>>> out;
        for_each_array([&](auto& a) { out.emplace_back(a.data(), a.size()); });
        return out;
    }

    Eigen::Index num_parameters() const {
        Eigen::Index n = 0;
        for_each_array([&](const auto& a) { n += a.size(); });
        return n;
    }

    bool all_finite() const {
        bool ok = true;
        for_each_array([&](const auto& a) { ok = ok && a.allFinite(); });
        return ok;
    }

    ModelParams zeros_like() const {
        ModelParams z = *this;
        z.for_each_array([](auto& a) { a.setZero(); });
        return z;
    }

    bool operator==(const ModelParams& other) const {
        if (shape() != other.shape()) return false;
        auto mine = const_cast<ModelParams*>(this)->views();
        auto theirs = const_cast<ModelParams&>(other).views();
        for (std::size_t i = 0; i < mine.size(); ++i)
            if (mine[i] != theirs[i]) return false;
        return true;
    }
};

/// Uniform [-scale, scale] initialization, deterministic by seed.
template <typename Scalar = double>
ModelParams<Scalar> init_params(const ModelShape& shape, std::uint64_t seed, double scale = 0.1) {
    if (shape.vocab_size < 1 || shape.d_emb < 1 || shape.projector_dims.empty())
        throw UsageError("invalid model shape");
    if (shape.d_out() < 2) throw UsageError("projector output dimension must be at least 2");
    ModelParams<Scalar> p;
    p.embedding.resize(shape.vocab_size, shape.d_emb);
    if (shape.attention) {
        p.attention.emplace();
        for (auto* m : {&p.attention->query, &p.attention->key, &p.attention->value}) m->resize(shape.d_emb, shape.d_emb);
    }
    int in = shape.d_emb;
    for (int out : shape.projector_dims) {
        if (out < 1) throw UsageError("invalid projector dimension");
        p.projector.push_back({RowMatrix<Scalar>(out, in), Vector<Scalar>(out)});
        in = out;
    }
    Rng rng(derive_seed(seed, {0x1a17}));
    p.for_each_array([&](auto& a) {
        for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = static_cast<Scalar>(rng.uniform(-scale, scale));
    });
    return p;
}

}  // namespace intentcl
