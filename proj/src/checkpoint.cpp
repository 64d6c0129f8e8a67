#include "intentcl/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "intentcl/errors.hpp"

namespace intentcl {

namespace {

constexpr char kMagic[8] = {'I', 'C', 'L', 'C', 'K', 'P', 'T', '\0'};
constexpr std::uint64_t kMaxDim = 1ULL << 28;

std::uint64_t fnv1a(const unsigned char* data, std::size_t n) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

class Writer {
public:
    template <typename T>
    void put(T value) {
        auto bits = std::bit_cast<std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>>(value);
        for (std::size_t i = 0; i < sizeof(T); ++i) buf_.push_back(static_cast<unsigned char>(bits >> (8 * i)));
    }
    void bytes(const void* p, std::size_t n) {
        auto c = static_cast<const unsigned char*>(p);
        buf_.insert(buf_.end(), c, c + n);
    }
    std::vector<unsigned char>& buffer() { return buf_; }

private:
    std::vector<unsigned char> buf_;
};

class Reader {
public:
    Reader(const std::vector<unsigned char>& buf, std::size_t end, std::string where)
        : buf_(buf), end_(end), where_(std::move(where)) {}

    template <typename T>
    T get() {
        need(sizeof(T));
        std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t> bits = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<decltype(bits)>(buf_[pos_ + i]) << (8 * i);
        pos_ += sizeof(T);
        return std::bit_cast<T>(bits);
    }
    std::string string(std::size_t n) {
        need(n);
        std::string s(reinterpret_cast<const char*>(buf_.data() + pos_), n);
        pos_ += n;
        return s;
    }
    std::size_t remaining() const { return end_ - pos_; }
    std::size_t position() const { return pos_; }

private:
    void need(std::size_t n) const {
        if (pos_ + n > end_) throw DataError(where_ + ": truncated checkpoint");
    }
    const std::vector<unsigned char>& buf_;
    std::size_t end_;
    std::size_t pos_ = 0;
    std::string where_;
};

}  // namespace

void save_checkpoint(const ModelParams<double>& params, const Vocabulary& vocab, const std::filesystem::path& path) {
    const auto shape = params.shape();
    if (shape.vocab_size != vocab.size())
        throw DimensionError("embedding rows (" + std::to_string(shape.vocab_size) + ") != vocabulary size (" +
                             std::to_string(vocab.size()) + ")");
    Writer w;
    w.bytes(kMagic, sizeof kMagic);
    w.put<std::uint32_t>(kCheckpointVersion);
    w.put<std::uint32_t>(shape.attention ? 1u : 0u);
    w.put<std::uint64_t>(static_cast<std::uint64_t>(shape.vocab_size));
    w.put<std::uint64_t>(static_cast<std::uint64_t>(shape.d_emb));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(shape.projector_dims.size()));
    for (int d : shape.projector_dims) w.put<std::uint64_t>(static_cast<std::uint64_t>(d));
    for (const auto& tok : vocab.tokens()) {
        w.put<std::uint32_t>(static_cast<std::uint32_t>(tok.size()));
        w.bytes(tok.data(), tok.size());
    }
    params.for_each_array([&](const auto& a) {
        for (Eigen::Index i = 0; i < a.size(); ++i) w.put<double>(a.data()[i]);
    });
    w.put<std::uint64_t>(fnv1a(w.buffer().data(), w.buffer().size()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write checkpoint " + path.string());
    out.write(reinterpret_cast<const char*>(w.buffer().data()), static_cast<std::streamsize>(w.buffer().size()));
    if (!out) throw DataError("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path, const std::optional<ModelShape>& expected) {
    const std::string where = path.string();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint " + where);
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (buf.size() < sizeof kMagic || std::memcmp(buf.data(), kMagic, sizeof kMagic) != 0)
        throw VersionError(where + ": not a checkpoint (bad magic)");
    if (buf.size() < sizeof kMagic + 8) throw DataError(where + ": truncated checkpoint");

    // The trailing checksum is located after parsing, so parse against the
    // full buffer and verify the total length at the end.
    Reader r(buf, buf.size(), where);
    r.string(sizeof kMagic);
    const auto version = r.get<std::uint32_t>();
    if (version != kCheckpointVersion)
        throw VersionError(where + ": unsupported checkpoint version " + std::to_string(version));
    const auto flags = r.get<std::uint32_t>();
    const auto vocab_size = r.get<std::uint64_t>();
    const auto d_emb = r.get<std::uint64_t>();
    const auto depth = r.get<std::uint32_t>();
    if (vocab_size < Vocabulary::kReserved || vocab_size > kMaxDim || d_emb < 1 || d_emb > kMaxDim || depth < 1 ||
        depth > 64)
        throw DataError(where + ": corrupt checkpoint header");

    ModelShape shape;
    shape.vocab_size = static_cast<int>(vocab_size);
    shape.d_emb = static_cast<int>(d_emb);
    shape.attention = (flags & 1u) != 0;
    shape.projector_dims.clear();
    for (std::uint32_t i = 0; i < depth; ++i) {
        auto d = r.get<std::uint64_t>();
        if (d < 1 || d > kMaxDim) throw DataError(where + ": corrupt checkpoint header");
        shape.projector_dims.push_back(static_cast<int>(d));
    }

    std::vector<std::string> tokens;
    tokens.reserve(vocab_size);
    for (std::uint64_t i = 0; i < vocab_size; ++i) {
        auto len = r.get<std::uint32_t>();
        tokens.push_back(r.string(len));
    }

    // Size check before allocating parameter storage.
    std::uint64_t n_values = vocab_size * d_emb + (shape.attention ? 3 * d_emb * d_emb : 0);
    std::uint64_t in_dim = d_emb;
    for (int d : shape.projector_dims) {
        n_values += static_cast<std::uint64_t>(d) * in_dim + static_cast<std::uint64_t>(d);
        in_dim = static_cast<std::uint64_t>(d);
    }
    if (r.remaining() < n_values * 8 + 8) throw DataError(where + ": truncated checkpoint");
    if (r.remaining() > n_values * 8 + 8) throw DataError(where + ": trailing bytes in checkpoint");

    const std::size_t body = buf.size() - 8;
    std::uint64_t stored = 0;
    for (int i = 0; i < 8; ++i) stored |= static_cast<std::uint64_t>(buf[body + i]) << (8 * i);
    if (stored != fnv1a(buf.data(), body)) throw DataError(where + ": checkpoint checksum mismatch");

    if (expected) {
        if (expected->d_emb != shape.d_emb || expected->projector_dims != shape.projector_dims ||
            expected->attention != shape.attention)
            throw DimensionError(where + ": checkpoint dimensions (d_emb " + std::to_string(shape.d_emb) + ", d_out " +
                                 std::to_string(shape.d_out()) + ") do not match the configuration (d_emb " +
                                 std::to_string(expected->d_emb) + ", d_out " + std::to_string(expected->d_out()) + ")");
    }

    Checkpoint ck{init_params<double>(shape, 0, 0.0), Vocabulary::from_tokens(std::move(tokens))};
    ck.params.for_each_array([&](auto& a) {
        for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = r.get<double>();
    });
    if (!ck.params.all_finite()) throw NumericError(where + ": checkpoint contains non-finite parameters");
    return ck;
}

}  // namespace intentcl
