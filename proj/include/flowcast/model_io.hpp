#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "flowcast/errors.hpp"
#include "flowcast/model.hpp"
#include "flowcast/normalize.hpp"

namespace flowcast {

// Owned binary model container: magic, format version, little-endian 64-bit
// floats, FNV-1a checksum over the payload. Layout:
//   magic "FCMODEL1" | u32 version | u64 payload_size | payload | u64 checksum
// The payload carries the spec, the per-member normalizers, every parameter
// tensor in collect() order, the training history and a config echo string.
inline constexpr char kModelMagic[8] = {'F', 'C', 'M', 'O', 'D', 'E', 'L', '1'};
inline constexpr std::uint32_t kModelVersion = 1;

namespace detail {

inline std::uint64_t fnv1a(const std::uint8_t* data, std::size_t len) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        u64(bits);
    }
    void str(const std::string& s) {
        u64(s.size());
        for (char c : s) buf_.push_back(static_cast<std::uint8_t>(c));
    }
    void matrix(const Matrix& m) {
        u32(static_cast<std::uint32_t>(m.rows));
        u32(static_cast<std::uint32_t>(m.cols));
        for (double v : m.d) f64(v);
    }
    const std::vector<std::uint8_t>& bytes() const { return buf_; }

private:
    std::vector<std::uint8_t> buf_;
};

class ByteReader {
public:
    ByteReader(const std::uint8_t* data, std::size_t len) : data_(data), len_(len) {}

    std::uint8_t u8() {
        need(1);
        return data_[pos_++];
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_++]) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_++]) << (8 * i);
        return v;
    }
    double f64() {
        const std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    std::string str() {
        const std::uint64_t n = u64();
        need(n);
        std::string s(reinterpret_cast<const char*>(data_ + pos_), n);
        pos_ += n;
        return s;
    }
    Matrix matrix() {
        const int rows = static_cast<int>(u32());
        const int cols = static_cast<int>(u32());
        Matrix m(rows, cols);
        for (double& v : m.d) v = f64();
        return m;
    }

private:
    void need(std::uint64_t n) {
        if (pos_ + n > len_) throw DataError("model file: truncated payload");
    }
    const std::uint8_t* data_;
    std::size_t len_;
    std::size_t pos_ = 0;
};

}  // namespace detail

struct ModelBundle {
    ForecastModel model;
    std::vector<Normalizer> normalizers;  // one per parallel member
    std::string config_echo;
};

inline void save_model(const ModelBundle& bundle, const std::string& path) {
    detail::ByteWriter w;

    const ModelSpec& s = bundle.model.spec;
    w.u8(s.variant == Variant::Bidirectional ? 1 : 0);
    w.u32(static_cast<std::uint32_t>(s.nlayers));
    for (int l = 0; l < s.nlayers; ++l) w.u32(static_cast<std::uint32_t>(s.units[l]));
    w.u8(static_cast<std::uint8_t>(s.activation));
    w.u32(static_cast<std::uint32_t>(s.nlags));
    w.u32(static_cast<std::uint32_t>(s.msteps));
    w.u32(static_cast<std::uint32_t>(s.input_dim));
    w.u32(static_cast<std::uint32_t>(s.output_dim));
    w.u32(static_cast<std::uint32_t>(s.decoder_units));

    w.u32(static_cast<std::uint32_t>(bundle.normalizers.size()));
    for (const Normalizer& nz : bundle.normalizers) {
        w.u8(static_cast<std::uint8_t>(nz.method()));
        w.u32(static_cast<std::uint32_t>(nz.params().size()));
        for (const Normalizer::FeatureParams& p : nz.params()) {
            w.f64(p.a);
            w.f64(p.b);
        }
    }

    std::vector<const Matrix*> tensors = bundle.model.params.collect();
    w.u32(static_cast<std::uint32_t>(tensors.size()));
    for (const Matrix* t : tensors) w.matrix(*t);

    w.u32(static_cast<std::uint32_t>(bundle.model.history.size()));
    for (const EpochStats& e : bundle.model.history) {
        w.f64(e.train_loss);
        w.f64(e.val_loss);
        w.f64(e.val_mae);
    }
    w.str(bundle.config_echo);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("model file: cannot write '" + path + "'");
    out.write(kModelMagic, 8);
    const std::uint32_t version = kModelVersion;
    std::uint8_t vbuf[4];
    for (int i = 0; i < 4; ++i) vbuf[i] = static_cast<std::uint8_t>(version >> (8 * i));
    out.write(reinterpret_cast<const char*>(vbuf), 4);

    const auto& payload = w.bytes();
    std::uint8_t sbuf[8];
    for (int i = 0; i < 8; ++i)
        sbuf[i] = static_cast<std::uint8_t>(static_cast<std::uint64_t>(payload.size()) >> (8 * i));
    out.write(reinterpret_cast<const char*>(sbuf), 8);
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
    const std::uint64_t checksum = detail::fnv1a(payload.data(), payload.size());
    std::uint8_t cbuf[8];
    for (int i = 0; i < 8; ++i) cbuf[i] = static_cast<std::uint8_t>(checksum >> (8 * i));
    out.write(reinterpret_cast<const char*>(cbuf), 8);
    if (!out) throw DataError("model file: write failed for '" + path + "'");
}

inline ModelBundle load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("model file: cannot open '" + path + "'");
    std::vector<std::uint8_t> raw((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());

    if (raw.size() < 8 + 4 + 8 + 8) throw DataError("model file: truncated");
    if (std::memcmp(raw.data(), kModelMagic, 8) != 0)
        throw DataError("model file: bad magic (not a model file)");
    std::uint32_t version = 0;
    for (int i = 0; i < 4; ++i) version |= static_cast<std::uint32_t>(raw[8 + i]) << (8 * i);
    if (version != kModelVersion)
        throw DataError("model file: unsupported format version " + std::to_string(version) +
                        " (expected " + std::to_string(kModelVersion) + ")");
    std::uint64_t payload_size = 0;
    for (int i = 0; i < 8; ++i) payload_size |= static_cast<std::uint64_t>(raw[12 + i]) << (8 * i);
    if (raw.size() != 8 + 4 + 8 + payload_size + 8)
        throw DataError("model file: truncated or oversized payload");

    const std::uint8_t* payload = raw.data() + 20;
    std::uint64_t stored = 0;
    for (int i = 0; i < 8; ++i)
        stored |= static_cast<std::uint64_t>(raw[20 + payload_size + i]) << (8 * i);
    if (detail::fnv1a(payload, payload_size) != stored)
        throw DataError("model file: checksum mismatch (corrupted file)");

    detail::ByteReader r(payload, payload_size);
    ModelBundle bundle;
    ModelSpec& s = bundle.model.spec;
    s.variant = r.u8() ? Variant::Bidirectional : Variant::Vanilla;
    s.nlayers = static_cast<int>(r.u32());
    s.units.resize(s.nlayers);
    for (int l = 0; l < s.nlayers; ++l) s.units[l] = static_cast<int>(r.u32());
    s.activation = static_cast<Activation>(r.u8());
    s.nlags = static_cast<int>(r.u32());
    s.msteps = static_cast<int>(r.u32());
    s.input_dim = static_cast<int>(r.u32());
    s.output_dim = static_cast<int>(r.u32());
    s.decoder_units = static_cast<int>(r.u32());
    s.validate();

    const std::uint32_t nz_count = r.u32();
    for (std::uint32_t i = 0; i < nz_count; ++i) {
        const NormMethod method = static_cast<NormMethod>(r.u8());
        const std::uint32_t feat = r.u32();
        std::vector<Normalizer::FeatureParams> ps(feat);
        for (std::uint32_t f = 0; f < feat; ++f) {
            ps[f].a = r.f64();
            ps[f].b = r.f64();
        }
        Normalizer nz;
        nz.set_state(method, std::move(ps));
        bundle.normalizers.push_back(std::move(nz));
    }

    bundle.model.params = ModelParams::build(s);
    std::vector<Matrix*> tensors = bundle.model.params.collect();
    const std::uint32_t tensor_count = r.u32();
    if (tensor_count != tensors.size())
        throw DataError("model file: tensor count mismatch for the declared topology");
    for (Matrix* t : tensors) {
        Matrix m = r.matrix();
        if (m.rows != t->rows || m.cols != t->cols)
            throw DataError("model file: tensor shape mismatch");
        for (double v : m.d)
            if (std::isnan(v) || std::isinf(v))
                throw DataError("model file: non-finite parameter value");
        *t = std::move(m);
    }

    const std::uint32_t epochs = r.u32();
    for (std::uint32_t e = 0; e < epochs; ++e) {
        EpochStats st;
        st.train_loss = r.f64();
        st.val_loss = r.f64();
        st.val_mae = r.f64();
        bundle.model.history.push_back(st);
    }
    bundle.config_echo = r.str();
    return bundle;
}

}  // namespace flowcast
