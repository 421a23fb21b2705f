// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#include "cfonet/checkpoint.hpp"

#include "cfonet/errors.hpp"

#include <boost/crc.hpp>

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace cfonet {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'C', 'F', 'O', 'N', 'E', 'T', 'C', 'K'};

class Writer {
public:
    void raw(const void* p, std::size_t n) { buf_.append(static_cast<const char*>(p), n); }
    void u32(std::uint32_t v) { raw(&v, sizeof v); }
    void u64(std::uint64_t v) { raw(&v, sizeof v); }
    void str(const std::string& s) {
        u64(s.size());
        raw(s.data(), s.size());
    }
    std::string& bytes() { return buf_; }

private:
    std::string buf_;
};

class Reader {
public:
    Reader(const std::string& bytes, std::size_t end) : bytes_(bytes), end_(end) {}

    void raw(void* p, std::size_t n) {
        if (n > end_ - pos_) throw CheckpointError("checkpoint truncated at byte " + std::to_string(pos_));
        std::memcpy(p, bytes_.data() + pos_, n);
        pos_ += n;
    }
    std::uint32_t u32() {
        std::uint32_t v;
        raw(&v, sizeof v);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v;
        raw(&v, sizeof v);
        return v;
    }
    std::string str() {
        const std::uint64_t n = u64();
        if (n > end_ - pos_) throw CheckpointError("checkpoint string length exceeds file size");
        std::string s(bytes_.data() + pos_, n);
        pos_ += n;
        return s;
    }
    bool done() const { return pos_ == end_; }

private:
    const std::string& bytes_;
    std::size_t end_;
    std::size_t pos_ = 0;
};

std::uint32_t crc32(const char* data, std::size_t n) {
    boost::crc_32_type crc;
    crc.process_bytes(data, n);
    return crc.checksum();
}

}  // namespace

std::string serialize_checkpoint(const CfoNet& model, const ExperimentConfig& config) {
    ExperimentConfig effective = config;
    effective.model = model.config();

    Writer w;
    w.raw(kMagic, sizeof kMagic);
    w.u32(kCheckpointVersion);
    w.str(effective.to_text());
    const auto& tokens = model.vocab().tokens();
    w.u64(tokens.size());
    for (const auto& t : tokens) w.str(t);
    w.u64(model.parameters().size());
    model.parameters().for_each([&](const Parameter& p) {
        w.str(p.name);
        w.u64(static_cast<std::uint64_t>(p.value.rows()));
        w.u64(static_cast<std::uint64_t>(p.value.cols()));
        w.raw(p.value.data(), static_cast<std::size_t>(p.value.size()) * sizeof(double));
    });
    const std::uint32_t crc = crc32(w.bytes().data(), w.bytes().size());
    w.u32(crc);
    return std::move(w.bytes());
}

LoadedModel deserialize_checkpoint(const std::string& bytes) {
    if (bytes.size() < sizeof kMagic + 8 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
        throw CheckpointError("not a cfonet checkpoint (bad magic)");
    }
    std::uint32_t version;
    std::memcpy(&version, bytes.data() + sizeof kMagic, sizeof version);
    if (version != kCheckpointVersion) {
        throw VersionError("checkpoint format version " + std::to_string(version) + ", expected " +
                           std::to_string(kCheckpointVersion));
    }
    const std::size_t body = bytes.size() - sizeof(std::uint32_t);
    std::uint32_t stored;
    std::memcpy(&stored, bytes.data() + body, sizeof stored);
    if (crc32(bytes.data(), body) != stored) throw CheckpointError("checkpoint checksum mismatch (corrupt file)");

    Reader r(bytes, body);
    char magic[sizeof kMagic];
    r.raw(magic, sizeof magic);
    r.u32();

    LoadedModel out;
    try {
        out.config = parse_config(r.str());
    } catch (const ConfigError& e) {
        throw CheckpointError(std::string("checkpoint config invalid: ") + e.what());
    }

    const std::uint64_t n_tokens = r.u64();
    std::vector<std::string> tokens;
    for (std::uint64_t i = 0; i < n_tokens; ++i) tokens.push_back(r.str());
    Vocab vocab;
    if (tokens.size() < 2 || tokens[0] != vocab.token(Vocab::kPad) || tokens[1] != vocab.token(Vocab::kUnk)) {
        throw CheckpointError("checkpoint vocabulary lacks the reserved tokens");
    }
    for (std::size_t i = 2; i < tokens.size(); ++i) {
        if (vocab.add(tokens[i]) != static_cast<int>(i)) throw CheckpointError("duplicate vocabulary token");
    }

    out.model = std::make_unique<CfoNet>(out.config.model, std::move(vocab));
    ParameterStore& store = out.model->parameters();
    const std::uint64_t n_params = r.u64();
    if (n_params != store.size()) {
        throw CheckpointError("checkpoint holds " + std::to_string(n_params) + " tensors, model expects " +
                              std::to_string(store.size()));
    }
    for (std::uint64_t i = 0; i < n_params; ++i) {
        const std::string name = r.str();
        Parameter* p = store.find(name);
        if (!p) throw CheckpointError("unexpected tensor '" + name + "'");
        const std::uint64_t rows = r.u64();
        const std::uint64_t cols = r.u64();
        if (rows != static_cast<std::uint64_t>(p->value.rows()) || cols != static_cast<std::uint64_t>(p->value.cols())) {
            throw CheckpointError("tensor '" + name + "' has shape " + std::to_string(rows) + "x" +
                                  std::to_string(cols) + ", expected " + std::to_string(p->value.rows()) + "x" +
                                  std::to_string(p->value.cols()));
        }
        r.raw(p->value.data(), static_cast<std::size_t>(p->value.size()) * sizeof(double));
    }
    if (!r.done()) throw CheckpointError("trailing bytes after the last tensor");
    return out;
}

void save_checkpoint(const std::filesystem::path& path, const CfoNet& model, const ExperimentConfig& config) {
    const std::string bytes = serialize_checkpoint(model, config);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot write checkpoint " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw CheckpointError("failed writing checkpoint " + path.string());
}

LoadedModel load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot read checkpoint " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_checkpoint(buf.str());
}

}  // namespace cfonet
