#include "bta/checkpoint.hpp"

#include <fstream>

#include "bta/wire.hpp"

namespace bta {

namespace {
constexpr char kMagic[5] = "BTAC";
constexpr uint32_t kVersion = 1;
}  // namespace

void save_checkpoint(const std::filesystem::path& path, const std::string& config_json,
                     const ParameterStore& params) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("save_checkpoint: cannot open " + path.string());
    out.write(kMagic, 4);
    wire::write_u32(out, kVersion);
    wire::write_string(out, config_json);
    wire::write_u32(out, static_cast<uint32_t>(params.size()));
    for (const ParameterStore::Entry& e : params.entries()) {
        wire::write_string(out, e.name);
        wire::write_i8(out, e.trainable ? 1 : 0);
        wire::write_u32(out, static_cast<uint32_t>(e.value.rows()));
        wire::write_u32(out, static_cast<uint32_t>(e.value.cols()));
        for (size_t i = 0; i < e.value.size(); ++i) wire::write_f64(out, e.value[i]);
    }
    if (!out) throw data_error("save_checkpoint: write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("load_checkpoint: cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::string(magic, 4) != kMagic)
        throw data_error("load_checkpoint: bad magic in " + path.string());
    if (wire::read_u32(in) != kVersion)
        throw data_error("load_checkpoint: unsupported version in " + path.string());
    Checkpoint ckpt;
    ckpt.config_json = wire::read_string(in);
    const uint32_t count = wire::read_u32(in);
    for (uint32_t t = 0; t < count; ++t) {
        const std::string name = wire::read_string(in);
        const bool trainable = wire::read_i8(in) != 0;
        const uint32_t rows = wire::read_u32(in);
        const uint32_t cols = wire::read_u32(in);
        Matrix m(static_cast<int>(rows), static_cast<int>(cols));
        for (size_t i = 0; i < m.size(); ++i) m[i] = wire::read_f64(in);
        ckpt.params.add(name, std::move(m), trainable);
    }
    return ckpt;
}

}  // namespace bta
