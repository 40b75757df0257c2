#include "kwcl/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "kwcl/util/errors.hpp"

namespace kwcl::nn {

namespace {

constexpr char kMagic[8] = {'K', 'W', 'C', 'L', 'P', 'R', 'M', '1'};

template <typename T>
void write_raw(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw DataError("parameter container: truncated file");
    return v;
}

} // namespace

void write_parameters(std::ostream& out, const std::vector<const Parameter*>& params) {
    out.write(kMagic, sizeof(kMagic));
    write_raw<std::uint64_t>(out, params.size());
    for (const Parameter* p : params) {
        write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(p->name.size()));
        out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
        write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(p->value.rank()));
        for (std::size_t d : p->value.shape()) write_raw<std::uint64_t>(out, d);
        out.write(reinterpret_cast<const char*>(p->value.data()),
                  static_cast<std::streamsize>(p->value.numel() * sizeof(double)));
    }
}

std::map<std::string, Tensor> read_parameters(std::istream& in) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw DataError("parameter container: bad magic (not a checkpoint or unsupported version)");
    }
    const auto count = read_raw<std::uint64_t>(in);
    std::map<std::string, Tensor> result;
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto name_len = read_raw<std::uint32_t>(in);
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        const auto rank = read_raw<std::uint32_t>(in);
        std::vector<std::size_t> shape(rank);
        for (auto& d : shape) d = static_cast<std::size_t>(read_raw<std::uint64_t>(in));
        Tensor t(shape);
        in.read(reinterpret_cast<char*>(t.data()),
                static_cast<std::streamsize>(t.numel() * sizeof(double)));
        if (!in) throw DataError("parameter container: truncated tensor data for " + name);
        result.emplace(std::move(name), std::move(t));
    }
    return result;
}

void write_parameter_file(const std::filesystem::path& path,
                          const std::vector<const Parameter*>& params) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path.string());
    write_parameters(out, params);
    if (!out) throw DataError("write failed: " + path.string());
}

std::map<std::string, Tensor> read_parameter_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint: " + path.string());
    return read_parameters(in);
}

} // namespace kwcl::nn
