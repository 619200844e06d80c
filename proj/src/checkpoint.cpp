#include "clickbait/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "clickbait/error.hpp"

namespace clickbait {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'C', 'B', 'C', 'K'};

template <class T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
    T v{};
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw Error("checkpoint truncated");
    return v;
}

}  // namespace

void write_checkpoint(std::ostream& out, const ParameterSet& params) {
    out.write(kMagic, 4);
    put<std::uint32_t>(out, kCheckpointVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
    for (const auto& [name, p] : params) {
        put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
        const Shape& shape = p.value.shape();
        put<std::uint32_t>(out, static_cast<std::uint32_t>(shape.size()));
        for (std::size_t d : shape) put<std::uint64_t>(out, d);
        out.write(reinterpret_cast<const char*>(p.value.ptr()),
                  static_cast<std::streamsize>(p.value.size() * sizeof(double)));
    }
    if (!out) throw Error("failed writing checkpoint");
}

ParameterSet read_checkpoint(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw Error("not a checkpoint file (bad magic)");
    const auto version = get<std::uint32_t>(in);
    if (version != kCheckpointVersion) throw Error("unsupported checkpoint version " + std::to_string(version));
    const auto count = get<std::uint32_t>(in);
    ParameterSet params;
    for (std::uint32_t i = 0; i < count; ++i) {
        const auto len = get<std::uint32_t>(in);
        std::string name(len, '\0');
        if (!in.read(name.data(), len)) throw Error("checkpoint truncated");
        const auto rank = get<std::uint32_t>(in);
        Shape shape(rank);
        for (auto& d : shape) d = static_cast<std::size_t>(get<std::uint64_t>(in));
        Tensor value(shape);
        if (!in.read(reinterpret_cast<char*>(value.ptr()), static_cast<std::streamsize>(value.size() * sizeof(double))))
            throw Error("checkpoint truncated");
        if (!params.emplace(name, Parameter(std::move(value))).second)
            throw Error("duplicate parameter " + name + " in checkpoint");
    }
    return params;
}

void save_checkpoint(const std::filesystem::path& path, const ParameterSet& params) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    write_checkpoint(out, params);
}

ParameterSet load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return read_checkpoint(in);
}

}  // namespace clickbait
