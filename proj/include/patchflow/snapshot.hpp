#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "patchflow/field.hpp"

namespace patchflow {

// Field snapshot file:
//   bytes   0..15   magic "PATCHFLOWFL\0" + uint32 little-endian version
//   bytes  16..271  UTF-8 JSON header {"n","L","name","t"} padded with spaces
//   bytes 272..     row-major little-endian float64 samples (n*n)
inline constexpr char kSnapshotMagic[12] = {'P', 'A', 'T', 'C', 'H', 'F',
                                            'L', 'O', 'W', 'F', 'L', '\0'};
inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 256;

static_assert(std::endian::native == std::endian::little,
              "snapshot writer assumes a little-endian host");

inline void save_snapshot(const std::string& path, const ScalarField& f,
                          const std::string& name, double t) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open snapshot file for writing: " + path);

    out.write(kSnapshotMagic, sizeof(kSnapshotMagic));
    std::uint32_t ver = kSnapshotVersion;
    out.write(reinterpret_cast<const char*>(&ver), sizeof(ver));

    nlohmann::json hdr;
    hdr["n"] = f.n();
    hdr["L"] = f.grid().length();
    hdr["name"] = name;
    hdr["t"] = t;
    std::string text = hdr.dump();
    if (text.size() > kSnapshotHeaderBytes)
        throw std::runtime_error("snapshot header too long");
    text.resize(kSnapshotHeaderBytes, ' ');
    out.write(text.data(), std::streamsize(text.size()));

    out.write(reinterpret_cast<const char*>(f.values().data()),
              std::streamsize(f.values().size() * sizeof(double)));
    if (!out) throw std::runtime_error("short write on snapshot file: " + path);
}

struct Snapshot {
    ScalarField field;
    std::string name;
    double t;
};

inline Snapshot load_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot file: " + path);

    char magic[12];
    std::uint32_t ver = 0;
    in.read(magic, sizeof(magic));
    in.read(reinterpret_cast<char*>(&ver), sizeof(ver));
    if (!in || std::memcmp(magic, kSnapshotMagic, sizeof(magic)) != 0)
        throw std::runtime_error("not a field snapshot file: " + path);
    if (ver != kSnapshotVersion)
        throw std::runtime_error("unsupported snapshot version in " + path);

    std::string text(kSnapshotHeaderBytes, '\0');
    in.read(text.data(), kSnapshotHeaderBytes);
    if (!in) throw std::runtime_error("truncated snapshot header: " + path);
    nlohmann::json hdr = nlohmann::json::parse(text);

    const std::size_t n = hdr.at("n").get<std::size_t>();
    const double L = hdr.at("L").get<double>();
    Grid2D grid(n, L);
    ScalarField f(grid);
    in.read(reinterpret_cast<char*>(f.values_mut().data()),
            std::streamsize(grid.size() * sizeof(double)));
    if (!in) throw std::runtime_error("truncated snapshot payload: " + path);

    return Snapshot{std::move(f), hdr.at("name").get<std::string>(),
                    hdr.at("t").get<double>()};
}

} // namespace patchflow
