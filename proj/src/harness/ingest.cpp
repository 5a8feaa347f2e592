#include "graphprop/errors.hpp"
#include "graphprop/harness.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <type_traits>

namespace graphprop::harness {

std::vector<int> read_labels(const std::filesystem::path& path, Index n) {
    std::ifstream is(path);
    if (!is) fail(ErrorKind::Io, "cannot open " + path.string());
    std::vector<int> labels(static_cast<std::size_t>(n), -1);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        long long id = 0;
        int label = 0;
        if (!(ls >> id >> label)) fail(ErrorKind::Format, "labels line " + std::to_string(lineno) + ": expected 'id label'");
        if (id < 1 || id > n) fail(ErrorKind::Format, "labels line " + std::to_string(lineno) + ": id out of range");
        if (label != 0 && label != 1) fail(ErrorKind::Format, "labels line " + std::to_string(lineno) + ": label must be 0 or 1");
        labels[id - 1] = label;
    }
    for (Index i = 0; i < n; ++i) {
        if (labels[i] < 0) fail(ErrorKind::Format, "node " + std::to_string(i + 1) + " has no label");
    }
    return labels;
}

RasterSidecar read_sidecar(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) fail(ErrorKind::Io, "cannot open " + path.string());
    RasterSidecar s;
    try {
        const nlohmann::json j = nlohmann::json::parse(is);
        s.height = j.at("height").get<Index>();
        s.width = j.at("width").get<Index>();
        s.bands = j.at("bands").get<Index>();
        s.dtype = j.at("dtype").get<std::string>();
        if (j.contains("interleave")) s.interleave = j.at("interleave").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Format, "bad raster sidecar " + path.string() + ": " + e.what());
    }
    if (s.height < 1 || s.width < 1 || s.bands < 1) fail(ErrorKind::Format, "raster extents must be positive");
    if (s.interleave != "bsq" && s.interleave != "bil" && s.interleave != "bip") {
        fail(ErrorKind::Format, "interleave must be bsq, bil or bip");
    }
    return s;
}

namespace {

template <class T>
double load_le(const unsigned char* p) {
    using U = std::conditional_t<sizeof(T) == 1, std::uint8_t,
                                 std::conditional_t<sizeof(T) == 2, std::uint16_t,
                                                    std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>>;
    U u = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) u |= static_cast<U>(static_cast<U>(p[b]) << (8 * b));
    return static_cast<double>(std::bit_cast<T>(u));
}

using Loader = double (*)(const unsigned char*);

std::pair<Loader, std::size_t> loader_for(const std::string& dtype) {
    if (dtype == "u8") return {&load_le<std::uint8_t>, 1};
    if (dtype == "u16") return {&load_le<std::uint16_t>, 2};
    if (dtype == "i16") return {&load_le<std::int16_t>, 2};
    if (dtype == "u32") return {&load_le<std::uint32_t>, 4};
    if (dtype == "i32") return {&load_le<std::int32_t>, 4};
    if (dtype == "f32") return {&load_le<float>, 4};
    if (dtype == "f64") return {&load_le<double>, 8};
    fail(ErrorKind::Format, "unsupported raster dtype '" + dtype + "'");
}

} // namespace

DenseTensor convert_raster(const std::filesystem::path& raw, const RasterSidecar& s) {
    const auto [load, width] = loader_for(s.dtype);
    std::ifstream is(raw, std::ios::binary);
    if (!is) fail(ErrorKind::Io, "cannot open " + raw.string());
    const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    const Index count = s.height * s.width * s.bands;
    if (bytes.size() != static_cast<std::size_t>(count) * width) {
        fail(ErrorKind::Format, raw.string() + ": expected " + std::to_string(count * static_cast<Index>(width)) +
                                    " bytes, found " + std::to_string(bytes.size()));
    }
    DenseTensor t({s.height, s.width, s.bands});
    for (Index band = 0; band < s.bands; ++band) {
        for (Index row = 0; row < s.height; ++row) {
            for (Index col = 0; col < s.width; ++col) {
                Index k = 0;
                if (s.interleave == "bsq") {
                    k = (band * s.height + row) * s.width + col;
                } else if (s.interleave == "bil") {
                    k = (row * s.bands + band) * s.width + col;
                } else {
                    k = (row * s.width + col) * s.bands + band;
                }
                const double v = load(bytes.data() + static_cast<std::size_t>(k) * width);
                if (!std::isfinite(v)) fail(ErrorKind::NonFiniteInput, "raster holds a non-finite value");
                t({row, col, band}) = v;
            }
        }
    }
    return t;
}

} // namespace graphprop::harness
