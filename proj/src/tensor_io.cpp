#include "graphprop/tensor_io.hpp"

#include "graphprop/errors.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace graphprop {

namespace {

std::uint64_t to_le(std::uint64_t x) {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t y = 0;
        for (int i = 0; i < 8; ++i) y |= ((x >> (8 * i)) & 0xffu) << (8 * (7 - i));
        return y;
    }
    return x;
}

} // namespace

void write_tensor(std::ostream& os, const DenseTensor& t) {
    nlohmann::json header;
    header["shape"] = t.shape();
    header["dtype"] = "f64";
    header["layout"] = "fiber-fastest";
    os << header.dump() << '\n';
    for (double v : t.values()) {
        const std::uint64_t le = to_le(std::bit_cast<std::uint64_t>(v));
        char buf[8];
        std::memcpy(buf, &le, 8);
        os.write(buf, 8);
    }
    if (!os) fail(ErrorKind::Io, "failed writing tensor payload");
}

DenseTensor read_tensor(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) fail(ErrorKind::Format, "missing tensor header line");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Format, std::string("tensor header is not JSON: ") + e.what());
    }
    if (!header.is_object() || !header.contains("shape") || !header["shape"].is_array()) {
        fail(ErrorKind::Format, "tensor header lacks a shape array");
    }
    if (header.value("dtype", "") != "f64") fail(ErrorKind::Format, "unsupported dtype");
    if (header.value("layout", "") != "fiber-fastest") fail(ErrorKind::Format, "unsupported layout");

    Shape shape;
    for (const auto& e : header["shape"]) {
        if (!e.is_number_integer() || e.get<long long>() < 1) fail(ErrorKind::Format, "invalid shape entry");
        shape.push_back(e.get<Index>());
    }
    if (shape.empty()) fail(ErrorKind::Format, "empty shape");

    const std::string payload{std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
    const auto count = static_cast<std::size_t>(shape_product(shape));
    if (payload.size() != count * 8) {
        fail(ErrorKind::Format, "payload holds " + std::to_string(payload.size()) + " bytes, header implies " +
                                    std::to_string(count * 8));
    }
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::uint64_t le;
        std::memcpy(&le, payload.data() + 8 * i, 8);
        values[i] = std::bit_cast<double>(to_le(le));
    }
    return DenseTensor(std::move(shape), std::move(values));
}

void write_tensor(const std::filesystem::path& path, const DenseTensor& t) {
    std::ofstream os(path, std::ios::binary);
    if (!os) fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    write_tensor(os, t);
}

DenseTensor read_tensor(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) fail(ErrorKind::Io, "cannot open " + path.string());
    return read_tensor(is);
}

} // namespace graphprop
