#pragma once

#include "graphprop/tensor.hpp"

#include <filesystem>
#include <iosfwd>

namespace graphprop {

// Binary tensor container: one JSON header line
//   {"dtype":"f64","layout":"fiber-fastest","shape":[I1,...,Im]}\n
// followed by prod(shape) little-endian IEEE-754 doubles.

void write_tensor(std::ostream& os, const DenseTensor& t);
DenseTensor read_tensor(std::istream& is);

void write_tensor(const std::filesystem::path& path, const DenseTensor& t);
DenseTensor read_tensor(const std::filesystem::path& path);

} // namespace graphprop
