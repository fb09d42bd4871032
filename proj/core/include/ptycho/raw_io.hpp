#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "ptycho/field.hpp"

namespace ptycho {

// Raw field container: magic ("PTYC" complex / "PTYR" real), u32 version=1,
// u32 rows, u32 cols, then row-major little-endian f64 payload (re,im pairs
// for complex). The same block layout is embedded in plan files.

void write_complex(const std::filesystem::path& path, const ComplexField& z);
ComplexField read_complex(const std::filesystem::path& path);

void write_real(const std::filesystem::path& path, const RealField& x);
RealField read_real(const std::filesystem::path& path);

// Stream-level block writers used by the plan format.
void write_complex_block(std::ostream& os, const ComplexField& z);
ComplexField read_complex_block(std::istream& is);

// FNV-1a 64-bit over file bytes; manifests use it to pin inputs.
std::uint64_t fnv1a_file(const std::filesystem::path& path);
std::string fnv1a_hex(std::uint64_t h);

}  // namespace ptycho
