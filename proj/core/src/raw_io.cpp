#include "ptycho/raw_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "raw field files are little-endian; big-endian hosts are unsupported");

namespace ptycho {
namespace {

constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& is, const char* what) {
  std::uint32_t v = 0;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v))
    throw std::runtime_error(std::string("raw field: truncated ") + what);
  return v;
}

void write_header(std::ostream& os, const char magic[4], std::uint32_t rows, std::uint32_t cols) {
  os.write(magic, 4);
  write_u32(os, kVersion);
  write_u32(os, rows);
  write_u32(os, cols);
}

std::pair<std::uint32_t, std::uint32_t> read_header(std::istream& is, const char magic[4]) {
  char got[4] = {};
  if (!is.read(got, 4) || std::memcmp(got, magic, 4) != 0)
    throw std::runtime_error("raw field: bad magic");
  const std::uint32_t v = read_u32(is, "version");
  if (v != kVersion) throw std::runtime_error("raw field: unsupported version");
  const std::uint32_t rows = read_u32(is, "rows");
  const std::uint32_t cols = read_u32(is, "cols");
  if (rows == 0 || cols == 0) throw std::runtime_error("raw field: empty shape");
  return {rows, cols};
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path.string());
  return is;
}

}  // namespace

void write_complex_block(std::ostream& os, const ComplexField& z) {
  write_header(os, "PTYC", static_cast<std::uint32_t>(z.rows()),
               static_cast<std::uint32_t>(z.cols()));
  os.write(reinterpret_cast<const char*>(z.data()),
           static_cast<std::streamsize>(z.size() * sizeof(cdouble)));
  if (!os) throw std::runtime_error("raw field: write failed");
}

ComplexField read_complex_block(std::istream& is) {
  const auto [rows, cols] = read_header(is, "PTYC");
  ComplexField z(rows, cols);
  if (!is.read(reinterpret_cast<char*>(z.data()),
               static_cast<std::streamsize>(z.size() * sizeof(cdouble))))
    throw std::runtime_error("raw field: truncated payload");
  if (!z.all_finite()) throw std::runtime_error("raw field: non-finite payload");
  return z;
}

void write_complex(const std::filesystem::path& path, const ComplexField& z) {
  auto os = open_out(path);
  write_complex_block(os, z);
}

ComplexField read_complex(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_complex_block(is);
}

void write_real(const std::filesystem::path& path, const RealField& x) {
  auto os = open_out(path);
  write_header(os, "PTYR", static_cast<std::uint32_t>(x.rows()),
               static_cast<std::uint32_t>(x.cols()));
  os.write(reinterpret_cast<const char*>(x.data()),
           static_cast<std::streamsize>(x.size() * sizeof(double)));
  if (!os) throw std::runtime_error("raw field: write failed");
}

RealField read_real(const std::filesystem::path& path) {
  auto is = open_in(path);
  const auto [rows, cols] = read_header(is, "PTYR");
  RealField x(rows, cols);
  if (!is.read(reinterpret_cast<char*>(x.data()),
               static_cast<std::streamsize>(x.size() * sizeof(double))))
    throw std::runtime_error("raw field: truncated payload");
  if (!x.all_finite()) throw std::runtime_error("raw field: non-finite payload");
  return x;
}

std::uint64_t fnv1a_file(const std::filesystem::path& path) {
  auto is = open_in(path);
  std::uint64_t h = 1469598103934665603ull;
  char buf[1 << 16];
  while (is.read(buf, sizeof buf) || is.gcount() > 0) {
    const std::streamsize got = is.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
    if (got < static_cast<std::streamsize>(sizeof buf)) break;
  }
  return h;
}

std::string fnv1a_hex(std::uint64_t h) {
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

}  // namespace ptycho
