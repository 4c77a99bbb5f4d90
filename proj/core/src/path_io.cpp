#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "hermscal/gaussian_synth.hpp"

namespace hermscal {
namespace {

constexpr char kMagic[4] = {'H', 'S', 'C', '1'};

static_assert(std::endian::native == std::endian::little,
              "HSC1 writer assumes a little-endian host");

}  // namespace

void write_path_csv(const std::string& path, std::span<const double> values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "value\n" << std::setprecision(17);
  for (double v : values) out << v << '\n';
}

void write_path_binary(const std::string& path, std::span<const double> values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  const std::uint64_t n = values.size();
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
}

std::vector<double> read_path_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  std::uint64_t n = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error(path + ": not an HSC1 block");
  std::vector<double> v(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw std::runtime_error(path + ": truncated HSC1 block");
  return v;
}

}  // namespace hermscal
