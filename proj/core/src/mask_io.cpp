#include "setevo/mask_io.hpp"

#include <openssl/sha.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace setevo {

nlohmann::json grid_to_json(const GridSpec& grid) {
  return {{"origin", {grid.origin().x, grid.origin().y}},
          {"side", {grid.side(), grid.side()}},
          {"cells", {grid.cells(), grid.cells()}}};
}

GridSpec grid_from_json(const nlohmann::json& j) {
  const auto& o = j.at("origin");
  const auto& s = j.at("side");
  const auto& c = j.at("cells");
  return GridSpec::from_axes({o.at(0).get<double>(), o.at(1).get<double>()},
                             {s.at(0).get<double>(), s.at(1).get<double>()},
                             c.at(0).get<int>(), c.at(1).get<int>());
}

std::string encode_pgm(const BinaryField& z) {
  const auto& g = z.grid();
  std::string out = "P5\n" + std::to_string(g.nx()) + " " + std::to_string(g.ny()) + "\n255\n";
  out.reserve(out.size() + z.size());
  for (int j = g.ny() - 1; j >= 0; --j) {
    for (int i = 0; i < g.nx(); ++i) out.push_back(z.at(i, j) ? static_cast<char>(255) : 0);
  }
  return out;
}

BinaryField decode_pgm(const std::string& bytes, const GridSpec& grid) {
  std::istringstream in(bytes);
  std::string magic;
  int w = 0, hgt = 0, maxval = 0;
  in >> magic >> w >> hgt >> maxval;
  if (magic != "P5" || !in) throw std::runtime_error("not a binary PGM (P5) file");
  if (w != grid.nx() || hgt != grid.ny()) throw std::runtime_error("PGM size does not match grid sidecar");
  if (maxval != 255) throw std::runtime_error("PGM maxval must be 255");
  in.get();  // single whitespace before raster
  const auto offset = static_cast<std::size_t>(in.tellg());
  if (bytes.size() != offset + grid.size()) throw std::runtime_error("PGM raster has wrong length");
  BinaryField z(grid);
  std::size_t k = offset;
  for (int j = grid.ny() - 1; j >= 0; --j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const auto v = static_cast<unsigned char>(bytes[k++]);
      if (v != 0 && v != 255) throw std::runtime_error("PGM mask values must be 0 or 255");
      z.set(i, j, v == 255);
    }
  }
  return z;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path write_mask(const BinaryField& z, const std::filesystem::path& stem) {
  auto pgm = stem;
  pgm += ".pgm";
  auto sidecar = stem;
  sidecar += ".json";
  write_file(pgm, encode_pgm(z));
  write_file(sidecar, grid_to_json(z.grid()).dump(2) + "\n");
  return pgm;
}

BinaryField read_mask(const std::filesystem::path& pgm_path) {
  auto sidecar = pgm_path;
  sidecar.replace_extension(".json");
  const auto grid = grid_from_json(nlohmann::json::parse(read_file(sidecar)));
  return decode_pgm(read_file(pgm_path), grid);
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, SHA256_DIGEST_LENGTH> digest{};
  SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), digest.data());
  std::string hex;
  hex.reserve(2 * digest.size());
  char buf[3];
  for (unsigned char c : digest) {
    std::snprintf(buf, sizeof buf, "%02x", c);
    hex += buf;
  }
  return hex;
}

}  // namespace setevo
