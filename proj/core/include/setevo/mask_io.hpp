#pragma once

// PGM (P5) mask files with a JSON sidecar carrying the grid.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "setevo/geometry.hpp"

namespace setevo {

nlohmann::json grid_to_json(const GridSpec& grid);
GridSpec grid_from_json(const nlohmann::json& j);

/// Binary PGM bytes: rows from the top of the domain (largest y) down,
/// 0 -> 0 and 1 -> 255.
std::string encode_pgm(const BinaryField& z);
BinaryField decode_pgm(const std::string& bytes, const GridSpec& grid);

/// Writes <stem>.pgm and <stem>.json; returns the .pgm path.
std::filesystem::path write_mask(const BinaryField& z, const std::filesystem::path& stem);
/// Reads a mask from its .pgm path (sidecar next to it with .json extension).
BinaryField read_mask(const std::filesystem::path& pgm_path);

std::string sha256_hex(const std::string& bytes);

void write_file(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace setevo
