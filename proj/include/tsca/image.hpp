#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tsca/grid2d.hpp"
#include "tsca/rule.hpp"

namespace tsca {

using Rgb = std::array<std::uint8_t, 3>;

// Binary Netpbm encoders. Pixels are row-major; PBM treats nonzero as black.
std::string encode_pbm(int width, int height, const std::vector<std::uint8_t>& pixels);
// maxval <= 65535; samples above 255 use two big-endian bytes.
std::string encode_pgm(int width, int height, std::uint32_t maxval, const std::vector<std::uint32_t>& pixels);
std::string encode_ppm(int width, int height, const std::vector<Rgb>& pixels);

// One row per time step. PBM for two states, PGM with maxval m-1 otherwise.
std::string spacetime_image(const std::vector<CyclicConfig>& rows, Alphabet m);
// One line per time step; states as digits (base 36 for larger alphabets).
std::string spacetime_text(const std::vector<CyclicConfig>& rows);

// Black cells dark; arrows tint white cells by direction.
std::string billiard_ppm(const BilliardGrid& g);
// '#' black, '.' white.
std::string billiard_text(const BilliardGrid& g);

std::string ant_ppm(const AntGrid& g);
// '#'/'.' colors; 'H'/'h' head on black/white, 'T'/'t' tail.
std::string ant_text(const AntGrid& g);

std::string heading_name(Heading h);
// step,x,y,orientation,color_flipped
std::string trajectory_csv(const std::vector<AntTraceStep>& trajectory);

} // namespace tsca
