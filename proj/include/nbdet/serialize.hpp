#pragma once

// Versioned JSON round-trip for constellations: points as [re, im] pairs,
// optional layer amplitudes, and the 2^N mapper table (N <= 16). Intended
// for debugging dumps and golden-file tests.

#include <string>

#include "nbdet/constellation.hpp"

namespace nbdet {

std::string constellation_to_json(const Constellation& c);
Constellation constellation_from_json(const std::string& text);

void save_constellation(const Constellation& c, const std::string& path);
Constellation load_constellation(const std::string& path);

}  // namespace nbdet
