#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "claimrep/rng.hpp"

namespace claimrep {

// FNV-1a 64 over file bytes, rendered as "fnv1a64:<16 hex>". Used for the
// reproducibility manifest; not a cryptographic digest.
std::string hash_file(const std::filesystem::path& path);

}  // namespace claimrep
