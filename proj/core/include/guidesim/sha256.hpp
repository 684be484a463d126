#ifndef GUIDESIM_SHA256_HPP
#define GUIDESIM_SHA256_HPP

#include <string>

namespace guidesim {

/// Hex-encoded SHA-256 digest.
std::string sha256_hex(const std::string& data);
std::string sha256_file_hex(const std::string& path);

}  // namespace guidesim

#endif  // GUIDESIM_SHA256_HPP
