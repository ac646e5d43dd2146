#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include <openssl/evp.h>

#include "newsrank/error.hpp"

namespace newsrank {

// MD5 digest as 32 lowercase hex characters.
inline std::string md5_hex(std::span<const std::uint8_t> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_md5(),
                  nullptr))
    throw DataError("MD5 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out(len * 2, '0');
  for (unsigned int i = 0; i < len; ++i) {
    out[2 * i] = hex[digest[i] >> 4];
    out[2 * i + 1] = hex[digest[i] & 0xF];
  }
  return out;
}

inline std::string md5_hex(std::string_view s) {
  return md5_hex(std::span(reinterpret_cast<const std::uint8_t*>(s.data()),
                           s.size()));
}

}  // namespace newsrank
