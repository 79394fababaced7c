#include "byos/odkg/hashing.hpp"

#include <openssl/evp.h>

#include <array>
#include <memory>

#include "byos/error.hpp"
#include "byos/kconfig/text.hpp"

namespace byos {

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &length) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

namespace odkg {

std::string normalize_label(std::string_view label) { return text::to_lower(text::collapse_whitespace(label)); }

std::string concept_id(std::string_view label) { return "c:" + sha256_hex(normalize_label(label)).substr(0, 16); }

}  // namespace odkg

}  // namespace byos
