// SPDX-License-Identifier: Apache-2.0
#include "gsd/manifest.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <memory>

#include "gsd/error.hpp"

namespace gsd {

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1) {
        throw DataError("sha256 computation failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xf]);
    }
    return out;
}

nlohmann::ordered_json RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = "gsd";
    j["tool_version"] = tool_version;
    j["command"] = command;
    j["seed"] = seed;
    j["secret_bit_order"] = bit_order;
    j["checkpoint_sha256"] = checkpoint_sha256;
    j["config"] = config;
    return j;
}

void RunManifest::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write manifest " + path.string());
    out << to_json().dump(2) << '\n';
}

}  // namespace gsd
