#include "textvqa/digest.hpp"

#include <cstdint>

namespace textvqa {

std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    static const char* hexd = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hexd[h & 0xf];
        h >>= 4;
    }
    return out;
}

std::string request_digest(const std::string& stage, const nlohmann::json& payload) {
    return fnv1a_hex(stage + "\n" + payload.dump());
}

}  // namespace textvqa
