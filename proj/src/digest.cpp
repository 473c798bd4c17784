#include "itheta/digest.hpp"

#include <cstdint>
#include <cstdio>

namespace itheta {

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string canonical_text(const ConeConfig& config, const Lattice* lattice) {
    std::string out = "gram:";
    const auto& g = config.space().gram();
    for (std::size_t i = 0; i < g.rows(); ++i) {
        out += i ? ";" : "";
        for (std::size_t j = 0; j < g.cols(); ++j) out += (j ? "," : "") + to_string(g(i, j));
    }
    out += "|vectors:";
    for (const auto& c : config.vectors()) out += to_string(c);
    if (lattice) {
        out += "|basis:";
        const auto& b = lattice->basis();
        for (std::size_t i = 0; i < b.rows(); ++i) {
            out += i ? ";" : "";
            for (std::size_t j = 0; j < b.cols(); ++j) out += (j ? "," : "") + to_string(b(i, j));
        }
        out += "|mu:" + to_string(lattice->mu());
    }
    return out;
}

}  // namespace itheta
