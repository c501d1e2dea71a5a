#include "dance/alphabet.hpp"

namespace dance {

namespace {

constexpr std::array<signed char, 256> build_rank_table() {
    std::array<signed char, 256> table{};
    for (auto& v : table) v = -1;
    for (std::size_t i = 0; i < kAminoAcids.size(); ++i) {
        table[static_cast<unsigned char>(kAminoAcids[i])] = static_cast<signed char>(i);
    }
    return table;
}

constexpr auto kRankTable = build_rank_table();

}  // namespace

std::optional<std::size_t> residue_rank(char residue) {
    const signed char r = kRankTable[static_cast<unsigned char>(residue)];
    if (r < 0) return std::nullopt;
    return static_cast<std::size_t>(r);
}

}  // namespace dance
