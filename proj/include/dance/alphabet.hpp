#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace dance {

inline constexpr std::size_t kAlphabetSize = 20;

/// The 20 canonical amino acids in alphabetical one-letter order. This order
/// defines residue rank for one-hot encoding.
inline constexpr std::string_view kAminoAcids = "ACDEFGHIKLMNPQRSTVWY";

/// Rank of an uppercase residue letter in kAminoAcids, or nullopt when the
/// letter is not one of the 20 canonical residues (ambiguity codes included).
std::optional<std::size_t> residue_rank(char residue);

inline bool is_amino_acid(char residue) { return residue_rank(residue).has_value(); }

}  // namespace dance
