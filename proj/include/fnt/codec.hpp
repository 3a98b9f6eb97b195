#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <fnt/field.hpp>
#include <fnt/graph.hpp>

namespace fnt {

/// A payload split into k source blocks of block_length symbols each.
/// Symbols are 2-byte little-endian slices of the payload, zero padded, so
/// every source symbol is in [0, 65535].
struct SourceObject {
    std::uint64_t original_length = 0;
    std::uint32_t block_count = 0;   // k
    std::uint32_t block_length = 0;  // L symbols per block
    SymbolMatrix blocks;             // k x L, row i = block i
};

SourceObject split(std::span<const std::byte> payload, std::uint32_t k);

/// Inverse of split; trims padding using the original byte length.
std::vector<std::byte> merge(const SymbolMatrix& blocks, std::uint64_t original_length);

/// One coded block: the value of a graph node over the source blocks.
/// Symbols are true field values (65536 can occur); provenance travels as the
/// node coordinate, the explicit coefficient row is optional.
struct CodedBlock {
    NodeCoord coord;
    SymbolVector symbols;
    std::optional<CoefficientRow> coefficients;
};

/// Encodes one node value. The coord must be non-void.
CodedBlock encode_block(const SourceObject& src, const FftGraph& g, NodeCoord coord);

/// All n last-step blocks at once via a column-wise fast transform.
/// Equals encode_block at every (u, p); explicit coefficients are omitted.
std::vector<CodedBlock> encode_last_step(const SourceObject& src, const FftGraph& g);

/// Recovers the k source blocks from any rank-k collection of coded blocks
/// (last-step or intermediate) by an exact k x k solve applied column-wise.
/// Rows enter the elimination in ascending (step, position) order. Throws
/// InsufficientRankError when rank < k and IntegrityError on inconsistent
/// duplicates or coefficient/coord mismatches.
SymbolMatrix decode(const FftGraph& g, const std::vector<CodedBlock>& blocks,
                    std::uint32_t block_length);

/// Erasure-free fast path: all n last-step blocks -> column-wise inverse
/// transform. Equals decode() on the same input at O(n log n) per column.
SymbolMatrix decode_full_last_step(const FftGraph& g, const std::vector<CodedBlock>& blocks);

/// Serialized coded block plus object metadata.
///
/// Wire layout, little-endian, bit-exact:
///   "FNTC" | u8 version=1 | u8 log2(n) | u16 k | u8 step | u16 position |
///   u32 L | u64 original_length | u32 exception_count |
///   exception positions (u32 each, ascending) | L x u16 stored symbols.
/// A symbol whose field value is 65536 is stored as 0 and its position is
/// listed in the exceptions.
struct Share {
    unsigned log2_size = 0;
    std::uint32_t block_count = 0;
    std::uint32_t block_length = 0;
    std::uint64_t original_length = 0;
    CodedBlock block;
};

inline constexpr std::uint8_t kShareVersion = 1;

std::vector<std::byte> pack_share(const Share& share);
Share parse_share(std::span<const std::byte> bytes);

}  // namespace fnt
