#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include <fnt/field.hpp>

namespace fnt {

/// Coordinate of one node of the butterfly computation graph: `step` is the
/// distance from the sources (0 = source row), `position` the index within
/// the step. Ordering is lexicographic (step, position).
struct NodeCoord {
    std::uint32_t step = 0;
    std::uint32_t position = 0;

    friend constexpr auto operator<=>(const NodeCoord&, const NodeCoord&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const NodeCoord& c) {
    return os << "(" << c.step << "," << c.position << ")";
}

/// The two inputs of a butterfly node plus the twiddle exponent e: the node
/// value is first + w^e * second, with w the order-n root.
struct ButterflyParents {
    NodeCoord first;
    NodeCoord second;
    std::uint32_t twiddle_exponent = 0;
};

/// Butterfly computation graph of size n = 2^u with k live sources.
///
/// Source block i sits at step-0 position bit_reverse(i, u); positions whose
/// cone contains no live source are void (they carry identically zero data
/// and their links are dropped from topology queries). Immutable after
/// construction; all queries are const and thread-safe.
class FftGraph {
public:
    FftGraph(unsigned log2_size, std::uint32_t live_sources);

    unsigned log2_size() const { return u_; }
    std::uint32_t size() const { return n_; }
    std::uint32_t live_sources() const { return k_; }

    bool contains(NodeCoord c) const { return c.step <= u_ && c.position < n_; }
    bool is_void(NodeCoord c) const;

    /// Step-0 position of source block `index` (bit-reversed placement).
    std::uint32_t source_position(std::uint32_t index) const;
    /// Live source index at a step-0 position, if any.
    std::optional<std::uint32_t> source_index_at(std::uint32_t position) const;

    /// Butterfly wiring of a non-source node (step >= 1). Defined for void
    /// nodes too; voidness only affects data, not the wiring formula.
    ButterflyParents parents(NodeCoord c) const;

    /// Nodes of step c.step + 1 wired to c. Empty for the last step and for
    /// void nodes (their links are void).
    std::vector<NodeCoord> children(NodeCoord c) const;

    /// Value of a node given the k source blocks (rows of `sources`), via the
    /// recursive butterfly evaluation. Void inputs contribute zero.
    SymbolVector evaluate_node(const SymbolMatrix& sources, NodeCoord c) const;

    /// The unique length-k row c with node value = sum_i c_i * x_i, computed
    /// by recursion over the parents. All-zero exactly for void nodes.
    CoefficientRow coefficient_vector(NodeCoord c) const;

    /// Sorted source indices with nonzero coefficient at the node; computed
    /// structurally as the union of the parent supports.
    std::vector<std::uint32_t> support_set(NodeCoord c) const;

    /// Plain-text adjacency listing (one line per non-source node).
    void dump(std::ostream& os) const;

private:
    void check(NodeCoord c) const;

    unsigned u_;
    std::uint32_t n_;
    std::uint32_t k_;
    // live_prefixes_[s] = sorted {source_position(i) >> s : i < k}; a node
    // (s, p) is non-void iff p >> s appears here.
    std::vector<std::vector<std::uint32_t>> live_prefixes_;
};

/// True iff `candidate` lies outside the span of the rows of `held`
/// (exact Gaussian elimination over GF(65537)).
bool is_innovative(const SymbolMatrix& held, const CoefficientRow& candidate);

/// True iff the rows of `held` have rank k, i.e. the sources are recoverable.
bool decodable(const SymbolMatrix& held, std::uint32_t k);

}  // namespace fnt
