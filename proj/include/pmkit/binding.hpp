#pragma once

#include <cstdint>
#include <vector>

#include "pmkit/bmff.hpp"
#include "pmkit/bytes.hpp"

namespace pmkit::binding {

struct EmptyLeaves : Error {
    using Error::Error;
};
struct IndexOutOfRange : Error {
    using Error::Error;
};
struct InvariantViolation : Error {
    using Error::Error;
};

struct ExclusionRange {
    std::uint64_t offset = 0;
    std::uint64_t length = 0;

    bool operator==(const ExclusionRange&) const = default;
};

struct MerkleRow {
    std::uint32_t trackId = 0;
    std::uint64_t leafCount = 0;
    Digest root{};
    // algorithm is fixed to sha256 repo-wide

    bool operator==(const MerkleRow&) const = default;
};

struct InclusionProof {
    std::uint64_t leafIndex = 0;
    std::vector<Digest> siblings;

    bool operator==(const InclusionProof&) const = default;
};

/// Binary tree over leaf digests; an odd node at any level pairs with
/// itself (duplicate-last). levels[0] is the leaf row, back() the root.
class MerkleTree {
public:
    static MerkleTree build(const std::vector<Digest>& leaves);

    [[nodiscard]] const Digest& root() const { return levels_.back()[0]; }
    [[nodiscard]] std::uint64_t leaf_count() const { return levels_[0].size(); }
    [[nodiscard]] const std::vector<std::vector<Digest>>& levels() const { return levels_; }

    [[nodiscard]] InclusionProof prove(std::uint64_t leafIndex) const;

private:
    std::vector<std::vector<Digest>> levels_;
};

bool verify_inclusion(const Digest& root, const Digest& leafDigest, const InclusionProof& proof);

/// SHA-256 of the serialized fragment with the provenance box excluded;
/// identical whether or not a provenance box is attached.
Digest hash_fragment(const bmff::Fragment& frag);

/// Same exclusion rule for init segments.
Digest hash_init_segment(const bmff::InitSegment& seg);

/// SHA-256 over serialized bytes with the exclusion ranges skipped.
/// Ranges must be sorted, non-overlapping and within bounds.
Digest hash_monolithic(const bmff::MediaObject& obj, const std::vector<ExclusionRange>& exclusions);
Digest hash_with_exclusions(ByteSpan bytes, const std::vector<ExclusionRange>& exclusions);

} // namespace pmkit::binding
