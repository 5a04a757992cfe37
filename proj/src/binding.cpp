#include "pmkit/binding.hpp"

#include "pmkit/crypto.hpp"

namespace pmkit::binding {

namespace {

Digest hash_pair(const Digest& left, const Digest& right) {
    Bytes buf;
    buf.reserve(64);
    buf.insert(buf.end(), left.begin(), left.end());
    buf.insert(buf.end(), right.begin(), right.end());
    return crypto::sha256(buf);
}

void check_exclusions(ByteSpan bytes, const std::vector<ExclusionRange>& exclusions) {
    std::uint64_t prevEnd = 0;
    for (const auto& range : exclusions) {
        if (range.offset < prevEnd)
            throw InvariantViolation("exclusion ranges must be sorted and non-overlapping");
        std::uint64_t end = range.offset + range.length;
        if (end < range.offset || end > bytes.size())
            throw InvariantViolation("exclusion range outside file bounds");
        prevEnd = end;
    }
}

} // namespace

MerkleTree MerkleTree::build(const std::vector<Digest>& leaves) {
    if (leaves.empty()) throw EmptyLeaves("merkle tree needs at least one leaf");
    MerkleTree tree;
    tree.levels_.push_back(leaves);
    while (tree.levels_.back().size() > 1) {
        const auto& prev = tree.levels_.back();
        std::vector<Digest> next;
        next.reserve((prev.size() + 1) / 2);
        for (std::size_t i = 0; i < prev.size(); i += 2) {
            const Digest& left = prev[i];
            const Digest& right = i + 1 < prev.size() ? prev[i + 1] : prev[i];
            next.push_back(hash_pair(left, right));
        }
        tree.levels_.push_back(std::move(next));
    }
    return tree;
}

InclusionProof MerkleTree::prove(std::uint64_t leafIndex) const {
    if (leafIndex >= leaf_count()) throw IndexOutOfRange("leaf index out of range");
    InclusionProof proof;
    proof.leafIndex = leafIndex;
    std::uint64_t idx = leafIndex;
    for (std::size_t level = 0; level + 1 < levels_.size(); ++level) {
        const auto& row = levels_[level];
        std::uint64_t sibling = idx ^ 1;
        if (sibling >= row.size()) sibling = idx; // duplicate-last
        proof.siblings.push_back(row[sibling]);
        idx >>= 1;
    }
    return proof;
}

bool verify_inclusion(const Digest& root, const Digest& leafDigest, const InclusionProof& proof) {
    Digest node = leafDigest;
    std::uint64_t idx = proof.leafIndex;
    for (const Digest& sibling : proof.siblings) {
        node = (idx & 1) ? hash_pair(sibling, node) : hash_pair(node, sibling);
        idx >>= 1;
    }
    return node == root && idx == 0;
}

Digest hash_fragment(const bmff::Fragment& frag) {
    bmff::Box box{"frag", {}, {}, true};
    ByteWriter h;
    h.u32(frag.trackId);
    h.u64(frag.sequenceNumber);
    h.u64(frag.baseMediaDecodeTime);
    h.u64(frag.durationTicks);
    box.children.push_back(bmff::Box{"fhdr", h.take(), {}, false});
    box.children.push_back(bmff::Box{"mdat", frag.sampleData, {}, false});
    return crypto::sha256(bmff::serialize_box(box));
}

Digest hash_init_segment(const bmff::InitSegment& seg) {
    bmff::Box box{"init", {}, {}, true};
    ByteWriter h;
    h.u32(seg.trackId);
    h.u32(seg.timescale);
    h.fourcc(seg.codecTag);
    box.children.push_back(bmff::Box{"ihdr", h.take(), {}, false});
    return crypto::sha256(bmff::serialize_box(box));
}

Digest hash_with_exclusions(ByteSpan bytes, const std::vector<ExclusionRange>& exclusions) {
    check_exclusions(bytes, exclusions);
    Bytes kept;
    kept.reserve(bytes.size());
    std::uint64_t pos = 0;
    for (const auto& range : exclusions) {
        kept.insert(kept.end(), bytes.begin() + pos, bytes.begin() + range.offset);
        pos = range.offset + range.length;
    }
    kept.insert(kept.end(), bytes.begin() + pos, bytes.end());
    return crypto::sha256(kept);
}

Digest hash_monolithic(const bmff::MediaObject& obj, const std::vector<ExclusionRange>& exclusions) {
    if (obj.kind != bmff::MediaKind::Monolithic)
        throw InvariantViolation("hash_monolithic requires a monolithic object");
    return hash_with_exclusions(bmff::serialize_media(obj), exclusions);
}

} // namespace pmkit::binding
