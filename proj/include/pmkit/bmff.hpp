#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmkit/bytes.hpp"

namespace pmkit::bmff {

struct MalformedBox : Error {
    using Error::Error;
};
struct TruncatedInput : Error {
    using Error::Error;
};
struct InvariantViolation : Error {
    using Error::Error;
};
struct RangeOutOfBounds : Error {
    using Error::Error;
};

/// Generic box: 4cc type plus either an opaque payload or child boxes.
/// Layout: u32 size | 4cc | (u64 largesize when size == 1) | payload,
/// where size counts the whole box. Children tile the payload exactly.
struct Box {
    std::string type;
    Bytes payload;
    std::vector<Box> children;
    bool container = false;

    [[nodiscard]] std::uint64_t size_bytes() const;
};

Box parse_box(ByteSpan data, std::size_t* consumed);
std::vector<Box> parse_box_list(ByteSpan data);
void serialize_box(ByteWriter& w, const Box& box);
Bytes serialize_box(const Box& box);

enum class MediaKind : std::uint8_t { Fragmented = 0, Monolithic = 1 };

struct InitSegment {
    std::uint32_t trackId = 0;
    std::uint32_t timescale = 0;
    std::string codecTag; // 4cc
    std::optional<Bytes> provenanceBox;

    bool operator==(const InitSegment&) const = default;
};

struct Fragment {
    std::uint32_t trackId = 0;
    std::uint64_t sequenceNumber = 0;
    std::uint64_t baseMediaDecodeTime = 0; // ticks
    std::uint64_t durationTicks = 0;
    Bytes sampleData;
    std::optional<Bytes> provenanceBox;

    bool operator==(const Fragment&) const = default;
};

/// Unknown top-level box preserved verbatim; position is the slot index
/// among top-level boxes in the original byte stream.
struct OpaqueBox {
    std::size_t position = 0;
    Box box;

    bool operator==(const OpaqueBox& o) const;
};

struct MediaObject {
    MediaKind kind = MediaKind::Fragmented;
    std::vector<InitSegment> initSegments;
    std::vector<Fragment> fragments;
    std::optional<Bytes> containerManifest;
    std::vector<OpaqueBox> extras;

    bool operator==(const MediaObject&) const = default;

    [[nodiscard]] const InitSegment* init_for_track(std::uint32_t trackId) const;
    [[nodiscard]] double track_duration_seconds(std::uint32_t trackId) const;
    [[nodiscard]] double duration_seconds() const;
};

MediaObject parse_media(ByteSpan bytes);
Bytes serialize_media(const MediaObject& obj);

/// Single-box serializations, used for hashing individual segments.
Bytes serialize_init_box(const InitSegment& seg);
Bytes serialize_fragment_box(const Fragment& frag);

/// Removes the container manifest and every provenance box; essence bytes
/// are untouched. Models HDMI capture / hostile re-containerization.
MediaObject strip_container_metadata(const MediaObject& obj);

/// All fragments intersecting [startTime, endTime) per track, plus init
/// segments. Fragment boundaries are respected, so the result may start
/// earlier and end later than requested.
MediaObject slice_fragments(const MediaObject& obj, double startTime, double endTime);

InitSegment attach_provenance_box(const InitSegment& target, ByteSpan payload);
Fragment attach_provenance_box(const Fragment& target, ByteSpan payload);

/// Byte range of the container manifest (pmst) box within serialized media,
/// for exclusion-range hashing of monolithic objects.
struct ByteRange {
    std::uint64_t offset = 0;
    std::uint64_t length = 0;
};
std::optional<ByteRange> container_manifest_range(ByteSpan serialized);

void check_invariants(const MediaObject& obj);

} // namespace pmkit::bmff
