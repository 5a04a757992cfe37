#include "pmkit/bmff.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace pmkit::bmff {

namespace {

constexpr std::size_t kHeaderSize = 8;
constexpr char kBrand[] = "PMF4";

bool is_container_type(const std::string& type) {
    return type == "init" || type == "frag";
}

bool box_equal(const Box& a, const Box& b) {
    return a.type == b.type && a.container == b.container && a.payload == b.payload &&
           a.children.size() == b.children.size() &&
           std::equal(a.children.begin(), a.children.end(), b.children.begin(),
                      [](const Box& x, const Box& y) { return box_equal(x, y); });
}

Box make_ftyp(MediaKind kind) {
    ByteWriter w;
    w.fourcc(kBrand);
    w.u32(1); // grammar version
    w.u8(static_cast<std::uint8_t>(kind));
    return Box{"ftyp", w.take(), {}, false};
}

Box make_init_box(const InitSegment& seg) {
    Box box{"init", {}, {}, true};
    ByteWriter h;
    h.u32(seg.trackId);
    h.u32(seg.timescale);
    h.fourcc(seg.codecTag);
    box.children.push_back(Box{"ihdr", h.take(), {}, false});
    if (seg.provenanceBox)
        box.children.push_back(Box{"prov", *seg.provenanceBox, {}, false});
    return box;
}

Box make_frag_box(const Fragment& frag) {
    Box box{"frag", {}, {}, true};
    ByteWriter h;
    h.u32(frag.trackId);
    h.u64(frag.sequenceNumber);
    h.u64(frag.baseMediaDecodeTime);
    h.u64(frag.durationTicks);
    box.children.push_back(Box{"fhdr", h.take(), {}, false});
    box.children.push_back(Box{"mdat", frag.sampleData, {}, false});
    if (frag.provenanceBox)
        box.children.push_back(Box{"prov", *frag.provenanceBox, {}, false});
    return box;
}

InitSegment bind_init(const Box& box) {
    if (box.children.empty() || box.children[0].type != "ihdr")
        throw MalformedBox("init segment must start with ihdr");
    ByteReader r(box.children[0].payload);
    InitSegment seg;
    seg.trackId = r.u32();
    seg.timescale = r.u32();
    seg.codecTag = r.fourcc();
    if (!r.done()) throw MalformedBox("trailing bytes in ihdr");
    for (std::size_t i = 1; i < box.children.size(); ++i) {
        const Box& child = box.children[i];
        if (child.type == "prov") {
            if (i + 1 != box.children.size())
                throw MalformedBox("prov must be the last child of init");
            seg.provenanceBox = child.payload;
        } else {
            throw MalformedBox("unexpected child in init: " + child.type);
        }
    }
    return seg;
}

Fragment bind_fragment(const Box& box) {
    if (box.children.size() < 2 || box.children[0].type != "fhdr" || box.children[1].type != "mdat")
        throw MalformedBox("fragment must hold fhdr then mdat");
    ByteReader r(box.children[0].payload);
    Fragment frag;
    frag.trackId = r.u32();
    frag.sequenceNumber = r.u64();
    frag.baseMediaDecodeTime = r.u64();
    frag.durationTicks = r.u64();
    if (!r.done()) throw MalformedBox("trailing bytes in fhdr");
    frag.sampleData = box.children[1].payload;
    for (std::size_t i = 2; i < box.children.size(); ++i) {
        const Box& child = box.children[i];
        if (child.type == "prov") {
            if (i + 1 != box.children.size())
                throw MalformedBox("prov must be the last child of frag");
            frag.provenanceBox = child.payload;
        } else {
            throw MalformedBox("unexpected child in frag: " + child.type);
        }
    }
    return frag;
}

std::vector<Box> canonical_boxes(const MediaObject& obj) {
    std::vector<Box> boxes;
    boxes.push_back(make_ftyp(obj.kind));
    for (const auto& seg : obj.initSegments) boxes.push_back(make_init_box(seg));
    for (const auto& frag : obj.fragments) boxes.push_back(make_frag_box(frag));
    if (obj.containerManifest)
        boxes.push_back(Box{"pmst", *obj.containerManifest, {}, false});
    return boxes;
}

} // namespace

bool OpaqueBox::operator==(const OpaqueBox& o) const {
    return position == o.position && box_equal(box, o.box);
}

std::uint64_t Box::size_bytes() const {
    std::uint64_t payloadSize = 0;
    if (container) {
        for (const Box& c : children) payloadSize += c.size_bytes();
    } else {
        payloadSize = payload.size();
    }
    std::uint64_t total = kHeaderSize + payloadSize;
    if (total > 0xffffffffull) total += 8; // extended size field
    return total;
}

Box parse_box(ByteSpan data, std::size_t* consumed) {
    if (data.size() < kHeaderSize) throw TruncatedInput("box header incomplete");
    ByteReader r(data);
    std::uint64_t size = r.u32();
    std::string type = r.fourcc();
    std::size_t headerLen = kHeaderSize;
    if (size == 1) {
        if (data.size() < kHeaderSize + 8) throw TruncatedInput("extended size incomplete");
        size = r.u64();
        headerLen += 8;
    }
    if (size < headerLen) throw MalformedBox("box size smaller than header: " + type);
    if (size > data.size()) throw MalformedBox("box size overruns buffer: " + type);

    Box box;
    box.type = type;
    ByteSpan payload = data.subspan(headerLen, static_cast<std::size_t>(size) - headerLen);
    if (is_container_type(type)) {
        box.container = true;
        box.children = parse_box_list(payload);
    } else {
        box.payload.assign(payload.begin(), payload.end());
    }
    if (consumed) *consumed = static_cast<std::size_t>(size);
    return box;
}

std::vector<Box> parse_box_list(ByteSpan data) {
    std::vector<Box> boxes;
    std::size_t pos = 0;
    while (pos < data.size()) {
        std::size_t consumed = 0;
        boxes.push_back(parse_box(data.subspan(pos), &consumed));
        pos += consumed;
    }
    return boxes;
}

void serialize_box(ByteWriter& w, const Box& box) {
    std::uint64_t total = box.size_bytes();
    bool extended = total > 0xffffffffull;
    w.u32(extended ? 1u : static_cast<std::uint32_t>(total));
    w.fourcc(box.type);
    if (extended) w.u64(total);
    if (box.container) {
        for (const Box& c : box.children) serialize_box(w, c);
    } else {
        w.bytes(box.payload);
    }
}

Bytes serialize_box(const Box& box) {
    ByteWriter w;
    serialize_box(w, box);
    return w.take();
}

const InitSegment* MediaObject::init_for_track(std::uint32_t trackId) const {
    for (const auto& seg : initSegments)
        if (seg.trackId == trackId) return &seg;
    return nullptr;
}

double MediaObject::track_duration_seconds(std::uint32_t trackId) const {
    const InitSegment* init = init_for_track(trackId);
    if (!init || init->timescale == 0) return 0.0;
    std::uint64_t ticks = 0;
    for (const auto& frag : fragments)
        if (frag.trackId == trackId) ticks += frag.durationTicks;
    return static_cast<double>(ticks) / init->timescale;
}

double MediaObject::duration_seconds() const {
    double d = 0.0;
    for (const auto& seg : initSegments)
        d = std::max(d, track_duration_seconds(seg.trackId));
    return d;
}

void check_invariants(const MediaObject& obj) {
    if (obj.kind == MediaKind::Fragmented && obj.initSegments.empty())
        throw InvariantViolation("fragmented object needs at least one init segment");
    std::set<std::uint32_t> trackIds;
    for (const auto& seg : obj.initSegments) {
        if (seg.timescale == 0) throw InvariantViolation("timescale must be positive");
        if (!trackIds.insert(seg.trackId).second)
            throw InvariantViolation("duplicate init segment for track");
    }
    std::map<std::uint32_t, const Fragment*> lastPerTrack;
    std::map<std::uint32_t, std::size_t> fragCount;
    for (const auto& frag : obj.fragments) {
        if (!trackIds.count(frag.trackId))
            throw InvariantViolation("fragment references unknown track");
        auto it = lastPerTrack.find(frag.trackId);
        if (it != lastPerTrack.end()) {
            const Fragment* prev = it->second;
            if (frag.sequenceNumber <= prev->sequenceNumber)
                throw InvariantViolation("sequence numbers must increase per track");
            if (frag.baseMediaDecodeTime != prev->baseMediaDecodeTime + prev->durationTicks)
                throw InvariantViolation("decode time must be contiguous per track");
        }
        lastPerTrack[frag.trackId] = &frag;
        ++fragCount[frag.trackId];
    }
    if (obj.kind == MediaKind::Monolithic) {
        for (const auto& [track, count] : fragCount)
            if (count != 1)
                throw InvariantViolation("monolithic object needs one essence region per track");
    }
    // all tracks cover the same span within one fragment duration
    if (trackIds.size() > 1 && !obj.fragments.empty()) {
        double minDur = 1e300, maxDur = 0.0, maxFragDur = 0.0;
        for (const auto& seg : obj.initSegments) {
            double d = obj.track_duration_seconds(seg.trackId);
            minDur = std::min(minDur, d);
            maxDur = std::max(maxDur, d);
        }
        for (const auto& frag : obj.fragments) {
            const InitSegment* init = obj.init_for_track(frag.trackId);
            maxFragDur = std::max(maxFragDur, static_cast<double>(frag.durationTicks) / init->timescale);
        }
        if (maxDur - minDur > maxFragDur + 1e-9)
            throw InvariantViolation("tracks diverge by more than one fragment duration");
    }
}

MediaObject parse_media(ByteSpan bytes) {
    if (bytes.empty()) throw TruncatedInput("empty input");
    std::vector<Box> boxes = parse_box_list(bytes);
    if (boxes.empty() || boxes[0].type != "ftyp")
        throw MalformedBox("first box must be ftyp");

    ByteReader f(boxes[0].payload);
    if (f.fourcc() != kBrand) throw MalformedBox("unknown brand");
    std::uint32_t version = f.u32();
    if (version != 1) throw MalformedBox("unsupported grammar version");
    std::uint8_t kindByte = f.u8();
    if (kindByte > 1) throw MalformedBox("unknown media kind");
    if (!f.done()) throw MalformedBox("trailing bytes in ftyp");

    MediaObject obj;
    obj.kind = static_cast<MediaKind>(kindByte);
    for (std::size_t i = 1; i < boxes.size(); ++i) {
        Box& box = boxes[i];
        if (box.type == "init") {
            obj.initSegments.push_back(bind_init(box));
        } else if (box.type == "frag") {
            obj.fragments.push_back(bind_fragment(box));
        } else if (box.type == "pmst") {
            if (obj.containerManifest) throw MalformedBox("duplicate pmst box");
            obj.containerManifest = box.payload;
        } else {
            obj.extras.push_back(OpaqueBox{i, std::move(box)});
        }
    }
    check_invariants(obj);
    return obj;
}

Bytes serialize_media(const MediaObject& obj) {
    check_invariants(obj);
    std::vector<Box> known = canonical_boxes(obj);

    // weave extras back into their original top-level slots
    std::vector<const Box*> ordered;
    std::size_t total = known.size() + obj.extras.size();
    std::size_t nextKnown = 0;
    for (std::size_t slot = 0; slot < total; ++slot) {
        const OpaqueBox* extra = nullptr;
        for (const auto& e : obj.extras)
            if (e.position == slot) extra = &e;
        if (extra) {
            ordered.push_back(&extra->box);
        } else if (nextKnown < known.size()) {
            ordered.push_back(&known[nextKnown++]);
        }
    }
    while (nextKnown < known.size()) ordered.push_back(&known[nextKnown++]);
    for (const auto& e : obj.extras) {
        bool placed = false;
        for (const Box* b : ordered) placed = placed || b == &e.box;
        if (!placed) ordered.push_back(&e.box);
    }

    ByteWriter w;
    for (const Box* b : ordered) serialize_box(w, *b);
    return w.take();
}

MediaObject strip_container_metadata(const MediaObject& obj) {
    MediaObject out = obj;
    out.containerManifest.reset();
    for (auto& seg : out.initSegments) seg.provenanceBox.reset();
    for (auto& frag : out.fragments) frag.provenanceBox.reset();
    return out;
}

MediaObject slice_fragments(const MediaObject& obj, double startTime, double endTime) {
    double duration = obj.duration_seconds();
    if (!(startTime >= 0.0 && startTime < endTime && endTime <= duration + 1e-9))
        throw RangeOutOfBounds("slice range outside object duration");

    MediaObject out;
    out.kind = obj.kind;
    out.initSegments = obj.initSegments;
    out.containerManifest = obj.containerManifest;
    for (const auto& frag : obj.fragments) {
        const InitSegment* init = obj.init_for_track(frag.trackId);
        double fragStart = static_cast<double>(frag.baseMediaDecodeTime) / init->timescale;
        double fragEnd = static_cast<double>(frag.baseMediaDecodeTime + frag.durationTicks) / init->timescale;
        if (fragStart < endTime && fragEnd > startTime) out.fragments.push_back(frag);
    }
    return out;
}

InitSegment attach_provenance_box(const InitSegment& target, ByteSpan payload) {
    if (payload.empty()) throw InvariantViolation("provenance payload must be non-empty");
    InitSegment out = target;
    out.provenanceBox = Bytes(payload.begin(), payload.end());
    return out;
}

Fragment attach_provenance_box(const Fragment& target, ByteSpan payload) {
    if (payload.empty()) throw InvariantViolation("provenance payload must be non-empty");
    Fragment out = target;
    out.provenanceBox = Bytes(payload.begin(), payload.end());
    return out;
}

std::optional<ByteRange> container_manifest_range(ByteSpan serialized) {
    std::size_t pos = 0;
    while (pos < serialized.size()) {
        if (serialized.size() - pos < kHeaderSize) throw TruncatedInput("box header incomplete");
        ByteReader r(serialized.subspan(pos));
        std::uint64_t size = r.u32();
        std::string type = r.fourcc();
        if (size == 1) size = r.u64();
        if (size < kHeaderSize || size > serialized.size() - pos)
            throw MalformedBox("box size overruns buffer: " + type);
        if (type == "pmst") return ByteRange{pos, size};
        pos += static_cast<std::size_t>(size);
    }
    return std::nullopt;
}

} // namespace pmkit::bmff
