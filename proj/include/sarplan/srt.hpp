#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sarplan/geo.hpp"

namespace sarplan::srt {

struct SrtEntry {
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
    double lat = 0.0;
    double lon = 0.0;
    double alt_m = 0.0; // carried verbatim; AGL vs AMSL depends on the drone

    bool operator==(const SrtEntry&) const = default;
};

struct SrtTrack {
    std::vector<SrtEntry> entries; // strictly increasing start_ms

    bool operator==(const SrtTrack&) const = default;
};

struct SrtParseResult {
    SrtTrack track;
    std::size_t skipped_blocks = 0; // blocks without a recognised telemetry caption
};

// Subtitle blocks with telemetry captions in one of two dialects:
//   A: "[latitude: <f>] [longitude: <f>] [altitude: <f>]" (any order, case-insensitive)
//   B: "GPS(<lon>,<lat>,<alt>)"
// Throws ParseError for malformed or out-of-order timestamps and when no
// block carries telemetry.
SrtParseResult parse_srt(std::string_view text);
// Dialect A output; parse_srt(serialize_srt(t)).track == t.
std::string serialize_srt(const SrtTrack& track);

struct FrameTag {
    std::int64_t frame_index = 0;
    std::int64_t video_time_ms = 0;
    geo::GeoPoint position;
    double alt_m = 0.0;
};

// Samples at 0, interval, 2*interval, ... up to the last caption's end.
// Positions interpolate linearly between caption-interval midpoints and clamp
// outside the first/last midpoint.
std::vector<FrameTag> geotag_frames(const SrtTrack& track, double fps, double sample_interval_s);

// frame_index,video_time_ms,lat,lon,alt_m
std::string frame_tags_csv(const std::vector<FrameTag>& tags);

} // namespace sarplan::srt
