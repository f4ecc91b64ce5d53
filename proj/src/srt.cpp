#include "sarplan/srt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <regex>
#include <string>

#include "sarplan/error.hpp"
#include "sarplan/text.hpp"

namespace sarplan::srt {

namespace {

struct Block {
    std::size_t first_line = 0; // 1-based
    std::vector<std::string_view> lines;
};

std::vector<Block> split_blocks(std::string_view text)
{
    if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    std::vector<Block> blocks;
    Block cur;
    const auto lines = text::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto line = text::trim(lines[i]);
        if (line.empty()) {
            if (!cur.lines.empty()) blocks.push_back(std::move(cur));
            cur = Block{};
            continue;
        }
        if (cur.lines.empty()) cur.first_line = i + 1;
        cur.lines.push_back(line);
    }
    if (!cur.lines.empty()) blocks.push_back(std::move(cur));
    return blocks;
}

std::optional<std::pair<std::int64_t, std::int64_t>> parse_timing(std::string_view line)
{
    if (line.size() > 128) return std::nullopt;
    static const std::regex re(R"(^(\d{1,6}):(\d{2}):(\d{2})[,.](\d{3})\s*-->\s*(\d{1,6}):(\d{2}):(\d{2})[,.](\d{3})(\s.*)?$)");
    std::cmatch m;
    if (!std::regex_match(line.data(), line.data() + line.size(), m, re)) return std::nullopt;
    auto field = [&](int i) { return std::stoll(m[i].str()); };
    auto ms = [&](int base) -> std::optional<std::int64_t> {
        const auto h = field(base), mi = field(base + 1), s = field(base + 2), f = field(base + 3);
        if (mi > 59 || s > 59) return std::nullopt;
        return ((h * 60 + mi) * 60 + s) * 1000 + f;
    };
    const auto a = ms(1), b = ms(5);
    if (!a || !b) return std::nullopt;
    return std::pair{*a, *b};
}

struct Fix {
    double lat, lon, alt;
};

// Dialect A: bracketed key:value pairs anywhere in the caption.
std::optional<Fix> parse_dialect_a(std::string_view caption)
{
    std::optional<double> lat, lon, alt;
    std::size_t pos = 0;
    while ((pos = caption.find('[', pos)) != std::string_view::npos) {
        const auto close = caption.find(']', pos + 1);
        if (close == std::string_view::npos) break;
        const auto body = caption.substr(pos + 1, close - pos - 1);
        pos = close + 1;
        const auto colon = body.find(':');
        if (colon == std::string_view::npos) continue;
        const auto key = text::to_lower(text::trim(body.substr(0, colon)));
        const auto value = text::parse_double(text::trim(body.substr(colon + 1)));
        if (!value) continue;
        // "longtitude" is how several DJI firmwares spell it
        if (key == "latitude")
            lat = value;
        else if (key == "longitude" || key == "longtitude")
            lon = value;
        else if (key == "altitude")
            alt = value;
    }
    if (lat && lon && alt) return Fix{*lat, *lon, *alt};
    return std::nullopt;
}

// Dialect B: GPS(lon,lat,alt).
std::optional<Fix> parse_dialect_b(std::string_view caption)
{
    std::size_t pos = 0;
    while ((pos = caption.find("GPS", pos)) != std::string_view::npos) {
        auto rest = caption.substr(pos + 3);
        pos += 3;
        const auto open = rest.find_first_not_of(" \t");
        if (open == std::string_view::npos || rest[open] != '(') continue;
        const auto close = rest.find(')', open);
        if (close == std::string_view::npos) return std::nullopt;
        const auto inner = rest.substr(open + 1, close - open - 1);
        std::vector<std::string_view> parts;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= inner.size(); ++i) {
            if (i == inner.size() || inner[i] == ',') {
                parts.push_back(text::trim(inner.substr(start, i - start)));
                start = i + 1;
            }
        }
        if (parts.size() != 3) continue;
        const auto lon = text::parse_double(parts[0]);
        const auto lat = text::parse_double(parts[1]);
        const auto alt = text::parse_double(parts[2]);
        if (lon && lat && alt) return Fix{*lat, *lon, *alt};
    }
    return std::nullopt;
}

bool plausible(const Fix& f) { return f.lat >= -90.0 && f.lat <= 90.0 && f.lon >= -180.0 && f.lon <= 180.0; }

std::string format_timestamp(std::int64_t ms)
{
    const auto f = ms % 1000;
    const auto s = (ms / 1000) % 60;
    const auto m = (ms / 60000) % 60;
    const auto h = ms / 3600000;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld,%03lld", static_cast<long long>(h), static_cast<long long>(m),
                  static_cast<long long>(s), static_cast<long long>(f));
    return buf;
}

} // namespace

SrtParseResult parse_srt(std::string_view text)
{
    SrtParseResult result;
    std::optional<std::int64_t> prev_start;
    const auto blocks = split_blocks(text);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto& block = blocks[b];
        const auto block_no = std::to_string(b + 1);
        // Index line is optional; the timing line is the first or second line.
        std::size_t timing_at = 0;
        if (block.lines[0].find("-->") == std::string_view::npos) timing_at = 1;
        if (timing_at >= block.lines.size() || block.lines[timing_at].find("-->") == std::string_view::npos)
            throw ParseError(block.first_line, "block " + block_no + ": missing timestamp line");
        const auto timing = parse_timing(block.lines[timing_at]);
        const auto timing_line = block.first_line + timing_at;
        if (!timing) throw ParseError(timing_line, "block " + block_no + ": malformed timestamp line");
        if (timing->second <= timing->first)
            throw ParseError(timing_line, "block " + block_no + ": end time not after start time");
        if (prev_start && timing->first <= *prev_start)
            throw ParseError(timing_line, "block " + block_no + ": start time out of order");
        prev_start = timing->first;

        std::string caption;
        for (std::size_t i = timing_at + 1; i < block.lines.size(); ++i) {
            caption.append(block.lines[i]);
            caption.push_back('\n');
        }
        auto fix = parse_dialect_a(caption);
        if (!fix) fix = parse_dialect_b(caption);
        if (!fix || !plausible(*fix)) {
            ++result.skipped_blocks;
            continue;
        }
        result.track.entries.push_back({timing->first, timing->second, fix->lat, fix->lon, fix->alt});
    }
    if (result.track.entries.empty()) throw ParseError(0, "no subtitle block carries telemetry; track is empty");
    return result;
}

std::string serialize_srt(const SrtTrack& track)
{
    std::string out;
    for (std::size_t i = 0; i < track.entries.size(); ++i) {
        const auto& e = track.entries[i];
        if (i) out += '\n';
        out += std::to_string(i + 1) + '\n';
        out += format_timestamp(e.start_ms) + " --> " + format_timestamp(e.end_ms) + '\n';
        out += "[latitude: " + text::format_double(e.lat) + "] [longitude: " + text::format_double(e.lon)
               + "] [altitude: " + text::format_double(e.alt_m) + "]\n";
    }
    return out;
}

std::vector<FrameTag> geotag_frames(const SrtTrack& track, double fps, double sample_interval_s)
{
    if (!(fps > 0.0) || !std::isfinite(fps)) throw InvalidParameter("fps", "fps must be positive");
    if (!(sample_interval_s >= 0.001) || !std::isfinite(sample_interval_s))
        throw InvalidParameter("interval", "sample interval must be at least 1 ms");
    if (track.entries.empty()) throw InvalidParameter("track", "track is empty");

    const auto& es = track.entries;
    std::vector<double> mids(es.size());
    for (std::size_t i = 0; i < es.size(); ++i) mids[i] = 0.5 * static_cast<double>(es[i].start_ms + es[i].end_ms);
    if (!std::is_sorted(mids.begin(), mids.end()))
        throw InvalidParameter("track", "caption intervals overlap so their midpoints are out of order");

    const double last_end = static_cast<double>(es.back().end_ms);
    std::vector<FrameTag> tags;
    for (std::int64_t k = 0;; ++k) {
        const double t_ms = static_cast<double>(k) * sample_interval_s * 1000.0;
        if (t_ms > last_end + 1e-6) break;
        FrameTag tag;
        tag.frame_index = static_cast<std::int64_t>(std::floor(t_ms / 1000.0 * fps + 1e-9));
        tag.video_time_ms = std::llround(t_ms);
        if (t_ms <= mids.front()) {
            tag.position = {es.front().lat, es.front().lon};
            tag.alt_m = es.front().alt_m;
        } else if (t_ms >= mids.back()) {
            tag.position = {es.back().lat, es.back().lon};
            tag.alt_m = es.back().alt_m;
        } else {
            const auto i = static_cast<std::size_t>(std::upper_bound(mids.begin(), mids.end(), t_ms) - mids.begin()) - 1;
            const double f = (t_ms - mids[i]) / (mids[i + 1] - mids[i]);
            const auto& a = es[i];
            const auto& b = es[i + 1];
            tag.position = {a.lat + f * (b.lat - a.lat), a.lon + f * (b.lon - a.lon)};
            tag.alt_m = a.alt_m + f * (b.alt_m - a.alt_m);
        }
        tags.push_back(tag);
    }
    return tags;
}

std::string frame_tags_csv(const std::vector<FrameTag>& tags)
{
    std::string out = "frame_index,video_time_ms,lat,lon,alt_m\n";
    for (const auto& t : tags) {
        out += std::to_string(t.frame_index) + ',' + std::to_string(t.video_time_ms) + ','
               + text::format_fixed(t.position.lat_deg, 8) + ',' + text::format_fixed(t.position.lon_deg, 8) + ','
               + text::format_fixed(t.alt_m, 3) + '\n';
    }
    return out;
}

} // namespace sarplan::srt
