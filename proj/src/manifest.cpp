#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include "sarplan/audit.hpp"
#include "sarplan/error.hpp"
#include "sarplan/text.hpp"

namespace sarplan::audit {

namespace {

constexpr std::array<std::string_view, 8> kColumns{"image_id",         "timestamp",   "lat",     "lon", "agl_m",
                                                   "gimbal_pitch_deg", "heading_deg", "drone_id"};

// RFC 4180 fields; quotes may wrap a field and "" escapes a quote.
std::optional<std::vector<std::string>> split_csv(std::string_view line)
{
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(ch);
            }
        } else if (ch == '"' && text::trim(cur).empty() && !was_quoted) {
            cur.clear();
            quoted = was_quoted = true;
        } else if (ch == ',') {
            out.push_back(was_quoted ? cur : std::string(text::trim(cur)));
            cur.clear();
            was_quoted = false;
        } else {
            cur.push_back(ch);
        }
    }
    if (quoted) return std::nullopt;
    out.push_back(was_quoted ? cur : std::string(text::trim(cur)));
    return out;
}

// Range checks shared by both formats. Returns an error message or "".
std::string check_ranges(const ManifestRecord& r)
{
    if (r.image_id.empty()) return "image_id is empty";
    if (r.lat.has_value() != r.lon.has_value()) return "lat and lon must be given together";
    if (r.lat && !(*r.lat >= -90.0 && *r.lat <= 90.0)) return "lat outside [-90, 90]";
    if (r.lon && !(*r.lon >= -180.0 && *r.lon <= 180.0)) return "lon outside [-180, 180]";
    if (r.agl_m && !(*r.agl_m > 0.0)) return "agl_m must be positive";
    if (r.gimbal_pitch_deg && !(*r.gimbal_pitch_deg >= -180.0 && *r.gimbal_pitch_deg <= 0.0))
        return "gimbal_pitch_deg outside [-180, 0]";
    if (r.heading_deg && !(*r.heading_deg >= 0.0 && *r.heading_deg < 360.0)) return "heading_deg outside [0, 360)";
    return {};
}

void set_field(ManifestRecord& rec, std::string_view key, std::string_view value)
{
    auto number = [&](std::optional<double>& slot) {
        if (value.empty()) return;
        const auto v = text::parse_double(value);
        if (!v) throw InvalidParameter(std::string(key), std::string(key) + " is not a number: '" + std::string(value) + "'");
        slot = *v;
    };
    if (key == "image_id") {
        rec.image_id = std::string(value);
    } else if (key == "drone_id") {
        rec.drone_id = std::string(value);
    } else if (key == "timestamp") {
        const auto t = parse_utc(value);
        if (!t) throw InvalidParameter("timestamp", "timestamp is not ISO-8601: '" + std::string(value) + "'");
        rec.timestamp = *t;
    } else if (key == "lat") {
        number(rec.lat);
    } else if (key == "lon") {
        number(rec.lon);
    } else if (key == "agl_m") {
        number(rec.agl_m);
    } else if (key == "gimbal_pitch_deg") {
        number(rec.gimbal_pitch_deg);
    } else if (key == "heading_deg") {
        number(rec.heading_deg);
    }
}

void finish(std::vector<ManifestRecord>& records, std::vector<std::string>& errors)
{
    std::map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].image_id.empty()) continue;
        if (!seen.emplace(records[i].image_id, i).second)
            errors.push_back("duplicate image_id '" + records[i].image_id + "'");
    }
    if (errors.empty()) return;
    std::string msg = std::to_string(errors.size()) + " manifest error(s):";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ParseError(0, msg);
}

} // namespace

ManifestFormat manifest_format_from_string(std::string_view name)
{
    if (text::iequals(name, "csv")) return ManifestFormat::csv;
    if (text::iequals(name, "jsonl")) return ManifestFormat::jsonl;
    throw InvalidParameter("format", "manifest format must be csv or jsonl");
}

ManifestRecord record_from_json(const nlohmann::json& row)
{
    if (!row.is_object()) throw InvalidParameter("manifest_rows", "manifest row must be a JSON object");
    ManifestRecord rec;
    bool have_id = false, have_time = false, have_drone = false;
    for (const auto& [key, value] : row.items()) {
        if (std::find(kColumns.begin(), kColumns.end(), key) == kColumns.end())
            throw InvalidParameter(key, "unknown manifest field '" + key + "'");
        if (value.is_null()) continue;
        if (key == "image_id" || key == "drone_id" || key == "timestamp") {
            if (!value.is_string()) throw InvalidParameter(key, key + " must be a string");
            set_field(rec, key, value.get<std::string>());
            have_id |= key == "image_id";
            have_time |= key == "timestamp";
            have_drone |= key == "drone_id";
        } else {
            if (!value.is_number()) throw InvalidParameter(key, key + " must be a number");
            set_field(rec, key, text::format_double(value.get<double>()));
        }
    }
    if (!have_id) throw InvalidParameter("image_id", "image_id is required");
    if (!have_time) throw InvalidParameter("timestamp", "timestamp is required");
    if (!have_drone) throw InvalidParameter("drone_id", "drone_id is required");
    if (const auto msg = check_ranges(rec); !msg.empty()) throw InvalidParameter("manifest_rows", msg);
    return rec;
}

std::vector<ManifestRecord> records_from_json(const nlohmann::json& rows)
{
    if (!rows.is_array()) throw InvalidParameter("manifest_rows", "manifest_rows must be an array");
    std::vector<ManifestRecord> records;
    std::vector<std::string> errors;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        try {
            records.push_back(record_from_json(rows[i]));
        } catch (const Error& e) {
            errors.push_back("row " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    try {
        finish(records, errors);
    } catch (const ParseError& e) {
        throw InvalidParameter("manifest_rows", e.what());
    }
    return records;
}

std::vector<ManifestRecord> load_manifest(std::string_view text, ManifestFormat format)
{
    if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    const auto lines = text::split_lines(text);
    std::vector<ManifestRecord> records;
    std::vector<std::string> errors;

    if (format == ManifestFormat::jsonl) {
        for (std::size_t i = 0; i < lines.size(); ++i) {
            const auto line = text::trim(lines[i]);
            if (line.empty()) continue;
            const auto row = nlohmann::json::parse(line, nullptr, false);
            if (row.is_discarded()) {
                errors.push_back("line " + std::to_string(i + 1) + ": not valid JSON");
                continue;
            }
            try {
                records.push_back(record_from_json(row));
            } catch (const Error& e) {
                errors.push_back("line " + std::to_string(i + 1) + ": " + e.what());
            }
        }
        finish(records, errors);
        return records;
    }

    std::size_t header_at = 0;
    while (header_at < lines.size() && text::trim(lines[header_at]).empty()) ++header_at;
    if (header_at == lines.size()) throw ParseError(0, "manifest is empty; header row required");
    const auto header = split_csv(lines[header_at]);
    if (!header) throw ParseError(header_at + 1, "unreadable header");
    std::set<std::string> columns;
    for (const auto& h : *header) {
        if (std::find(kColumns.begin(), kColumns.end(), h) == kColumns.end())
            throw ParseError(header_at + 1, "unknown column '" + h + "'");
        if (!columns.insert(h).second) throw ParseError(header_at + 1, "repeated column '" + h + "'");
    }
    for (const char* required : {"image_id", "timestamp", "drone_id"})
        if (!columns.count(required)) throw ParseError(header_at + 1, std::string("missing column '") + required + "'");

    for (std::size_t i = header_at + 1; i < lines.size(); ++i) {
        if (text::trim(lines[i]).empty()) continue;
        const auto where = "line " + std::to_string(i + 1) + ": ";
        const auto fields = split_csv(lines[i]);
        if (!fields) {
            errors.push_back(where + "unterminated quote");
            continue;
        }
        if (fields->size() != header->size()) {
            errors.push_back(where + "expected " + std::to_string(header->size()) + " fields, found "
                             + std::to_string(fields->size()));
            continue;
        }
        ManifestRecord rec;
        try {
            for (std::size_t c = 0; c < fields->size(); ++c) set_field(rec, (*header)[c], (*fields)[c]);
            if (const auto msg = check_ranges(rec); !msg.empty()) throw InvalidParameter("row", msg);
            records.push_back(std::move(rec));
        } catch (const Error& e) {
            errors.push_back(where + e.what());
        }
    }
    finish(records, errors);
    return records;
}

} // namespace sarplan::audit
