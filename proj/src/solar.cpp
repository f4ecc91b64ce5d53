#include <chrono>
#include <cmath>

#include "sarplan/audit.hpp"
#include "sarplan/error.hpp"

namespace sarplan::audit {

double elevation_from_hour_angle(double lat_deg, double declination_deg, double hour_angle_deg)
{
    const double phi = lat_deg * geo::kDegToRad;
    const double dec = declination_deg * geo::kDegToRad;
    const double h = hour_angle_deg * geo::kDegToRad;
    // Sun direction in east/north/up; atan2 stays accurate near the zenith
    // where asin would lose half the digits.
    const double up = std::sin(phi) * std::sin(dec) + std::cos(phi) * std::cos(dec) * std::cos(h);
    const double east = -std::cos(dec) * std::sin(h);
    const double north = std::cos(phi) * std::sin(dec) - std::sin(phi) * std::cos(dec) * std::cos(h);
    return std::atan2(up, std::hypot(east, north)) / geo::kDegToRad;
}

SolarPosition solar_position(UtcInstant t, geo::GeoPoint p)
{
    using namespace std::chrono;
    const auto day = floor<days>(t);
    const year_month_day ymd{day};
    const int year = static_cast<int>(ymd.year());
    if (year < 1950 || year > 2100) throw RangeError("solar position supports years 1950..2100, got " + std::to_string(year));

    const double day_of_year = static_cast<double>((day - sys_days{ymd.year() / January / 1}).count()) + 1.0;
    const double minutes_utc = static_cast<double>((t - day).count()) / 60000.0;
    const double year_days = ymd.year().is_leap() ? 366.0 : 365.0;
    const double g = 2.0 * geo::kPi / year_days * (day_of_year - 1.0 + (minutes_utc / 60.0 - 12.0) / 24.0);

    const double eqtime = 229.18
                          * (0.000075 + 0.001868 * std::cos(g) - 0.032077 * std::sin(g) - 0.014615 * std::cos(2 * g)
                             - 0.040849 * std::sin(2 * g));
    const double decl = 0.006918 - 0.399912 * std::cos(g) + 0.070257 * std::sin(g) - 0.006758 * std::cos(2 * g)
                        + 0.000907 * std::sin(2 * g) - 0.002697 * std::cos(3 * g) + 0.00148 * std::sin(3 * g);

    const double true_solar_min = minutes_utc + eqtime + 4.0 * p.lon_deg;
    double hour_angle = true_solar_min / 4.0 - 180.0;
    hour_angle = std::remainder(hour_angle, 360.0);

    SolarPosition out;
    out.declination_deg = decl / geo::kDegToRad;
    out.hour_angle_deg = hour_angle;
    out.elevation_deg = elevation_from_hour_angle(p.lat_deg, out.declination_deg, hour_angle);
    return out;
}

double solar_elevation(UtcInstant t, geo::GeoPoint p) { return solar_position(t, p).elevation_deg; }

} // namespace sarplan::audit
