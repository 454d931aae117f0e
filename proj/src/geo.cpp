#include "socsearch/geo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "socsearch/error.hpp"
#include "tsv.hpp"

namespace socsearch {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

struct Vec3 {
  double x, y, z;
};

Vec3 to_unit(const GeoPoint& p) noexcept {
  const double lat = p.lat * kDegToRad;
  const double lon = p.lon * kDegToRad;
  return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
}

double chord2(const Vec3& a, const Vec3& b) noexcept {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

// Orientation of (a, b, c) in the (lon, lat) plane.
double cross(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c) noexcept {
  return (b.lon - a.lon) * (c.lat - a.lat) - (b.lat - a.lat) * (c.lon - a.lon);
}

bool on_segment(const GeoPoint& a, const GeoPoint& b, const GeoPoint& p) noexcept {
  return std::min(a.lon, b.lon) <= p.lon && p.lon <= std::max(a.lon, b.lon) &&
         std::min(a.lat, b.lat) <= p.lat && p.lat <= std::max(a.lat, b.lat);
}

bool segments_intersect(const GeoPoint& p1, const GeoPoint& p2, const GeoPoint& q1,
                        const GeoPoint& q2) noexcept {
  const double d1 = cross(q1, q2, p1);
  const double d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1);
  const double d4 = cross(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

}  // namespace

bool is_valid(const GeoPoint& p) noexcept {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
         p.lon >= -180.0 && p.lon <= 180.0;
}

double haversine_km(const GeoPoint& a, const GeoPoint& b) noexcept {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

// ---------------------------------------------------------------------------
// Territory

bool Territory::contains(const GeoPoint& p) const noexcept {
  bool inside = false;
  const std::size_t n = outline.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const GeoPoint& a = outline[i];
    const GeoPoint& b = outline[j];
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double lon_at = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
      if (p.lon < lon_at) inside = !inside;
    }
  }
  return inside;
}

bool Territory::intersects(const BoundingBox& r) const noexcept {
  if (outline.size() < 3) return false;
  const std::array<GeoPoint, 4> corners = {GeoPoint{r.lat_min, r.lon_min},
                                           GeoPoint{r.lat_min, r.lon_max},
                                           GeoPoint{r.lat_max, r.lon_max},
                                           GeoPoint{r.lat_max, r.lon_min}};
  for (const auto& c : corners)
    if (contains(c)) return true;
  for (const auto& v : outline)
    if (v.lat >= r.lat_min && v.lat <= r.lat_max && v.lon >= r.lon_min && v.lon <= r.lon_max)
      return true;
  const std::size_t n = outline.size();
  for (std::size_t i = 0; i < n; ++i) {
    const GeoPoint& a = outline[i];
    const GeoPoint& b = outline[(i + 1) % n];
    for (std::size_t k = 0; k < 4; ++k)
      if (segments_intersect(a, b, corners[k], corners[(k + 1) % 4])) return true;
  }
  return false;
}

BoundingBox contiguous_us_bbox() noexcept { return {24.5, 49.4, -124.8, -66.9}; }

const Territory& contiguous_us_territory() {
  // Clockwise from Cape Flattery. Lake borders follow the international line.
  static const Territory us{{
      {48.38, -124.73}, {48.25, -123.25}, {48.70, -123.20}, {49.00, -123.05},
      {49.00, -95.15},  {49.38, -95.15},  {49.30, -94.95},  {48.70, -94.60},
      {48.60, -93.40},  {48.25, -92.00},  {48.07, -90.80},  {48.00, -89.60},
      {48.30, -88.40},  {47.50, -86.00},  {46.80, -84.80},  {46.50, -84.35},
      {46.00, -83.60},  {45.35, -82.50},  {43.00, -82.42},  {42.35, -82.95},
      {42.05, -83.10},  {41.68, -82.50},  {42.20, -81.20},  {42.55, -79.80},
      {42.85, -78.95},  {43.25, -79.05},  {43.60, -78.70},  {43.60, -77.50},
      {44.10, -76.45},  {44.70, -75.40},  {45.00, -74.70},  {45.00, -71.50},
      {45.30, -71.10},  {45.30, -70.80},  {45.90, -70.30},  {46.40, -70.05},
      {47.46, -69.22},  {47.20, -68.90},  {47.35, -68.35},  {47.07, -67.79},
      {45.95, -67.78},  {45.60, -67.42},  {45.10, -67.10},  {44.80, -66.95},
      {44.40, -67.90},  {44.30, -68.80},  {43.85, -69.80},  {43.60, -70.25},
      {43.07, -70.70},  {42.65, -70.60},  {42.35, -70.95},  {42.05, -70.05},
      {41.55, -69.95},  {41.35, -70.60},  {41.50, -71.00},  {41.30, -71.90},
      {41.07, -71.85},  {40.58, -73.90},  {40.45, -74.00},  {39.95, -74.05},
      {39.35, -74.45},  {38.93, -74.90},  {38.78, -75.08},  {38.30, -75.10},
      {37.50, -75.60},  {37.10, -75.95},  {36.90, -76.00},  {36.00, -75.65},
      {35.22, -75.53},  {34.60, -76.50},  {34.00, -77.90},  {33.70, -78.90},
      {32.75, -79.85},  {32.00, -80.85},  {31.00, -81.40},  {30.30, -81.40},
      {29.20, -81.00},  {28.45, -80.55},  {27.20, -80.15},  {26.00, -80.10},
      {25.15, -80.40},  {24.54, -81.80},  {24.62, -81.80},  {25.15, -81.10},
      {25.90, -81.70},  {26.50, -82.20},  {27.50, -82.70},  {28.20, -82.80},
      {29.00, -83.20},  {29.90, -84.30},  {29.65, -85.30},  {30.20, -85.90},
      {30.40, -86.60},  {30.25, -87.60},  {30.35, -88.50},  {30.30, -89.30},
      {29.60, -89.50},  {29.00, -89.15},  {29.30, -90.10},  {29.30, -91.30},
      {29.50, -92.30},  {29.75, -93.30},  {29.68, -94.00},  {29.30, -94.80},
      {28.50, -96.20},  {27.80, -97.10},  {26.95, -97.35},  {26.05, -97.15},
      {25.96, -97.14},  {26.05, -97.50},  {26.20, -98.30},  {26.55, -99.10},
      {27.50, -99.50},  {28.70, -100.50}, {29.35, -100.95}, {29.80, -101.45},
      {29.75, -102.35}, {28.97, -103.15}, {29.56, -104.37}, {30.60, -104.95},
      {31.10, -105.60}, {31.75, -106.45}, {31.78, -106.53}, {31.78, -108.21},
      {31.33, -108.21}, {31.33, -111.07}, {32.49, -114.81}, {32.72, -114.72},
      {32.53, -117.12}, {33.00, -117.30}, {33.75, -118.40}, {34.00, -118.80},
      {34.40, -119.70}, {34.45, -120.47}, {34.90, -120.65}, {35.65, -121.25},
      {36.30, -121.90}, {36.60, -121.95}, {37.20, -122.40}, {37.80, -122.55},
      {38.30, -123.05}, {38.95, -123.75}, {39.80, -123.85}, {40.44, -124.41},
      {41.00, -124.15}, {41.75, -124.20}, {42.80, -124.55}, {43.40, -124.30},
      {44.60, -124.10}, {46.25, -124.05}, {46.90, -124.15}, {47.90, -124.65},
  }};
  return us;
}

// ---------------------------------------------------------------------------
// RhomboidGrid

RhomboidGrid::RhomboidGrid(const BoundingBox& bbox, double side_km, const Territory* territory)
    : bbox_(bbox), side_km_(side_km) {
  if (!(side_km > 0.0) || !std::isfinite(side_km)) throw Error("grid side must be positive");
  if (!(bbox.lat_min < bbox.lat_max) || !(bbox.lon_min < bbox.lon_max) ||
      !is_valid({bbox.lat_min, bbox.lon_min}) || !is_valid({bbox.lat_max, bbox.lon_max}))
    throw Error("degenerate bounding box");

  band_height_deg_ = side_km / kEarthRadiusKm * kRadToDeg;
  const double lat_span = bbox.lat_max - bbox.lat_min;
  const double lon_span = bbox.lon_max - bbox.lon_min;
  const auto bands =
      static_cast<std::size_t>(std::max(1.0, std::ceil(lat_span / band_height_deg_ - 1e-9)));

  std::size_t offset = 0;
  for (std::size_t b = 0; b < bands; ++b) {
    const double lo = bbox.lat_min + static_cast<double>(b) * band_height_deg_;
    const double hi = std::min(lo + band_height_deg_, bbox.lat_max);
    const double central = 0.5 * (lo + hi) * kDegToRad;
    const double cos_c = std::max(std::cos(central), 1e-9);
    const double width = std::min(360.0, side_km / (kEarthRadiusKm * cos_c) * kRadToDeg);
    const auto cols =
        static_cast<std::size_t>(std::max(1.0, std::ceil(lon_span / width - 1e-9)));
    band_width_deg_.push_back(width);
    band_columns_.push_back(cols);
    band_offset_.push_back(offset);
    offset += cols;
  }

  raw_to_dense_.assign(offset, -1);
  for (std::size_t b = 0; b < bands; ++b) {
    for (std::size_t c = 0; c < band_columns_[b]; ++c) {
      if (territory && !territory->intersects(raw_bounds(b, c))) continue;
      raw_to_dense_[band_offset_[b] + c] = static_cast<std::int64_t>(dense_to_raw_.size());
      dense_to_raw_.push_back(band_offset_[b] + c);
    }
  }
}

double RhomboidGrid::band_lower(std::size_t band) const noexcept {
  return bbox_.lat_min + static_cast<double>(band) * band_height_deg_;
}

double RhomboidGrid::band_upper(std::size_t band) const noexcept {
  return band + 1 == band_count() ? bbox_.lat_max : band_lower(band + 1);
}

BoundingBox RhomboidGrid::raw_bounds(std::size_t band, std::size_t column) const {
  const double w = band_width_deg_[band];
  const double lon_lo = bbox_.lon_min + static_cast<double>(column) * w;
  const double lon_hi =
      column + 1 == band_columns_[band] ? bbox_.lon_max : bbox_.lon_min + (column + 1.0) * w;
  return {band_lower(band), band_upper(band), lon_lo, lon_hi};
}

RhomboidGrid::RawCell RhomboidGrid::raw_cell(CellId cell) const {
  if (cell >= dense_to_raw_.size()) throw Error("cell id out of range");
  const std::size_t raw = dense_to_raw_[cell];
  const auto it = std::upper_bound(band_offset_.begin(), band_offset_.end(), raw);
  const auto band = static_cast<std::size_t>(std::distance(band_offset_.begin(), it)) - 1;
  return {band, raw - band_offset_[band]};
}

BoundingBox RhomboidGrid::cell_bounds(CellId cell) const {
  const auto [band, column] = raw_cell(cell);
  return raw_bounds(band, column);
}

std::size_t RhomboidGrid::band_of(CellId cell) const { return raw_cell(cell).band; }

std::optional<CellId> RhomboidGrid::locate(const GeoPoint& p) const noexcept {
  if (!bbox_.contains(p)) return std::nullopt;
  const std::size_t bands = band_count();
  auto band = static_cast<std::size_t>(
      std::min<double>(static_cast<double>(bands - 1),
                       std::floor((p.lat - bbox_.lat_min) / band_height_deg_)));
  // Snap against the exact edges used by raw_bounds.
  while (band > 0 && p.lat < band_lower(band)) --band;
  while (band + 1 < bands && p.lat >= band_upper(band)) ++band;

  const std::size_t cols = band_columns_[band];
  const double w = band_width_deg_[band];
  auto col = static_cast<std::size_t>(std::min<double>(
      static_cast<double>(cols - 1), std::floor((p.lon - bbox_.lon_min) / w)));
  while (col > 0 && p.lon < bbox_.lon_min + static_cast<double>(col) * w) --col;
  while (col + 1 < cols && p.lon >= bbox_.lon_min + (col + 1.0) * w) ++col;

  const std::int64_t dense = raw_to_dense_[band_offset_[band] + col];
  if (dense < 0) return std::nullopt;
  return static_cast<CellId>(dense);
}

RhomboidGrid build_grid(const BoundingBox& bbox, double side_km, const Territory* territory) {
  return RhomboidGrid(bbox, side_km, territory);
}

CellPopulations cell_populations(const RhomboidGrid& grid, std::span<const GeoPoint> points) {
  CellPopulations out;
  out.counts.assign(grid.cell_count(), 0);
  for (const auto& p : points) {
    if (auto cell = grid.locate(p)) {
      if (out.counts[*cell]++ == 0) ++out.nonempty;
    } else {
      ++out.outside;
    }
  }
  return out;
}

double geographic_diameter(std::span<const GeoPoint> points) {
  if (points.size() < 2) throw Error("geographic diameter needs at least two points");

  std::vector<Vec3> v;
  v.reserve(points.size());
  for (const auto& p : points) v.push_back(to_unit(p));

  Vec3 c{0, 0, 0};
  for (const auto& u : v) {
    c.x += u.x;
    c.y += u.y;
    c.z += u.z;
  }
  const auto n = static_cast<double>(v.size());
  c = {c.x / n, c.y / n, c.z / n};

  // Chord lengths are monotone in arc length; |a-b| <= |a-c| + |b-c| prunes.
  std::vector<std::pair<double, std::size_t>> order;
  order.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) order.emplace_back(std::sqrt(chord2(v[i], c)), i);
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });

  double best2 = -1.0;
  std::size_t best_a = order[0].second, best_b = order[1].second;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const double ri = order[i].first;
    const double best = std::sqrt(std::max(best2, 0.0));
    if (best2 >= 0 && 2.0 * ri < best) break;
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (best2 >= 0 && ri + order[j].first < std::sqrt(best2)) break;
      const double d2 = chord2(v[order[i].second], v[order[j].second]);
      if (d2 > best2) {
        best2 = d2;
        best_a = order[i].second;
        best_b = order[j].second;
      }
    }
  }
  return haversine_km(points[best_a], points[best_b]);
}

// ---------------------------------------------------------------------------
// Locations file

std::vector<LocatedNode> read_locations(const std::string& path) {
  std::vector<LocatedNode> rows;
  detail::for_each_row(path, [&](const auto& fields, std::size_t line) {
    if (fields.size() < 3) throw ParseError(path, line, "expected node_id, lat, lon");
    LocatedNode row{};
    if (!detail::parse_number(fields[0], row.id)) throw ParseError(path, line, "bad node id");
    if (!detail::parse_number(fields[1], row.location.lat) ||
        !detail::parse_number(fields[2], row.location.lon))
      throw ParseError(path, line, "bad coordinate");
    if (!is_valid(row.location)) throw ParseError(path, line, "coordinate out of range");
    rows.push_back(row);
  });
  return rows;
}

void write_locations(const std::string& path, std::span<const LocatedNode> rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "# node_id\tlat\tlon\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%lld\t%.7f\t%.7f\n", static_cast<long long>(r.id),
                  r.location.lat, r.location.lon);
    out << buf;
  }
}

}  // namespace socsearch
