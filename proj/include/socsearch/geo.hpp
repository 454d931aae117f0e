#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace socsearch {

inline constexpr double kEarthRadiusKm = 6371.0;

/// Geographic coordinate in decimal degrees.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

bool is_valid(const GeoPoint& p) noexcept;

/// Great-circle distance on a sphere of radius kEarthRadiusKm.
double haversine_km(const GeoPoint& a, const GeoPoint& b) noexcept;

/// Lat/lon rectangle. Treated as half-open: [lat_min, lat_max) x [lon_min, lon_max).
struct BoundingBox {
  double lat_min = 0.0;
  double lat_max = 0.0;
  double lon_min = 0.0;
  double lon_max = 0.0;

  bool contains(const GeoPoint& p) const noexcept {
    return p.lat >= lat_min && p.lat < lat_max && p.lon >= lon_min && p.lon < lon_max;
  }
};

/// Simple polygon in lat/lon space (treated as planar). Vertices are not closed.
struct Territory {
  std::vector<GeoPoint> outline;

  bool contains(const GeoPoint& p) const noexcept;
  /// True if the rectangle and the polygon share any area or boundary point.
  bool intersects(const BoundingBox& rect) const noexcept;
};

BoundingBox contiguous_us_bbox() noexcept;
/// Coarse outline of the contiguous United States (about 150 vertices,
/// including the US share of the Great Lakes).
const Territory& contiguous_us_territory();

using CellId = std::uint32_t;

/// Tessellation of a bounding box into cells bounded by meridians and
/// parallels, roughly side_km x side_km.
///
/// Latitude bands have a constant angular height of side_km / R; inside a
/// band, cell width in longitude is side_km measured along the band's central
/// parallel. The last band and the last cell of each band are truncated at the
/// box edge. When a territory is supplied only cells that intersect it are
/// kept, and cell ids are dense over the kept cells, ordered south to north
/// then west to east.
class RhomboidGrid {
 public:
  RhomboidGrid(const BoundingBox& bbox, double side_km,
               const Territory* territory = nullptr);

  const BoundingBox& bbox() const noexcept { return bbox_; }
  double side_km() const noexcept { return side_km_; }
  std::size_t band_count() const noexcept { return band_width_deg_.size(); }
  /// Number of raw (unmasked) columns in a band.
  std::size_t columns_in_band(std::size_t band) const { return band_columns_.at(band); }
  std::size_t cell_count() const noexcept { return dense_to_raw_.size(); }
  /// Raw cell count before territory masking.
  std::size_t raw_cell_count() const noexcept { return raw_to_dense_.size(); }

  /// Cell containing p, or nullopt when p is outside the box or in a masked cell.
  std::optional<CellId> locate(const GeoPoint& p) const noexcept;
  BoundingBox cell_bounds(CellId cell) const;
  std::size_t band_of(CellId cell) const;

 private:
  struct RawCell {
    std::size_t band;
    std::size_t column;
  };
  RawCell raw_cell(CellId cell) const;
  BoundingBox raw_bounds(std::size_t band, std::size_t column) const;
  double band_lower(std::size_t band) const noexcept;
  double band_upper(std::size_t band) const noexcept;

  BoundingBox bbox_;
  double side_km_;
  double band_height_deg_;
  std::vector<double> band_width_deg_;
  std::vector<std::size_t> band_columns_;
  std::vector<std::size_t> band_offset_;
  std::vector<std::int64_t> raw_to_dense_;
  std::vector<std::size_t> dense_to_raw_;
};

/// Throws Error on a degenerate box or non-positive side.
RhomboidGrid build_grid(const BoundingBox& bbox, double side_km,
                        const Territory* territory = nullptr);

struct CellPopulations {
  std::vector<std::size_t> counts;  // indexed by CellId
  std::size_t nonempty = 0;
  std::size_t outside = 0;          // points with no cell
};

CellPopulations cell_populations(const RhomboidGrid& grid, std::span<const GeoPoint> points);

/// Maximum pairwise great-circle distance. Exact; prunes with a centroid
/// bound so typical national-scale inputs are far below O(n^2).
/// Throws Error for fewer than two points.
double geographic_diameter(std::span<const GeoPoint> points);

/// One row of a locations file.
struct LocatedNode {
  std::int64_t id;
  GeoPoint location;
};

/// Reads `node_id<TAB>lat<TAB>lon` rows; `#` lines and blank lines skipped.
std::vector<LocatedNode> read_locations(const std::string& path);
void write_locations(const std::string& path, std::span<const LocatedNode> rows);

}  // namespace socsearch
