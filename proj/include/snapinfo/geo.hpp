#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "snapinfo/corpus.hpp"
#include "snapinfo/error.hpp"

namespace snapinfo::geo {

SNAPINFO_DEFINE_ERROR(DegenerateBBox);
SNAPINFO_DEFINE_ERROR(TooFewCells);
SNAPINFO_DEFINE_ERROR(DegenerateField);

/// Planar lon/lat degrees.
struct Point {
    double lon = 0.0;
    double lat = 0.0;
};

struct BBox {
    double min_lon = 0.0;
    double min_lat = 0.0;
    double max_lon = 0.0;
    double max_lat = 0.0;

    bool contains(Point p) const {
        return p.lon >= min_lon && p.lon <= max_lon && p.lat >= min_lat && p.lat <= max_lat;
    }
};

/// Pointy-top axial hex coordinate.
struct Axial {
    int q = 0;
    int r = 0;

    friend bool operator==(const Axial&, const Axial&) = default;
};

inline constexpr std::array<Axial, 6> kNeighbourOffsets{{{1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1}}};

int hex_distance(Axial a, Axial b);

/// Center of a cell for a given circumradius.
Point hex_center(Axial a, double size);
/// Six vertices, counter-clockwise starting at 30 degrees.
std::array<Point, 6> hex_corners(Axial a, double size);
/// Cell containing p (cube rounding).
Axial hex_at(Point p, double size);

enum class HotspotClass { cold99, cold95, cold90, ns, hot90, hot95, hot99, empty };
std::string_view to_string(HotspotClass c);
std::optional<HotspotClass> parse_hotspot_class(std::string_view s);

struct HexCell {
    Axial coord;
    Point center;
    double value = 0.0;
    std::size_t count = 0;
    std::optional<double> z;
    HotspotClass cls = HotspotClass::empty;
};

class HexGrid {
public:
    HexGrid() = default;
    /// Cells in the given order; bbox is the union of their hexagons.
    HexGrid(double cell_size, std::vector<Axial> cells);
    HexGrid(BBox bbox, double cell_size, std::vector<Axial> cells);

    const BBox& bbox() const { return bbox_; }
    double cell_size() const { return cell_size_; }
    std::span<const HexCell> cells() const { return cells_; }
    std::span<HexCell> cells() { return cells_; }
    std::size_t size() const { return cells_.size(); }

    /// Index of the cell, if it is part of the grid.
    std::optional<std::size_t> find(Axial a) const;

private:
    static std::uint64_t key(Axial a);

    BBox bbox_;
    double cell_size_ = 1.0;
    std::vector<HexCell> cells_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Every hexagon with positive-area overlap with bbox, ordered by r then q.
/// Throws DegenerateBBox (also for cell_size <= 0).
HexGrid make_hex_grid(BBox bbox, double cell_size);

struct ScoredPoint {
    corpus::GeoTag where;
    double score = 0.0;
};

struct JoinResult {
    HexGrid grid;
    /// Points outside the grid bbox.
    std::size_t skipped = 0;
};

/// Resets value/count/z/cls, then assigns points to cells; value is the mean
/// score of each cell.
JoinResult spatial_join(HexGrid grid, std::span<const ScoredPoint> points);

/// Binary contiguity over cells with data: self plus up to 6 adjacent data
/// cells.
struct WeightsMatrix {
    /// Grid index of each data cell.
    std::vector<std::size_t> cells;
    /// Per data cell, positions (into `cells`) with w_ij = 1, self included.
    std::vector<std::vector<std::size_t>> neighbours;

    std::size_t n() const { return cells.size(); }
    double weight(std::size_t i, std::size_t j) const;
};

WeightsMatrix contiguity_weights(const HexGrid& grid);

/// Fills z for data cells; empty cells get no z. A field whose values are all
/// equal yields z = 0 everywhere, as does a cell whose neighbourhood spans all
/// data cells. Throws TooFewCells (n < 2) or DegenerateField (non-finite
/// values).
HexGrid gi_star(HexGrid grid, const WeightsMatrix& weights);
HexGrid gi_star(HexGrid grid);

HotspotClass classify(std::optional<double> z, std::size_t count);
HexGrid classify_hotspots(HexGrid grid);

/// FeatureCollection with one Polygon per cell and properties
/// {q, r, value, count, z, cls}; value and z are null for empty cells.
std::string to_geojson(const HexGrid& grid, int indent = -1);

}  // namespace snapinfo::geo
