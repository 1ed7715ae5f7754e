#include "snapinfo/geo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "json.hpp"

namespace snapinfo::geo {

using nlohmann::json;

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

struct Interval {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
};

template <std::size_t N>
Interval project(const std::array<Point, N>& pts, double ax, double ay) {
    Interval iv;
    for (const auto& p : pts) {
        const double d = p.lon * ax + p.lat * ay;
        iv.lo = std::min(iv.lo, d);
        iv.hi = std::max(iv.hi, d);
    }
    return iv;
}

// Separating-axis test for interior overlap of a hexagon and a rectangle.
bool overlaps(const std::array<Point, 6>& hex, const BBox& b, double eps) {
    const std::array<Point, 4> rect{{{b.min_lon, b.min_lat}, {b.max_lon, b.min_lat}, {b.max_lon, b.max_lat},
                                     {b.min_lon, b.max_lat}}};
    constexpr double c60 = 0.5, s60 = kSqrt3 / 2.0;
    const std::array<std::array<double, 2>, 4> axes{{{1.0, 0.0}, {0.0, 1.0}, {c60, s60}, {-c60, s60}}};
    for (const auto& a : axes) {
        const Interval h = project(hex, a[0], a[1]);
        const Interval r = project(rect, a[0], a[1]);
        if (std::min(h.hi, r.hi) - std::max(h.lo, r.lo) <= eps) return false;
    }
    return true;
}

bool finite_box(const BBox& b) {
    return std::isfinite(b.min_lon) && std::isfinite(b.min_lat) && std::isfinite(b.max_lon) && std::isfinite(b.max_lat);
}

}  // namespace

int hex_distance(Axial a, Axial b) {
    const int dq = a.q - b.q, dr = a.r - b.r;
    return (std::abs(dq) + std::abs(dr) + std::abs(dq + dr)) / 2;
}

Point hex_center(Axial a, double size) {
    return {size * kSqrt3 * (a.q + a.r / 2.0), size * 1.5 * a.r};
}

std::array<Point, 6> hex_corners(Axial a, double size) {
    const Point c = hex_center(a, size);
    std::array<Point, 6> out;
    for (int i = 0; i < 6; ++i) {
        const double angle = (60.0 * i + 30.0) * std::numbers::pi / 180.0;
        out[static_cast<std::size_t>(i)] = {c.lon + size * std::cos(angle), c.lat + size * std::sin(angle)};
    }
    return out;
}

Axial hex_at(Point p, double size) {
    const double qf = (kSqrt3 / 3.0 * p.lon - p.lat / 3.0) / size;
    const double rf = (2.0 / 3.0 * p.lat) / size;
    const double sf = -qf - rf;
    double q = std::round(qf), r = std::round(rf), s = std::round(sf);
    const double dq = std::abs(q - qf), dr = std::abs(r - rf), ds = std::abs(s - sf);
    if (dq > dr && dq > ds) q = -r - s;
    else if (dr > ds) r = -q - s;
    return {static_cast<int>(q), static_cast<int>(r)};
}

std::string_view to_string(HotspotClass c) {
    switch (c) {
        case HotspotClass::cold99: return "cold99";
        case HotspotClass::cold95: return "cold95";
        case HotspotClass::cold90: return "cold90";
        case HotspotClass::ns: return "ns";
        case HotspotClass::hot90: return "hot90";
        case HotspotClass::hot95: return "hot95";
        case HotspotClass::hot99: return "hot99";
        case HotspotClass::empty: return "empty";
    }
    return "empty";
}

std::optional<HotspotClass> parse_hotspot_class(std::string_view s) {
    for (auto c : {HotspotClass::cold99, HotspotClass::cold95, HotspotClass::cold90, HotspotClass::ns,
                   HotspotClass::hot90, HotspotClass::hot95, HotspotClass::hot99, HotspotClass::empty})
        if (to_string(c) == s) return c;
    return std::nullopt;
}

std::uint64_t HexGrid::key(Axial a) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a.q)) << 32) | static_cast<std::uint32_t>(a.r);
}

HexGrid::HexGrid(double cell_size, std::vector<Axial> cells) : cell_size_(cell_size) {
    BBox b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& a : cells) {
        for (const auto& p : hex_corners(a, cell_size)) {
            b.min_lon = std::min(b.min_lon, p.lon);
            b.min_lat = std::min(b.min_lat, p.lat);
            b.max_lon = std::max(b.max_lon, p.lon);
            b.max_lat = std::max(b.max_lat, p.lat);
        }
    }
    *this = HexGrid(cells.empty() ? BBox{} : b, cell_size, std::move(cells));
}

HexGrid::HexGrid(BBox bbox, double cell_size, std::vector<Axial> cells) : bbox_(bbox), cell_size_(cell_size) {
    if (!(cell_size > 0.0) || !std::isfinite(cell_size)) throw DegenerateBBox("cell_size must be positive");
    cells_.reserve(cells.size());
    for (const auto& a : cells) {
        if (!index_.emplace(key(a), cells_.size()).second) continue;
        HexCell c;
        c.coord = a;
        c.center = hex_center(a, cell_size);
        cells_.push_back(c);
    }
}

std::optional<std::size_t> HexGrid::find(Axial a) const {
    auto it = index_.find(key(a));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

HexGrid make_hex_grid(BBox bbox, double cell_size) {
    if (!(cell_size > 0.0) || !std::isfinite(cell_size)) throw DegenerateBBox("cell_size must be positive");
    if (!finite_box(bbox) || !(bbox.min_lon < bbox.max_lon) || !(bbox.min_lat < bbox.max_lat))
        throw DegenerateBBox("bbox must have min < max on both axes");

    const double s = cell_size;
    const double row_step = 1.5 * s, col_step = kSqrt3 * s;
    const int r_lo = static_cast<int>(std::floor((bbox.min_lat - s) / row_step));
    const int r_hi = static_cast<int>(std::ceil((bbox.max_lat + s) / row_step));

    std::vector<Axial> cells;
    const double eps = 1e-12 * s;
    for (int r = r_lo; r <= r_hi; ++r) {
        const int q_lo = static_cast<int>(std::floor((bbox.min_lon - s) / col_step - r / 2.0));
        const int q_hi = static_cast<int>(std::ceil((bbox.max_lon + s) / col_step - r / 2.0));
        for (int q = q_lo; q <= q_hi; ++q)
            if (overlaps(hex_corners({q, r}, s), bbox, eps)) cells.push_back({q, r});
    }
    return HexGrid(bbox, cell_size, std::move(cells));
}

JoinResult spatial_join(HexGrid grid, std::span<const ScoredPoint> points) {
    auto cells = grid.cells();
    for (auto& c : cells) {
        c.value = 0.0;
        c.count = 0;
        c.z.reset();
        c.cls = HotspotClass::empty;
    }

    JoinResult out;
    std::vector<double> sums(cells.size(), 0.0);
    for (const auto& sp : points) {
        const Point p{sp.where.lon, sp.where.lat};
        if (!grid.bbox().contains(p)) {
            ++out.skipped;
            continue;
        }
        const Axial a = hex_at(p, grid.cell_size());
        auto idx = grid.find(a);
        if (!idx) {
            // only reachable for points on a hexagon edge that touches the bbox
            double best = std::numeric_limits<double>::infinity();
            for (const auto& off : kNeighbourOffsets) {
                auto n = grid.find({a.q + off.q, a.r + off.r});
                if (!n) continue;
                const Point c = cells[*n].center;
                const double d = std::hypot(c.lon - p.lon, c.lat - p.lat);
                if (d < best) best = d, idx = n;
            }
        }
        if (!idx) {
            ++out.skipped;
            continue;
        }
        sums[*idx] += sp.score;
        ++cells[*idx].count;
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].count == 0) continue;
        cells[i].value = sums[i] / static_cast<double>(cells[i].count);
        cells[i].cls = HotspotClass::ns;
    }
    out.grid = std::move(grid);
    return out;
}

double WeightsMatrix::weight(std::size_t i, std::size_t j) const {
    const auto& row = neighbours.at(i);
    return std::find(row.begin(), row.end(), j) != row.end() ? 1.0 : 0.0;
}

WeightsMatrix contiguity_weights(const HexGrid& grid) {
    WeightsMatrix w;
    const auto cells = grid.cells();
    std::vector<std::size_t> position(cells.size(), std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].count == 0) continue;
        position[i] = w.cells.size();
        w.cells.push_back(i);
    }
    w.neighbours.resize(w.cells.size());
    for (std::size_t k = 0; k < w.cells.size(); ++k) {
        const Axial a = cells[w.cells[k]].coord;
        auto& row = w.neighbours[k];
        row.push_back(k);
        for (const auto& off : kNeighbourOffsets) {
            auto n = grid.find({a.q + off.q, a.r + off.r});
            if (n && cells[*n].count > 0) row.push_back(position[*n]);
        }
        std::sort(row.begin(), row.end());
    }
    return w;
}

HexGrid gi_star(HexGrid grid, const WeightsMatrix& weights) {
    const std::size_t n = weights.n();
    if (n < 2) throw TooFewCells("Gi* needs at least 2 cells with data, got " + std::to_string(n));
    auto cells = grid.cells();

    std::vector<double> x(n);
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = cells[weights.cells[k]].value;
        if (!std::isfinite(x[k])) throw DegenerateField("non-finite cell value");
    }
    const double nd = static_cast<double>(n);
    double mean = 0.0, peak = 0.0;
    for (double v : x) mean += v, peak = std::max(peak, std::abs(v));
    mean /= nd;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / nd);
    const bool flat = sd <= 1e-12 * std::max(1.0, peak);

    for (std::size_t k = 0; k < n; ++k) {
        HexCell& cell = cells[weights.cells[k]];
        const auto& row = weights.neighbours[k];
        const double w_sum = static_cast<double>(row.size());
        const double spread = (nd * w_sum - w_sum * w_sum) / (nd - 1.0);
        if (flat || spread <= 0.0) {
            cell.z = 0.0;
            continue;
        }
        double local = 0.0;
        for (std::size_t j : row) local += x[j];
        cell.z = (local - mean * w_sum) / (sd * std::sqrt(spread));
    }
    for (auto& c : cells)
        if (c.count == 0) c.z.reset();
    return grid;
}

HexGrid gi_star(HexGrid grid) {
    const auto w = contiguity_weights(grid);
    return gi_star(std::move(grid), w);
}

HotspotClass classify(std::optional<double> z, std::size_t count) {
    if (count == 0) return HotspotClass::empty;
    if (!z) return HotspotClass::ns;
    const double a = std::abs(*z);
    const bool hot = *z > 0.0;
    if (a >= 2.576) return hot ? HotspotClass::hot99 : HotspotClass::cold99;
    if (a >= 1.96) return hot ? HotspotClass::hot95 : HotspotClass::cold95;
    if (a >= 1.645) return hot ? HotspotClass::hot90 : HotspotClass::cold90;
    return HotspotClass::ns;
}

HexGrid classify_hotspots(HexGrid grid) {
    for (auto& c : grid.cells()) c.cls = classify(c.z, c.count);
    return grid;
}

std::string to_geojson(const HexGrid& grid, int indent) {
    json features = json::array();
    for (const auto& c : grid.cells()) {
        json ring = json::array();
        const auto corners = hex_corners(c.coord, grid.cell_size());
        for (const auto& p : corners) ring.push_back({p.lon, p.lat});
        ring.push_back({corners[0].lon, corners[0].lat});
        json props{{"q", c.coord.q},
                   {"r", c.coord.r},
                   {"value", c.count > 0 ? json(c.value) : json(nullptr)},
                   {"count", c.count},
                   {"z", c.z ? json(*c.z) : json(nullptr)},
                   {"cls", to_string(c.cls)}};
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({ring})}}},
                            {"properties", std::move(props)}});
    }
    json fc{{"type", "FeatureCollection"},
            {"cell_size", grid.cell_size()},
            {"features", std::move(features)}};
    return fc.dump(indent);
}

}  // namespace snapinfo::geo
