#include "ringrec/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ringrec/grid.hpp"

namespace ringrec {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

bool FanBeamGeometry::full_scan() const {
    return view_extent >= kTwoPi - 1e-9;
}

void FanBeamGeometry::validate() const {
    if (image_size < 1 || n_detectors < 1 || n_views < 1)
        fail("geometry: counts must be >= 1");
    if (pixel_size <= 0 || detector_spacing <= 0 || dist_source_center <= 0 ||
        dist_center_detector <= 0)
        fail("geometry: distances must be > 0");
    if (view_extent <= 0 || view_extent > kTwoPi + 1e-12)
        fail("geometry: view extent must be in (0, 2pi]");
    // The fan from the source must cover the inscribed field of view.
    double half_width = 0.5 * (n_detectors - 1) * detector_spacing + 0.5 * detector_spacing;
    double half_fan = std::atan2(half_width, dist_source_detector());
    double needed = std::atan2(fov_radius(), dist_source_center);
    if (half_fan < needed) {
        std::ostringstream os;
        os << "geometry: detector fan (half-angle " << half_fan
           << " rad) does not cover the field of view (needs " << needed << " rad)";
        fail(os.str());
    }
}

Ray ray_for(const FanBeamGeometry& g, int view, int det) {
    if (view < 0 || view >= g.n_views)
        fail("ray_for: view index " + std::to_string(view) + " out of range");
    if (det < 0 || det >= g.n_detectors)
        fail("ray_for: detector index " + std::to_string(det) + " out of range");

    const double phi = g.view_angle(view);
    const double c = std::cos(phi), s = std::sin(phi);
    const double t = g.detector_offset(det);

    Ray r;
    r.ox = g.dist_source_center * c;
    r.oy = g.dist_source_center * s;
    // Detector element center: DCD beyond iso on the far side, offset t along
    // the array direction (-sin, cos).
    const double ex = -g.dist_center_detector * c - t * s;
    const double ey = -g.dist_center_detector * s + t * c;
    const double vx = ex - r.ox, vy = ey - r.oy;
    r.length = std::hypot(vx, vy);
    r.dx = vx / r.length;
    r.dy = vy / r.length;
    return r;
}

double detector_iso_distance(const FanBeamGeometry& g, int det) {
    const double t = std::abs(g.detector_offset(det));
    const double dsd = g.dist_source_detector();
    return g.dist_source_center * t / std::hypot(dsd, t);
}

FanBeamGeometry geometry_preset(const std::string& id) {
    auto make = [](int img, double px, int ndet, double ds, int nv, double dsc, double dcd) {
        FanBeamGeometry g;
        g.image_size = img;
        g.pixel_size = px;
        g.n_detectors = ndet;
        g.detector_spacing = ds;
        g.n_views = nv;
        g.view_start = 0.0;
        g.view_extent = kTwoPi;
        g.dist_source_center = dsc;
        g.dist_center_detector = dcd;
        g.validate();
        return g;
    };
    if (id == "g1") return make(512, 1.0, 681, 2.0, 984, 722.0, 722.0);
    if (id == "g2") return make(512, 1.0, 758, 2.0, 1024, 1075.0, 1075.0);
    if (id == "g3") return make(512, 1.0, 641, 2.133, 720, 750.0, 850.0);
    if (id == "g4") return make(512, 1.0, 880, 2.0, 840, 1000.0, 1000.0);
    if (id == "g5") return make(512, 1.0, 801, 2.0, 900, 950.0, 950.0);
    if (id == "g6") return make(512, 1.0, 900, 1.727, 1000, 550.0, 400.0);
    if (id == "ldct") return make(512, 0.6641, 736, 1.2858, 984, 595.0, 490.6);
    if (id == "desk") return make(64, 1.0, 96, 2.0, 128, 120.0, 120.0);
    std::string valid;
    for (const auto& v : geometry_preset_ids()) valid += (valid.empty() ? "" : ", ") + v;
    fail("unknown geometry preset '" + id + "' (valid: " + valid + ")");
}

std::vector<std::string> geometry_preset_ids() {
    return {"g1", "g2", "g3", "g4", "g5", "g6", "ldct", "desk"};
}

}  // namespace ringrec
