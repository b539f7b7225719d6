#pragma once

#include <string>
#include <vector>

namespace ringrec {

// 2D fan-beam scanner with a flat, equally spaced detector centered on the
// source--iso-center line. Distances in mm, angles in radians. The image is
// a square grid of image_size x image_size pixels centered on the iso-center.
struct FanBeamGeometry {
    int image_size = 0;
    double pixel_size = 1.0;
    int n_detectors = 0;
    double detector_spacing = 1.0;
    int n_views = 0;
    double view_start = 0.0;
    double view_extent = 0.0;
    double dist_source_center = 0.0;    // DSC
    double dist_center_detector = 0.0;  // DCD

    double dist_source_detector() const { return dist_source_center + dist_center_detector; }
    // Radius of the inscribed field of view, mm.
    double fov_radius() const { return 0.5 * image_size * pixel_size; }
    double view_angle(int view) const { return view_start + view_extent * view / n_views; }
    // Lateral offset of detector d from the central ray, mm.
    double detector_offset(int det) const {
        return (det - 0.5 * (n_detectors - 1)) * detector_spacing;
    }
    bool full_scan() const;

    // Throws unless counts/distances are positive, the extent is in (0, 2pi],
    // and the detector fan covers the inscribed field of view.
    void validate() const;
};

struct Ray {
    double ox = 0.0, oy = 0.0;  // origin (source position), mm
    double dx = 0.0, dy = 0.0;  // unit direction
    double length = 0.0;        // distance from source to detector element center, mm
};

// Source at angle phi on a circle of radius DSC; detector element centers on
// the flat array placed DCD beyond the iso-center, perpendicular to the
// source--iso line.
Ray ray_for(const FanBeamGeometry& g, int view, int det);

// Perpendicular distance of detector d's rays from the iso-center (the ring
// radius this detector maps to under FBP). View-independent.
double detector_iso_distance(const FanBeamGeometry& g, int det);

// Presets: Table-style scanner definitions g1..g6 and ldct, plus the small
// `desk` geometry used for fast experiments and tests.
FanBeamGeometry geometry_preset(const std::string& id);
std::vector<std::string> geometry_preset_ids();

}  // namespace ringrec
