#include "ringrec/fbp.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ringrec/fft.hpp"
#include "ringrec/threading.hpp"

namespace ringrec {

namespace {

// Frequency response of the sampled band-limited ramp: DFT of the Ram-Lak
// sequence over circular lags, DC forced to zero.
std::vector<double> ramp_response(int length, double spacing, const Fft& fft) {
    std::vector<std::complex<double>> h(length, {0.0, 0.0});
    const double inv_t2 = 1.0 / (spacing * spacing);
    h[0] = 0.25 * inv_t2;
    for (int j = 1; j < length; ++j) {
        int m = j <= length / 2 ? j : length - j;  // circular lag
        if (m % 2 == 1) {
            double v = -inv_t2 / (std::numbers::pi * std::numbers::pi * m * m);
            h[j] = v;
        }
    }
    fft.forward(h);
    std::vector<double> resp(length);
    for (int j = 0; j < length; ++j) resp[j] = h[j].real();
    resp[0] = 0.0;
    return resp;
}

void filter_rows_with(Grid2D& rows, const std::vector<double>& resp, const Fft& fft) {
    const int L = static_cast<int>(resp.size());
    std::vector<std::complex<double>> buf(L);
    for (int r = 0; r < rows.rows(); ++r) {
        double* row = rows.row(r);
        for (int j = 0; j < L; ++j) buf[j] = row[j];
        fft.forward(buf);
        for (int j = 0; j < L; ++j) buf[j] *= resp[j];
        fft.inverse(buf);
        for (int j = 0; j < L; ++j) row[j] = buf[j].real();
    }
}

struct FbpPlan {
    int n_det;
    double tau;                    // detector spacing rescaled to the iso-center plane
    std::vector<double> cos_weight;  // per detector
    double row_scale;              // tau/2 * view increment
};

FbpPlan make_plan(const FanBeamGeometry& g) {
    FbpPlan p;
    p.n_det = g.n_detectors;
    const double dsc = g.dist_source_center;
    const double ratio = dsc / g.dist_source_detector();
    p.tau = g.detector_spacing * ratio;
    p.cos_weight.resize(g.n_detectors);
    for (int d = 0; d < g.n_detectors; ++d) {
        const double s = g.detector_offset(d) * ratio;
        p.cos_weight[d] = dsc / std::hypot(dsc, s);
    }
    p.row_scale = 0.5 * p.tau * (g.view_extent / g.n_views);
    return p;
}

void apply_cos_weight(Grid2D& q, const FbpPlan& p) {
    for (int v = 0; v < q.rows(); ++v) {
        double* row = q.row(v);
        for (int d = 0; d < p.n_det; ++d) row[d] *= p.cos_weight[d];
    }
}

// Ramp-filter each row at 2x zero-padded length and apply the Riemann/view
// scale. Self-adjoint: pad/crop are mutual transposes and the circulant
// kernel is symmetric.
void apply_ramp(Grid2D& q, const FbpPlan& p) {
    const int L = 2 * p.n_det;
    Fft fft(L);
    const std::vector<double> resp = ramp_response(L, p.tau, fft);
    Grid2D padded(q.rows(), L, 0.0);
    for (int v = 0; v < q.rows(); ++v) {
        const double* src = q.row(v);
        double* dst = padded.row(v);
        for (int d = 0; d < p.n_det; ++d) dst[d] = src[d];
    }
    filter_rows_with(padded, resp, fft);
    for (int v = 0; v < q.rows(); ++v) {
        const double* src = padded.row(v);
        double* dst = q.row(v);
        for (int d = 0; d < p.n_det; ++d) dst[d] = src[d] * p.row_scale;
    }
}

void check_fbp_inputs(const Grid2D& sino, const FanBeamGeometry& g) {
    if (!g.full_scan())
        fail("fbp: short-scan geometry (extent < 2pi) is unsupported");
    if (sino.rows() != g.n_views || sino.cols() != g.n_detectors)
        fail("fbp: sinogram dims do not match geometry");
}

}  // namespace

void ramp_filter_rows(Grid2D& rows, double spacing) {
    if (rows.cols() < 2) fail("ramp_filter_rows: rows too short");
    Fft fft(rows.cols());
    const std::vector<double> resp = ramp_response(rows.cols(), spacing, fft);
    filter_rows_with(rows, resp, fft);
}

Grid2D fbp(const Grid2D& sino, const FanBeamGeometry& g) {
    check_fbp_inputs(sino, g);
    const FbpPlan plan = make_plan(g);

    Grid2D q = sino;
    apply_cos_weight(q, plan);
    apply_ramp(q, plan);

    const int n = g.image_size;
    const double px = g.pixel_size;
    const double half = 0.5 * (n - 1);
    const double dsc = g.dist_source_center;
    const double dsc2 = dsc * dsc;
    const double det_center = 0.5 * (plan.n_det - 1);

    std::vector<double> cphi(g.n_views), sphi(g.n_views);
    for (int v = 0; v < g.n_views; ++v) {
        const double a = g.view_angle(v);
        cphi[v] = std::cos(a);
        sphi[v] = std::sin(a);
    }

    Grid2D out(n, n, 0.0);
    parallel_for(n, 8, [&](int64_t rb, int64_t re) {
        for (int r = static_cast<int>(rb); r < re; ++r) {
            const double py = (half - r) * px;
            double* orow = out.row(r);
            for (int c = 0; c < n; ++c) {
                const double pxp = (c - half) * px;
                double acc = 0.0;
                for (int v = 0; v < g.n_views; ++v) {
                    const double w = dsc - (pxp * cphi[v] + py * sphi[v]);
                    const double t = -pxp * sphi[v] + py * cphi[v];
                    const double s = dsc * t / w;
                    const double idx = s / plan.tau + det_center;
                    const double fl = std::floor(idx);
                    const int d0 = static_cast<int>(fl);
                    const double fr = idx - fl;
                    double val = 0.0;
                    const double* qrow = q.row(v);
                    if (d0 >= 0 && d0 < plan.n_det) val += (1.0 - fr) * qrow[d0];
                    if (d0 + 1 >= 0 && d0 + 1 < plan.n_det) val += fr * qrow[d0 + 1];
                    acc += val * dsc2 / (w * w);
                }
                orow[c] = acc;
            }
        }
    });
    return out;
}

Grid2D fbp_adjoint(const Grid2D& img, const FanBeamGeometry& g) {
    if (!g.full_scan())
        fail("fbp_adjoint: short-scan geometry (extent < 2pi) is unsupported");
    if (img.rows() != g.image_size || img.cols() != g.image_size)
        fail("fbp_adjoint: image dims do not match geometry");
    const FbpPlan plan = make_plan(g);

    const int n = g.image_size;
    const double px = g.pixel_size;
    const double half = 0.5 * (n - 1);
    const double dsc = g.dist_source_center;
    const double dsc2 = dsc * dsc;
    const double det_center = 0.5 * (plan.n_det - 1);

    // Transpose of the pixel-driven interpolating back-projection: scatter
    // each pixel's weight into the two detector bins it read from.
    Grid2D q(g.n_views, g.n_detectors, 0.0);
    parallel_for(g.n_views, 4, [&](int64_t vb, int64_t ve) {
        for (int v = static_cast<int>(vb); v < ve; ++v) {
            const double cv = std::cos(g.view_angle(v));
            const double sv = std::sin(g.view_angle(v));
            double* qrow = q.row(v);
            for (int r = 0; r < n; ++r) {
                const double py = (half - r) * px;
                const double* irow = img.row(r);
                for (int c = 0; c < n; ++c) {
                    const double pxp = (c - half) * px;
                    const double w = dsc - (pxp * cv + py * sv);
                    const double t = -pxp * sv + py * cv;
                    const double s = dsc * t / w;
                    const double idx = s / plan.tau + det_center;
                    const double fl = std::floor(idx);
                    const int d0 = static_cast<int>(fl);
                    const double fr = idx - fl;
                    const double val = irow[c] * dsc2 / (w * w);
                    if (d0 >= 0 && d0 < plan.n_det) qrow[d0] += (1.0 - fr) * val;
                    if (d0 + 1 >= 0 && d0 + 1 < plan.n_det) qrow[d0 + 1] += fr * val;
                }
            }
        }
    });

    // Adjoint order: ramp first, cosine weighting last.
    apply_ramp(q, plan);
    apply_cos_weight(q, plan);
    return q;
}

}  // namespace ringrec
