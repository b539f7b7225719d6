#include "ringrec/nn_kernels.hpp"

#include <algorithm>
#include <cmath>

namespace ringrec::nn {

void conv2d(const double* in, int ci, int h, int w, const double* wt, int co, const double* bias,
            double* out) {
    const int plane = h * w;
    for (int oc = 0; oc < co; ++oc) {
        double* op = out + static_cast<long>(oc) * plane;
        const double bv = bias ? bias[oc] : 0.0;
        std::fill(op, op + plane, bv);
        for (int icn = 0; icn < ci; ++icn) {
            const double* ip = in + static_cast<long>(icn) * plane;
            const double* wk = wt + (static_cast<long>(oc) * ci + icn) * 9;
            for (int ky = 0; ky < 3; ++ky) {
                const int dy = ky - 1;
                const int y0 = std::max(0, -dy), y1 = std::min(h, h - dy);
                for (int kx = 0; kx < 3; ++kx) {
                    const int dx = kx - 1;
                    const double wv = wk[ky * 3 + kx];
                    if (wv == 0.0) continue;
                    const int x0 = std::max(0, -dx), x1 = std::min(w, w - dx);
                    for (int y = y0; y < y1; ++y) {
                        double* orow = op + y * w;
                        const double* irow = ip + (y + dy) * w + dx;
                        for (int x = x0; x < x1; ++x) orow[x] += wv * irow[x];
                    }
                }
            }
        }
    }
}

void conv2d_back_input(const double* gout, int co, int h, int w, const double* wt, int ci,
                       double* gin) {
    const int plane = h * w;
    for (int icn = 0; icn < ci; ++icn) {
        double* gp = gin + static_cast<long>(icn) * plane;
        for (int oc = 0; oc < co; ++oc) {
            const double* op = gout + static_cast<long>(oc) * plane;
            const double* wk = wt + (static_cast<long>(oc) * ci + icn) * 9;
            for (int ky = 0; ky < 3; ++ky) {
                const int dy = ky - 1;
                for (int kx = 0; kx < 3; ++kx) {
                    const int dx = kx - 1;
                    const double wv = wk[ky * 3 + kx];
                    if (wv == 0.0) continue;
                    // gin[iy, ix] += wv * gout[iy - dy, ix - dx]
                    const int y0 = std::max(0, dy), y1 = std::min(h, h + dy);
                    const int x0 = std::max(0, dx), x1 = std::min(w, w + dx);
                    for (int iy = y0; iy < y1; ++iy) {
                        double* grow = gp + iy * w;
                        const double* orow = op + (iy - dy) * w - dx;
                        for (int ix = x0; ix < x1; ++ix) grow[ix] += wv * orow[ix];
                    }
                }
            }
        }
    }
}

void conv2d_back_params(const double* gout, int co, int h, int w, const double* in, int ci,
                        double* gw, double* gb) {
    const int plane = h * w;
    for (int oc = 0; oc < co; ++oc) {
        const double* op = gout + static_cast<long>(oc) * plane;
        if (gb) {
            double acc = 0.0;
            for (int i = 0; i < plane; ++i) acc += op[i];
            gb[oc] += acc;
        }
        for (int icn = 0; icn < ci; ++icn) {
            const double* ip = in + static_cast<long>(icn) * plane;
            double* wk = gw + (static_cast<long>(oc) * ci + icn) * 9;
            for (int ky = 0; ky < 3; ++ky) {
                const int dy = ky - 1;
                const int y0 = std::max(0, -dy), y1 = std::min(h, h - dy);
                for (int kx = 0; kx < 3; ++kx) {
                    const int dx = kx - 1;
                    const int x0 = std::max(0, -dx), x1 = std::min(w, w - dx);
                    double acc = 0.0;
                    for (int y = y0; y < y1; ++y) {
                        const double* orow = op + y * w;
                        const double* irow = ip + (y + dy) * w + dx;
                        for (int x = x0; x < x1; ++x) acc += orow[x] * irow[x];
                    }
                    wk[ky * 3 + kx] += acc;
                }
            }
        }
    }
}

void instance_norm(const double* in, int c, int h, int w, double eps, double* out,
                   double* inv_std) {
    const int plane = h * w;
    for (int ch = 0; ch < c; ++ch) {
        const double* ip = in + static_cast<long>(ch) * plane;
        double* op = out + static_cast<long>(ch) * plane;
        double mean = 0.0;
        for (int i = 0; i < plane; ++i) mean += ip[i];
        mean /= plane;
        double var = 0.0;
        for (int i = 0; i < plane; ++i) {
            const double d = ip[i] - mean;
            var += d * d;
        }
        var /= plane;
        const double is = 1.0 / std::sqrt(var + eps);
        inv_std[ch] = is;
        for (int i = 0; i < plane; ++i) op[i] = (ip[i] - mean) * is;
    }
}

void instance_norm_back(const double* y, const double* gout, int c, int h, int w,
                        const double* inv_std, double* gin) {
    const int plane = h * w;
    for (int ch = 0; ch < c; ++ch) {
        const double* yp = y + static_cast<long>(ch) * plane;
        const double* gp = gout + static_cast<long>(ch) * plane;
        double* gi = gin + static_cast<long>(ch) * plane;
        double gmean = 0.0, gymean = 0.0;
        for (int i = 0; i < plane; ++i) {
            gmean += gp[i];
            gymean += gp[i] * yp[i];
        }
        gmean /= plane;
        gymean /= plane;
        const double is = inv_std[ch];
        for (int i = 0; i < plane; ++i) {
            gi[i] += is * (gp[i] - gmean - yp[i] * gymean);
        }
    }
}

}  // namespace ringrec::nn
