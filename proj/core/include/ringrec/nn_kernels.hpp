#pragma once

namespace ringrec::nn {

// 3x3 convolution with zero padding 1 and unchanged spatial size.
// in: {ci, h, w}, weights: {co, ci, 3, 3}, bias: {co} (nullable), out: {co, h, w}.
void conv2d(const double* in, int ci, int h, int w, const double* wt, int co, const double* bias,
            double* out);

// Accumulates input gradients: gin += conv-transpose(gout, wt).
void conv2d_back_input(const double* gout, int co, int h, int w, const double* wt, int ci,
                       double* gin);

// Accumulates weight/bias gradients from (gout, in).
void conv2d_back_params(const double* gout, int co, int h, int w, const double* in, int ci,
                        double* gw, double* gb);

// Per-channel normalization over the spatial extent: y = (x - mean)/sqrt(var + eps).
// Saves 1/sqrt(var+eps) per channel for the backward pass.
void instance_norm(const double* in, int c, int h, int w, double eps, double* out,
                   double* inv_std);

// gin += d in terms of the saved normalized output y and inv_std.
void instance_norm_back(const double* y, const double* gout, int c, int h, int w,
                        const double* inv_std, double* gin);

}  // namespace ringrec::nn
