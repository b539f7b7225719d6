#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "ringrec/geometry.hpp"
#include "ringrec/grid.hpp"
#include "ringrec/manifest.hpp"
#include "ringrec/model.hpp"
#include "ringrec/synthesis.hpp"

namespace ringrec {

// ---- inference path (plain doubles, no tape) ----

// Per-detector gain estimate in (0.75, 1.25): conv stack, mean pooling over
// the view axis, then 0.75 + 0.5 * sigmoid.
std::vector<double> estimate_ir(const Grid2D& y, const EstimatorWeights& w);

// Per-detector validity estimate in (0, 1): same stack with a plain sigmoid.
std::vector<double> estimate_im(const Grid2D& y, const EstimatorWeights& w);

// The mode-dependent forward operator; in full mode bit-identical to
// apply_corruption(forward_project(x), {eta, mask}).
Grid2D modified_forward(const Grid2D& x, std::span<const double> eta,
                        std::span<const double> mask, const FanBeamGeometry& g,
                        AblationMode mode);

// r = x_prev - rho * B(modified_forward(x_prev) - y). B is A^T (optionally
// composed with diag(mask) in masked modes); with fbp_precond the ramp-
// filtered back-projection replaces A^T.
Grid2D gradient_step(const Grid2D& x_prev, const Grid2D& y, std::span<const double> eta,
                     std::span<const double> mask, double rho, const FanBeamGeometry& g,
                     AblationMode mode, bool fbp_precond = false);

// Ghat(soft(G(r), theta)); the unrolled iteration adds this to r.
Grid2D proximal_step(const Grid2D& r, const IterationParams& p, double theta);

struct ReconResult {
    Grid2D x_hat;
    std::vector<double> eta_hat;   // continuous estimates (all ones when absent)
    std::vector<double> mask_hat;  // continuous; binarized at 0.5 inside the solve
};

// Estimates once from y, x0 = fbp(y), then K gradient + proximal updates.
// Pure function of (y, model); byte-identical across runs and thread counts.
ReconResult unrolled_reconstruct(const Grid2D& y, const FanBeamGeometry& g,
                                 const UnrolledModel& model);

// ---- training path ----

struct LossParts {
    double total = 0.0;
    double mse_x = 0.0;
    double mse_ir = 0.0;
    double mse_im = 0.0;
    double cons = 0.0;  // unweighted symmetry term
};

// Builds the differentiable graph for one sample and runs backward;
// gradients are returned aligned with model.named_parameters().
LossParts compute_loss(const UnrolledModel& model, const TrainingSample& sample,
                       const FanBeamGeometry& g, double lambda, std::vector<Tensor>* grads);

// Loss only (no gradients); used by finite-difference checks.
double compute_loss_value(const UnrolledModel& model, const TrainingSample& sample,
                          const FanBeamGeometry& g, double lambda);

// Mean symmetry residual ||Ghat(G(r)) - r||^2 / n over iterations for a probe
// image; logged during training.
double symmetry_residual(const UnrolledModel& model, const Grid2D& probe);

struct TrainConfig {
    ModelConfig model;
    int steps = 5000;
    double lr = 1e-3;
    double lambda = 0.01;
    uint64_t seed = 1;
    int log_every = 50;
};

struct TrainResult {
    UnrolledModel model;
    AdamState opt;
    std::vector<double> loss_curve;       // per-step total loss
    std::vector<double> symmetry_curve;   // sampled every log_every steps
};

// In-memory dataset: samples loaded from a manifest (paths resolved against
// its directory).
std::vector<TrainingSample> load_dataset(const DatasetManifest& manifest,
                                         const std::filesystem::path& manifest_dir);

// Adam, batch 1, seeded epoch shuffling. Aborts with a diagnostic naming the
// first non-finite tensor if the loss goes NaN.
TrainResult train(const std::vector<TrainingSample>& samples, const FanBeamGeometry& g,
                  const TrainConfig& cfg);

}  // namespace ringrec
