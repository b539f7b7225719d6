#include "ringrec/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ringrec/corruption.hpp"
#include "ringrec/fbp.hpp"
#include "ringrec/nn_kernels.hpp"
#include "ringrec/projector.hpp"
#include "ringrec/raster_io.hpp"
#include "ringrec/scalar_ops.hpp"
#include "ringrec/tape.hpp"

namespace ringrec {

namespace {

// conv + instance norm + ReLU, plain buffers
std::vector<double> conv_in_relu(const std::vector<double>& in, int ci, int h, int w,
                                 const ConvParam& p) {
    const int co = p.w.dim(0);
    std::vector<double> conv(static_cast<size_t>(co) * h * w);
    nn::conv2d(in.data(), ci, h, w, p.w.data(), co, p.b.data(), conv.data());
    std::vector<double> out(conv.size());
    std::vector<double> inv_std(static_cast<size_t>(co));
    nn::instance_norm(conv.data(), co, h, w, kInstanceNormEps, out.data(), inv_std.data());
    for (double& v : out) v = v > 0.0 ? v : 0.0;
    return out;
}

// Head logits mean-pooled over the view axis -> one logit per detector.
std::vector<double> estimator_logits(const Grid2D& y, const EstimatorWeights& w) {
    const int h = y.rows(), wd = y.cols();
    std::vector<double> z(y.data(), y.data() + y.size());
    z = conv_in_relu(z, 1, h, wd, w.c1);
    z = conv_in_relu(z, w.channels, h, wd, w.c2);
    z = conv_in_relu(z, w.channels, h, wd, w.c3);
    std::vector<double> head(static_cast<size_t>(h) * wd);
    nn::conv2d(z.data(), w.channels, h, wd, w.head.w.data(), 1, w.head.b.data(), head.data());
    std::vector<double> pooled(static_cast<size_t>(wd), 0.0);
    for (int v = 0; v < h; ++v) {
        const double* row = head.data() + static_cast<size_t>(v) * wd;
        for (int d = 0; d < wd; ++d) pooled[d] += row[d];
    }
    const double inv = 1.0 / h;
    for (double& p : pooled) p *= inv;
    return pooled;
}

}  // namespace

std::vector<double> estimate_ir(const Grid2D& y, const EstimatorWeights& w) {
    std::vector<double> p = estimator_logits(y, w);
    for (double& x : p) x = 0.75 + 0.5 * sigmoid_fn(x);
    return p;
}

std::vector<double> estimate_im(const Grid2D& y, const EstimatorWeights& w) {
    std::vector<double> p = estimator_logits(y, w);
    for (double& x : p) x = sigmoid_fn(x);
    return p;
}

Grid2D modified_forward(const Grid2D& x, std::span<const double> eta,
                        std::span<const double> mask, const FanBeamGeometry& g,
                        AblationMode mode) {
    const bool use_ir = mode_has_ir(mode);
    const bool use_im = mode_has_im(mode);
    if (use_ir) {
        if (static_cast<int>(eta.size()) != g.n_detectors)
            fail("modified_forward: eta length mismatch");
        for (double e : eta)
            if (!(e > 0.0)) fail("modified_forward: nonpositive eta");
    }
    if (use_im && static_cast<int>(mask.size()) != g.n_detectors)
        fail("modified_forward: mask length mismatch");

    Grid2D s = forward_project(x, g);
    if (mode == AblationMode::backbone) return s;
    for (int v = 0; v < s.rows(); ++v) {
        double* row = s.row(v);
        if (mode == AblationMode::no_im) {
            for (int d = 0; d < s.cols(); ++d) row[d] = -std::log(eta[d]) + row[d];
        } else if (mode == AblationMode::no_ir) {
            for (int d = 0; d < s.cols(); ++d) row[d] = mask[d] * row[d];
        } else {  // full: shared kernel keeps this bit-identical to apply_corruption
            for (int d = 0; d < s.cols(); ++d) row[d] = corrupt_sample(row[d], eta[d], mask[d]);
        }
    }
    return s;
}

Grid2D gradient_step(const Grid2D& x_prev, const Grid2D& y, std::span<const double> eta,
                     std::span<const double> mask, double rho, const FanBeamGeometry& g,
                     AblationMode mode, bool fbp_precond) {
    if (!y.same_shape(Grid2D(g.n_views, g.n_detectors)))
        fail("gradient_step: sinogram dims do not match geometry");
    Grid2D resid = modified_forward(x_prev, eta, mask, g, mode);
    for (int v = 0; v < resid.rows(); ++v) {
        double* rrow = resid.row(v);
        const double* yrow = y.row(v);
        for (int d = 0; d < resid.cols(); ++d) rrow[d] -= yrow[d];
    }
    if (mode_has_im(mode)) {
        for (int v = 0; v < resid.rows(); ++v) {
            double* rrow = resid.row(v);
            for (int d = 0; d < resid.cols(); ++d) rrow[d] *= mask[d];
        }
    }
    Grid2D b = fbp_precond ? fbp(resid, g) : back_project(resid, g);
    Grid2D r = x_prev;
    for (size_t i = 0; i < r.size(); ++i) r.data()[i] -= rho * b.data()[i];
    return r;
}

Grid2D proximal_step(const Grid2D& r, const IterationParams& p, double theta) {
    const int h = r.rows(), w = r.cols();
    const int c = p.g1.w.dim(0);
    std::vector<double> z1(static_cast<size_t>(c) * h * w);
    nn::conv2d(r.data(), 1, h, w, p.g1.w.data(), c, p.g1.b.data(), z1.data());
    for (double& v : z1) v = v > 0.0 ? v : 0.0;
    std::vector<double> gr(z1.size());
    nn::conv2d(z1.data(), c, h, w, p.g2.w.data(), c, p.g2.b.data(), gr.data());
    for (double& v : gr) {
        const double mag = std::abs(v) - theta;
        v = mag > 0.0 ? (v > 0.0 ? mag : -mag) : 0.0;
    }
    std::vector<double> z3(gr.size());
    nn::conv2d(gr.data(), c, h, w, p.gh1.w.data(), c, p.gh1.b.data(), z3.data());
    for (double& v : z3) v = v > 0.0 ? v : 0.0;
    Grid2D out(h, w);
    nn::conv2d(z3.data(), c, h, w, p.gh2.w.data(), 1, p.gh2.b.data(), out.data());
    return out;
}

ReconResult unrolled_reconstruct(const Grid2D& y, const FanBeamGeometry& g,
                                 const UnrolledModel& model) {
    if (y.rows() != g.n_views || y.cols() != g.n_detectors)
        fail("unrolled_reconstruct: sinogram dims do not match geometry");

    ReconResult res;
    res.eta_hat.assign(g.n_detectors, 1.0);
    res.mask_hat.assign(g.n_detectors, 1.0);
    if (model.has_ir()) res.eta_hat = estimate_ir(y, *model.ir_net);
    if (model.has_im()) res.mask_hat = estimate_im(y, *model.im_net);

    // Binarize the mask for the solve, keep the continuous estimate returned.
    std::vector<double> mask_used(g.n_detectors, 1.0);
    if (model.has_im()) {
        for (int d = 0; d < g.n_detectors; ++d)
            mask_used[d] = res.mask_hat[d] >= 0.5 ? 1.0 : 0.0;
    }

    Grid2D x = fbp(y, g);
    for (int k = 0; k < model.cfg.k; ++k) {
        Grid2D r = gradient_step(x, y, res.eta_hat, mask_used, model.rho(k), g, model.cfg.mode,
                                 model.cfg.fbp_precond);
        Grid2D px = proximal_step(r, model.iters[k], model.theta(k));
        for (size_t i = 0; i < r.size(); ++i) r.data()[i] += px.data()[i];
        x = std::move(r);
    }
    res.x_hat = std::move(x);
    return res;
}

// ---------------- training graph ----------------

namespace {

using Var = Tape::Var;

struct EstVars {
    Var c1w, c1b, c2w, c2b, c3w, c3b, hw, hb;
};

Var estimator_logits_tape(Tape& t, Var y3, const EstVars& e, int v, int d) {
    Var z1 = t.relu(t.instance_norm(t.conv2d(y3, e.c1w, e.c1b), kInstanceNormEps));
    Var z2 = t.relu(t.instance_norm(t.conv2d(z1, e.c2w, e.c2b), kInstanceNormEps));
    Var z3 = t.relu(t.instance_norm(t.conv2d(z2, e.c3w, e.c3b), kInstanceNormEps));
    Var head = t.conv2d(z3, e.hw, e.hb);
    return t.mean_rows(t.reshape(head, {v, d}));
}

struct LossGraph {
    LossParts parts;
    Var loss;
    std::vector<Var> param_vars;  // aligned with named_parameters()
    std::string nonfinite;
};

LossGraph build_loss_graph(Tape& tape, const UnrolledModel& model, const TrainingSample& sample,
                           const FanBeamGeometry& g, double lambda) {
    const int V = g.n_views, D = g.n_detectors, N = g.image_size;
    const bool has_ir = model.has_ir();
    const bool has_im = model.has_im();

    LossGraph lg;
    auto named = model.named_parameters();
    lg.param_vars.reserve(named.size());
    for (auto& [name, t] : named) lg.param_vars.push_back(tape.value(*t, name));

    // Parameter layout: 10 tensors per iteration, then 8 per estimator net.
    constexpr int kPerIter = 10;
    const int ir_base = model.cfg.k * kPerIter;
    const int im_base = ir_base + (has_ir ? 8 : 0);
    auto iter_var = [&](int k, int j) { return lg.param_vars[k * kPerIter + j]; };
    auto est_vars = [&](int base) {
        return EstVars{lg.param_vars[base + 0], lg.param_vars[base + 1], lg.param_vars[base + 2],
                       lg.param_vars[base + 3], lg.param_vars[base + 4], lg.param_vars[base + 5],
                       lg.param_vars[base + 6], lg.param_vars[base + 7]};
    };

    Var y = tape.value(Tensor::from_grid(sample.y_corrupt), "y");
    Var y3 = tape.reshape(y, {1, V, D});

    Var eta, mask;
    if (has_ir)
        eta = tape.affine(tape.sigmoid(estimator_logits_tape(tape, y3, est_vars(ir_base), V, D)),
                          0.75, 0.5);
    if (has_im)
        mask = tape.sigmoid(estimator_logits_tape(tape, y3, est_vars(im_base), V, D));

    Var neg_log_eta_b, mask_b;
    if (has_ir) neg_log_eta_b = tape.broadcast_rows(tape.neg_log(eta), V);
    if (has_im) mask_b = tape.broadcast_rows(mask, V);

    // x0 = FBP of the observed sinogram; constant w.r.t. parameters.
    Var x = tape.value(Tensor::from_grid(fbp(sample.y_corrupt, g)), "x0");

    const double step_scale =
        model.cfg.fbp_precond ? 1.0 : 1.0 / (model.op_norm * model.op_norm);

    Var cons;
    for (int k = 0; k < model.cfg.k; ++k) {
        Var rho_eff = tape.scale_const(tape.softplus(iter_var(k, 0)), step_scale);
        Var theta = tape.softplus(iter_var(k, 1));

        Var ax = tape.forward_project(x, &g);
        Var at = ax;
        switch (model.cfg.mode) {
            case AblationMode::backbone: break;
            case AblationMode::no_im: at = tape.add(neg_log_eta_b, ax); break;
            case AblationMode::no_ir: at = tape.mul(mask_b, ax); break;
            case AblationMode::full: at = tape.mul(mask_b, tape.add(neg_log_eta_b, ax)); break;
        }
        Var resid = tape.sub(at, y);
        if (has_im) resid = tape.mul(mask_b, resid);
        Var b = model.cfg.fbp_precond ? tape.fbp_apply(resid, &g) : tape.back_project(resid, &g);
        Var r = tape.sub(x, tape.scale(b, rho_eff));

        Var r3 = tape.reshape(r, {1, N, N});
        Var gr = tape.conv2d(tape.relu(tape.conv2d(r3, iter_var(k, 2), iter_var(k, 3))),
                             iter_var(k, 4), iter_var(k, 5));
        Var st = tape.soft_threshold(gr, theta);
        Var gh = tape.conv2d(tape.relu(tape.conv2d(st, iter_var(k, 6), iter_var(k, 7))),
                             iter_var(k, 8), iter_var(k, 9));
        x = tape.add(r, tape.reshape(gh, {N, N}));

        // symmetry constraint Ghat(G(r)) ~= r
        Var ghg = tape.conv2d(tape.relu(tape.conv2d(gr, iter_var(k, 6), iter_var(k, 7))),
                              iter_var(k, 8), iter_var(k, 9));
        Var ck = tape.mse(tape.reshape(ghg, {N, N}), r);
        cons = cons.valid() ? tape.add(cons, ck) : ck;
    }

    Var xgt = tape.value(Tensor::from_grid(sample.x_clean), "x_gt");
    Var loss = tape.mse(x, xgt);
    lg.parts.mse_x = tape.val(loss).v[0];
    if (has_ir) {
        Var ir_gt = tape.value(Tensor::from_vector(sample.response.eta_ir), "ir_gt");
        Var m = tape.mse(eta, ir_gt);
        lg.parts.mse_ir = tape.val(m).v[0];
        loss = tape.add(loss, m);
    }
    if (has_im) {
        Var im_gt = tape.value(Tensor::from_vector(sample.response.mask_im), "im_gt");
        Var m = tape.mse(mask, im_gt);
        lg.parts.mse_im = tape.val(m).v[0];
        loss = tape.add(loss, m);
    }
    lg.parts.cons = tape.val(cons).v[0];
    loss = tape.add(loss, tape.scale_const(cons, lambda));
    lg.parts.total = tape.val(loss).v[0];
    lg.loss = loss;
    if (!std::isfinite(lg.parts.total)) lg.nonfinite = tape.first_nonfinite_label();
    return lg;
}

}  // namespace

LossParts compute_loss(const UnrolledModel& model, const TrainingSample& sample,
                       const FanBeamGeometry& g, double lambda, std::vector<Tensor>* grads) {
    Tape tape;
    LossGraph lg = build_loss_graph(tape, model, sample, g, lambda);
    if (!lg.nonfinite.empty())
        fail("compute_loss: non-finite loss (first non-finite tensor: " + lg.nonfinite + ")");
    if (grads) {
        tape.backward(lg.loss);
        grads->clear();
        grads->reserve(lg.param_vars.size());
        for (Var v : lg.param_vars) grads->push_back(tape.grad(v));
    }
    return lg.parts;
}

double compute_loss_value(const UnrolledModel& model, const TrainingSample& sample,
                          const FanBeamGeometry& g, double lambda) {
    return compute_loss(model, sample, g, lambda, nullptr).total;
}

double symmetry_residual(const UnrolledModel& model, const Grid2D& probe) {
    const int h = probe.rows(), w = probe.cols();
    double acc = 0.0;
    for (int k = 0; k < model.cfg.k; ++k) {
        const IterationParams& p = model.iters[k];
        const int c = p.g1.w.dim(0);
        std::vector<double> z1(static_cast<size_t>(c) * h * w);
        nn::conv2d(probe.data(), 1, h, w, p.g1.w.data(), c, p.g1.b.data(), z1.data());
        for (double& v : z1) v = v > 0.0 ? v : 0.0;
        std::vector<double> gr(z1.size());
        nn::conv2d(z1.data(), c, h, w, p.g2.w.data(), c, p.g2.b.data(), gr.data());
        std::vector<double> z3(gr.size());
        nn::conv2d(gr.data(), c, h, w, p.gh1.w.data(), c, p.gh1.b.data(), z3.data());
        for (double& v : z3) v = v > 0.0 ? v : 0.0;
        std::vector<double> out(static_cast<size_t>(h) * w);
        nn::conv2d(z3.data(), c, h, w, p.gh2.w.data(), 1, p.gh2.b.data(), out.data());
        double s = 0.0;
        for (size_t i = 0; i < out.size(); ++i) {
            const double d = out[i] - probe.data()[i];
            s += d * d;
        }
        acc += s / static_cast<double>(out.size());
    }
    return acc / model.cfg.k;
}

std::vector<TrainingSample> load_dataset(const DatasetManifest& manifest,
                                         const std::filesystem::path& manifest_dir) {
    std::vector<TrainingSample> out;
    out.reserve(manifest.samples.size());
    for (const auto& ms : manifest.samples) {
        TrainingSample s;
        s.geometry_id = manifest.geometry_id;
        s.seed = manifest.base_seed;
        s.stream = ms.seed;
        s.x_clean = read_raster(manifest_dir / ms.x_path);
        s.y_corrupt = read_raster(manifest_dir / ms.y_path);
        const Grid2D ir = read_raster(manifest_dir / ms.ir_path);
        const Grid2D im = read_raster(manifest_dir / ms.im_path);
        if (ir.rows() != 1 || im.rows() != 1 || ir.cols() != im.cols())
            fail("load_dataset: malformed response rasters for " + ms.x_path);
        s.response.eta_ir.assign(ir.data(), ir.data() + ir.cols());
        s.response.mask_im.assign(im.data(), im.data() + im.cols());
        out.push_back(std::move(s));
    }
    return out;
}

TrainResult train(const std::vector<TrainingSample>& samples, const FanBeamGeometry& g,
                  const TrainConfig& cfg) {
    if (samples.empty()) fail("train: empty dataset");
    TrainResult res;
    res.model = UnrolledModel::init(cfg.model, g, cfg.seed);
    Adam adam(cfg.lr);
    auto params = res.model.named_parameters();

    SeededRng order_rng(cfg.seed, 0x6f72646572ULL);
    const int n = static_cast<int>(samples.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    const Grid2D probe = fbp(samples[0].y_corrupt, g);

    std::vector<Tensor> grads;
    for (int step = 0; step < cfg.steps; ++step) {
        if (step % n == 0) {
            for (int i = n - 1; i > 0; --i) {
                const int j = static_cast<int>(order_rng.bounded(static_cast<uint64_t>(i + 1)));
                std::swap(order[i], order[j]);
            }
        }
        const TrainingSample& s = samples[order[step % n]];
        LossParts parts;
        try {
            parts = compute_loss(res.model, s, g, cfg.lambda, &grads);
        } catch (const Error& e) {
            fail("train: aborted at step " + std::to_string(step) + ": " + e.what());
        }
        adam.update(params, grads, res.opt);
        res.loss_curve.push_back(parts.total);
        if (cfg.log_every > 0 && step % cfg.log_every == 0)
            res.symmetry_curve.push_back(symmetry_residual(res.model, probe));
    }
    return res;
}

}  // namespace ringrec
