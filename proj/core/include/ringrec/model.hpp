#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ringrec/geometry.hpp"
#include "ringrec/rng.hpp"
#include "ringrec/tensor.hpp"

namespace ringrec {

// Which pieces of the modified forward operator the model uses:
//   backbone: Ax              no_im: -ln H_IR + Ax
//   no_ir:    H_IM * Ax       full:  H_IM * (-ln H_IR + Ax)
enum class AblationMode { backbone, no_im, no_ir, full };

AblationMode mode_from_string(const std::string& s);
std::string mode_to_string(AblationMode m);

inline bool mode_has_ir(AblationMode m) {
    return m == AblationMode::no_im || m == AblationMode::full;
}
inline bool mode_has_im(AblationMode m) {
    return m == AblationMode::no_ir || m == AblationMode::full;
}

struct ConvParam {
    Tensor w;  // {Co, Ci, 3, 3}
    Tensor b;  // {Co}
};

// Sinogram-side response estimator: three Conv+IN+ReLU blocks and a
// single-channel projection head, pooled over the view axis by the solver.
struct EstimatorWeights {
    int channels = 8;
    ConvParam c1, c2, c3, head;
};

// Per-iteration learnables. rho/theta are stored through softplus so the
// step size and threshold stay positive. G = g2(relu(g1(.))) lifts the image
// into feature space; Ghat = gh2(relu(gh1(.))) is its structural mirror.
struct IterationParams {
    Tensor rho_raw;   // {1}
    Tensor theta_raw; // {1}
    ConvParam g1, g2, gh1, gh2;
};

struct ModelConfig {
    int k = 5;              // unrolled iteration count
    int prox_channels = 8;  // feature channels of G / Ghat
    int est_channels = 8;   // feature channels of the estimator nets
    AblationMode mode = AblationMode::full;
    std::string geometry_id = "desk";
    bool fbp_precond = false;  // gradient step backward operator: fbp instead of A^T
};

struct UnrolledModel {
    ModelConfig cfg;
    // Largest singular value of A for the configured geometry; the learned
    // step size is softplus(rho_raw) / op_norm^2 so that the initial value
    // 0.5 is a stable normalized step. Unused under fbp_precond.
    double op_norm = 1.0;
    std::vector<IterationParams> iters;
    std::optional<EstimatorWeights> ir_net;
    std::optional<EstimatorWeights> im_net;

    bool has_ir() const { return ir_net.has_value(); }
    bool has_im() const { return im_net.has_value(); }
    double rho(int k) const;    // effective step size of iteration k
    double theta(int k) const;  // shrinkage threshold of iteration k

    // Kaiming-uniform seeded init; op_norm from power iteration on the given
    // geometry unless fbp_precond. The geometry may differ from the presets
    // (cfg.geometry_id is a label).
    static UnrolledModel init(const ModelConfig& cfg, const FanBeamGeometry& g, uint64_t seed);

    // Parameter skeleton without the op_norm estimate (checkpoint loading).
    static UnrolledModel init_skeleton(const ModelConfig& cfg, uint64_t seed);

    std::vector<std::pair<std::string, Tensor*>> named_parameters();
    std::vector<std::pair<std::string, const Tensor*>> named_parameters() const;
};

// Adam moments, persisted with the checkpoint so training can resume.
struct AdamState {
    int64_t step = 0;
    std::vector<Tensor> m, v;
};

class Adam {
public:
    explicit Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void update(std::vector<std::pair<std::string, Tensor*>>& params,
                const std::vector<Tensor>& grads, AdamState& state) const;

private:
    double lr_, beta1_, beta2_, eps_;
};

// SRWT checkpoint: "SRWT <version> ..." header, then named tensors in
// SRF1-style blocks (header line + little-endian payload, f64).
void save_checkpoint(const UnrolledModel& model, const std::filesystem::path& path,
                     const AdamState* opt = nullptr);
UnrolledModel load_checkpoint(const std::filesystem::path& path, AdamState* opt = nullptr);

}  // namespace ringrec
