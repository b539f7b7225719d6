#include "ringrec/model.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "ringrec/geometry.hpp"
#include "ringrec/projector.hpp"
#include "ringrec/scalar_ops.hpp"

namespace ringrec {

AblationMode mode_from_string(const std::string& s) {
    if (s == "backbone") return AblationMode::backbone;
    if (s == "no_im") return AblationMode::no_im;
    if (s == "no_ir") return AblationMode::no_ir;
    if (s == "full") return AblationMode::full;
    fail("unknown mode '" + s + "' (valid: backbone, no_im, no_ir, full)");
}

std::string mode_to_string(AblationMode m) {
    switch (m) {
        case AblationMode::backbone: return "backbone";
        case AblationMode::no_im: return "no_im";
        case AblationMode::no_ir: return "no_ir";
        case AblationMode::full: return "full";
    }
    return "?";
}

namespace {

ConvParam init_conv(int co, int ci, SeededRng& rng) {
    ConvParam p;
    p.w = Tensor::zeros({co, ci, 3, 3});
    p.b = Tensor::zeros({co});
    const double bound = std::sqrt(6.0 / (ci * 9));  // Kaiming uniform, ReLU gain
    for (double& x : p.w.v) x = rng.uniform(-bound, bound);
    return p;
}

EstimatorWeights init_estimator(int channels, SeededRng& rng) {
    EstimatorWeights e;
    e.channels = channels;
    e.c1 = init_conv(channels, 1, rng);
    e.c2 = init_conv(channels, channels, rng);
    e.c3 = init_conv(channels, channels, rng);
    e.head = init_conv(1, channels, rng);
    return e;
}

}  // namespace

double UnrolledModel::rho(int k) const {
    const double base = stable_softplus(iters[k].rho_raw.v[0]);
    return cfg.fbp_precond ? base : base * (1.0 / (op_norm * op_norm));
}

double UnrolledModel::theta(int k) const { return stable_softplus(iters[k].theta_raw.v[0]); }

UnrolledModel UnrolledModel::init(const ModelConfig& cfg, const FanBeamGeometry& g,
                                  uint64_t seed) {
    UnrolledModel m = init_skeleton(cfg, seed);
    m.op_norm = cfg.fbp_precond ? 1.0 : operator_norm_estimate(g);
    return m;
}

UnrolledModel UnrolledModel::init_skeleton(const ModelConfig& cfg, uint64_t seed) {
    if (cfg.k < 1) fail("UnrolledModel: K must be >= 1");
    UnrolledModel m;
    m.cfg = cfg;
    m.op_norm = 1.0;

    SeededRng rng(seed, 0x6d6f64656cULL);
    for (int k = 0; k < cfg.k; ++k) {
        IterationParams it;
        it.rho_raw = Tensor::scalar(softplus_inv(0.5));
        it.theta_raw = Tensor::scalar(softplus_inv(0.01));
        it.g1 = init_conv(cfg.prox_channels, 1, rng);
        it.g2 = init_conv(cfg.prox_channels, cfg.prox_channels, rng);
        it.gh1 = init_conv(cfg.prox_channels, cfg.prox_channels, rng);
        it.gh2 = init_conv(1, cfg.prox_channels, rng);
        m.iters.push_back(std::move(it));
    }
    if (mode_has_ir(cfg.mode)) m.ir_net = init_estimator(cfg.est_channels, rng);
    if (mode_has_im(cfg.mode)) m.im_net = init_estimator(cfg.est_channels, rng);
    return m;
}

namespace {

template <typename Model, typename TensorPtr>
std::vector<std::pair<std::string, TensorPtr>> collect_params(Model& m) {
    std::vector<std::pair<std::string, TensorPtr>> out;
    for (size_t k = 0; k < m.iters.size(); ++k) {
        auto& it = m.iters[k];
        const std::string p = "iter" + std::to_string(k) + ".";
        out.emplace_back(p + "rho_raw", &it.rho_raw);
        out.emplace_back(p + "theta_raw", &it.theta_raw);
        out.emplace_back(p + "g1.w", &it.g1.w);
        out.emplace_back(p + "g1.b", &it.g1.b);
        out.emplace_back(p + "g2.w", &it.g2.w);
        out.emplace_back(p + "g2.b", &it.g2.b);
        out.emplace_back(p + "gh1.w", &it.gh1.w);
        out.emplace_back(p + "gh1.b", &it.gh1.b);
        out.emplace_back(p + "gh2.w", &it.gh2.w);
        out.emplace_back(p + "gh2.b", &it.gh2.b);
    }
    auto add_net = [&out](const std::string& name, auto& net) {
        out.emplace_back(name + ".c1.w", &net.c1.w);
        out.emplace_back(name + ".c1.b", &net.c1.b);
        out.emplace_back(name + ".c2.w", &net.c2.w);
        out.emplace_back(name + ".c2.b", &net.c2.b);
        out.emplace_back(name + ".c3.w", &net.c3.w);
        out.emplace_back(name + ".c3.b", &net.c3.b);
        out.emplace_back(name + ".head.w", &net.head.w);
        out.emplace_back(name + ".head.b", &net.head.b);
    };
    if (m.ir_net) add_net("ir_net", *m.ir_net);
    if (m.im_net) add_net("im_net", *m.im_net);
    return out;
}

}  // namespace

std::vector<std::pair<std::string, Tensor*>> UnrolledModel::named_parameters() {
    return collect_params<UnrolledModel, Tensor*>(*this);
}

std::vector<std::pair<std::string, const Tensor*>> UnrolledModel::named_parameters() const {
    return collect_params<const UnrolledModel, const Tensor*>(*this);
}

void Adam::update(std::vector<std::pair<std::string, Tensor*>>& params,
                  const std::vector<Tensor>& grads, AdamState& state) const {
    if (params.size() != grads.size()) fail("Adam: parameter/gradient count mismatch");
    if (state.m.empty()) {
        for (auto& [name, p] : params) {
            state.m.push_back(Tensor::zeros(p->shape));
            state.v.push_back(Tensor::zeros(p->shape));
        }
    }
    state.step += 1;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(state.step));
    for (size_t i = 0; i < params.size(); ++i) {
        Tensor& p = *params[i].second;
        const Tensor& g = grads[i];
        Tensor& m = state.m[i];
        Tensor& v = state.v[i];
        for (int64_t j = 0; j < p.size(); ++j) {
            m.v[j] = beta1_ * m.v[j] + (1.0 - beta1_) * g.v[j];
            v.v[j] = beta2_ * v.v[j] + (1.0 - beta2_) * g.v[j] * g.v[j];
            const double mhat = m.v[j] / bc1;
            const double vhat = v.v[j] / bc2;
            p.v[j] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        }
    }
}

namespace {

void write_u64_le(std::ofstream& f, uint64_t u) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xff);
    f.write(reinterpret_cast<const char*>(b), 8);
}

uint64_t read_u64_le(std::ifstream& f, const std::string& path) {
    unsigned char b[8];
    f.read(reinterpret_cast<char*>(b), 8);
    if (f.gcount() != 8) fail("checkpoint: truncated payload in " + path);
    uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<uint64_t>(b[i]) << (8 * i);
    return u;
}

void write_tensor_block(std::ofstream& f, const std::string& name, const Tensor& t) {
    std::ostringstream hdr;
    hdr << "tensor " << name << " f64 " << t.ndim();
    for (int d : t.shape) hdr << " " << d;
    hdr << "\n";
    const std::string h = hdr.str();
    f.write(h.data(), static_cast<std::streamsize>(h.size()));
    for (double x : t.v) write_u64_le(f, std::bit_cast<uint64_t>(x));
}

std::pair<std::string, Tensor> read_tensor_block(std::ifstream& f, const std::string& path) {
    std::string line;
    if (!std::getline(f, line)) fail("checkpoint: missing tensor block in " + path);
    std::istringstream hs(line);
    std::string tag, name, dtype;
    int ndim = -1;
    hs >> tag >> name >> dtype >> ndim;
    if (tag != "tensor" || dtype != "f64" || ndim < 0 || ndim > 8)
        fail("checkpoint: malformed tensor header '" + line + "' in " + path);
    std::vector<int> shape(ndim);
    for (int i = 0; i < ndim; ++i) {
        if (!(hs >> shape[i]) || shape[i] < 0)
            fail("checkpoint: malformed tensor dims in " + path);
    }
    Tensor t = Tensor::zeros(shape);
    for (int64_t i = 0; i < t.size(); ++i)
        t.v[i] = std::bit_cast<double>(read_u64_le(f, path));
    return {name, std::move(t)};
}

}  // namespace

void save_checkpoint(const UnrolledModel& model, const std::filesystem::path& path,
                     const AdamState* opt) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) fail("checkpoint: cannot open " + path.string() + " for writing");

    auto params = model.named_parameters();
    std::ostringstream hdr;
    hdr << "SRWT 1 " << model.cfg.geometry_id << " " << mode_to_string(model.cfg.mode) << " "
        << model.cfg.k << " " << model.cfg.prox_channels << " " << model.cfg.est_channels << " "
        << (model.cfg.fbp_precond ? 1 : 0) << " " << params.size() << " " << (opt ? 1 : 0)
        << "\n";
    const std::string h = hdr.str();
    f.write(h.data(), static_cast<std::streamsize>(h.size()));

    write_tensor_block(f, "op_norm", Tensor::scalar(model.op_norm));
    for (const auto& [name, t] : params) write_tensor_block(f, name, *t);
    if (opt) {
        write_tensor_block(f, "adam.step", Tensor::scalar(static_cast<double>(opt->step)));
        for (size_t i = 0; i < params.size(); ++i) {
            write_tensor_block(f, "adam.m." + params[i].first, opt->m[i]);
            write_tensor_block(f, "adam.v." + params[i].first, opt->v[i]);
        }
    }
    if (!f) fail("checkpoint: I/O failure writing " + path.string());
}

UnrolledModel load_checkpoint(const std::filesystem::path& path, AdamState* opt) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail("checkpoint: cannot open " + path.string());
    std::string line;
    if (!std::getline(f, line)) fail("checkpoint: missing header in " + path.string());
    std::istringstream hs(line);
    std::string magic, geom, mode;
    int version = -1, k = -1, pc = -1, ec = -1, precond = -1, has_opt = -1;
    size_t n_tensors = 0;
    hs >> magic >> version >> geom >> mode >> k >> pc >> ec >> precond >> n_tensors >> has_opt;
    if (magic != "SRWT") fail("checkpoint: bad magic in " + path.string());
    if (version != 1) fail("checkpoint: unsupported version in " + path.string());

    ModelConfig cfg;
    cfg.geometry_id = geom;
    cfg.mode = mode_from_string(mode);
    cfg.k = k;
    cfg.prox_channels = pc;
    cfg.est_channels = ec;
    cfg.fbp_precond = precond != 0;

    // Build the parameter skeleton, then overwrite tensors by name.
    UnrolledModel m = UnrolledModel::init_skeleton(cfg, 0);
    auto [nm, op_norm_t] = read_tensor_block(f, path.string());
    if (nm != "op_norm") fail("checkpoint: expected op_norm block in " + path.string());
    m.op_norm = op_norm_t.v[0];

    auto params = m.named_parameters();
    if (params.size() != n_tensors)
        fail("checkpoint: tensor count mismatch in " + path.string());
    for (size_t i = 0; i < n_tensors; ++i) {
        auto [name, t] = read_tensor_block(f, path.string());
        if (name != params[i].first)
            fail("checkpoint: unexpected tensor '" + name + "' (wanted '" + params[i].first +
                 "') in " + path.string());
        if (t.shape != params[i].second->shape)
            fail("checkpoint: shape mismatch for '" + name + "' in " + path.string());
        *params[i].second = std::move(t);
    }
    if (opt) {
        opt->m.clear();
        opt->v.clear();
        opt->step = 0;
        if (has_opt == 1) {
            auto [sname, st] = read_tensor_block(f, path.string());
            if (sname != "adam.step") fail("checkpoint: expected adam.step in " + path.string());
            opt->step = static_cast<int64_t>(st.v[0]);
            for (size_t i = 0; i < n_tensors; ++i) {
                auto [mn, mt] = read_tensor_block(f, path.string());
                auto [vn, vt] = read_tensor_block(f, path.string());
                if (mn != "adam.m." + params[i].first || vn != "adam.v." + params[i].first)
                    fail("checkpoint: malformed optimizer state in " + path.string());
                opt->m.push_back(std::move(mt));
                opt->v.push_back(std::move(vt));
            }
        }
    }
    return m;
}

}  // namespace ringrec
