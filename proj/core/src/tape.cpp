#include "ringrec/tape.hpp"

#include <cmath>

#include "ringrec/fbp.hpp"
#include "ringrec/nn_kernels.hpp"
#include "ringrec/projector.hpp"
#include "ringrec/scalar_ops.hpp"

namespace ringrec {

namespace {

void check_same_shape(const Tensor& a, const Tensor& b, const char* who) {
    if (a.shape != b.shape) fail(std::string(who) + ": shape mismatch");
}

}  // namespace

Tape::Var Tape::make(Tensor value, std::string label, BackFn back) {
    Node n;
    n.grad = Tensor::zeros(value.shape);
    n.value = std::move(value);
    n.label = std::move(label);
    n.back = std::move(back);
    nodes_.push_back(std::move(n));
    return Var{static_cast<int>(nodes_.size()) - 1};
}

Tape::Var Tape::value(Tensor t, std::string label) {
    return make(std::move(t), std::move(label), nullptr);
}

Tape::Var Tape::add(Var a, Var b) {
    check_same_shape(val(a), val(b), "add");
    Tensor out = val(a);
    const Tensor& tb = val(b);
    for (int64_t i = 0; i < out.size(); ++i) out.v[i] += tb.v[i];
    return make(std::move(out), "add", [a, b](Tape& t, const Tensor&, const Tensor& g) {
        Tensor& ga = t.grad_mut(a);
        Tensor& gb = t.grad_mut(b);
        for (int64_t i = 0; i < g.size(); ++i) {
            ga.v[i] += g.v[i];
            gb.v[i] += g.v[i];
        }
    });
}

Tape::Var Tape::sub(Var a, Var b) {
    check_same_shape(val(a), val(b), "sub");
    Tensor out = val(a);
    const Tensor& tb = val(b);
    for (int64_t i = 0; i < out.size(); ++i) out.v[i] -= tb.v[i];
    return make(std::move(out), "sub", [a, b](Tape& t, const Tensor&, const Tensor& g) {
        Tensor& ga = t.grad_mut(a);
        Tensor& gb = t.grad_mut(b);
        for (int64_t i = 0; i < g.size(); ++i) {
            ga.v[i] += g.v[i];
            gb.v[i] -= g.v[i];
        }
    });
}

Tape::Var Tape::mul(Var a, Var b) {
    check_same_shape(val(a), val(b), "mul");
    Tensor out = val(a);
    const Tensor& tb = val(b);
    for (int64_t i = 0; i < out.size(); ++i) out.v[i] *= tb.v[i];
    return make(std::move(out), "mul", [a, b](Tape& t, const Tensor&, const Tensor& g) {
        const Tensor& va = t.val(a);
        const Tensor& vb = t.val(b);
        Tensor& ga = t.grad_mut(a);
        Tensor& gb = t.grad_mut(b);
        for (int64_t i = 0; i < g.size(); ++i) {
            ga.v[i] += g.v[i] * vb.v[i];
            gb.v[i] += g.v[i] * va.v[i];
        }
    });
}

Tape::Var Tape::scale(Var x, Var s) {
    if (val(s).size() != 1) fail("scale: s must be a scalar");
    const double sv = val(s).v[0];
    Tensor out = val(x);
    for (double& o : out.v) o *= sv;
    return make(std::move(out), "scale", [x, s](Tape& t, const Tensor&, const Tensor& g) {
        const Tensor& vx = t.val(x);
        const double sv = t.val(s).v[0];
        Tensor& gx = t.grad_mut(x);
        double acc = 0.0;
        for (int64_t i = 0; i < g.size(); ++i) {
            gx.v[i] += g.v[i] * sv;
            acc += g.v[i] * vx.v[i];
        }
        t.grad_mut(s).v[0] += acc;
    });
}

Tape::Var Tape::scale_const(Var x, double c) {
    Tensor out = val(x);
    for (double& o : out.v) o *= c;
    return make(std::move(out), "scale_const", [x, c](Tape& t, const Tensor&, const Tensor& g) {
        Tensor& gx = t.grad_mut(x);
        for (int64_t i = 0; i < g.size(); ++i) gx.v[i] += g.v[i] * c;
    });
}

Tape::Var Tape::affine(Var x, double a, double b) {
    Tensor out = val(x);
    for (double& o : out.v) o = a + b * o;
    return make(std::move(out), "affine", [x, b](Tape& t, const Tensor&, const Tensor& g) {
        Tensor& gx = t.grad_mut(x);
        for (int64_t i = 0; i < g.size(); ++i) gx.v[i] += g.v[i] * b;
    });
}

Tape::Var Tape::relu(Var x) {
    Tensor out = val(x);
    for (double& o : out.v) o = o > 0.0 ? o : 0.0;
    return make(std::move(out), "relu", [x](Tape& t, const Tensor&, const Tensor& g) {
        const Tensor& vx = t.val(x);
        Tensor& gx = t.grad_mut(x);
        for (int64_t i = 0; i < g.size(); ++i) {
            if (vx.v[i] > 0.0) gx.v[i] += g.v[i];
        }
    });
}

Tape::Var Tape::sigmoid(Var x) {
    Tensor out = val(x);
    for (double& o : out.v) o = sigmoid_fn(o);
    return make(std::move(out), "sigmoid", [x](Tape& t, const Tensor& y, const Tensor& g) {
        Tensor& gx = t.grad_mut(x);
        for (int64_t i = 0; i < g.size(); ++i) gx.v[i] += g.v[i] * y.v[i] * (1.0 - y.v[i]);
    });
}

Tape::Var Tape::softplus(Var x) {
    Tensor out = val(x);
    for (double& o : out.v) o = stable_softplus(o);
    return make(std::move(out), "softplus", [x](Tape& t, const Tensor&, const Tensor& g) {
        const Tensor& vx = t.val(x);
        Tensor& gx = t.grad_mut(x);
        for (int64_t i = 0; i < g.size(); ++i) gx.v[i] += g.v[i] * sigmoid_fn(vx.v[i]);
    });
}

Tape::Var Tape::neg_log(Var x) {
    Tensor out = val(x);
    for (double& o : out.v) {
        if (o <= 0.0) fail("neg_log: nonpositive input");
        o = -std::log(o);
    }
    return make(std::move(out), "neg_log", [x](Tape& t, const Tensor&, const Tensor& g) {
        const Tensor& vx = t.val(x);
        Tensor& gx = t.grad_mut(x);
        for (int64_t i = 0; i < g.size(); ++i) gx.v[i] -= g.v[i] / vx.v[i];
    });
}

Tape::Var Tape::soft_threshold(Var x, Var theta) {
    if (val(theta).size() != 1) fail("soft_threshold: theta must be a scalar");
    const double th = val(theta).v[0];
    Tensor out = val(x);
    for (double& o : out.v) {
        const double mag = std::abs(o) - th;
        o = mag > 0.0 ? (o > 0.0 ? mag : -mag) : 0.0;
    }
    // Subgradient 0 exactly at the kink.
    return make(std::move(out), "soft_threshold",
                [x, theta](Tape& t, const Tensor&, const Tensor& g) {
                    const Tensor& vx = t.val(x);
                    const double th = t.val(theta).v[0];
                    Tensor& gx = t.grad_mut(x);
                    double gth = 0.0;
                    for (int64_t i = 0; i < g.size(); ++i) {
                        if (std::abs(vx.v[i]) > th) {
                            gx.v[i] += g.v[i];
                            gth -= g.v[i] * (vx.v[i] > 0.0 ? 1.0 : -1.0);
                        }
                    }
                    t.grad_mut(theta).v[0] += gth;
                });
}

Tape::Var Tape::reshape(Var x, std::vector<int> shape) {
    if (Tensor::count(shape) != val(x).size()) fail("reshape: element count mismatch");
    Tensor out;
    out.shape = std::move(shape);
    out.v = val(x).v;
    return make(std::move(out), "reshape", [x](Tape& t, const Tensor&, const Tensor& g) {
        Tensor& gx = t.grad_mut(x);
        for (int64_t i = 0; i < g.size(); ++i) gx.v[i] += g.v[i];
    });
}

Tape::Var Tape::broadcast_rows(Var vec, int rows) {
    if (val(vec).ndim() != 1) fail("broadcast_rows: expected a 1-D tensor");
    const int d = val(vec).dim(0);
    Tensor out = Tensor::zeros({rows, d});
    const Tensor& v = val(vec);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < d; ++c) out.v[static_cast<size_t>(r) * d + c] = v.v[c];
    }
    return make(std::move(out), "broadcast_rows",
                [vec, rows, d](Tape& t, const Tensor&, const Tensor& g) {
                    Tensor& gv = t.grad_mut(vec);
                    for (int r = 0; r < rows; ++r) {
                        for (int c = 0; c < d; ++c) gv.v[c] += g.v[static_cast<size_t>(r) * d + c];
                    }
                });
}

Tape::Var Tape::mean_rows(Var m) {
    if (val(m).ndim() != 2) fail("mean_rows: expected a 2-D tensor");
    const int rows = val(m).dim(0), d = val(m).dim(1);
    Tensor out = Tensor::zeros({d});
    const Tensor& v = val(m);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < d; ++c) out.v[c] += v.v[static_cast<size_t>(r) * d + c];
    }
    const double inv = 1.0 / rows;
    for (double& o : out.v) o *= inv;
    return make(std::move(out), "mean_rows",
                [m, rows, d, inv = 1.0 / rows](Tape& t, const Tensor&, const Tensor& g) {
                    Tensor& gm = t.grad_mut(m);
                    for (int r = 0; r < rows; ++r) {
                        for (int c = 0; c < d; ++c)
                            gm.v[static_cast<size_t>(r) * d + c] += g.v[c] * inv;
                    }
                });
}

Tape::Var Tape::mse(Var a, Var b) {
    check_same_shape(val(a), val(b), "mse");
    const Tensor& va = val(a);
    const Tensor& vb = val(b);
    double acc = 0.0;
    for (int64_t i = 0; i < va.size(); ++i) {
        const double d = va.v[i] - vb.v[i];
        acc += d * d;
    }
    const double inv_n = 1.0 / static_cast<double>(va.size());
    return make(Tensor::scalar(acc * inv_n), "mse",
                [a, b, inv_n](Tape& t, const Tensor&, const Tensor& g) {
                    const Tensor& va = t.val(a);
                    const Tensor& vb = t.val(b);
                    Tensor& ga = t.grad_mut(a);
                    Tensor& gb = t.grad_mut(b);
                    const double s = 2.0 * inv_n * g.v[0];
                    for (int64_t i = 0; i < va.size(); ++i) {
                        const double d = s * (va.v[i] - vb.v[i]);
                        ga.v[i] += d;
                        gb.v[i] -= d;
                    }
                });
}

Tape::Var Tape::conv2d(Var x, Var w, Var b) {
    const Tensor& vx = val(x);
    const Tensor& vw = val(w);
    const Tensor& vb = val(b);
    if (vx.ndim() != 3) fail("conv2d: input must be {C,H,W}");
    if (vw.ndim() != 4 || vw.dim(2) != 3 || vw.dim(3) != 3)
        fail("conv2d: weights must be {Co,Ci,3,3}");
    const int ci = vx.dim(0), h = vx.dim(1), wd = vx.dim(2);
    const int co = vw.dim(0);
    if (vw.dim(1) != ci) fail("conv2d: channel mismatch");
    if (vb.ndim() != 1 || vb.dim(0) != co) fail("conv2d: bias must be {Co}");

    Tensor out = Tensor::zeros({co, h, wd});
    nn::conv2d(vx.data(), ci, h, wd, vw.data(), co, vb.data(), out.data());
    return make(std::move(out), "conv2d",
                [x, w, b, ci, h, wd, co](Tape& t, const Tensor&, const Tensor& g) {
                    const Tensor& vx = t.val(x);
                    const Tensor& vw = t.val(w);
                    nn::conv2d_back_input(g.data(), co, h, wd, vw.data(), ci, t.grad_mut(x).data());
                    nn::conv2d_back_params(g.data(), co, h, wd, vx.data(), ci,
                                           t.grad_mut(w).data(), t.grad_mut(b).data());
                });
}

Tape::Var Tape::instance_norm(Var x, double eps) {
    const Tensor& vx = val(x);
    if (vx.ndim() != 3) fail("instance_norm: input must be {C,H,W}");
    const int c = vx.dim(0), h = vx.dim(1), w = vx.dim(2);
    Tensor out = Tensor::zeros(vx.shape);
    std::vector<double> inv_std(static_cast<size_t>(c));
    nn::instance_norm(vx.data(), c, h, w, eps, out.data(), inv_std.data());
    return make(std::move(out), "instance_norm",
                [x, c, h, w, inv_std = std::move(inv_std)](Tape& t, const Tensor& y,
                                                           const Tensor& g) {
                    nn::instance_norm_back(y.data(), g.data(), c, h, w, inv_std.data(),
                                           t.grad_mut(x).data());
                });
}

Tape::Var Tape::forward_project(Var x, const FanBeamGeometry* g) {
    Grid2D img = val(x).to_grid();
    Tensor out = Tensor::from_grid(ringrec::forward_project(img, *g));
    return make(std::move(out), "forward_project",
                [x, g](Tape& t, const Tensor&, const Tensor& gr) {
                    Grid2D gs = Grid2D::from_data(g->n_views, g->n_detectors, gr.v);
                    Grid2D gimg = ringrec::back_project(gs, *g);
                    Tensor& dst = t.grad_mut(x);
                    for (int64_t i = 0; i < dst.size(); ++i) dst.v[i] += gimg.data()[i];
                });
}

Tape::Var Tape::back_project(Var s, const FanBeamGeometry* g) {
    Grid2D sino = val(s).to_grid();
    Tensor out = Tensor::from_grid(ringrec::back_project(sino, *g));
    return make(std::move(out), "back_project",
                [s, g](Tape& t, const Tensor&, const Tensor& gr) {
                    Grid2D gi = Grid2D::from_data(g->image_size, g->image_size, gr.v);
                    Grid2D gsino = ringrec::forward_project(gi, *g);
                    Tensor& dst = t.grad_mut(s);
                    for (int64_t i = 0; i < dst.size(); ++i) dst.v[i] += gsino.data()[i];
                });
}

Tape::Var Tape::fbp_apply(Var s, const FanBeamGeometry* g) {
    Grid2D sino = val(s).to_grid();
    Tensor out = Tensor::from_grid(fbp(sino, *g));
    return make(std::move(out), "fbp_apply", [s, g](Tape& t, const Tensor&, const Tensor& gr) {
        Grid2D gi = Grid2D::from_data(g->image_size, g->image_size, gr.v);
        Grid2D gs = fbp_adjoint(gi, *g);
        Tensor& dst = t.grad_mut(s);
        for (int64_t i = 0; i < dst.size(); ++i) dst.v[i] += gs.data()[i];
    });
}

void Tape::backward(Var loss) {
    if (val(loss).size() != 1) fail("backward: loss must be a scalar");
    grad_mut(loss).v[0] = 1.0;
    for (int i = loss.id; i >= 0; --i) {
        Node& n = nodes_[i];
        if (n.back) n.back(*this, n.value, n.grad);
    }
}

std::string Tape::first_nonfinite_label() const {
    for (const Node& n : nodes_) {
        for (double v : n.value.v) {
            if (!std::isfinite(v)) return n.label;
        }
    }
    return {};
}

}  // namespace ringrec
