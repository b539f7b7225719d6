#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ringrec/geometry.hpp"
#include "ringrec/tensor.hpp"

namespace ringrec {

// Reverse-mode tape over the small fixed op set the unrolled solver needs.
// Values are computed eagerly; backward() replays the recorded closures in
// reverse. One tape per loss evaluation; Var handles index into the tape.
//
// Geometry-coupled ops hold a pointer to the FanBeamGeometry, which must
// outlive the tape.
class Tape {
public:
    struct Var {
        int id = -1;
        bool valid() const { return id >= 0; }
    };

    // Backward closure: receives the node's own value and gradient.
    using BackFn = std::function<void(Tape&, const Tensor& out_val, const Tensor& out_grad)>;

    // Leaf holding a value; gradients accumulate into grad(v).
    Var value(Tensor t, std::string label = "leaf");

    const Tensor& val(Var v) const { return nodes_[v.id].value; }
    const Tensor& grad(Var v) const { return nodes_[v.id].grad; }
    Tensor& grad_mut(Var v) { return nodes_[v.id].grad; }

    // Elementwise, same shape.
    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var mul(Var a, Var b);
    // x * s with scalar Var s.
    Var scale(Var x, Var s);
    Var scale_const(Var x, double c);
    // a + b * x with plain constants.
    Var affine(Var x, double a, double b);
    Var relu(Var x);
    Var sigmoid(Var x);
    Var softplus(Var x);
    Var neg_log(Var x);
    Var soft_threshold(Var x, Var theta);  // sign(x) * max(|x| - theta, 0)

    Var reshape(Var x, std::vector<int> shape);
    Var broadcast_rows(Var vec, int rows);  // {D} -> {rows, D}
    Var mean_rows(Var m);                   // {V, D} -> {D}
    Var mse(Var a, Var b);                  // scalar mean squared difference

    Var conv2d(Var x, Var w, Var b);        // x {Ci,H,W}, w {Co,Ci,3,3}, b {Co}
    Var instance_norm(Var x, double eps = 1e-5);

    Var forward_project(Var x, const FanBeamGeometry* g);  // {H,W} -> {V,D}
    Var back_project(Var s, const FanBeamGeometry* g);     // {V,D} -> {H,W}
    Var fbp_apply(Var s, const FanBeamGeometry* g);        // {V,D} -> {H,W}

    // Seeds d(loss)=1 and runs all recorded backward closures in reverse.
    void backward(Var loss);

    // Label of the first node (creation order) holding a non-finite value,
    // or empty if all values are finite.
    std::string first_nonfinite_label() const;

    size_t node_count() const { return nodes_.size(); }

private:
    struct Node {
        Tensor value;
        Tensor grad;
        std::string label;
        BackFn back;  // may be empty (leaves)
    };

    Var make(Tensor value, std::string label, BackFn back);

    std::vector<Node> nodes_;
};

}  // namespace ringrec
