#include "soda/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "soda/kernels.hpp"

namespace soda::model {

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void ensure_workspace(ToyModel::Workspace& ws, int filters, int rows,
                      int cols) {
    const bool shape_ok = ws.s.rows == rows && ws.s.cols == cols &&
                          static_cast<int>(ws.z.size()) == filters;
    if (shape_ok) return;
    ws.z.assign(filters, Grid(rows, cols));
    ws.h.assign(filters, Grid(rows, cols));
    ws.s = Grid(rows, cols);
    ws.yhat = Grid(rows, cols);
    ws.g = Grid(rows, cols);
    ws.dz = Grid(rows, cols);
}

} // namespace

ToyModel::ToyModel(int num_filters)
    : filters_(num_filters),
      theta_(num_filters > 0 ? 11u * num_filters + 1 : 0, 0.0) {
    if (num_filters < 1)
        throw std::invalid_argument("model needs at least one filter");
}

ToyModel ToyModel::random_init(int num_filters, Rng& rng) {
    ToyModel m(num_filters);
    const double conv_scale = std::sqrt(2.0 / 9.0);
    const double proj_scale = 1.0 / std::sqrt(static_cast<double>(num_filters));
    for (int f = 0; f < num_filters; ++f) {
        for (int t = 0; t < 9; ++t)
            m.theta_[m.conv_w_offset(f) + t] = rng.normal(0.0, conv_scale);
    }
    for (int f = 0; f < num_filters; ++f)
        m.theta_[m.proj_w_offset() + f] = rng.normal(0.0, proj_scale);
    // conv biases and projection bias stay zero
    return m;
}

std::span<const double> ToyModel::conv_weights(int f) const {
    return std::span<const double>(theta_).subspan(conv_w_offset(f), 9);
}

double ToyModel::conv_bias(int f) const {
    return theta_[conv_b_offset() + f];
}

std::span<const double> ToyModel::proj_weights() const {
    return std::span<const double>(theta_).subspan(proj_w_offset(), filters_);
}

double ToyModel::proj_bias() const { return theta_[proj_b_offset()]; }

void ToyModel::forward(const Grid& image, Grid& out, Workspace& ws) const {
    if (image.size() == 0) throw std::invalid_argument("empty image");
    const int rows = image.rows, cols = image.cols;
    ensure_workspace(ws, filters_, rows, cols);

    ws.s.fill(proj_bias());
    const std::span<const double> p = proj_weights();
    for (int f = 0; f < filters_; ++f) {
        kernels::conv3x3_same(image.data.data(), rows, cols,
                              theta_.data() + conv_w_offset(f), conv_bias(f),
                              ws.z[f].data.data());
        for (std::size_t i = 0; i < ws.z[f].size(); ++i)
            ws.h[f].data[i] = ws.z[f].data[i] > 0.0 ? ws.z[f].data[i] : 0.0;
        kernels::axpy(p[f], ws.h[f].span(), ws.s.span());
    }
    if (!out.same_shape(image)) out = Grid(rows, cols);
    for (std::size_t i = 0; i < out.size(); ++i)
        out.data[i] = sigmoid(ws.s.data[i]);
}

Grid ToyModel::forward(const Grid& image) const {
    Workspace ws;
    Grid out;
    forward(image, out, ws);
    return out;
}

double ToyModel::sample_loss_grad(const augment::ImageSample& sample,
                                  std::span<double> grad_out,
                                  Workspace& ws) const {
    if (grad_out.size() != dim())
        throw std::invalid_argument("gradient buffer has wrong dimension");
    if (!sample.image.same_shape(sample.mask))
        throw std::invalid_argument("image and mask shapes differ");

    forward(sample.image, ws.yhat, ws);
    const int rows = sample.image.rows, cols = sample.image.cols;
    const double inv_px = 1.0 / static_cast<double>(ws.yhat.size());

    // loss and dL/ds in one pass: e = yhat - y,
    // dL/ds = (2/HW) * e * yhat * (1 - yhat)
    double loss = 0.0;
    for (std::size_t i = 0; i < ws.yhat.size(); ++i) {
        const double yh = ws.yhat.data[i];
        const double e = yh - sample.mask.data[i];
        loss += e * e;
        ws.g.data[i] = 2.0 * inv_px * e * yh * (1.0 - yh);
    }
    loss *= inv_px;

    std::fill(grad_out.begin(), grad_out.end(), 0.0);
    grad_out[proj_b_offset()] = kernels::sum(ws.g.span());
    const std::span<const double> p = proj_weights();
    for (int f = 0; f < filters_; ++f) {
        grad_out[proj_w_offset() + f] = kernels::dot(ws.g.span(), ws.h[f].span());
        // dz = p_f * g masked by the ReLU gate
        for (std::size_t i = 0; i < ws.dz.size(); ++i)
            ws.dz.data[i] = ws.z[f].data[i] > 0.0 ? p[f] * ws.g.data[i] : 0.0;
        grad_out[conv_b_offset() + f] = kernels::sum(ws.dz.span());
        kernels::conv3x3_grad_kernel(sample.image.data.data(), rows, cols,
                                     ws.dz.data.data(),
                                     grad_out.data() + conv_w_offset(f));
    }
    return loss;
}

LossGradResult loss_and_gradient(const ToyModel& m,
                                 const std::vector<augment::ImageSample>& batch,
                                 double l2_weight) {
    if (batch.empty()) throw std::invalid_argument("empty batch");
    LossGradResult res;
    res.gradient.assign(m.dim(), 0.0);
    std::vector<double> g(m.dim());
    ToyModel::Workspace ws;
    for (const auto& sample : batch) {
        res.loss += m.sample_loss_grad(sample, g, ws);
        kernels::axpy(1.0, g, res.gradient);
    }
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    res.loss *= inv_n;
    kernels::scale(res.gradient, inv_n);
    res.loss += l2_penalty(m, l2_weight);
    add_l2_gradient(m, l2_weight, res.gradient);
    return res;
}

double data_loss(const ToyModel& m,
                 const std::vector<augment::ImageSample>& samples) {
    if (samples.empty()) throw std::invalid_argument("empty sample set");
    ToyModel::Workspace ws;
    Grid out;
    double loss = 0.0;
    for (const auto& s : samples) {
        m.forward(s.image, out, ws);
        double acc = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double e = out.data[i] - s.mask.data[i];
            acc += e * e;
        }
        loss += acc / static_cast<double>(out.size());
    }
    return loss / static_cast<double>(samples.size());
}

double l2_penalty(const ToyModel& m, double l2_weight) {
    if (l2_weight == 0.0) return 0.0;
    double ss = 0.0;
    for (int f = 0; f < m.num_filters(); ++f)
        ss += kernels::sum_squares(m.conv_weights(f));
    return l2_weight * ss;
}

void add_l2_gradient(const ToyModel& m, double l2_weight,
                     std::span<double> grad) {
    if (l2_weight == 0.0) return;
    const std::span<const double> theta = m.theta();
    // conv kernels occupy the first 9c slots
    const std::size_t n = 9u * m.num_filters();
    kernels::axpy(2.0 * l2_weight, theta.subspan(0, n), grad.subspan(0, n));
}

} // namespace soda::model
