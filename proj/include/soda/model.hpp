#ifndef SODA_MODEL_HPP
#define SODA_MODEL_HPP

#include <span>
#include <vector>

#include "soda/augment.hpp"
#include "soda/grid.hpp"
#include "soda/rng.hpp"

namespace soda::model {

// Two-layer convolutional pixel classifier:
//   z_f = conv3x3(x, W_f) + b_f   (zero padding, output shape == input)
//   h_f = max(0, z_f)
//   s   = sum_f p_f * h_f + q
//   yhat = sigmoid(s)
// Parameters are stored flattened as [W_1..W_c | b | p | q], dimension
// 11c + 1. The backward pass is hand-derived and validated against central
// finite differences.
class ToyModel {
  public:
    explicit ToyModel(int num_filters);
    static ToyModel random_init(int num_filters, Rng& rng);

    int num_filters() const { return filters_; }
    std::size_t dim() const { return theta_.size(); }
    std::span<double> theta() { return theta_; }
    std::span<const double> theta() const { return theta_; }

    std::span<const double> conv_weights(int f) const; // 9 entries
    double conv_bias(int f) const;
    std::span<const double> proj_weights() const; // c entries
    double proj_bias() const;

    // Scratch planes reused across forward/backward calls.
    struct Workspace {
        std::vector<Grid> z;
        std::vector<Grid> h;
        Grid s;
        Grid yhat;
        Grid g; // dL/ds
        Grid dz;
    };

    // Per-pixel probabilities, every entry in (0, 1). Shape-preserving for
    // any H x W input.
    void forward(const Grid& image, Grid& out, Workspace& ws) const;
    Grid forward(const Grid& image) const;

    // Mean-per-pixel squared error of one sample plus its exact gradient
    // (overwrites grad_out). No regularization term: this is the per-sample
    // data gradient used for source attribution.
    double sample_loss_grad(const augment::ImageSample& sample,
                            std::span<double> grad_out, Workspace& ws) const;

  private:
    int filters_;
    std::vector<double> theta_;

    std::size_t conv_w_offset(int f) const { return 9u * f; }
    std::size_t conv_b_offset() const { return 9u * filters_; }
    std::size_t proj_w_offset() const { return 10u * filters_; }
    std::size_t proj_b_offset() const { return 11u * filters_; }
};

struct LossGradResult {
    double loss = 0.0;
    std::vector<double> gradient;
};

// Batch objective: mean over samples of mean-per-pixel squared error, plus
// l2_weight * ||conv kernels||^2. The projection layer and all biases stay
// out of the penalty. Gradient is exact.
LossGradResult loss_and_gradient(const ToyModel& m,
                                 const std::vector<augment::ImageSample>& batch,
                                 double l2_weight);

// Forward-only mean data loss over a set of samples (no penalty).
double data_loss(const ToyModel& m,
                 const std::vector<augment::ImageSample>& samples);

double l2_penalty(const ToyModel& m, double l2_weight);
void add_l2_gradient(const ToyModel& m, double l2_weight,
                     std::span<double> grad);

} // namespace soda::model

#endif
