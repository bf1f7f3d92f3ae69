#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/series.hpp"

namespace airq {

enum class LstmKind { Simple, Stacked, Bidirectional, EncoderDecoder };

struct NetworkConfig {
    LstmKind kind = LstmKind::Simple;

    /// Number of LSTM layers implied by the topology.
    int layer_count() const { return kind == LstmKind::Simple ? 1 : 2; }
};

struct LstmHyperParams {
    int epochs_max = 800;
    double patience_fraction = 0.1;  // early-stop patience = fraction * epochs_max
    int validation_hours = 72;
    double dropout = 0.1;            // on layer inputs
    double recurrent_dropout = 0.3;  // on the hidden-state connections
    int batch_size = 12;
    bool stateful = true;
    int units_coefficient = 3;  // hidden units = coefficient * window_len
    long train_size = 8000;     // hours of history used for training
    int window_len = 24;
    double learning_rate = 1e-3;
    std::uint64_t seed = 0;

    int hidden_units() const { return units_coefficient * window_len; }
    int patience_epochs() const;
    void validate() const;
};

struct MinMax {
    double min = 0.0;
    double max = 1.0;

    double normalize(double v) const { return (v - min) / (max - min); }
    double denormalize(double u) const { return min + u * (max - min); }
};

/// Per-layer gate parameters, gate blocks ordered [i | f | g | o] along the
/// 4H axis. W: input x 4H, U: H x 4H, b: 4H.
struct LstmLayerParams {
    Eigen::MatrixXd W;
    Eigen::MatrixXd U;
    Eigen::RowVectorXd b;
};

struct LstmWeights {
    std::vector<LstmLayerParams> layers;
    Eigen::VectorXd head_w;
    double head_b = 0.0;
};

struct LstmModel {
    NetworkConfig config;
    LstmHyperParams hyper;
    MinMax normalization;
    LstmWeights weights;
    int trained_epochs = 0;
    double best_val_loss = 0.0;
};

/// Sliding-window supervision: row i holds values[i .. i+window_len) with
/// target values[i + window_len], all min-max normalized. Chronological order
/// is preserved.
struct SupervisedBatch {
    Eigen::MatrixXd inputs;   // samples x window_len
    Eigen::VectorXd targets;  // samples
};

MinMax training_extrema(std::span<const double> values);
SupervisedBatch make_supervised(const TimeSeries& series, int window_len, const MinMax& scale,
                                int step = 1);

/// One cell step on a batch: i,f,o = logistic, g = tanh, c = f.c + i.g,
/// h = o.tanh(c). Exposed for the hand-arithmetic oracle tests.
void lstm_cell_forward(const Eigen::MatrixXd& x, const Eigen::MatrixXd& h_prev,
                       const Eigen::MatrixXd& c_prev, const LstmLayerParams& params,
                       Eigen::MatrixXd& h_out, Eigen::MatrixXd& c_out);

LstmModel train_lstm(const TimeSeries& series, const NetworkConfig& config,
                     const LstmHyperParams& hyper);

/// Recursive multi-step forecast; each one-step prediction is appended to the
/// input window. Output is denormalized and clamped at zero.
std::vector<double> forecast_lstm(const LstmModel& model, const TimeSeries& recent, int horizon);

/// Dropout-free MSE of the model on a batch.
double evaluate_loss(const LstmModel& model, const SupervisedBatch& batch);

/// Max relative error between analytic BPTT gradients and central finite
/// differences (eps 1e-5) over every parameter, dropout disabled.
double gradient_check(const LstmModel& model, const SupervisedBatch& batch);

/// Seeded Glorot-uniform initialization (forget-gate bias 1).
LstmWeights init_weights(const NetworkConfig& config, const LstmHyperParams& hyper);

void save_lstm(const LstmModel& model, const std::string& path);
LstmModel load_lstm(const std::string& path);

std::string to_string(LstmKind kind);
LstmKind lstm_kind_from_string(const std::string& name);

}  // namespace airq
