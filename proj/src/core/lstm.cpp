#include "core/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace airq {

namespace {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

MatrixXd sigmoid(const MatrixXd& z) { return (1.0 / (1.0 + (-z.array()).exp())).matrix(); }

/// Inverted-dropout masks, fixed across the timesteps of a sequence. Empty
/// matrix = mask disabled.
struct Masks {
    MatrixXd x;
    MatrixXd h;
    bool has_x() const { return x.size() > 0; }
    bool has_h() const { return h.size() > 0; }
};

struct StepCache {
    MatrixXd x;      // post-dropout input actually fed to W
    MatrixXd hprev;  // post-recurrent-dropout state fed to U
    MatrixXd cprev;
    MatrixXd i, f, g, o, c, tanhc, h;
};

struct LayerRun {
    std::vector<StepCache> steps;
    MatrixXd h_final, c_final;
};

struct LayerGrads {
    MatrixXd dW, dU;
    RowVectorXd db;
};

struct NetGrads {
    std::vector<LayerGrads> layers;
    VectorXd d_head_w;
    double d_head_b = 0.0;
};

struct NetState {
    std::vector<MatrixXd> h, c;  // per layer, batch x H
};

void step_forward(const LstmLayerParams& P, const MatrixXd& x, const MatrixXd& hprev_raw,
                  const MatrixXd& cprev, const Masks* masks, StepCache& out) {
    const auto H = static_cast<int>(P.U.rows());
    MatrixXd xd = (masks && masks->has_x()) ? x.cwiseProduct(masks->x) : x;
    MatrixXd hd = (masks && masks->has_h()) ? hprev_raw.cwiseProduct(masks->h) : hprev_raw;
    MatrixXd Z = xd * P.W + hd * P.U;
    Z.rowwise() += P.b;
    out.x = std::move(xd);
    out.hprev = std::move(hd);
    out.cprev = cprev;
    out.i = sigmoid(Z.middleCols(0, H));
    out.f = sigmoid(Z.middleCols(H, H));
    out.g = Z.middleCols(2 * H, H).array().tanh().matrix();
    out.o = sigmoid(Z.middleCols(3 * H, H));
    out.c = out.f.cwiseProduct(cprev) + out.i.cwiseProduct(out.g);
    out.tanhc = out.c.array().tanh().matrix();
    out.h = out.o.cwiseProduct(out.tanhc);
}

LayerRun run_layer(const LstmLayerParams& P, const std::vector<MatrixXd>& xs,
                   const Masks* masks, const MatrixXd* h0, const MatrixXd* c0) {
    const auto B = static_cast<int>(xs.front().rows());
    const auto H = static_cast<int>(P.U.rows());
    LayerRun run;
    run.steps.resize(xs.size());
    MatrixXd h = h0 ? *h0 : MatrixXd::Zero(B, H);
    MatrixXd c = c0 ? *c0 : MatrixXd::Zero(B, H);
    for (std::size_t t = 0; t < xs.size(); ++t) {
        step_forward(P, xs[t], h, c, masks, run.steps[t]);
        h = run.steps[t].h;
        c = run.steps[t].c;
    }
    run.h_final = std::move(h);
    run.c_final = std::move(c);
    return run;
}

/// BPTT over one layer. dh_ext holds external gradients per step (empty
/// matrix = none). Returns gradients w.r.t. the raw per-step inputs.
std::vector<MatrixXd> backprop_layer(const LstmLayerParams& P, const LayerRun& run,
                                     const std::vector<MatrixXd>& dh_ext, const Masks* masks,
                                     LayerGrads& g) {
    const auto T = run.steps.size();
    const auto B = static_cast<int>(run.steps.front().h.rows());
    const auto H = static_cast<int>(P.U.rows());
    g.dW = MatrixXd::Zero(P.W.rows(), P.W.cols());
    g.dU = MatrixXd::Zero(P.U.rows(), P.U.cols());
    g.db = RowVectorXd::Zero(P.b.size());

    std::vector<MatrixXd> dx(T);
    MatrixXd dh_next = MatrixXd::Zero(B, H);
    MatrixXd dc_next = MatrixXd::Zero(B, H);

    for (std::size_t ti = T; ti-- > 0;) {
        const StepCache& S = run.steps[ti];
        MatrixXd dh = dh_next;
        if (ti < dh_ext.size() && dh_ext[ti].size() > 0) dh += dh_ext[ti];

        MatrixXd do_ = dh.cwiseProduct(S.tanhc);
        MatrixXd dc =
            (dh.array() * S.o.array() * (1.0 - S.tanhc.array().square())).matrix() + dc_next;
        MatrixXd di = dc.cwiseProduct(S.g);
        MatrixXd dg = dc.cwiseProduct(S.i);
        MatrixXd df = dc.cwiseProduct(S.cprev);
        dc_next = dc.cwiseProduct(S.f);

        MatrixXd dZ(B, 4 * H);
        dZ.middleCols(0, H) = (di.array() * S.i.array() * (1.0 - S.i.array())).matrix();
        dZ.middleCols(H, H) = (df.array() * S.f.array() * (1.0 - S.f.array())).matrix();
        dZ.middleCols(2 * H, H) = (dg.array() * (1.0 - S.g.array().square())).matrix();
        dZ.middleCols(3 * H, H) = (do_.array() * S.o.array() * (1.0 - S.o.array())).matrix();

        g.dW.noalias() += S.x.transpose() * dZ;
        g.dU.noalias() += S.hprev.transpose() * dZ;
        g.db += dZ.colwise().sum();

        MatrixXd dxd = dZ * P.W.transpose();
        dx[ti] = (masks && masks->has_x()) ? dxd.cwiseProduct(masks->x).eval() : std::move(dxd);
        MatrixXd dhd = dZ * P.U.transpose();
        dh_next = (masks && masks->has_h()) ? dhd.cwiseProduct(masks->h).eval() : std::move(dhd);
    }
    return dx;
}

std::vector<MatrixXd> to_steps(const MatrixXd& X) {
    std::vector<MatrixXd> xs(static_cast<std::size_t>(X.cols()));
    for (Eigen::Index t = 0; t < X.cols(); ++t) xs[static_cast<std::size_t>(t)] = X.col(t);
    return xs;
}

struct ForwardResult {
    VectorXd pred;
    std::vector<LayerRun> runs;
    MatrixXd head_in;
};

const Masks* mask_at(const std::vector<Masks>* masks, std::size_t i) {
    return (masks && i < masks->size()) ? &(*masks)[i] : nullptr;
}

ForwardResult forward_network(const LstmWeights& W, const NetworkConfig& cfg, const MatrixXd& X,
                              const std::vector<Masks>* masks, NetState* state) {
    ForwardResult fr;
    auto xs = to_steps(X);
    switch (cfg.kind) {
        case LstmKind::Simple: {
            const MatrixXd* h0 = state ? &state->h[0] : nullptr;
            const MatrixXd* c0 = state ? &state->c[0] : nullptr;
            fr.runs.push_back(run_layer(W.layers[0], xs, mask_at(masks, 0), h0, c0));
            if (state) {
                state->h[0] = fr.runs[0].h_final;
                state->c[0] = fr.runs[0].c_final;
            }
            fr.head_in = fr.runs[0].h_final;
            break;
        }
        case LstmKind::Stacked: {
            const MatrixXd* h0 = state ? &state->h[0] : nullptr;
            const MatrixXd* c0 = state ? &state->c[0] : nullptr;
            fr.runs.push_back(run_layer(W.layers[0], xs, mask_at(masks, 0), h0, c0));
            std::vector<MatrixXd> hs;
            hs.reserve(xs.size());
            for (const auto& s : fr.runs[0].steps) hs.push_back(s.h);
            const MatrixXd* h1 = state ? &state->h[1] : nullptr;
            const MatrixXd* c1 = state ? &state->c[1] : nullptr;
            fr.runs.push_back(run_layer(W.layers[1], hs, mask_at(masks, 1), h1, c1));
            if (state) {
                state->h[0] = fr.runs[0].h_final;
                state->c[0] = fr.runs[0].c_final;
                state->h[1] = fr.runs[1].h_final;
                state->c[1] = fr.runs[1].c_final;
            }
            fr.head_in = fr.runs[1].h_final;
            break;
        }
        case LstmKind::Bidirectional: {
            fr.runs.push_back(run_layer(W.layers[0], xs, mask_at(masks, 0), nullptr, nullptr));
            std::vector<MatrixXd> rxs(xs.rbegin(), xs.rend());
            fr.runs.push_back(run_layer(W.layers[1], rxs, mask_at(masks, 1), nullptr, nullptr));
            const auto H = fr.runs[0].h_final.cols();
            fr.head_in.resize(fr.runs[0].h_final.rows(), 2 * H);
            fr.head_in.leftCols(H) = fr.runs[0].h_final;
            fr.head_in.rightCols(H) = fr.runs[1].h_final;
            break;
        }
        case LstmKind::EncoderDecoder: {
            fr.runs.push_back(run_layer(W.layers[0], xs, mask_at(masks, 0), nullptr, nullptr));
            std::vector<MatrixXd> dec_in{fr.runs[0].h_final};
            fr.runs.push_back(
                run_layer(W.layers[1], dec_in, mask_at(masks, 1), nullptr, nullptr));
            fr.head_in = fr.runs[1].h_final;
            break;
        }
    }
    fr.pred = fr.head_in * W.head_w;
    fr.pred.array() += W.head_b;
    return fr;
}

NetGrads backward_network(const LstmWeights& W, const NetworkConfig& cfg,
                          const ForwardResult& fr, const VectorXd& dpred,
                          const std::vector<Masks>* masks) {
    NetGrads g;
    g.layers.resize(W.layers.size());
    g.d_head_w = fr.head_in.transpose() * dpred;
    g.d_head_b = dpred.sum();
    MatrixXd dhead_in = dpred * W.head_w.transpose();

    switch (cfg.kind) {
        case LstmKind::Simple: {
            const auto T = fr.runs[0].steps.size();
            std::vector<MatrixXd> dh_ext(T);
            dh_ext[T - 1] = dhead_in;
            backprop_layer(W.layers[0], fr.runs[0], dh_ext, mask_at(masks, 0), g.layers[0]);
            break;
        }
        case LstmKind::Stacked: {
            const auto T = fr.runs[1].steps.size();
            std::vector<MatrixXd> dh_ext(T);
            dh_ext[T - 1] = dhead_in;
            auto dx1 = backprop_layer(W.layers[1], fr.runs[1], dh_ext, mask_at(masks, 1),
                                      g.layers[1]);
            backprop_layer(W.layers[0], fr.runs[0], dx1, mask_at(masks, 0), g.layers[0]);
            break;
        }
        case LstmKind::Bidirectional: {
            const auto T = fr.runs[0].steps.size();
            const auto H = static_cast<int>(W.layers[0].U.rows());
            std::vector<MatrixXd> dh_f(T), dh_b(T);
            dh_f[T - 1] = dhead_in.leftCols(H);
            dh_b[T - 1] = dhead_in.rightCols(H);
            backprop_layer(W.layers[0], fr.runs[0], dh_f, mask_at(masks, 0), g.layers[0]);
            backprop_layer(W.layers[1], fr.runs[1], dh_b, mask_at(masks, 1), g.layers[1]);
            break;
        }
        case LstmKind::EncoderDecoder: {
            std::vector<MatrixXd> dh_dec(1);
            dh_dec[0] = dhead_in;
            auto dx_dec = backprop_layer(W.layers[1], fr.runs[1], dh_dec, mask_at(masks, 1),
                                         g.layers[1]);
            const auto T = fr.runs[0].steps.size();
            std::vector<MatrixXd> dh_enc(T);
            dh_enc[T - 1] = dx_dec[0];
            backprop_layer(W.layers[0], fr.runs[0], dh_enc, mask_at(masks, 0), g.layers[0]);
            break;
        }
    }
    return g;
}

/// (input_size, hidden) per layer for each topology.
std::vector<std::pair<int, int>> layer_dims(const NetworkConfig& cfg, int H) {
    switch (cfg.kind) {
        case LstmKind::Simple:
            return {{1, H}};
        case LstmKind::Stacked:
            return {{1, H}, {H, H}};
        case LstmKind::Bidirectional:
            return {{1, H}, {1, H}};
        case LstmKind::EncoderDecoder:
            return {{1, H}, {H, H}};
    }
    return {};
}

int head_input_dim(const NetworkConfig& cfg, int H) {
    return cfg.kind == LstmKind::Bidirectional ? 2 * H : H;
}

MatrixXd glorot(Rng& rng, int rows, int cols, int fan_in, int fan_out) {
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = (2.0 * rng.uniform01() - 1.0) * limit;
    return m;
}

LstmWeights init_weights_from(Rng& rng, const NetworkConfig& cfg, int H) {
    LstmWeights w;
    for (const auto& [in, hidden] : layer_dims(cfg, H)) {
        LstmLayerParams layer;
        layer.W = glorot(rng, in, 4 * hidden, in, 4 * hidden);
        layer.U = glorot(rng, hidden, 4 * hidden, hidden, 4 * hidden);
        layer.b = RowVectorXd::Zero(4 * hidden);
        layer.b.segment(hidden, hidden).setOnes();  // forget-gate bias
        w.layers.push_back(std::move(layer));
    }
    const int hin = head_input_dim(cfg, H);
    w.head_w = glorot(rng, hin, 1, hin, 1).col(0);
    w.head_b = 0.0;
    return w;
}

std::vector<Masks> draw_masks(Rng& rng, const NetworkConfig& cfg, const LstmHyperParams& hp,
                              int B) {
    std::vector<Masks> masks;
    const double keep_x = 1.0 - hp.dropout;
    const double keep_h = 1.0 - hp.recurrent_dropout;
    for (const auto& [in, hidden] : layer_dims(cfg, hp.hidden_units())) {
        Masks m;
        if (hp.dropout > 0.0) {
            m.x.resize(B, in);
            for (int r = 0; r < B; ++r)
                for (int c = 0; c < in; ++c)
                    m.x(r, c) = rng.bernoulli(keep_x) ? 1.0 / keep_x : 0.0;
        }
        if (hp.recurrent_dropout > 0.0) {
            m.h.resize(B, hidden);
            for (int r = 0; r < B; ++r)
                for (int c = 0; c < hidden; ++c)
                    m.h(r, c) = rng.bernoulli(keep_h) ? 1.0 / keep_h : 0.0;
        }
        masks.push_back(std::move(m));
    }
    return masks;
}

struct ParamView {
    double* data;
    Eigen::Index n;
};

std::vector<ParamView> param_views(LstmWeights& w) {
    std::vector<ParamView> v;
    for (auto& layer : w.layers) {
        v.push_back({layer.W.data(), layer.W.size()});
        v.push_back({layer.U.data(), layer.U.size()});
        v.push_back({layer.b.data(), layer.b.size()});
    }
    v.push_back({w.head_w.data(), w.head_w.size()});
    v.push_back({&w.head_b, 1});
    return v;
}

std::vector<ParamView> grad_views(NetGrads& g) {
    std::vector<ParamView> v;
    for (auto& layer : g.layers) {
        v.push_back({layer.dW.data(), layer.dW.size()});
        v.push_back({layer.dU.data(), layer.dU.size()});
        v.push_back({layer.db.data(), layer.db.size()});
    }
    v.push_back({g.d_head_w.data(), g.d_head_w.size()});
    v.push_back({&g.d_head_b, 1});
    return v;
}

class Adam {
public:
    Adam(double lr, const std::vector<ParamView>& params) : lr_(lr) {
        for (const auto& p : params) {
            m_.emplace_back(VectorXd::Zero(p.n));
            v_.emplace_back(VectorXd::Zero(p.n));
        }
    }

    void step(const std::vector<ParamView>& params, const std::vector<ParamView>& grads) {
        ++t_;
        const double bc1 = 1.0 - std::pow(beta1_, t_);
        const double bc2 = 1.0 - std::pow(beta2_, t_);
        for (std::size_t i = 0; i < params.size(); ++i) {
            for (Eigen::Index j = 0; j < params[i].n; ++j) {
                const double gj = grads[i].data[j];
                double& mj = m_[i][j];
                double& vj = v_[i][j];
                mj = beta1_ * mj + (1.0 - beta1_) * gj;
                vj = beta2_ * vj + (1.0 - beta2_) * gj * gj;
                params[i].data[j] -= lr_ * (mj / bc1) / (std::sqrt(vj / bc2) + eps_);
            }
        }
    }

private:
    double lr_;
    double beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
    int t_ = 0;
    std::vector<VectorXd> m_, v_;
};

double mse_and_grad(const VectorXd& pred, const VectorXd& targets, VectorXd* dpred) {
    const VectorXd diff = pred - targets;
    const auto B = static_cast<double>(pred.size());
    if (dpred) *dpred = (2.0 / B) * diff;
    return diff.squaredNorm() / B;
}

double forward_loss(const LstmWeights& w, const NetworkConfig& cfg, const MatrixXd& inputs,
                    const VectorXd& targets) {
    const auto fr = forward_network(w, cfg, inputs, nullptr, nullptr);
    return mse_and_grad(fr.pred, targets, nullptr);
}

}  // namespace

int LstmHyperParams::patience_epochs() const {
    return std::max(1, static_cast<int>(std::lround(patience_fraction * epochs_max)));
}

void LstmHyperParams::validate() const {
    const bool rates_ok = dropout >= 0.0 && dropout < 1.0 && recurrent_dropout >= 0.0 &&
                          recurrent_dropout < 1.0 && patience_fraction >= 0.0 &&
                          patience_fraction <= 1.0;
    if (!rates_ok) fail(ErrorKind::InvalidArgument, "LstmHyperParams: rate outside [0, 1)");
    if (batch_size < 1 || window_len < 1 || hidden_units() < 1 || epochs_max < 1 ||
        validation_hours < 1 || train_size < 1)
        fail(ErrorKind::InvalidArgument, "LstmHyperParams: non-positive size");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
        fail(ErrorKind::InvalidArgument, "LstmHyperParams: learning_rate must be positive");
}

MinMax training_extrema(std::span<const double> values) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo))
        fail(ErrorKind::DegenerateScale, "training_extrema: constant series, max == min");
    return {lo, hi};
}

SupervisedBatch make_supervised(const TimeSeries& series, int window_len, const MinMax& scale,
                                int step) {
    if (!series.gap_free())
        fail(ErrorKind::InvalidArgument, "make_supervised: series has gaps");
    if (window_len < 1 || step < 1)
        fail(ErrorKind::InvalidArgument, "make_supervised: window_len and step must be >= 1");
    const auto values = series.dense_values();
    const auto n = values.size();
    const auto w = static_cast<std::size_t>(window_len);
    if (n <= w)
        fail(ErrorKind::InsufficientData,
             "make_supervised: need more than window_len observations");

    const std::size_t count = (n - 1 - w) / static_cast<std::size_t>(step) + 1;
    SupervisedBatch batch;
    batch.inputs.resize(static_cast<Eigen::Index>(count), window_len);
    batch.targets.resize(static_cast<Eigen::Index>(count));
    for (std::size_t r = 0; r < count; ++r) {
        const std::size_t base = r * static_cast<std::size_t>(step);
        for (std::size_t c = 0; c < w; ++c)
            batch.inputs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                scale.normalize(values[base + c]);
        batch.targets(static_cast<Eigen::Index>(r)) = scale.normalize(values[base + w]);
    }
    return batch;
}

void lstm_cell_forward(const MatrixXd& x, const MatrixXd& h_prev, const MatrixXd& c_prev,
                       const LstmLayerParams& params, MatrixXd& h_out, MatrixXd& c_out) {
    const auto H = params.U.rows();
    if (params.W.cols() != 4 * H || params.b.size() != 4 * H || x.cols() != params.W.rows() ||
        h_prev.cols() != H || c_prev.cols() != H || h_prev.rows() != x.rows() ||
        c_prev.rows() != x.rows())
        fail(ErrorKind::Shape, "lstm_cell_forward: inconsistent shapes");
    StepCache s;
    step_forward(params, x, h_prev, c_prev, nullptr, s);
    h_out = std::move(s.h);
    c_out = std::move(s.c);
}

LstmWeights init_weights(const NetworkConfig& config, const LstmHyperParams& hyper) {
    Rng rng(hyper.seed);
    return init_weights_from(rng, config, hyper.hidden_units());
}

LstmModel train_lstm(const TimeSeries& series, const NetworkConfig& config,
                     const LstmHyperParams& hyper) {
    hyper.validate();
    if (!series.gap_free()) fail(ErrorKind::InvalidArgument, "train_lstm: series has gaps");
    const auto values = series.dense_values();
    const auto n = values.size();
    const auto w = static_cast<std::size_t>(hyper.window_len);
    const auto v_hours = static_cast<std::size_t>(hyper.validation_hours);
    if (n < w + v_hours + 1)
        fail(ErrorKind::InsufficientData,
             "train_lstm: need at least window_len + validation_hours + 1 = " +
                 std::to_string(w + v_hours + 1) + " observations, have " + std::to_string(n));

    // extrema come from the fitted span only; the held-out tail stays unseen
    const MinMax scale =
        training_extrema(std::span<const double>(values.data(), n - v_hours));
    const SupervisedBatch all = make_supervised(series, hyper.window_len, scale, 1);
    const auto total = static_cast<std::size_t>(all.inputs.rows());
    const std::size_t val_count = std::min(v_hours, total);
    const std::size_t train_count = total - val_count;

    const SupervisedBatch val{
        all.inputs.bottomRows(static_cast<Eigen::Index>(val_count)),
        all.targets.tail(static_cast<Eigen::Index>(val_count))};

    const auto batch_len = std::min<std::size_t>(static_cast<std::size_t>(hyper.batch_size),
                                                 train_count);
    // stateful lanes need a constant batch shape; the remainder is dropped
    const std::size_t n_batches = std::max<std::size_t>(1, train_count / batch_len);

    Rng rng(hyper.seed);
    LstmWeights weights = init_weights_from(rng, config, hyper.hidden_units());

    auto views = param_views(weights);
    Adam adam(hyper.learning_rate, views);

    const bool carries_state =
        hyper.stateful &&
        (config.kind == LstmKind::Simple || config.kind == LstmKind::Stacked);
    const bool any_dropout = hyper.dropout > 0.0 || hyper.recurrent_dropout > 0.0;

    LstmWeights best_weights = weights;
    double best_val = std::numeric_limits<double>::infinity();
    int stale = 0;
    int epochs_run = 0;
    const int patience = hyper.patience_epochs();

    for (int epoch = 0; epoch < hyper.epochs_max; ++epoch) {
        NetState state;
        if (carries_state) {
            const int H = hyper.hidden_units();
            state.h.assign(static_cast<std::size_t>(config.layer_count()),
                           MatrixXd::Zero(static_cast<Eigen::Index>(batch_len), H));
            state.c = state.h;
        }
        for (std::size_t b = 0; b < n_batches; ++b) {
            const auto row0 = static_cast<Eigen::Index>(b * batch_len);
            const MatrixXd inputs = all.inputs.middleRows(row0, static_cast<Eigen::Index>(batch_len));
            const VectorXd targets = all.targets.segment(row0, static_cast<Eigen::Index>(batch_len));

            std::vector<Masks> masks;
            if (any_dropout)
                masks = draw_masks(rng, config, hyper, static_cast<int>(batch_len));

            auto fr = forward_network(weights, config, inputs,
                                      any_dropout ? &masks : nullptr,
                                      carries_state ? &state : nullptr);
            VectorXd dpred;
            const double loss = mse_and_grad(fr.pred, targets, &dpred);
            if (!std::isfinite(loss))
                fail(ErrorKind::Divergence, "train_lstm: non-finite training loss");

            NetGrads grads = backward_network(weights, config, fr, dpred,
                                              any_dropout ? &masks : nullptr);
            adam.step(views, grad_views(grads));
        }

        const double val_loss = forward_loss(weights, config, val.inputs, val.targets);
        if (!std::isfinite(val_loss))
            fail(ErrorKind::Divergence, "train_lstm: non-finite validation loss");
        epochs_run = epoch + 1;
        if (val_loss < best_val) {
            best_val = val_loss;
            best_weights = weights;
            stale = 0;
        } else if (++stale >= patience) {
            break;
        }
    }

    LstmModel model;
    model.config = config;
    model.hyper = hyper;
    model.normalization = scale;
    model.weights = std::move(best_weights);
    model.trained_epochs = epochs_run;
    model.best_val_loss = best_val;
    return model;
}

std::vector<double> forecast_lstm(const LstmModel& model, const TimeSeries& recent,
                                  int horizon) {
    if (horizon < 1) fail(ErrorKind::InvalidHorizon, "forecast_lstm: horizon must be >= 1");
    if (!recent.gap_free())
        fail(ErrorKind::InvalidArgument, "forecast_lstm: recent window has gaps");
    const auto w = static_cast<std::size_t>(model.hyper.window_len);
    if (recent.size() < w)
        fail(ErrorKind::InsufficientData, "forecast_lstm: need the last " + std::to_string(w) +
                                              " observations");
    const auto values = recent.dense_values();
    std::vector<double> window(values.end() - static_cast<std::ptrdiff_t>(w), values.end());
    for (double& v : window) v = model.normalization.normalize(v);

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(horizon));
    MatrixXd inputs(1, static_cast<Eigen::Index>(w));
    for (int h = 0; h < horizon; ++h) {
        for (std::size_t c = 0; c < w; ++c) inputs(0, static_cast<Eigen::Index>(c)) = window[c];
        const auto fr = forward_network(model.weights, model.config, inputs, nullptr, nullptr);
        const double yhat = fr.pred(0);
        out.push_back(std::max(0.0, model.normalization.denormalize(yhat)));
        window.erase(window.begin());
        window.push_back(yhat);
    }
    return out;
}

double evaluate_loss(const LstmModel& model, const SupervisedBatch& batch) {
    return forward_loss(model.weights, model.config, batch.inputs, batch.targets);
}

double gradient_check(const LstmModel& model, const SupervisedBatch& batch) {
    LstmWeights w = model.weights;
    const NetworkConfig& cfg = model.config;

    auto fr = forward_network(w, cfg, batch.inputs, nullptr, nullptr);
    VectorXd dpred;
    mse_and_grad(fr.pred, batch.targets, &dpred);
    NetGrads grads = backward_network(w, cfg, fr, dpred, nullptr);

    auto pv = param_views(w);
    auto gv = grad_views(grads);

    const double eps = 1e-5;
    double max_rel = 0.0;
    for (std::size_t i = 0; i < pv.size(); ++i) {
        for (Eigen::Index j = 0; j < pv[i].n; ++j) {
            double& pj = pv[i].data[j];
            const double saved = pj;
            pj = saved + eps;
            const double lp = forward_loss(w, cfg, batch.inputs, batch.targets);
            pj = saved - eps;
            const double lm = forward_loss(w, cfg, batch.inputs, batch.targets);
            pj = saved;
            const double numeric = (lp - lm) / (2.0 * eps);
            const double analytic = gv[i].data[j];
            const double rel = std::abs(analytic - numeric) /
                               std::max(1e-8, std::abs(analytic) + std::abs(numeric));
            max_rel = std::max(max_rel, rel);
        }
    }
    return max_rel;
}

std::string to_string(LstmKind kind) {
    switch (kind) {
        case LstmKind::Simple:
            return "simple";
        case LstmKind::Stacked:
            return "stacked";
        case LstmKind::Bidirectional:
            return "bidirectional";
        case LstmKind::EncoderDecoder:
            return "encoder-decoder";
    }
    return "simple";
}

LstmKind lstm_kind_from_string(const std::string& name) {
    if (name == "simple") return LstmKind::Simple;
    if (name == "stacked") return LstmKind::Stacked;
    if (name == "bidirectional") return LstmKind::Bidirectional;
    if (name == "encoder-decoder" || name == "encdec") return LstmKind::EncoderDecoder;
    fail(ErrorKind::InvalidArgument, "unknown LSTM configuration: " + name);
}

}  // namespace airq
