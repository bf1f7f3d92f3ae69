#include <fstream>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/lstm.hpp"

namespace airq {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
    json data = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (static_cast<Eigen::Index>(data.size()) != rows * cols)
        fail(ErrorKind::Parse, "checkpoint: tensor shape mismatch");
    Eigen::MatrixXd m(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[k++].get<double>();
    return m;
}

constexpr int kCheckpointVersion = 1;

}  // namespace

void save_lstm(const LstmModel& model, const std::string& path) {
    json j;
    j["format"] = "airq-lstm";
    j["version"] = kCheckpointVersion;
    j["config"] = to_string(model.config.kind);
    const auto& h = model.hyper;
    j["hyper"] = {{"epochs_max", h.epochs_max},
                  {"patience_fraction", h.patience_fraction},
                  {"validation_hours", h.validation_hours},
                  {"dropout", h.dropout},
                  {"recurrent_dropout", h.recurrent_dropout},
                  {"batch_size", h.batch_size},
                  {"stateful", h.stateful},
                  {"units_coefficient", h.units_coefficient},
                  {"train_size", h.train_size},
                  {"window_len", h.window_len},
                  {"learning_rate", h.learning_rate},
                  {"seed", h.seed}};
    j["normalization"] = {{"min", model.normalization.min}, {"max", model.normalization.max}};
    j["trained_epochs"] = model.trained_epochs;
    j["best_val_loss"] = model.best_val_loss;

    json layers = json::array();
    for (const auto& layer : model.weights.layers) {
        layers.push_back({{"W", matrix_to_json(layer.W)},
                          {"U", matrix_to_json(layer.U)},
                          {"b", matrix_to_json(layer.b)}});
    }
    j["weights"] = {{"layers", std::move(layers)},
                    {"head_w", matrix_to_json(model.weights.head_w)},
                    {"head_b", model.weights.head_b}};

    std::ofstream out(path);
    if (!out) fail(ErrorKind::Io, "cannot write " + path);
    out << j.dump(2) << '\n';
    out.flush();
    if (!out) fail(ErrorKind::Io, "write failed for " + path);
}

LstmModel load_lstm(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, std::string("checkpoint: ") + e.what());
    }
    try {
        if (j.at("format") != "airq-lstm" || j.at("version") != kCheckpointVersion)
            fail(ErrorKind::Parse, "checkpoint: unsupported format or version");
        LstmModel model;
        model.config.kind = lstm_kind_from_string(j.at("config").get<std::string>());
        const auto& h = j.at("hyper");
        model.hyper.epochs_max = h.at("epochs_max").get<int>();
        model.hyper.patience_fraction = h.at("patience_fraction").get<double>();
        model.hyper.validation_hours = h.at("validation_hours").get<int>();
        model.hyper.dropout = h.at("dropout").get<double>();
        model.hyper.recurrent_dropout = h.at("recurrent_dropout").get<double>();
        model.hyper.batch_size = h.at("batch_size").get<int>();
        model.hyper.stateful = h.at("stateful").get<bool>();
        model.hyper.units_coefficient = h.at("units_coefficient").get<int>();
        model.hyper.train_size = h.at("train_size").get<long>();
        model.hyper.window_len = h.at("window_len").get<int>();
        model.hyper.learning_rate = h.at("learning_rate").get<double>();
        model.hyper.seed = h.at("seed").get<std::uint64_t>();
        model.normalization.min = j.at("normalization").at("min").get<double>();
        model.normalization.max = j.at("normalization").at("max").get<double>();
        model.trained_epochs = j.at("trained_epochs").get<int>();
        model.best_val_loss = j.at("best_val_loss").get<double>();
        for (const auto& layer : j.at("weights").at("layers")) {
            LstmLayerParams p;
            p.W = matrix_from_json(layer.at("W"));
            p.U = matrix_from_json(layer.at("U"));
            p.b = matrix_from_json(layer.at("b")).row(0);
            model.weights.layers.push_back(std::move(p));
        }
        model.weights.head_w = matrix_from_json(j.at("weights").at("head_w")).col(0);
        model.weights.head_b = j.at("weights").at("head_b").get<double>();
        return model;
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, std::string("checkpoint: ") + e.what());
    }
}

}  // namespace airq
