#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "glyphcipher/errors.hpp"
#include "glyphcipher/segment.hpp"

// Two-layer feed-forward classifier (35 -> H -> 26), logistic activations,
// MSE loss, full-batch gradient descent with momentum and an optional
// adaptive learning rate.

namespace glyphcipher {

inline constexpr int kInputSize = kFeatureCount; // 35
inline constexpr int kClassCount = 26;

struct Mlp {
    int hidden = 0;
    std::vector<double> w1; // hidden x 35, row-major
    std::vector<double> b1; // hidden
    std::vector<double> w2; // 26 x hidden, row-major
    std::vector<double> b2; // 26
};

// Weights uniform in [-0.5, 0.5] from the seeded generator, biases zero.
inline Mlp init_mlp(int hidden, std::uint64_t seed) {
    if (hidden < 1) throw std::invalid_argument("init_mlp: hidden size must be >= 1");
    std::mt19937_64 rng(seed);
    auto draw = [&rng] {
        // top 53 bits -> [0, 1), identical on every platform
        return static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    };
    Mlp net;
    net.hidden = hidden;
    net.w1.resize(static_cast<std::size_t>(hidden) * kInputSize);
    net.b1.assign(static_cast<std::size_t>(hidden), 0.0);
    net.w2.resize(static_cast<std::size_t>(kClassCount) * hidden);
    net.b2.assign(kClassCount, 0.0);
    for (auto& w : net.w1) w = draw();
    for (auto& w : net.w2) w = draw();
    return net;
}

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct Activations {
    std::vector<double> hidden;
    std::vector<double> output;
};

inline Activations forward(const Mlp& net, std::span<const double> x) {
    if (static_cast<int>(x.size()) != kInputSize)
        throw std::invalid_argument("forward: input length must be 35");
    Activations act;
    act.hidden.resize(static_cast<std::size_t>(net.hidden));
    for (int i = 0; i < net.hidden; ++i) {
        double z = net.b1[static_cast<std::size_t>(i)];
        const double* row = &net.w1[static_cast<std::size_t>(i) * kInputSize];
        for (int j = 0; j < kInputSize; ++j) z += row[j] * x[static_cast<std::size_t>(j)];
        act.hidden[static_cast<std::size_t>(i)] = logistic(z);
    }
    act.output.resize(kClassCount);
    for (int k = 0; k < kClassCount; ++k) {
        double z = net.b2[static_cast<std::size_t>(k)];
        const double* row = &net.w2[static_cast<std::size_t>(k) * net.hidden];
        for (int i = 0; i < net.hidden; ++i) z += row[i] * act.hidden[static_cast<std::size_t>(i)];
        act.output[static_cast<std::size_t>(k)] = logistic(z);
    }
    return act;
}

struct Dataset {
    std::vector<FeatureVector> inputs;
    std::vector<std::array<double, kClassCount>> targets; // one-hot

    std::size_t size() const { return inputs.size(); }
};

inline std::array<double, kClassCount> one_hot(int cls) {
    if (cls < 0 || cls >= kClassCount) throw std::invalid_argument("one_hot: class out of [0, 26)");
    std::array<double, kClassCount> t{};
    t[static_cast<std::size_t>(cls)] = 1.0;
    return t;
}

// Mean over all samples and all 26 output units of the squared error.
inline double mse(const Mlp& net, const Dataset& data) {
    if (data.size() == 0) throw std::invalid_argument("mse: empty dataset");
    if (data.targets.size() != data.inputs.size())
        throw std::invalid_argument("mse: input/target count mismatch");
    double sum = 0.0;
    for (std::size_t s = 0; s < data.size(); ++s) {
        const Activations act = forward(net, data.inputs[s]);
        for (int k = 0; k < kClassCount; ++k) {
            const double e = act.output[static_cast<std::size_t>(k)] - data.targets[s][static_cast<std::size_t>(k)];
            sum += e * e;
        }
    }
    return sum / (static_cast<double>(data.size()) * kClassCount);
}

struct Gradients {
    std::vector<double> w1, b1, w2, b2;
};

// Exact analytic gradient of mse() over the full batch.
inline Gradients grad_backprop(const Mlp& net, const Dataset& data) {
    if (data.size() == 0) throw std::invalid_argument("grad_backprop: empty dataset");
    Gradients g;
    g.w1.assign(net.w1.size(), 0.0);
    g.b1.assign(net.b1.size(), 0.0);
    g.w2.assign(net.w2.size(), 0.0);
    g.b2.assign(net.b2.size(), 0.0);
    const double scale = 2.0 / (static_cast<double>(data.size()) * kClassCount);
    std::vector<double> delta_out(kClassCount), delta_hidden(static_cast<std::size_t>(net.hidden));
    for (std::size_t s = 0; s < data.size(); ++s) {
        const auto& x = data.inputs[s];
        const Activations act = forward(net, x);
        for (int k = 0; k < kClassCount; ++k) {
            const double y = act.output[static_cast<std::size_t>(k)];
            delta_out[static_cast<std::size_t>(k)] =
                scale * (y - data.targets[s][static_cast<std::size_t>(k)]) * y * (1.0 - y);
        }
        for (int i = 0; i < net.hidden; ++i) {
            double back = 0.0;
            for (int k = 0; k < kClassCount; ++k)
                back += net.w2[static_cast<std::size_t>(k) * net.hidden + i] * delta_out[static_cast<std::size_t>(k)];
            const double h = act.hidden[static_cast<std::size_t>(i)];
            delta_hidden[static_cast<std::size_t>(i)] = back * h * (1.0 - h);
        }
        for (int k = 0; k < kClassCount; ++k) {
            const double d = delta_out[static_cast<std::size_t>(k)];
            g.b2[static_cast<std::size_t>(k)] += d;
            double* row = &g.w2[static_cast<std::size_t>(k) * net.hidden];
            for (int i = 0; i < net.hidden; ++i) row[i] += d * act.hidden[static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < net.hidden; ++i) {
            const double d = delta_hidden[static_cast<std::size_t>(i)];
            g.b1[static_cast<std::size_t>(i)] += d;
            double* row = &g.w1[static_cast<std::size_t>(i) * kInputSize];
            for (int j = 0; j < kInputSize; ++j) row[j] += d * x[static_cast<std::size_t>(j)];
        }
    }
    return g;
}

enum class Trainer { adaptive, momentum };

struct TrainConfig {
    double learning_rate = 0.01;
    double momentum = 0.9;
    double lr_increase = 1.05;      // applied after an improving epoch
    double lr_decrease = 0.7;       // applied after a discarded epoch
    double max_perf_increase = 1.04; // worst tolerated MSE growth per epoch
    double goal = 0.1;              // stop once MSE <= goal
    int max_epochs = 1000;
    std::uint64_t seed = 0;         // used by callers that derive init/corpus seeds
    Trainer trainer = Trainer::adaptive;

    void validate() const {
        if (goal <= 0.0) throw std::invalid_argument("TrainConfig: goal must be > 0");
        if (max_epochs < 1) throw std::invalid_argument("TrainConfig: max_epochs must be >= 1");
        if (learning_rate <= 0.0 || lr_increase <= 0.0 || lr_decrease <= 0.0 ||
            max_perf_increase <= 0.0)
            throw std::invalid_argument("TrainConfig: rates and factors must be > 0");
        if (momentum < 0.0 || momentum >= 1.0)
            throw std::invalid_argument("TrainConfig: momentum must be in [0, 1)");
    }
};

struct TrainResult {
    std::vector<double> history; // history[0] = initial MSE, then one entry per epoch
    int epochs = 0;
    bool goal_met = false;
    double final_mse = 0.0;
    double final_learning_rate = 0.0;
};

// Full-batch updates: step = momentum * previous step - lr * gradient.
// The adaptive variant discards a step whose MSE exceeds
// old * max_perf_increase (shrinking lr and resetting the momentum
// memory) and grows lr after every improving epoch. Deterministic.
inline TrainResult train(Mlp& net, const Dataset& data, const TrainConfig& cfg) {
    cfg.validate();
    TrainResult res;
    double lr = cfg.learning_rate;
    double current = mse(net, data);
    res.history.push_back(current);

    struct Step {
        std::vector<double> w1, b1, w2, b2;
    } vel{std::vector<double>(net.w1.size(), 0.0), std::vector<double>(net.b1.size(), 0.0),
          std::vector<double>(net.w2.size(), 0.0), std::vector<double>(net.b2.size(), 0.0)};

    auto update = [](std::vector<double>& w, std::vector<double>& v,
                     const std::vector<double>& g, double m, double rate) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            v[i] = m * v[i] - rate * g[i];
            w[i] += v[i];
        }
    };
    auto rollback = [](std::vector<double>& w, const std::vector<double>& v) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= v[i];
    };

    while (current > cfg.goal && res.epochs < cfg.max_epochs) {
        const Gradients g = grad_backprop(net, data);
        update(net.w1, vel.w1, g.w1, cfg.momentum, lr);
        update(net.b1, vel.b1, g.b1, cfg.momentum, lr);
        update(net.w2, vel.w2, g.w2, cfg.momentum, lr);
        update(net.b2, vel.b2, g.b2, cfg.momentum, lr);
        ++res.epochs;

        const double next = mse(net, data);
        if (!std::isfinite(next))
            throw TrainingDivergedError("training diverged to non-finite MSE at epoch " +
                                        std::to_string(res.epochs));
        if (cfg.trainer == Trainer::adaptive && next > current * cfg.max_perf_increase) {
            rollback(net.w1, vel.w1);
            rollback(net.b1, vel.b1);
            rollback(net.w2, vel.w2);
            rollback(net.b2, vel.b2);
            std::fill(vel.w1.begin(), vel.w1.end(), 0.0);
            std::fill(vel.b1.begin(), vel.b1.end(), 0.0);
            std::fill(vel.w2.begin(), vel.w2.end(), 0.0);
            std::fill(vel.b2.begin(), vel.b2.end(), 0.0);
            lr *= cfg.lr_decrease;
        } else {
            if (cfg.trainer == Trainer::adaptive && next < current) lr *= cfg.lr_increase;
            current = next;
        }
        res.history.push_back(current);
    }

    res.goal_met = current <= cfg.goal;
    res.final_mse = current;
    res.final_learning_rate = lr;
    return res;
}

inline int argmax_index(std::span<const double> values) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(values.size()); ++i)
        if (values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(best)]) best = i;
    return best;
}

// Winning class in [0, 25]; ties break to the lowest index.
inline int classify(const Mlp& net, std::span<const double> x) {
    return argmax_index(forward(net, x).output);
}

// Model file: "mlp 35 <H> 26", then W1 rows, b1, W2 rows, b2,
// one whitespace-separated row per line.
inline void save_model(const Mlp& net, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open model file for writing: " + path.string());
    out << "mlp " << kInputSize << ' ' << net.hidden << ' ' << kClassCount << '\n';
    out << std::setprecision(17);
    auto row = [&out](const double* v, int n) {
        for (int i = 0; i < n; ++i) out << (i ? " " : "") << v[i];
        out << '\n';
    };
    for (int i = 0; i < net.hidden; ++i) row(&net.w1[static_cast<std::size_t>(i) * kInputSize], kInputSize);
    row(net.b1.data(), net.hidden);
    for (int k = 0; k < kClassCount; ++k) row(&net.w2[static_cast<std::size_t>(k) * net.hidden], net.hidden);
    row(net.b2.data(), kClassCount);
    if (!out) throw FormatError("failed writing model file: " + path.string());
}

inline Mlp load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open model file: " + path.string());
    std::string magic;
    int input = 0, hidden = 0, output = 0;
    if (!(in >> magic >> input >> hidden >> output) || magic != "mlp")
        throw FormatError("model file " + path.string() + ": missing 'mlp 35 <H> 26' header");
    if (input != kInputSize || output != kClassCount || hidden < 1)
        throw FormatError("model file " + path.string() + ": dimensions must be 35 <H>=1.. 26");
    Mlp net;
    net.hidden = hidden;
    net.w1.resize(static_cast<std::size_t>(hidden) * kInputSize);
    net.b1.resize(static_cast<std::size_t>(hidden));
    net.w2.resize(static_cast<std::size_t>(kClassCount) * hidden);
    net.b2.resize(kClassCount);
    auto read_all = [&](std::vector<double>& v, const char* what) {
        for (auto& x : v)
            if (!(in >> x))
                throw FormatError("model file " + path.string() + ": truncated reading " + what);
    };
    read_all(net.w1, "hidden weights");
    read_all(net.b1, "hidden biases");
    read_all(net.w2, "output weights");
    read_all(net.b2, "output biases");
    return net;
}

} // namespace glyphcipher
