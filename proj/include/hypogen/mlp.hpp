#pragma once
// Minimal dense MLP for binary probability estimation: ReLU hidden layers,
// logistic output, Adam training with L2 weight decay. Deterministic under
// a fixed seed; exact JSON round-trip. Also hosts feature standardization.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hypogen/errors.hpp"
#include "hypogen/jsonl.hpp"
#include "hypogen/rng.hpp"

namespace hypogen {

struct FeatureScaler {
    std::vector<double> mean;
    std::vector<double> stdev;

    static FeatureScaler fit(const std::vector<std::vector<double>>& rows) {
        if (rows.empty()) throw_error(ErrorKind::Argument, "cannot fit scaler on empty data");
        size_t d = rows[0].size();
        FeatureScaler s;
        s.mean.assign(d, 0.0);
        s.stdev.assign(d, 0.0);
        for (const auto& r : rows) {
            if (r.size() != d) throw_error(ErrorKind::Argument, "inconsistent feature width");
            for (size_t j = 0; j < d; ++j) s.mean[j] += r[j];
        }
        for (double& m : s.mean) m /= static_cast<double>(rows.size());
        for (const auto& r : rows) {
            for (size_t j = 0; j < d; ++j) {
                double dv = r[j] - s.mean[j];
                s.stdev[j] += dv * dv;
            }
        }
        for (double& v : s.stdev) {
            v = std::sqrt(v / static_cast<double>(rows.size()));
            if (v < 1e-12) v = 1.0;  // constant feature: pass through centered
        }
        return s;
    }

    std::vector<double> apply(const std::vector<double>& x) const {
        if (x.size() != mean.size()) throw_error(ErrorKind::Argument, "feature width mismatch in scaler");
        std::vector<double> out(x.size());
        for (size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - mean[j]) / stdev[j];
        return out;
    }

    json to_json() const { return json{{"mean", mean}, {"stdev", stdev}}; }
    static FeatureScaler from_json(const json& j) {
        FeatureScaler s;
        s.mean = j.at("mean").get<std::vector<double>>();
        s.stdev = j.at("stdev").get<std::vector<double>>();
        return s;
    }
};

struct TrainOptions {
    size_t epochs = 200;
    double learning_rate = 0.01;
    double l2 = 1e-4;  // weight decay on weights (not biases)
};

class Mlp {
  public:
    Mlp() = default;

    // Glorot-uniform initialization under the seed. sizes = {in, h1, ..., 1}.
    Mlp(std::vector<size_t> sizes, uint64_t seed) : sizes_(std::move(sizes)) {
        check_sizes();
        Rng rng(seed);
        alloc();
        for (size_t l = 0; l + 1 < sizes_.size(); ++l) {
            double r = std::sqrt(6.0 / static_cast<double>(sizes_[l] + sizes_[l + 1]));
            for (double& w : weights_[l]) w = (2.0 * rng.unit() - 1.0) * r;
        }
    }

    // All-zero parameters: with no hidden layer this is plain logistic
    // regression with a convex loss, so the optimum is seed-independent.
    static Mlp zeros(std::vector<size_t> sizes) {
        Mlp m;
        m.sizes_ = std::move(sizes);
        m.check_sizes();
        m.alloc();
        return m;
    }

    size_t input_dim() const { return sizes_.empty() ? 0 : sizes_.front(); }

    double predict(const std::vector<double>& x) const {
        if (x.size() != input_dim()) throw_error(ErrorKind::Argument, "feature width mismatch in MLP");
        std::vector<double> a = x;
        for (size_t l = 0; l + 1 < sizes_.size(); ++l) {
            std::vector<double> z = affine(l, a);
            if (l + 2 < sizes_.size()) {
                for (double& v : z) v = v > 0.0 ? v : 0.0;  // ReLU
            }
            a = std::move(z);
        }
        return sigmoid(a[0]);
    }

    // Full-batch Adam on binary cross-entropy; returns the final epoch's
    // regularized mean loss.
    double train(const std::vector<std::vector<double>>& xs, const std::vector<int>& ys,
                 const TrainOptions& opts = {}) {
        if (xs.empty() || xs.size() != ys.size()) {
            throw_error(ErrorKind::Argument, "training data empty or size-mismatched");
        }
        size_t n_layers = sizes_.size() - 1;
        auto zero_like = [&](std::vector<std::vector<double>>& m, std::vector<std::vector<double>>& b) {
            m.assign(n_layers, {});
            b.assign(n_layers, {});
            for (size_t l = 0; l < n_layers; ++l) {
                m[l].assign(weights_[l].size(), 0.0);
                b[l].assign(biases_[l].size(), 0.0);
            }
        };
        std::vector<std::vector<double>> mw, mb, vw, vb;
        zero_like(mw, mb);
        zero_like(vw, vb);

        const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
        double inv_n = 1.0 / static_cast<double>(xs.size());
        double loss = 0.0;

        std::vector<std::vector<double>> gw(n_layers), gb(n_layers);
        for (size_t epoch = 1; epoch <= opts.epochs; ++epoch) {
            for (size_t l = 0; l < n_layers; ++l) {
                gw[l].assign(weights_[l].size(), 0.0);
                gb[l].assign(biases_[l].size(), 0.0);
            }
            loss = 0.0;

            for (size_t i = 0; i < xs.size(); ++i) {
                // Forward, keeping activations.
                std::vector<std::vector<double>> acts;
                acts.push_back(xs[i]);
                for (size_t l = 0; l < n_layers; ++l) {
                    std::vector<double> z = affine(l, acts.back());
                    if (l + 1 < n_layers) {
                        for (double& v : z) v = v > 0.0 ? v : 0.0;
                    }
                    acts.push_back(std::move(z));
                }
                double p = sigmoid(acts.back()[0]);
                double y = ys[i] ? 1.0 : 0.0;
                loss -= (y * std::log(std::max(p, 1e-15)) + (1.0 - y) * std::log(std::max(1.0 - p, 1e-15)));

                // Backward. dL/dz_out = p - y for sigmoid + BCE.
                std::vector<double> delta = {p - y};
                for (size_t l = n_layers; l-- > 0;) {
                    const auto& a_in = acts[l];
                    size_t in = sizes_[l], out = sizes_[l + 1];
                    for (size_t o = 0; o < out; ++o) {
                        gb[l][o] += delta[o];
                        for (size_t j = 0; j < in; ++j) gw[l][o * in + j] += delta[o] * a_in[j];
                    }
                    if (l == 0) break;
                    std::vector<double> prev(in, 0.0);
                    for (size_t j = 0; j < in; ++j) {
                        double s = 0.0;
                        for (size_t o = 0; o < out; ++o) s += weights_[l][o * in + j] * delta[o];
                        prev[j] = acts[l][j] > 0.0 ? s : 0.0;  // ReLU gate
                    }
                    delta = std::move(prev);
                }
            }

            loss *= inv_n;
            double t = static_cast<double>(epoch);
            for (size_t l = 0; l < n_layers; ++l) {
                for (size_t k = 0; k < weights_[l].size(); ++k) {
                    double g = gw[l][k] * inv_n + opts.l2 * weights_[l][k];
                    loss += 0.5 * opts.l2 * weights_[l][k] * weights_[l][k] / static_cast<double>(n_layers);
                    adam_step(weights_[l][k], mw[l][k], vw[l][k], g, t, opts.learning_rate, b1, b2, eps);
                }
                for (size_t k = 0; k < biases_[l].size(); ++k) {
                    adam_step(biases_[l][k], mb[l][k], vb[l][k], gb[l][k] * inv_n, t, opts.learning_rate,
                              b1, b2, eps);
                }
            }
        }
        return loss;
    }

    json to_json() const {
        json j;
        j["sizes"] = sizes_;
        j["weights"] = weights_;
        j["biases"] = biases_;
        return j;
    }

    static Mlp from_json(const json& j) {
        Mlp m;
        m.sizes_ = j.at("sizes").get<std::vector<size_t>>();
        m.check_sizes();
        m.weights_ = j.at("weights").get<std::vector<std::vector<double>>>();
        m.biases_ = j.at("biases").get<std::vector<std::vector<double>>>();
        for (size_t l = 0; l + 1 < m.sizes_.size(); ++l) {
            if (m.weights_[l].size() != m.sizes_[l] * m.sizes_[l + 1] ||
                m.biases_[l].size() != m.sizes_[l + 1]) {
                throw_error(ErrorKind::Parse, "MLP parameter shapes do not match layer sizes");
            }
        }
        return m;
    }

  private:
    void check_sizes() const {
        if (sizes_.size() < 2) throw_error(ErrorKind::Argument, "MLP needs at least input and output sizes");
        if (sizes_.back() != 1) throw_error(ErrorKind::Argument, "MLP output layer must have width 1");
        for (size_t s : sizes_) {
            if (s == 0) throw_error(ErrorKind::Argument, "MLP layer width must be positive");
        }
    }

    void alloc() {
        weights_.assign(sizes_.size() - 1, {});
        biases_.assign(sizes_.size() - 1, {});
        for (size_t l = 0; l + 1 < sizes_.size(); ++l) {
            weights_[l].assign(sizes_[l] * sizes_[l + 1], 0.0);
            biases_[l].assign(sizes_[l + 1], 0.0);
        }
    }

    std::vector<double> affine(size_t l, const std::vector<double>& a) const {
        size_t in = sizes_[l], out = sizes_[l + 1];
        std::vector<double> z(out);
        for (size_t o = 0; o < out; ++o) {
            double s = biases_[l][o];
            const double* w = &weights_[l][o * in];
            for (size_t j = 0; j < in; ++j) s += w[j] * a[j];
            z[o] = s;
        }
        return z;
    }

    static double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

    static void adam_step(double& w, double& m, double& v, double g, double t, double lr, double b1,
                          double b2, double eps) {
        m = b1 * m + (1.0 - b1) * g;
        v = b2 * v + (1.0 - b2) * g * g;
        double mhat = m / (1.0 - std::pow(b1, t));
        double vhat = v / (1.0 - std::pow(b2, t));
        w -= lr * mhat / (std::sqrt(vhat) + eps);
    }

    std::vector<size_t> sizes_;
    std::vector<std::vector<double>> weights_;  // row-major out×in per layer
    std::vector<std::vector<double>> biases_;
};

}  // namespace hypogen
