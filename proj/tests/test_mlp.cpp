#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "hypogen/mlp.hpp"
#include "hypogen/rng.hpp"

using namespace hypogen;

TEST_CASE("zero-weight networks output one half") {
    auto net = Mlp::zeros({4, 8, 4, 1});
    CHECK(net.predict({0.1, -2.0, 3.0, 0.0}) == Catch::Approx(0.5));
    CHECK(net.input_dim() == 4);
}

TEST_CASE("networks validate their shape") {
    CHECK_THROWS_AS(Mlp::zeros({4}), Error);
    CHECK_THROWS_AS(Mlp::zeros({4, 2}), Error);  // output must be width 1
    CHECK_THROWS_AS(Mlp::zeros({}), Error);
    auto net = Mlp::zeros({2, 3, 1});
    CHECK_THROWS_AS(net.predict({1.0}), Error);  // wrong input arity
}

TEST_CASE("training separates a linearly separable cloud") {
    Rng rng(11);
    std::vector<std::vector<double>> xs;
    std::vector<int> ys;
    for (int i = 0; i < 60; ++i) {
        double a = rng.unit(), b = rng.unit();
        xs.push_back({a, b});
        ys.push_back(a + b > 1.0 ? 1 : 0);
    }
    Mlp net({2, 8, 1}, 3);
    TrainOptions opt;
    opt.epochs = 400;
    net.train(xs, ys, opt);
    int correct = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        correct += (net.predict(xs[i]) >= 0.5 ? 1 : 0) == ys[i];
    }
    CHECK(correct >= 57);  // ≥95%
}

TEST_CASE("training reduces the loss") {
    Rng rng(5);
    std::vector<std::vector<double>> xs;
    std::vector<int> ys;
    for (int i = 0; i < 40; ++i) {
        double a = rng.unit();
        xs.push_back({a, rng.unit()});
        ys.push_back(a > 0.5 ? 1 : 0);
    }
    Mlp net({2, 4, 1}, 9);
    TrainOptions probe;
    probe.epochs = 1;
    double first = net.train(xs, ys, probe);
    TrainOptions more;
    more.epochs = 300;
    double last = net.train(xs, ys, more);
    CHECK(last < first);
}

TEST_CASE("networks round-trip through JSON bit-exactly") {
    Mlp net({3, 5, 1}, 21);
    std::vector<std::vector<double>> xs = {{0.1, 0.2, 0.3}, {0.9, -0.4, 0.5}};
    std::vector<int> ys = {0, 1};
    TrainOptions opt;
    opt.epochs = 50;
    net.train(xs, ys, opt);

    auto back = Mlp::from_json(net.to_json());
    for (const auto& x : xs) CHECK(back.predict(x) == net.predict(x));

    auto j = net.to_json();
    j["sizes"] = json::array({3, 4, 1});  // shape mismatch with weights
    CHECK_THROWS_AS(Mlp::from_json(j), Error);
}

TEST_CASE("feature scaling standardizes and round-trips") {
    std::vector<std::vector<double>> xs = {{1.0, 10.0}, {3.0, 10.0}, {5.0, 10.0}};
    auto scaler = FeatureScaler::fit(xs);
    auto z = scaler.apply({3.0, 10.0});
    CHECK(z[0] == Catch::Approx(0.0).margin(1e-12));
    CHECK(z[1] == Catch::Approx(0.0).margin(1e-12));  // zero-variance column maps to 0
    auto lo = scaler.apply({1.0, 10.0});
    CHECK(lo[0] < 0.0);

    auto back = FeatureScaler::from_json(scaler.to_json());
    CHECK(back.apply({5.0, 10.0})[0] == scaler.apply({5.0, 10.0})[0]);
}
