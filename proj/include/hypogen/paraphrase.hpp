#pragma once
// Pattern-breaking paraphrase stage. The paraphrase model is external;
// this module owns the request shape, output bounding, and the
// still-patterned flag. Batch calls fan out over a bounded thread count.

#include <atomic>
#include <string>
#include <thread>
#include <vector>

#include "hypogen/errors.hpp"
#include "hypogen/prompt_parser.hpp"
#include "hypogen/text.hpp"

namespace hypogen {

struct ParaphraseRequest {
    std::string sentence;
    std::string syntax_control;  // passed through opaquely; may be empty
    size_t n_outputs = 1;
    uint64_t seed = 0;
};

struct ParaphraseAdapter {
    virtual ~ParaphraseAdapter() = default;
    virtual std::vector<std::string> paraphrase(const ParaphraseRequest& req) = 0;
};

// Test stub: hands the sentence back unchanged.
struct EchoAdapter : ParaphraseAdapter {
    std::vector<std::string> paraphrase(const ParaphraseRequest& req) override {
        return {req.sentence};
    }
};

struct ParaphraseResult {
    std::string text;
    bool still_patterned = false;  // paraphrase failed to break the pattern
};

inline std::vector<ParaphraseResult> paraphrase_hyperbole(const ParaphraseRequest& req,
                                                          ParaphraseAdapter& adapter) {
    if (normalize_ws(req.sentence).empty()) {
        throw_error(ErrorKind::Argument, "cannot paraphrase empty sentence");
    }
    if (req.n_outputs < 1) throw_error(ErrorKind::Argument, "n_outputs must be >= 1");

    std::vector<std::string> raw;
    try {
        raw = adapter.paraphrase(req);
    } catch (const std::exception& e) {
        throw Error(ErrorKind::Paraphrase, std::string("paraphrase adapter failed: ") + e.what());
    }
    if (raw.size() > req.n_outputs) raw.resize(req.n_outputs);

    std::vector<ParaphraseResult> out;
    out.reserve(raw.size());
    for (auto& text : raw) out.push_back({text, is_so_that(text)});
    return out;
}

// Independent per-sentence adapter calls, at most `concurrency` in flight.
// Results keep input order; the first failure wins and is rethrown.
inline std::vector<std::vector<ParaphraseResult>> paraphrase_batch(
    const std::vector<ParaphraseRequest>& reqs, ParaphraseAdapter& adapter, size_t concurrency = 4) {
    if (concurrency < 1) throw_error(ErrorKind::Argument, "concurrency must be >= 1");
    std::vector<std::vector<ParaphraseResult>> results(reqs.size());
    if (reqs.empty()) return results;

    std::atomic<size_t> next{0};
    std::vector<std::string> failures(reqs.size());
    std::atomic<bool> failed{false};

    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= reqs.size()) return;
            try {
                results[i] = paraphrase_hyperbole(reqs[i], adapter);
            } catch (const std::exception& e) {
                failures[i] = e.what();
                failed.store(true);
            }
        }
    };

    size_t n_threads = std::min(concurrency, reqs.size());
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    if (failed.load()) {
        for (size_t i = 0; i < failures.size(); ++i) {
            if (!failures[i].empty()) throw Error(ErrorKind::Paraphrase, failures[i]);
        }
    }
    return results;
}

}  // namespace hypogen
