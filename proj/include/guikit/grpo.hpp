#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace guikit {

struct GRPOConfig {
    double epsilon = 0.2;  // clip width
    double beta = 0.04;    // KL coefficient
    int group_size = 8;

    void check() const {
        if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be > 0");
        if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
        if (group_size < 2) throw std::invalid_argument("group_size must be >= 2");
    }
};

// Group-relative advantages: standardize each reward against the group mean
// and population standard deviation. A zero-variance group carries no learning
// signal and maps to all-zero advantages.
inline std::vector<double> group_advantages(const std::vector<double>& rewards) {
    const std::size_t n = rewards.size();
    if (n < 2) throw std::invalid_argument("group_advantages: group too small");

    double mean = 0.0;
    for (double r : rewards) mean += r;
    mean /= static_cast<double>(n);

    double var = 0.0;
    for (double r : rewards) var += (r - mean) * (r - mean);
    var /= static_cast<double>(n);

    std::vector<double> adv(n, 0.0);
    if (var > 0.0) {
        const double sd = std::sqrt(var);
        for (std::size_t i = 0; i < n; ++i) adv[i] = (rewards[i] - mean) / sd;
    }
    return adv;
}

// Per-token KL via the k3 estimator: exp(d) - d - 1 with d = logp_ref - logp_theta.
// Non-negative for all finite inputs, zero iff the log-probs agree.
inline double token_kl(double logp_theta, double logp_ref) {
    const double d = logp_ref - logp_theta;
    return std::exp(d) - d - 1.0;
}

// Log-probabilities of one sampled response under the three policies involved
// in the update.
struct TokenSequenceLogProbs {
    std::vector<double> theta;      // current policy
    std::vector<double> theta_old;  // behavior policy
    std::vector<double> ref;        // frozen reference

    std::size_t length() const { return theta.size(); }
    bool consistent() const {
        return theta.size() == theta_old.size() && theta.size() == ref.size() &&
               !theta.empty();
    }
};

struct ResponseTerm {
    TokenSequenceLogProbs logprobs;
    double advantage = 0.0;  // broadcast to every token of the response
};

// Clipped surrogate with KL penalty, averaged per token within each response
// and across the group.
inline double grpo_objective(const std::vector<ResponseTerm>& group,
                             const GRPOConfig& config) {
    config.check();
    if (group.empty()) throw std::invalid_argument("grpo_objective: empty group");

    double total = 0.0;
    for (const auto& resp : group) {
        if (!resp.logprobs.consistent())
            throw std::invalid_argument("grpo_objective: log-prob shape mismatch");
        const std::size_t len = resp.logprobs.length();
        double acc = 0.0;
        for (std::size_t t = 0; t < len; ++t) {
            const double ratio =
                std::exp(resp.logprobs.theta[t] - resp.logprobs.theta_old[t]);
            const double clipped =
                std::clamp(ratio, 1.0 - config.epsilon, 1.0 + config.epsilon);
            const double surrogate =
                std::min(ratio * resp.advantage, clipped * resp.advantage);
            acc += surrogate -
                   config.beta * token_kl(resp.logprobs.theta[t], resp.logprobs.ref[t]);
        }
        total += acc / static_cast<double>(len);
    }
    return total / static_cast<double>(group.size());
}

}  // namespace guikit
