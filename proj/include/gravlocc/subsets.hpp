#pragma once

// Mode subsets J examined by the bound and sensitivity searches.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "gravlocc/config.hpp"
#include "gravlocc/gaussian_core.hpp"

namespace gravlocc {

struct SubsetPolicy {
    enum class Kind { Auto, Exhaustive, Alternating, Random, UserSupplied };

    Kind kind = Kind::Auto;
    int samples = 0;             // Random: number of draws
    std::uint64_t seed = 0;      // Random
    std::vector<std::vector<int>> user;  // UserSupplied, 0-based members

    static SubsetPolicy automatic() { return {}; }
    static SubsetPolicy exhaustive() { return {Kind::Exhaustive, 0, 0, {}}; }
    static SubsetPolicy alternating() { return {Kind::Alternating, 0, 0, {}}; }
    static SubsetPolicy random(int k, std::uint64_t seed) { return {Kind::Random, k, seed, {}}; }
    static SubsetPolicy supplied(std::vector<std::vector<int>> sets) { return {Kind::UserSupplied, 0, 0, std::move(sets)}; }

    friend bool operator==(const SubsetPolicy&, const SubsetPolicy&) = default;
};

// Parses "auto", "exhaustive", "alternating" or "random:k".
inline SubsetPolicy parse_subset_policy(const std::string& s, std::uint64_t seed) {
    if (s == "auto") return SubsetPolicy::automatic();
    if (s == "exhaustive") return SubsetPolicy::exhaustive();
    if (s == "alternating") return SubsetPolicy::alternating();
    if (s.rfind("random:", 0) == 0) {
        const std::string k = s.substr(7);
        if (k.empty() || !std::all_of(k.begin(), k.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw Error(ErrorKind::InvalidArgument, "bad subset policy '" + s + "'");
        const int samples = std::stoi(k);
        if (samples <= 0) throw Error(ErrorKind::InvalidArgument, "random:k needs k >= 1");
        return SubsetPolicy::random(samples, seed);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown subset policy '" + s + "'");
}

inline std::string to_string(const SubsetPolicy& p) {
    switch (p.kind) {
        case SubsetPolicy::Kind::Auto: return "auto";
        case SubsetPolicy::Kind::Exhaustive: return "exhaustive";
        case SubsetPolicy::Kind::Alternating: return "alternating";
        case SubsetPolicy::Kind::Random: return "random:" + std::to_string(p.samples);
        case SubsetPolicy::Kind::UserSupplied: return "user";
    }
    return "auto";
}

// Admissible subsets (1 <= |J| <= n/2) in lexicographic order of their
// sorted member lists. Empty for n = 1, where no bipartition exists.
inline std::vector<SignedModeMask> enumerate_subsets(int n, const SubsetPolicy& policy,
                                                     const Tolerances& tol = default_tolerances()) {
    std::vector<SignedModeMask> out;
    if (n < 2) return out;
    const int half = n / 2;
    auto kind = policy.kind;
    if (kind == SubsetPolicy::Kind::Auto)
        kind = n <= tol.n_exhaustive ? SubsetPolicy::Kind::Exhaustive : SubsetPolicy::Kind::Alternating;

    switch (kind) {
        case SubsetPolicy::Kind::Exhaustive: {
            if (n > 30) throw Error(ErrorKind::InvalidArgument, "exhaustive subset search beyond 30 modes");
            // Depth-first extension yields lexicographic order directly.
            std::vector<int> members;
            auto extend = [&](auto&& self, int next) -> void {
                for (int j = next; j < n; ++j) {
                    members.push_back(j);
                    out.emplace_back(n, members);
                    if (static_cast<int>(members.size()) < half) self(self, j + 1);
                    members.pop_back();
                }
            };
            extend(extend, 0);
            return out;
        }
        case SubsetPolicy::Kind::Alternating: {
            std::vector<int> members;
            for (int j = 0; j < n; j += 2) members.push_back(j);
            SignedModeMask m(n, members);
            // For odd n the odd-indexed set is the smaller side.
            out.push_back(m.size() <= half ? m : m.complement());
            break;
        }
        case SubsetPolicy::Kind::Random: {
            std::mt19937_64 rng(policy.seed);
            std::uniform_int_distribution<int> size_dist(1, half);
            std::vector<int> perm(static_cast<std::size_t>(n));
            for (int s = 0; s < policy.samples; ++s) {
                std::iota(perm.begin(), perm.end(), 0);
                std::shuffle(perm.begin(), perm.end(), rng);
                const int size = size_dist(rng);
                out.emplace_back(n, std::vector<int>(perm.begin(), perm.begin() + size));
            }
            break;
        }
        case SubsetPolicy::Kind::UserSupplied: {
            for (const auto& members : policy.user) {
                SignedModeMask m(n, members);
                if (m.size() == 0 || m.size() == n)
                    throw Error(ErrorKind::InvalidArgument, "user subset must be a proper non-empty subset");
                out.push_back(m.size() <= half ? m : m.complement());
            }
            break;
        }
        case SubsetPolicy::Kind::Auto: break;
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return lex_less(a, b); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.empty()) throw Error(ErrorKind::EmptySubsetPolicy, "policy yields no subsets");
    return out;
}

}  // namespace gravlocc
