#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pirlift/lifted.hpp"

namespace pirlift {

/// Scheme description parsed from a config file: one `key value...` pair
/// per line, `#` comments. Keys: kind (secret_sharing | geometrical |
/// explicit), N, K, T, M, q, r, seed, pipeline (lifted | oneshot),
/// validate (0|1), `generator` followed by K rows, `lambda` followed by
/// N rows, `mixed` followed by the mixed positions on the same line.
struct SchemeConfig {
    std::string kind = "secret_sharing";
    int N = 0, K = 1, T = 1, M = 2;
    std::uint32_t q = 3;
    int r = -1; // -1: determined by kind
    std::uint64_t seed = 1;
    std::string pipeline = "lifted";
    bool validate = true;
    std::optional<std::vector<std::vector<long long>>> generator;
    std::optional<std::vector<std::vector<long long>>> lambda;
    std::vector<int> mixed;

    static SchemeConfig parse(const std::string& text);
    static SchemeConfig load(const std::string& path);
    std::string to_text() const;
};

/// Build the one-shot scheme the config describes.
OneShotScheme build_scheme(const SchemeConfig& cfg);

/// Build the full M-message decoding plan (symbolic matrix + scheme).
DecodingPlan build_plan_for(const SchemeConfig& cfg);

} // namespace pirlift
