#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ergopt/errors.hpp"
#include "ergopt/rational.hpp"

namespace ergopt {

/// Max-plus over exact rationals; nullopt is bottom.
using TropQ = std::optional<Rational>;

inline TropQ oplusq(const TropQ& a, const TropQ& b) {
    if (!a) return b;
    if (!b) return a;
    return *a > *b ? a : b;
}

inline TropQ otimesq(const TropQ& a, const TropQ& b) {
    if (!a || !b) return std::nullopt;
    return *a + *b;
}

/// Floyd-Warshall closure over exact rationals; walks of length >= 1, then
/// the diagonal is set to 0. Cycles must be exactly nonpositive.
inline std::vector<std::vector<TropQ>> star_exact(std::vector<std::vector<TropQ>> m) {
    const int n = static_cast<int>(m.size());
    for (int w = 0; w < n; ++w)
        for (int u = 0; u < n; ++u) {
            if (!m[u][w]) continue;
            for (int v = 0; v < n; ++v) m[u][v] = oplusq(m[u][v], otimesq(m[u][w], m[w][v]));
        }
    for (int v = 0; v < n; ++v) {
        if (m[v][v] && m[v][v]->sign() > 0)
            throw Error("exact star: positive cycle through vertex " + std::to_string(v));
        m[v][v] = Rational(0);
    }
    return m;
}

} // namespace ergopt
