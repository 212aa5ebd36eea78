#pragma once

#include <initializer_list>
#include <map>
#include <string>
#include <utility>

#include "ergopt/potential.hpp"
#include "ergopt/sft.hpp"

namespace ergopt::testing {

inline LocallyConstantPotential make_potential(
    int range, std::initializer_list<std::pair<const char*, const char*>> values) {
    std::map<Word, Rational> m;
    for (const auto& [w, v] : values) m.emplace(word_from_string(w), Rational::parse(v));
    return LocallyConstantPotential(range, std::move(m));
}

inline SymbolicSystem full_shift(int d) {
    return SymbolicSystem(d, std::vector<std::vector<int>>(d, std::vector<int>(d, 1)));
}

// The three reference systems used throughout the suite. E2: full 2-shift,
// range 1, values {0: 0, 1: -1}. E3: full 2-shift, range 2, values
// {00: 0, 01: -1, 10: -2, 11: 0}. E4: full 3-shift, range 2, zero on pairs
// within {0,1} and on 22, -1 on pairs mixing {0,1} with 2.
inline LocallyConstantPotential e2_potential() {
    return make_potential(1, {{"0", "0"}, {"1", "-1"}});
}

inline LocallyConstantPotential e3_potential() {
    return make_potential(2, {{"00", "0"}, {"01", "-1"}, {"10", "-2"}, {"11", "0"}});
}

inline LocallyConstantPotential e4_potential() {
    return make_potential(2, {{"00", "0"},
                              {"01", "0"},
                              {"10", "0"},
                              {"11", "0"},
                              {"22", "0"},
                              {"02", "-1"},
                              {"12", "-1"},
                              {"20", "-1"},
                              {"21", "-1"}});
}

inline WeightedEdgeGraph e2_graph() {
    return attach_potential(recode(full_shift(2), 1), e2_potential());
}

inline WeightedEdgeGraph e3_graph() {
    return attach_potential(recode(full_shift(2), 2), e3_potential());
}

inline WeightedEdgeGraph e4_graph() {
    return attach_potential(recode(full_shift(3), 2), e4_potential());
}

} // namespace ergopt::testing
