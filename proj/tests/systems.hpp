#pragma once

#include "morseflow/hybrid.hpp"

namespace testsys {

using namespace morseflow;

// (1-x)(1+x)(-1/2-x) and (1-x)(1+x)(1/2-x)
inline const VectorField field_a = VectorField::polynomial({-0.5, -1.0, 0.5, 1.0});
inline const VectorField field_b = VectorField::polynomial({0.5, -1.0, -0.5, 1.0});

// (1-x^2)(x+1/2)^2 and (1-x^2)(x-1/2)^2
inline const VectorField saddle_1 = VectorField::polynomial({0.25, 1.0, 0.75, -1.0, -1.0});
inline const VectorField saddle_2 = VectorField::polynomial({0.25, -1.0, 0.75, 1.0, -1.0});

inline HybridSystem flicker_system(double h)
{
    return HybridSystem(DirectedGraph(2, {{0, 1}, {1, 0}}), {field_a, field_b}, StateSpace::interval(-1, 1), h);
}

inline HybridSystem morse_system(double h = 1.0)
{
    return HybridSystem(DirectedGraph::complete(2, true), {saddle_1, saddle_2}, StateSpace::interval(-1, 1), h);
}

} // namespace testsys
