#pragma once

#include "morrey/grid.hpp"

namespace morrey {

/// Integral of |x - y|^{-(n+sp)} over R^n minus the box [-B, B]^n for a point
/// x strictly inside the box. B is the cell-union half-extent L + h/2: every
/// node owns an h-cell, so the quadrature complement starts half a cell past
/// the outermost nodes (the literal [-L, L]^n complement would diverge at
/// boundary nodes). Accurate to ~1e-11 relative.
double tail_integral(int n, double sp, double B, const Point& x);

/// tail_integral for a lattice node, with B = L + h/2.
double tail_integral(const Lattice& lat, int node);

}  // namespace morrey
