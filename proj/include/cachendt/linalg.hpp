// SPDX-License-Identifier: Apache-2.0
//
// cachendt: delivery-time bounds and precoding schemes for cache-aided relay networks
// ------------------------------------------------------------------------

#ifndef CACHENDT_LINALG_HPP
#define CACHENDT_LINALG_HPP

#include "cachendt/core.hpp"

#include <vector>

namespace cachendt
{
    struct RankInfo
    {
        int rank;
        double gap_ratio;                   // smallest kept / largest discarded; inf if none discarded, 0 if none kept
        std::vector<double> singular_values; // descending
    };

    std::vector<double> singular_values(const CMatrix &a);

    // Numerical rank: singular values >= tol * largest. A zero matrix has rank 0.
    RankInfo rank_with_gap(const CMatrix &a, double tol);

    // Second singular value over the first; 0 for colinear columns (and for the zero matrix).
    double colinearity_residual(const CMatrix &a);

    // Rows scaled to unit norm (zero rows left untouched). Receiver-side per-slot
    // scaling: changes no rank and no span relation between columns.
    CMatrix equilibrate_rows(const CMatrix &a);

    // Orthonormal basis of the dominant rank-r column space.
    CMatrix column_basis(const CMatrix &a, int r);

    // Orthonormal basis of the orthogonal complement of the dominant rank-r column space.
    CMatrix complement_basis(const CMatrix &a, int r);

    CMatrix select_columns(const CMatrix &a, const std::vector<int> &cols);
}

#endif
