// SPDX-License-Identifier: Apache-2.0
//
// cachendt: delivery-time bounds and precoding schemes for cache-aided relay networks
// ------------------------------------------------------------------------

#include "cachendt/linalg.hpp"

#include <Eigen/SVD>

#include <limits>

namespace cachendt
{
    std::vector<double> singular_values(const CMatrix &a)
    {
        Eigen::JacobiSVD<CMatrix> svd(a);
        const auto &s = svd.singularValues();
        return {s.data(), s.data() + s.size()};
    }

    RankInfo rank_with_gap(const CMatrix &a, double tol)
    {
        if (a.size() == 0)
            throw std::invalid_argument("rank of an empty matrix");
        RankInfo info{0, 0.0, singular_values(a)};
        const auto &s = info.singular_values;
        if (s.front() == 0.0)
            return info;

        const double cut = tol * s.front();
        while (info.rank < static_cast<int>(s.size()) && s[info.rank] >= cut)
            ++info.rank;
        info.gap_ratio = info.rank == static_cast<int>(s.size())
                             ? std::numeric_limits<double>::infinity()
                             : (s[info.rank] == 0.0 ? std::numeric_limits<double>::infinity()
                                                    : s[info.rank - 1] / s[info.rank]);
        return info;
    }

    double colinearity_residual(const CMatrix &a)
    {
        const auto s = singular_values(a);
        if (s.size() < 2 || s.front() == 0.0)
            return 0.0;
        return s[1] / s[0];
    }

    CMatrix equilibrate_rows(const CMatrix &a)
    {
        CMatrix out = a;
        for (Eigen::Index r = 0; r < out.rows(); ++r)
        {
            const double n = out.row(r).norm();
            if (n > 0.0)
                out.row(r) /= n;
        }
        return out;
    }

    CMatrix column_basis(const CMatrix &a, int r)
    {
        Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU);
        return svd.matrixU().leftCols(r);
    }

    CMatrix complement_basis(const CMatrix &a, int r)
    {
        Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU);
        return svd.matrixU().rightCols(a.rows() - r);
    }

    CMatrix select_columns(const CMatrix &a, const std::vector<int> &cols)
    {
        CMatrix out(a.rows(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t i = 0; i < cols.size(); ++i)
            out.col(static_cast<Eigen::Index>(i)) = a.col(cols[i]);
        return out;
    }
}
