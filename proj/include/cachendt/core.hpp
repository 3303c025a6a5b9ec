// SPDX-License-Identifier: Apache-2.0
//
// cachendt: delivery-time bounds and precoding schemes for cache-aided relay networks
// ------------------------------------------------------------------------

#ifndef CACHENDT_CORE_HPP
#define CACHENDT_CORE_HPP

#include "cachendt/rational.hpp"

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace cachendt
{
    using cplx = std::complex<double>;
    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;

    // Raised when a channel realization hits a measure-zero degeneracy (vanishing
    // coefficient, determinant or rank). The caller is expected to redraw.
    class DegenerateChannel : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Network dimensions and cache size: M relays (RNs), K users (UEs), N library files,
    // each relay caching a fraction mu of the library.
    class NetworkConfig
    {
    public:
        // Throws std::invalid_argument unless M, K, N >= 1, N >= M + K and 0 <= mu <= 1.
        NetworkConfig(int relays, int users, int files, Rational mu);

        // Smallest library admitting the worst-case demand (N = M + K).
        static NetworkConfig worst_case(int relays, int users, Rational mu = 0);

        int relays() const { return relays_; }
        int users() const { return users_; }
        int files() const { return files_; }
        const Rational &mu() const { return mu_; }

        NetworkConfig with_mu(Rational mu) const { return {relays_, users_, files_, mu}; }

    private:
        int relays_;
        int users_;
        int files_;
        Rational mu_;
    };

    // Per-slot channel coefficients over T slots:
    //   f(t, m)    DeNB -> RN m
    //   g(t, k)    DeNB -> UE k
    //   h[t](k, m) RN m -> UE k
    // Indices are zero-based in storage; the API below speaks one-based node numbers.
    class ChannelSet
    {
    public:
        // Throws std::invalid_argument on inconsistent shapes or non-finite/zero entries.
        ChannelSet(CMatrix f, CMatrix g, std::vector<CMatrix> h);

        int slots() const { return static_cast<int>(f_.rows()); }
        int relays() const { return static_cast<int>(f_.cols()); }
        int users() const { return static_cast<int>(g_.cols()); }

        // t in [0, T), m in [1, M], k in [1, K]
        cplx f(int t, int m) const { return f_(t, m - 1); }
        cplx g(int t, int k) const { return g_(t, k - 1); }
        cplx h(int t, int k, int m) const { return h_[t](k - 1, m - 1); }

        const CMatrix &f_matrix() const { return f_; }
        const CMatrix &g_matrix() const { return g_; }
        const std::vector<CMatrix> &h_matrices() const { return h_; }

        // One-slot view, used to check that per-slot computations only see their own slot.
        ChannelSet slot(int t) const;

    private:
        CMatrix f_;
        CMatrix g_;
        std::vector<CMatrix> h_;
    };

    // A receiving node: UE k (k in [1, K]) or RN r (r in [1, M]).
    struct Receiver
    {
        enum class Kind
        {
            ue,
            rn
        };
        Kind kind = Kind::ue;
        int index = 1;

        static Receiver ue(int k) { return {Kind::ue, k}; }
        static Receiver rn(int r) { return {Kind::rn, r}; }

        bool operator==(const Receiver &) const = default;
    };

    std::string to_string(const Receiver &rx);

    // File indices requested by all M + K nodes, UEs first then RNs.
    struct DemandVector
    {
        std::vector<int> entries;

        int file_of(const Receiver &rx, int users) const;
    };

    // Modified modulo: a if a <= b, else a mod b. Defined for 1 <= a <= 2b - 1 and
    // then always in [1, b]; anything else throws std::invalid_argument.
    int mod_bar(int a, int b);

    // UE u requests file u, RN r requests file K + r.
    DemandVector worst_case_demand(const NetworkConfig &cfg);
}

#endif
