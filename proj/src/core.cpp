// SPDX-License-Identifier: Apache-2.0
//
// cachendt: delivery-time bounds and precoding schemes for cache-aided relay networks
// ------------------------------------------------------------------------

#include "cachendt/core.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

namespace cachendt
{
    namespace
    {
        std::int64_t parse_integer(std::string_view text, std::string_view whole)
        {
            std::int64_t value = 0;
            if (!text.empty() && text.front() == '+')
                text.remove_prefix(1);
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
                throw std::invalid_argument("invalid rational literal '" + std::string(whole) + "'");
            return value;
        }

        std::string_view trim(std::string_view s)
        {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
                s.remove_prefix(1);
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
                s.remove_suffix(1);
            return s;
        }

        bool usable_coefficient(cplx c)
        {
            return std::isfinite(c.real()) && std::isfinite(c.imag()) && c != cplx(0.0, 0.0);
        }

        void check_coefficients(const CMatrix &m, const char *name)
        {
            for (Eigen::Index i = 0; i < m.size(); ++i)
                if (!usable_coefficient(m.data()[i]))
                    throw std::invalid_argument(std::string("channel coefficient in ") + name +
                                                " is zero or not finite");
        }
    }

    Rational parse_rational(std::string_view text)
    {
        const std::string_view whole = text;
        text = trim(text);
        if (auto slash = text.find('/'); slash != std::string_view::npos)
        {
            const auto num = parse_integer(trim(text.substr(0, slash)), whole);
            const auto den = parse_integer(trim(text.substr(slash + 1)), whole);
            if (den == 0)
                throw std::invalid_argument("zero denominator in '" + std::string(whole) + "'");
            return Rational(num, den);
        }
        if (auto dot = text.find('.'); dot != std::string_view::npos)
        {
            bool negative = !text.empty() && text.front() == '-';
            std::string_view int_part = text.substr(0, dot);
            std::string_view frac_part = text.substr(dot + 1);
            if (negative || (!int_part.empty() && int_part.front() == '+'))
                int_part.remove_prefix(1);
            if (frac_part.size() > 17 || (int_part.empty() && frac_part.empty()))
                throw std::invalid_argument("invalid rational literal '" + std::string(whole) + "'");
            std::int64_t scale = 1;
            for (std::size_t i = 0; i < frac_part.size(); ++i)
                scale *= 10;
            const std::int64_t ip = int_part.empty() ? 0 : parse_integer(int_part, whole);
            const std::int64_t fp = frac_part.empty() ? 0 : parse_integer(frac_part, whole);
            if (ip < 0 || fp < 0)
                throw std::invalid_argument("invalid rational literal '" + std::string(whole) + "'");
            Rational value = Rational(ip) + Rational(fp, scale);
            return negative ? -value : value;
        }
        return Rational(parse_integer(text, whole));
    }

    std::string to_string(const Rational &value)
    {
        if (value.denominator() == 1)
            return std::to_string(value.numerator());
        return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
    }

    double to_double(const Rational &value)
    {
        return boost::rational_cast<double>(value);
    }

    std::string to_decimal_string(double value)
    {
        if (std::isnan(value))
            return "nan";
        if (std::isinf(value))
            return value > 0 ? "inf" : "-inf";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.15g", value);
        return buf;
    }

    NetworkConfig::NetworkConfig(int relays, int users, int files, Rational mu)
        : relays_(relays), users_(users), files_(files), mu_(mu)
    {
        if (relays < 1 || users < 1 || files < 1)
            throw std::invalid_argument("M, K and N must be positive");
        if (files < relays + users)
            throw std::invalid_argument("library size N must be at least M + K");
        if (mu < 0 || mu > 1)
            throw std::invalid_argument("fractional cache size mu must lie in [0, 1]");
    }

    NetworkConfig NetworkConfig::worst_case(int relays, int users, Rational mu)
    {
        return {relays, users, relays + users, mu};
    }

    ChannelSet::ChannelSet(CMatrix f, CMatrix g, std::vector<CMatrix> h)
        : f_(std::move(f)), g_(std::move(g)), h_(std::move(h))
    {
        if (f_.rows() < 1 || f_.cols() < 1 || g_.cols() < 1)
            throw std::invalid_argument("channel set needs T, M, K >= 1");
        if (g_.rows() != f_.rows() || static_cast<Eigen::Index>(h_.size()) != f_.rows())
            throw std::invalid_argument("channel set slot counts disagree");
        for (const auto &ht : h_)
            if (ht.rows() != g_.cols() || ht.cols() != f_.cols())
                throw std::invalid_argument("RN->UE channel matrix must be K x M");
        check_coefficients(f_, "f");
        check_coefficients(g_, "g");
        for (const auto &ht : h_)
            check_coefficients(ht, "H");
    }

    ChannelSet ChannelSet::slot(int t) const
    {
        if (t < 0 || t >= slots())
            throw std::out_of_range("slot index out of range");
        return ChannelSet(f_.row(t), g_.row(t), {h_[t]});
    }

    std::string to_string(const Receiver &rx)
    {
        return (rx.kind == Receiver::Kind::ue ? "UE" : "RN") + std::to_string(rx.index);
    }

    int DemandVector::file_of(const Receiver &rx, int users) const
    {
        const int pos = rx.kind == Receiver::Kind::ue ? rx.index - 1 : users + rx.index - 1;
        if (rx.index < 1 || pos >= static_cast<int>(entries.size()))
            throw std::out_of_range("receiver not covered by demand vector");
        return entries[pos];
    }

    int mod_bar(int a, int b)
    {
        if (b < 1 || a < 1 || a > 2 * b - 1)
            throw std::invalid_argument("mod_bar requires 1 <= a <= 2b - 1");
        return a <= b ? a : a - b;
    }

    DemandVector worst_case_demand(const NetworkConfig &cfg)
    {
        DemandVector d;
        d.entries.reserve(cfg.users() + cfg.relays());
        for (int u = 1; u <= cfg.users(); ++u)
            d.entries.push_back(u);
        for (int r = 1; r <= cfg.relays(); ++r)
            d.entries.push_back(cfg.users() + r);
        return d;
    }
}
