#pragma once

#include <cstdint>
#include <random>

#include "diffalg/levi_civita.hpp"
#include "diffalg/rational.hpp"

namespace testsupport {

// Seeded draws via modulo on mt19937_64 output: the engine's stream is
// pinned by the standard, so results are identical on every platform
// (uniform_int_distribution is not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    long pick(long lo, long hi) {
        return lo + static_cast<long>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    diffalg::Rational rational(long num_mag = 6, long den_max = 4) {
        const long num = pick(-num_mag, num_mag);
        const long den = pick(1, den_max);
        return diffalg::Rational(num, den);
    }

    diffalg::Rational nonzero_rational(long num_mag = 6, long den_max = 4) {
        long num = pick(1, num_mag);
        if (pick(0, 1) == 1) num = -num;
        return diffalg::Rational(num, pick(1, den_max));
    }

    // Random series with exponents in [lo_exp, hi_exp]; exact window unless
    // allow_window, in which case roughly a third get a finite one.
    diffalg::LeviCivitaNumber lc(int lo_exp = -4, int hi_exp = 6, bool allow_window = true) {
        diffalg::LeviCivitaNumber::Terms t;
        const long n = pick(0, 4);
        for (long i = 0; i < n; ++i) t[static_cast<int>(pick(lo_exp, hi_exp))] = rational();
        diffalg::LeviCivitaNumber::Window w;
        if (allow_window && pick(0, 2) == 0) w = static_cast<int>(pick(hi_exp, hi_exp + 4));
        return diffalg::LeviCivitaNumber::from_terms(std::move(t), w);
    }

    diffalg::LeviCivitaNumber lc_nonzero(int lo_exp = -4, int hi_exp = 6,
                                         bool allow_window = true) {
        for (;;) {
            auto v = lc(lo_exp, hi_exp, allow_window);
            if (!v.is_zero_within_window()) return v;
        }
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

}  // namespace testsupport
