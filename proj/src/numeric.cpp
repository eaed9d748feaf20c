#include "arboreal/numeric.hpp"

#include "arboreal/errors.hpp"

#include <cstddef>

namespace arboreal {

Int int_pow(const Int& base, unsigned long exp) {
    Int result = 1;
    Int b = base;
    while (exp > 0) {
        if (exp & 1UL)
            result *= b;
        b *= b;
        exp >>= 1;
    }
    return result;
}

Rat rat_pow(const Rat& base, unsigned long exp) {
    return Rat(int_pow(numerator(base), exp), int_pow(denominator(base), exp));
}

Rat parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos)
            return Rat(Int(text));
        Int num(text.substr(0, slash));
        Int den(text.substr(slash + 1));
        if (den == 0)
            throw ParseError("zero denominator in rational: " + text);
        return Rat(num, den);
    } catch (const std::runtime_error& e) {
        throw ParseError("bad rational literal: " + text);
    }
}

std::string decimal_string(const Rat& value, int digits) {
    Rat v = value;
    std::string sign;
    if (v < 0) {
        sign = "-";
        v = -v;
    }
    Int num = numerator(v);
    Int den = denominator(v);
    Int whole = num / den;
    Int rem = num % den;
    std::string out = sign + whole.str();
    if (digits > 0) {
        out += '.';
        for (int i = 0; i < digits; ++i) {
            rem *= 10;
            out += char('0' + int(rem / den));
            rem %= den;
        }
    }
    return out;
}

std::vector<Rat> solve_linear_system(std::vector<std::vector<Rat>> m,
                                     std::vector<Rat> rhs) {
    const std::size_t n = m.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0)
            ++pivot;
        if (pivot == n)
            throw InvariantViolation("singular system in exact solve");
        std::swap(m[col], m[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        const Rat inv = Rat(1) / m[col][col];
        for (std::size_t j = col; j < n; ++j)
            m[col][j] *= inv;
        rhs[col] *= inv;
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || m[row][col] == 0)
                continue;
            const Rat f = m[row][col];
            for (std::size_t j = col; j < n; ++j)
                m[row][j] -= f * m[col][j];
            rhs[row] -= f * rhs[col];
        }
    }
    return rhs;
}

} // namespace arboreal
