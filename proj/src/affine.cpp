#include "arboreal/affine.hpp"

#include "arboreal/errors.hpp"

#include <sstream>

namespace arboreal {

namespace {

Int floor_mod(const Int& value, int modulus) {
    Int r = value % modulus;
    if (r < 0)
        r += modulus;
    return r;
}

bool is_prime(int p) {
    if (p < 2)
        return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0)
            return false;
    return true;
}

} // namespace

IntMat IntMat::identity(int size) {
    IntMat m(size);
    for (int i = 0; i < size; ++i)
        m.at(i, i) = 1;
    return m;
}

IntMat IntMat::elementary(int size, int i, int j, const Int& scalar) {
    if (i < 1 || j < 1 || i > size || j > size || i == j)
        throw BadIndices("elementary matrix needs distinct indices within 1..n");
    IntMat m = identity(size);
    m.at(i - 1, j - 1) = scalar;
    return m;
}

IntMat IntMat::cycle(int size) {
    IntMat m(size);
    for (int i = 0; i + 1 < size; ++i)
        m.at(i + 1, i) = 1;
    m.at(0, size - 1) = (size % 2 == 1) ? 1 : -1;
    return m;
}

IntMat operator*(const IntMat& a, const IntMat& b) {
    if (a.n != b.n)
        throw DegreeMismatch("matrix sizes differ");
    IntMat c(a.n);
    for (int i = 0; i < a.n; ++i)
        for (int k = 0; k < a.n; ++k) {
            const Int& f = a.at(i, k);
            if (f == 0)
                continue;
            for (int j = 0; j < a.n; ++j)
                c.at(i, j) += f * b.at(k, j);
        }
    return c;
}

std::vector<Int> IntMat::apply(const std::vector<Int>& v) const {
    std::vector<Int> out(n, Int(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out[i] += at(i, j) * v[j];
    return out;
}

Int IntMat::determinant() const {
    IntMat m = *this;
    Int denom = 1;
    int sign = 1;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        while (pivot < n && m.at(pivot, col) == 0)
            ++pivot;
        if (pivot == n)
            return 0;
        if (pivot != col) {
            for (int j = 0; j < n; ++j)
                std::swap(m.at(pivot, j), m.at(col, j));
            sign = -sign;
        }
        for (int row = col + 1; row < n; ++row) {
            for (int j = col + 1; j < n; ++j)
                m.at(row, j) = (m.at(row, j) * m.at(col, col) - m.at(row, col) * m.at(col, j)) / denom;
            m.at(row, col) = 0;
        }
        denom = m.at(col, col);
    }
    return sign > 0 ? m.at(n - 1, n - 1) : -m.at(n - 1, n - 1);
}

IntMat IntMat::inverse_unimodular() const {
    if (determinant() != 1)
        throw NotUnimodular("matrix determinant is not 1");
    IntMat adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            IntMat minor(n - 1);
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i)
                    continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == j)
                        continue;
                    minor.at(rr, cc) = at(r, c);
                    ++cc;
                }
                ++rr;
            }
            Int cof = (n == 1) ? Int(1) : minor.determinant();
            if ((i + j) % 2 == 1)
                cof = -cof;
            adj.at(j, i) = cof;
        }
    return adj;
}

std::string IntMat::to_string() const {
    std::string out = "[";
    for (int i = 0; i < n; ++i) {
        if (i)
            out += ',';
        out += '[';
        for (int j = 0; j < n; ++j) {
            if (j)
                out += ',';
            out += at(i, j).str();
        }
        out += ']';
    }
    return out + "]";
}

std::vector<Int> unit_vector(int size, int index) {
    if (index < 1 || index > size)
        throw BadIndices("unit vector index out of range");
    std::vector<Int> v(size, Int(0));
    v[index - 1] = 1;
    return v;
}

AffineElement::AffineElement(int p_, int n_, IntMat a_, std::vector<Int> b_, Ring ring_)
    : p(p_), n(n_), a(std::move(a_)), b(std::move(b_)), ring(ring_) {
    if (!is_prime(p))
        throw BadParameters("modulus " + std::to_string(p) + " is not prime");
    if (n < 1 || a.n != n || static_cast<int>(b.size()) != n)
        throw BadParameters("affine element dimensions are inconsistent");
    if (ring == Ring::ModP) {
        for (auto& e : a.entries)
            e = floor_mod(e, p);
        for (auto& e : b)
            e = floor_mod(e, p);
        if (floor_mod(a.determinant(), p) != 1 % p)
            throw NotUnimodular("matrix determinant is not 1 mod p");
    } else {
        if (a.determinant() != 1)
            throw NotUnimodular("matrix determinant is not 1");
    }
}

AffineElement AffineElement::identity(int p, int n, Ring ring) {
    return AffineElement(p, n, IntMat::identity(n), std::vector<Int>(n, Int(0)), ring);
}

AffineElement AffineElement::translation(int p, int n, std::vector<Int> v, Ring ring) {
    return AffineElement(p, n, IntMat::identity(n), std::move(v), ring);
}

AffineElement AffineElement::compose(const AffineElement& other) const {
    if (p != other.p || n != other.n || ring != other.ring)
        throw AlphabetMismatch("composing affine elements over different domains");
    IntMat m = a * other.a;
    std::vector<Int> v = a.apply(other.b);
    for (int i = 0; i < n; ++i)
        v[i] += b[i];
    return AffineElement(p, n, std::move(m), std::move(v), ring);
}

AffineElement AffineElement::inverse() const {
    if (ring == Ring::Integer) {
        IntMat ainv = a.inverse_unimodular();
        std::vector<Int> v = ainv.apply(b);
        for (auto& e : v)
            e = -e;
        return AffineElement(p, n, std::move(ainv), std::move(v), ring);
    }
    // Mod p: the order of GL_n(F_p) is finite, but the adjugate route stays exact.
    IntMat lift = a;
    Int det = lift.determinant();
    // det = 1 mod p; scale the adjugate by det^-1 mod p.
    IntMat adj(n);
    {
        IntMat full = lift;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                IntMat minor(n - 1);
                for (int r = 0, rr = 0; r < n; ++r) {
                    if (r == i)
                        continue;
                    for (int c = 0, cc = 0; c < n; ++c) {
                        if (c == j)
                            continue;
                        minor.at(rr, cc) = full.at(r, c);
                        ++cc;
                    }
                    ++rr;
                }
                Int cof = (n == 1) ? Int(1) : minor.determinant();
                if ((i + j) % 2 == 1)
                    cof = -cof;
                adj.at(j, i) = cof;
            }
    }
    // Modular inverse of det mod p by Fermat.
    Int dinv = 1;
    {
        Int base = floor_mod(det, p);
        int e = p - 2;
        while (e > 0) {
            if (e & 1)
                dinv = floor_mod(dinv * base, p);
            base = floor_mod(base * base, p);
            e >>= 1;
        }
    }
    for (auto& e : adj.entries)
        e = floor_mod(e * dinv, p);
    std::vector<Int> v = adj.apply(b);
    for (auto& e : v)
        e = floor_mod(-e, p);
    return AffineElement(p, n, std::move(adj), std::move(v), Ring::ModP);
}

AffineElement AffineElement::reduced_mod_p() const {
    return AffineElement(p, n, a, b, Ring::ModP);
}

bool AffineElement::is_identity() const {
    if (a != IntMat::identity(n))
        return false;
    for (const auto& e : b)
        if (e != 0)
            return false;
    return true;
}

std::string AffineElement::key() const {
    std::ostringstream os;
    os << (ring == Ring::ModP ? "m" : "z") << p << ":" << n << ":";
    for (const auto& e : a.entries)
        os << e << ',';
    os << ";";
    for (const auto& e : b)
        os << e << ',';
    return os.str();
}

std::string AffineElement::to_string() const {
    return "A=" + a.to_string() + " b=" + [&] {
        std::string out = "[";
        for (int i = 0; i < n; ++i) {
            if (i)
                out += ',';
            out += b[i].str();
        }
        return out + "]";
    }() + (ring == Ring::ModP ? " mod " + std::to_string(p) : "");
}

std::vector<int> letter_digits(int p, int n, int letter) {
    std::vector<int> d(n);
    for (int i = 0; i < n; ++i) {
        d[i] = letter % p;
        letter /= p;
    }
    return d;
}

int digits_letter(int p, int n, const std::vector<int>& digits) {
    int letter = 0;
    int scale = 1;
    for (int i = 0; i < n; ++i) {
        letter += digits[i] * scale;
        scale *= p;
    }
    return letter;
}

std::pair<AffineElement, AffineElement> sl_generators(int n, Ring ring, int p) {
    if (n < 2)
        throw BadParameters("sl_generators needs n >= 2");
    std::vector<Int> zero(n, Int(0));
    return {AffineElement(p, n, IntMat::elementary(n, 1, 2), zero, ring),
            AffineElement(p, n, IntMat::cycle(n), zero, ring)};
}

namespace {

struct LiteralReader {
    const std::string& text;
    std::size_t pos = 0;

    void skip_space() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t'))
            ++pos;
    }
    bool eat(char c) {
        skip_space();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c))
            throw ParseError(std::string("expected '") + c + "' in literal: " + text);
    }
    Int number() {
        skip_space();
        std::size_t start = pos;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+'))
            ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            ++pos;
        if (pos == start)
            throw ParseError("expected integer in literal: " + text);
        return Int(text.substr(start, pos - start));
    }
    std::vector<Int> row() {
        expect('[');
        std::vector<Int> out;
        if (!eat(']')) {
            out.push_back(number());
            while (eat(','))
                out.push_back(number());
            expect(']');
        }
        return out;
    }
};

} // namespace

IntMat parse_int_matrix(const std::string& text) {
    LiteralReader r{text};
    r.expect('[');
    std::vector<std::vector<Int>> rows;
    rows.push_back(r.row());
    while (r.eat(','))
        rows.push_back(r.row());
    r.expect(']');
    r.skip_space();
    if (r.pos != text.size())
        throw ParseError("trailing characters in matrix literal: " + text);
    const int n = static_cast<int>(rows.size());
    IntMat m(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw ParseError("matrix literal is not square: " + text);
        for (int j = 0; j < n; ++j)
            m.at(i, j) = rows[i][j];
    }
    return m;
}

std::vector<Int> parse_int_vector(const std::string& text) {
    LiteralReader r{text};
    auto out = r.row();
    r.skip_space();
    if (r.pos != text.size())
        throw ParseError("trailing characters in vector literal: " + text);
    return out;
}

} // namespace arboreal
