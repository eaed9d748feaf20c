#pragma once

#include "arboreal/numeric.hpp"

#include <string>
#include <vector>

namespace arboreal {

/// Dense square matrix with exact integer entries.
struct IntMat {
    int n = 0;
    std::vector<Int> entries; // row-major

    IntMat() = default;
    explicit IntMat(int size) : n(size), entries(std::size_t(size) * size, Int(0)) {}

    static IntMat identity(int size);
    // E(i,j): e_j -> e_i + e_j, other basis vectors fixed. 1-based indices.
    static IntMat elementary(int size, int i, int j, const Int& scalar = Int(1));
    // C: e_i -> e_{i+1} for i < n, e_n -> (-1)^(n-1) e_1. Determinant 1.
    static IntMat cycle(int size);

    Int& at(int row, int col) { return entries[std::size_t(row) * n + col]; }
    const Int& at(int row, int col) const { return entries[std::size_t(row) * n + col]; }

    bool operator==(const IntMat&) const = default;

    friend IntMat operator*(const IntMat& a, const IntMat& b);
    std::vector<Int> apply(const std::vector<Int>& v) const;

    Int determinant() const; // fraction-free Bareiss elimination
    IntMat inverse_unimodular() const; // adjugate; requires determinant 1

    std::string to_string() const; // [[...],[...]] literal
};

std::vector<Int> unit_vector(int size, int index); // 1-based index

enum class Ring { ModP, Integer };

/// Affine map x -> Ax + b with det(A) = 1, over Z or over F_p.
/// ModP elements keep all entries reduced to 0..p-1.
struct AffineElement {
    int p = 2;
    int n = 1;
    IntMat a;
    std::vector<Int> b;
    Ring ring = Ring::Integer;

    AffineElement() = default;
    AffineElement(int p, int n, IntMat a, std::vector<Int> b, Ring ring);

    static AffineElement identity(int p, int n, Ring ring);
    static AffineElement translation(int p, int n, std::vector<Int> v, Ring ring);

    // Composition (this after other) and exact inverse within the same ring.
    AffineElement compose(const AffineElement& other) const;
    AffineElement inverse() const;

    AffineElement reduced_mod_p() const; // forget to the F_p quotient

    bool is_identity() const;
    bool operator==(const AffineElement&) const = default;

    std::string key() const;
    std::string to_string() const;
};

// Little-endian digit coding of letters of the alphabet {0..p-1}^n:
// letter = sum digits[i] * p^i.
std::vector<int> letter_digits(int p, int n, int letter);
int digits_letter(int p, int n, const std::vector<int>& digits);

// Hua-Reiner style generating pair of SL_n: (E(1,2), C_n).
std::pair<AffineElement, AffineElement> sl_generators(int n, Ring ring, int p = 2);

// Parses "[[1,0],[0,1]]" and "[1,0]" literals.
IntMat parse_int_matrix(const std::string& text);
std::vector<Int> parse_int_vector(const std::string& text);

} // namespace arboreal
