#pragma once

#include <string>
#include <vector>

namespace arboreal {

/// A permutation of {0, ..., degree-1}, stored as its image array.
class Perm {
public:
    Perm() = default;
    explicit Perm(int degree); // identity
    explicit Perm(std::vector<int> images);

    static Perm cycle(int degree); // (0 1 ... degree-1)
    static Perm transposition(int degree, int a, int b);

    int degree() const { return static_cast<int>(images_.size()); }
    int operator[](int point) const { return images_[point]; }
    const std::vector<int>& images() const { return images_; }

    bool is_identity() const;
    Perm inverse() const;

    // (a * b)(x) = a(b(x)); b acts first.
    friend Perm operator*(const Perm& a, const Perm& b);

    bool operator==(const Perm& other) const = default;
    auto operator<=>(const Perm& other) const = default;

    std::string to_string() const; // space-separated images

private:
    std::vector<int> images_;
};

} // namespace arboreal
