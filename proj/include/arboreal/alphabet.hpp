#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace arboreal {

/// Alphabet X of a regular rooted tree, with a distinguished letter o.
/// Letters are the integers 0 .. size-1.
struct Alphabet {
    int size = 2;
    int distinguished = 0;

    bool operator==(const Alphabet&) const = default;

    void validate() const;
};

/// Vertex of the tree: a finite word over the alphabet. The empty word
/// is the root.
class Vertex {
public:
    explicit Vertex(Alphabet alphabet) : alphabet_(alphabet) { alphabet_.validate(); }
    Vertex(Alphabet alphabet, std::vector<int> word);

    const Alphabet& alphabet() const { return alphabet_; }
    const std::vector<int>& word() const { return word_; }
    int length() const { return static_cast<int>(word_.size()); }
    int operator[](int i) const { return word_[i]; }

    Vertex child(int letter) const;
    Vertex prefix(int length) const;
    Vertex concat(const Vertex& tail) const;

    // Little-endian radix-|X| encoding of length-`level` words.
    std::int64_t to_point() const;
    static Vertex from_point(Alphabet alphabet, int level, std::int64_t point);

    bool operator==(const Vertex&) const = default;

    std::string to_string() const; // "[1,0,2]"

private:
    Alphabet alphabet_;
    std::vector<int> word_;
};

} // namespace arboreal
