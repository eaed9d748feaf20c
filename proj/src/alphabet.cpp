#include "arboreal/alphabet.hpp"

#include "arboreal/errors.hpp"

namespace arboreal {

void Alphabet::validate() const {
    if (size < 2)
        throw BadParameters("alphabet needs at least two letters");
    if (distinguished < 0 || distinguished >= size)
        throw BadParameters("distinguished letter out of range");
}

Vertex::Vertex(Alphabet alphabet, std::vector<int> word)
    : alphabet_(alphabet), word_(std::move(word)) {
    alphabet_.validate();
    for (int x : word_)
        if (x < 0 || x >= alphabet_.size)
            throw LetterOutOfRange("letter " + std::to_string(x) + " outside alphabet of size " +
                                   std::to_string(alphabet_.size));
}

Vertex Vertex::child(int letter) const {
    std::vector<int> w = word_;
    w.push_back(letter);
    return Vertex(alphabet_, std::move(w));
}

Vertex Vertex::prefix(int length) const {
    return Vertex(alphabet_, std::vector<int>(word_.begin(), word_.begin() + length));
}

Vertex Vertex::concat(const Vertex& tail) const {
    if (!(alphabet_ == tail.alphabet_))
        throw AlphabetMismatch("concatenating vertices over different alphabets");
    std::vector<int> w = word_;
    w.insert(w.end(), tail.word_.begin(), tail.word_.end());
    return Vertex(alphabet_, std::move(w));
}

std::int64_t Vertex::to_point() const {
    std::int64_t point = 0;
    std::int64_t scale = 1;
    for (int x : word_) {
        point += scale * x;
        scale *= alphabet_.size;
    }
    return point;
}

Vertex Vertex::from_point(Alphabet alphabet, int level, std::int64_t point) {
    std::vector<int> w(level);
    for (int i = 0; i < level; ++i) {
        w[i] = static_cast<int>(point % alphabet.size);
        point /= alphabet.size;
    }
    return Vertex(alphabet, std::move(w));
}

std::string Vertex::to_string() const {
    std::string out = "[";
    for (int i = 0; i < length(); ++i) {
        if (i)
            out += ',';
        out += std::to_string(word_[i]);
    }
    return out + "]";
}

} // namespace arboreal
