#include "arboreal/perm.hpp"

#include "arboreal/errors.hpp"

#include <numeric>

namespace arboreal {

Perm::Perm(int degree) : images_(degree) {
    std::iota(images_.begin(), images_.end(), 0);
}

Perm::Perm(std::vector<int> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (int x : images_) {
        if (x < 0 || x >= degree() || seen[x])
            throw InputError("image array is not a permutation");
        seen[x] = true;
    }
}

Perm Perm::cycle(int degree) {
    std::vector<int> img(degree);
    for (int i = 0; i < degree; ++i)
        img[i] = (i + 1) % degree;
    return Perm(std::move(img));
}

Perm Perm::transposition(int degree, int a, int b) {
    Perm p(degree);
    std::swap(p.images_[a], p.images_[b]);
    return p;
}

bool Perm::is_identity() const {
    for (int i = 0; i < degree(); ++i)
        if (images_[i] != i)
            return false;
    return true;
}

Perm Perm::inverse() const {
    std::vector<int> img(images_.size());
    for (int i = 0; i < degree(); ++i)
        img[images_[i]] = i;
    Perm p;
    p.images_ = std::move(img);
    return p;
}

Perm operator*(const Perm& a, const Perm& b) {
    if (a.degree() != b.degree())
        throw DegreeMismatch("permutation degrees differ");
    std::vector<int> img(a.degree());
    for (int i = 0; i < a.degree(); ++i)
        img[i] = a.images_[b.images_[i]];
    Perm p;
    p.images_ = std::move(img);
    return p;
}

std::string Perm::to_string() const {
    std::string out;
    for (int i = 0; i < degree(); ++i) {
        if (i)
            out += ' ';
        out += std::to_string(images_[i]);
    }
    return out;
}

} // namespace arboreal
