#include "arboreal/omega_sequence.hpp"

#include "arboreal/errors.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

namespace arboreal {

namespace {

std::uint64_t next_stream_uid() {
    static std::atomic<std::uint64_t> counter{0};
    return counter.fetch_add(1);
}

// Shortest u with period = u^k.
std::vector<int> primitive_root(const std::vector<int>& period) {
    const std::size_t n = period.size();
    for (std::size_t d = 1; d <= n; ++d) {
        if (n % d != 0)
            continue;
        bool ok = true;
        for (std::size_t i = d; i < n && ok; ++i)
            ok = period[i] == period[i - d];
        if (ok)
            return std::vector<int>(period.begin(), period.begin() + d);
    }
    return period;
}

} // namespace

void OmegaSequence::check_letter(int letter, std::size_t index) const {
    if (letter < 0 || letter >= alphabet_.size)
        throw LetterOutOfRange("sequence letter at position " + std::to_string(index) +
                               " outside alphabet");
    if (letter == alphabet_.distinguished)
        throw BadParameters("sequence letter at position " + std::to_string(index) +
                            " equals the distinguished letter");
}

void OmegaSequence::make_key() {
    std::ostringstream os;
    if (is_eventually_periodic()) {
        os << "ep:";
        for (int x : preperiod_)
            os << x << ',';
        os << ';';
        for (int x : period_)
            os << x << ',';
    } else {
        os << "st:" << stream_uid_ << ":" << offset_;
    }
    key_ = os.str();
}

OmegaSequence OmegaSequence::eventually_periodic(Alphabet alphabet,
                                                 std::vector<int> preperiod,
                                                 std::vector<int> period) {
    alphabet.validate();
    if (period.empty())
        throw BadParameters("period must be non-empty");
    OmegaSequence seq;
    seq.alphabet_ = alphabet;
    seq.preperiod_ = std::move(preperiod);
    seq.period_ = primitive_root(period);
    // Absorb preperiod letters that already agree with the periodic tail.
    while (!seq.preperiod_.empty() && seq.preperiod_.back() == seq.period_.back()) {
        seq.preperiod_.pop_back();
        std::rotate(seq.period_.rbegin(), seq.period_.rbegin() + 1, seq.period_.rend());
    }
    for (std::size_t i = 0; i < seq.preperiod_.size(); ++i)
        seq.check_letter(seq.preperiod_[i], i + 1);
    for (std::size_t i = 0; i < seq.period_.size(); ++i)
        seq.check_letter(seq.period_[i], seq.preperiod_.size() + i + 1);
    seq.make_key();
    return seq;
}

OmegaSequence OmegaSequence::constant(Alphabet alphabet, int letter) {
    return eventually_periodic(alphabet, {}, {letter});
}

OmegaSequence OmegaSequence::streamed(Alphabet alphabet,
                                      std::function<int(std::size_t)> letter_at,
                                      std::string label) {
    alphabet.validate();
    OmegaSequence seq;
    seq.alphabet_ = alphabet;
    seq.provider_ = std::make_shared<const std::function<int(std::size_t)>>(std::move(letter_at));
    seq.offset_ = 0;
    seq.stream_uid_ = next_stream_uid();
    (void)label;
    seq.make_key();
    return seq;
}

OmegaSequence OmegaSequence::parse(Alphabet alphabet, const std::string& literal) {
    auto parse_letters = [&](const std::string& part) {
        std::vector<int> letters;
        std::string token;
        auto flush = [&] {
            if (token.empty())
                return;
            try {
                letters.push_back(std::stoi(token));
            } catch (const std::exception&) {
                throw ParseError("bad letter '" + token + "' in sequence literal");
            }
            token.clear();
        };
        for (char c : part) {
            if (c == ',' || c == ' ' || c == '\t')
                flush();
            else
                token += c;
        }
        flush();
        return letters;
    };

    auto semi = literal.find(';');
    std::vector<int> pre, per;
    if (semi == std::string::npos) {
        per = parse_letters(literal);
    } else {
        pre = parse_letters(literal.substr(0, semi));
        per = parse_letters(literal.substr(semi + 1));
    }
    if (per.empty())
        throw ParseError("sequence literal '" + literal + "' has empty period");
    return eventually_periodic(alphabet, std::move(pre), std::move(per));
}

int OmegaSequence::at(std::size_t index) const {
    if (index == 0)
        throw BadParameters("sequence positions are 1-based");
    if (is_eventually_periodic()) {
        if (index <= preperiod_.size())
            return preperiod_[index - 1];
        const std::size_t k = (index - preperiod_.size() - 1) % period_.size();
        return period_[k];
    }
    int letter = (*provider_)(offset_ + index);
    check_letter(letter, index);
    return letter;
}

OmegaSequence shift(const OmegaSequence& seq, std::size_t k) {
    if (k == 0)
        return seq;
    if (seq.is_eventually_periodic()) {
        std::vector<int> pre = seq.preperiod_;
        std::vector<int> per = seq.period_;
        const std::size_t drop = std::min(k, pre.size());
        pre.erase(pre.begin(), pre.begin() + drop);
        std::size_t rot = (k - drop) % per.size();
        std::rotate(per.begin(), per.begin() + rot, per.end());
        return OmegaSequence::eventually_periodic(seq.alphabet_, std::move(pre), std::move(per));
    }
    OmegaSequence out = seq;
    out.offset_ += k;
    out.make_key();
    return out;
}

std::string OmegaSequence::to_string() const {
    if (!is_eventually_periodic())
        return "<stream+" + std::to_string(offset_) + ">";
    std::string out;
    for (std::size_t i = 0; i < preperiod_.size(); ++i) {
        if (i)
            out += ',';
        out += std::to_string(preperiod_[i]);
    }
    out += ';';
    for (std::size_t i = 0; i < period_.size(); ++i) {
        if (i)
            out += ',';
        out += std::to_string(period_[i]);
    }
    return out;
}

} // namespace arboreal
