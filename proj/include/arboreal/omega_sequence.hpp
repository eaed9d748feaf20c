#pragma once

#include "arboreal/alphabet.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace arboreal {

/// An infinite sequence over X+ = X \ {o}. Two backends:
///  - eventually periodic, stored as (preperiod, period) in canonical form
///    (primitive period, preperiod as short as possible);
///  - streamed, backed by a 1-based letter provider. Streamed sequences
///    support all level-bounded operations but are never considered equal
///    under structural keys, so exact closures over them exhaust their cap.
class OmegaSequence {
public:
    static OmegaSequence eventually_periodic(Alphabet alphabet,
                                             std::vector<int> preperiod,
                                             std::vector<int> period);
    static OmegaSequence constant(Alphabet alphabet, int letter);
    static OmegaSequence streamed(Alphabet alphabet,
                                  std::function<int(std::size_t)> letter_at,
                                  std::string label = "stream");

    // Parses the literal form "pre1,pre2;per1,per2". A literal without ';'
    // is a pure period. Separators may be commas or spaces.
    static OmegaSequence parse(Alphabet alphabet, const std::string& literal);

    const Alphabet& alphabet() const { return alphabet_; }
    bool is_eventually_periodic() const { return provider_ == nullptr; }

    int head() const { return at(1); }
    int at(std::size_t index) const; // 1-based

    const std::vector<int>& preperiod() const { return preperiod_; }
    const std::vector<int>& period() const { return period_; }

    /// Structural key; equal keys imply equal sequences.
    const std::string& key() const { return key_; }

    bool operator==(const OmegaSequence& other) const { return key_ == other.key_; }

    std::string to_string() const;

private:
    OmegaSequence() = default;

    Alphabet alphabet_;
    std::vector<int> preperiod_;
    std::vector<int> period_;
    std::shared_ptr<const std::function<int(std::size_t)>> provider_;
    std::size_t offset_ = 0; // number of letters consumed from the stream
    std::uint64_t stream_uid_ = 0;
    std::string key_;

    void check_letter(int letter, std::size_t index) const;
    void make_key();

    friend OmegaSequence shift(const OmegaSequence& seq, std::size_t k);
};

/// Left shift L^k.
OmegaSequence shift(const OmegaSequence& seq, std::size_t k = 1);

} // namespace arboreal
