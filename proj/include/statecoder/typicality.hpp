#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "statecoder/pmf.hpp"

namespace statecoder {

// One symbol sequence per pmf axis, in axis order; all of common length n.
struct SequenceTuple {
    std::vector<std::vector<uint8_t>> seqs;

    int64_t length() const { return seqs.empty() ? 0 : static_cast<int64_t>(seqs[0].size()); }
};

// Canonical robust-typicality predicate on joint symbol counts:
// |N(a)/n - p(a)| <= epsilon * p(a) for every joint symbol a. Symbols with
// p(a) = 0 therefore must not occur. All engines and tests funnel through
// this one formula.
bool counts_typical(std::span<const int64_t> counts, std::span<const double> probs, int64_t n,
                    double epsilon);

// True iff the tuple is epsilon-typical with respect to p. Throws on length
// mismatch, rank mismatch, or out-of-alphabet symbols.
bool is_typical(const SequenceTuple& seqs, const JointPmf& p, double epsilon);

// Per-cell integer count windows [lo, hi] equivalent to counts_typical for a
// fixed (n, epsilon): a count vector is typical iff lo[a] <= N(a) <= hi[a]
// for all a. A cell no count satisfies gets lo = n+1, hi = -1, which fails
// for every count. Derived by scanning the canonical predicate, so the two
// agree exactly.
struct CountWindows {
    std::vector<int64_t> lo, hi;

    static CountWindows from_pmf(std::span<const double> probs, int64_t n, double epsilon);
    bool pass(std::span<const int64_t> counts) const;
};

}  // namespace statecoder
