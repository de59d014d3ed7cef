#include "statecoder/typicality.hpp"

#include <cmath>
#include <stdexcept>

namespace statecoder {

bool counts_typical(std::span<const int64_t> counts, std::span<const double> probs, int64_t n,
                    double epsilon) {
    if (counts.size() != probs.size()) throw std::invalid_argument("counts_typical: size mismatch");
    if (n < 1) throw std::invalid_argument("counts_typical: n < 1");
    for (size_t i = 0; i < counts.size(); ++i) {
        double freq = static_cast<double>(counts[i]) / static_cast<double>(n);
        if (std::fabs(freq - probs[i]) > epsilon * probs[i]) return false;
    }
    return true;
}

bool is_typical(const SequenceTuple& seqs, const JointPmf& p, double epsilon) {
    if (static_cast<int>(seqs.seqs.size()) != p.rank())
        throw std::invalid_argument("is_typical: sequence count != pmf rank");
    int64_t n = seqs.length();
    if (n < 1) throw std::invalid_argument("is_typical: empty sequences");
    for (size_t a = 0; a < seqs.seqs.size(); ++a) {
        if (static_cast<int64_t>(seqs.seqs[a].size()) != n)
            throw std::invalid_argument("is_typical: sequence length mismatch");
        for (uint8_t sym : seqs.seqs[a])
            if (sym >= p.axes()[a].size)
                throw std::invalid_argument("is_typical: symbol outside alphabet on axis '" +
                                            p.axes()[a].name + "'");
    }
    std::vector<int64_t> counts(p.table_size(), 0);
    for (int64_t i = 0; i < n; ++i) {
        int64_t cell = 0;
        for (size_t a = 0; a < seqs.seqs.size(); ++a)
            cell = cell * p.axes()[a].size + seqs.seqs[a][i];
        ++counts[cell];
    }
    return counts_typical(counts, p.probs(), n, epsilon);
}

CountWindows CountWindows::from_pmf(std::span<const double> probs, int64_t n, double epsilon) {
    CountWindows w;
    w.lo.assign(probs.size(), 0);
    w.hi.assign(probs.size(), -1);
    for (size_t i = 0; i < probs.size(); ++i) {
        int64_t lo = -1, hi = -1;
        for (int64_t c = 0; c <= n; ++c) {
            double freq = static_cast<double>(c) / static_cast<double>(n);
            if (std::fabs(freq - probs[i]) <= epsilon * probs[i]) {
                if (lo < 0) lo = c;
                hi = c;
            } else if (lo >= 0) {
                break;  // the admissible set is an interval
            }
        }
        w.lo[i] = lo < 0 ? n + 1 : lo;
        w.hi[i] = hi;
    }
    return w;
}

bool CountWindows::pass(std::span<const int64_t> counts) const {
    for (size_t i = 0; i < counts.size(); ++i)
        if (counts[i] < lo[i] || counts[i] > hi[i]) return false;
    return true;
}

}  // namespace statecoder
