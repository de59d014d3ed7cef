#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace statecoder {

struct Axis {
    std::string name;
    int size = 0;
};

// Dense joint pmf over a product of named finite alphabets.
// Storage is row-major with axes[0] slowest. Values are immutable after
// construction, so instances can be shared freely across threads.
class JointPmf {
  public:
    // Throws std::invalid_argument unless entries are nonnegative, axis names
    // are unique, the table size matches the product of cardinalities, and the
    // total mass is within 1e-9 of 1. With normalize=true the table is rescaled
    // instead (mass must still be positive).
    JointPmf(std::vector<Axis> axes, std::vector<double> probs, bool normalize = false);

    static JointPmf uniform(std::vector<Axis> axes);

    const std::vector<Axis>& axes() const { return axes_; }
    const std::vector<double>& probs() const { return p_; }
    int rank() const { return static_cast<int>(axes_.size()); }
    int64_t table_size() const { return static_cast<int64_t>(p_.size()); }

    int axis_index(const std::string& name) const;  // throws on unknown name
    int axis_size(const std::string& name) const { return axes_[axis_index(name)].size; }

    double at(std::span<const int> index) const;
    int64_t flat_index(std::span<const int> index) const;

    // Marginal over the named axes (axis order of *this is preserved).
    JointPmf marginal(std::span<const std::string> names) const;

    JointPmf renormalized() const { return JointPmf(axes_, p_, true); }

  private:
    std::vector<Axis> axes_;
    std::vector<double> p_;
    std::vector<int64_t> strides_;
};

// Binary entropy in bits, H(p) with 0 log 0 = 0.
double binary_entropy(double p);

// Shannon entropy in bits of the marginal on the given axes; 0 log 0 = 0.
double entropy(const JointPmf& p, std::span<const std::string> subset);
double entropy(const JointPmf& p);

// I(A;B) in bits; groups must be disjoint. Tiny negative round-off is clamped
// to zero.
double mutual_information(const JointPmf& p, std::span<const std::string> group_a,
                          std::span<const std::string> group_b);

// I(A;B|C) in bits; all three groups pairwise disjoint.
double mutual_information(const JointPmf& p, std::span<const std::string> group_a,
                          std::span<const std::string> group_b,
                          std::span<const std::string> group_c);

}  // namespace statecoder
