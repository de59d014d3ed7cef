#include "statecoder/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace statecoder {

namespace {

constexpr double kMassTol = 1e-9;

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

JointPmf::JointPmf(std::vector<Axis> axes, std::vector<double> probs, bool normalize)
    : axes_(std::move(axes)), p_(std::move(probs)) {
    if (axes_.empty()) throw std::invalid_argument("JointPmf: no axes");
    std::set<std::string> names;
    int64_t total = 1;
    for (const Axis& a : axes_) {
        if (a.size < 1) throw std::invalid_argument("JointPmf: axis '" + a.name + "' has size < 1");
        if (!names.insert(a.name).second)
            throw std::invalid_argument("JointPmf: duplicate axis name '" + a.name + "'");
        total *= a.size;
    }
    if (static_cast<int64_t>(p_.size()) != total) {
        std::ostringstream os;
        os << "JointPmf: table size " << p_.size() << " != product of cardinalities " << total;
        throw std::invalid_argument(os.str());
    }
    double mass = 0.0;
    for (double v : p_) {
        if (!(v >= 0.0)) throw std::invalid_argument("JointPmf: negative or NaN entry");
        mass += v;
    }
    if (normalize) {
        if (mass <= 0.0) throw std::invalid_argument("JointPmf: cannot normalize zero mass");
        for (double& v : p_) v /= mass;
    } else if (std::fabs(mass - 1.0) > kMassTol) {
        std::ostringstream os;
        os << "JointPmf: total mass " << mass << " not within 1e-9 of 1";
        throw std::invalid_argument(os.str());
    }
    strides_.assign(axes_.size(), 1);
    for (int i = static_cast<int>(axes_.size()) - 2; i >= 0; --i)
        strides_[i] = strides_[i + 1] * axes_[i + 1].size;
}

JointPmf JointPmf::uniform(std::vector<Axis> axes) {
    int64_t total = 1;
    for (const Axis& a : axes) total *= std::max(a.size, 1);
    return JointPmf(std::move(axes), std::vector<double>(total, 1.0 / static_cast<double>(total)));
}

int JointPmf::axis_index(const std::string& name) const {
    for (size_t i = 0; i < axes_.size(); ++i)
        if (axes_[i].name == name) return static_cast<int>(i);
    throw std::invalid_argument("JointPmf: unknown axis '" + name + "'");
}

int64_t JointPmf::flat_index(std::span<const int> index) const {
    if (index.size() != axes_.size()) throw std::invalid_argument("JointPmf: index rank mismatch");
    int64_t f = 0;
    for (size_t i = 0; i < axes_.size(); ++i) {
        if (index[i] < 0 || index[i] >= axes_[i].size)
            throw std::invalid_argument("JointPmf: index out of range on axis '" + axes_[i].name + "'");
        f += strides_[i] * index[i];
    }
    return f;
}

double JointPmf::at(std::span<const int> index) const { return p_[flat_index(index)]; }

JointPmf JointPmf::marginal(std::span<const std::string> names) const {
    if (names.empty()) throw std::invalid_argument("JointPmf::marginal: empty axis set");
    std::vector<char> keep(axes_.size(), 0);
    for (const std::string& n : names) {
        int i = axis_index(n);
        if (keep[i]) throw std::invalid_argument("JointPmf::marginal: repeated axis '" + n + "'");
        keep[i] = 1;
    }
    std::vector<Axis> out_axes;
    std::vector<int64_t> out_strides;
    int64_t out_size = 1;
    for (size_t i = 0; i < axes_.size(); ++i)
        if (keep[i]) out_axes.push_back(axes_[i]);
    out_strides.assign(out_axes.size(), 1);
    for (int i = static_cast<int>(out_axes.size()) - 2; i >= 0; --i)
        out_strides[i] = out_strides[i + 1] * out_axes[i + 1].size;
    for (const Axis& a : out_axes) out_size *= a.size;

    std::vector<double> out(out_size, 0.0);
    std::vector<int> idx(axes_.size(), 0);
    for (int64_t f = 0; f < table_size(); ++f) {
        int64_t of = 0;
        int k = 0;
        for (size_t i = 0; i < axes_.size(); ++i)
            if (keep[i]) of += out_strides[k++] * idx[i];
        out[of] += p_[f];
        for (int i = static_cast<int>(axes_.size()) - 1; i >= 0; --i) {
            if (++idx[i] < axes_[i].size) break;
            idx[i] = 0;
        }
    }
    // Sums of a valid table cannot exceed tolerance by more than round-off;
    // renormalization is not applied here.
    return JointPmf(std::move(out_axes), std::move(out));
}

double binary_entropy(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("binary_entropy: p outside [0,1]");
    return -xlog2x(p) - xlog2x(1.0 - p);
}

double entropy(const JointPmf& p, std::span<const std::string> subset) {
    JointPmf m = p.marginal(subset);
    double h = 0.0;
    for (double v : m.probs()) h -= xlog2x(v);
    return h < 0.0 ? 0.0 : h;
}

double entropy(const JointPmf& p) {
    double h = 0.0;
    for (double v : p.probs()) h -= xlog2x(v);
    return h < 0.0 ? 0.0 : h;
}

namespace {

std::vector<std::string> join_groups(std::initializer_list<std::span<const std::string>> groups) {
    std::vector<std::string> all;
    for (auto g : groups) all.insert(all.end(), g.begin(), g.end());
    return all;
}

void require_disjoint(std::span<const std::string> a, std::span<const std::string> b) {
    for (const std::string& x : a)
        for (const std::string& y : b)
            if (x == y) throw std::invalid_argument("mutual_information: groups share axis '" + x + "'");
}

}  // namespace

double mutual_information(const JointPmf& p, std::span<const std::string> group_a,
                          std::span<const std::string> group_b) {
    if (group_a.empty() || group_b.empty())
        throw std::invalid_argument("mutual_information: empty group");
    require_disjoint(group_a, group_b);
    std::vector<std::string> ab = join_groups({group_a, group_b});
    double v = entropy(p, group_a) + entropy(p, group_b) - entropy(p, std::span(ab));
    return v < 0.0 ? 0.0 : v;
}

double mutual_information(const JointPmf& p, std::span<const std::string> group_a,
                          std::span<const std::string> group_b,
                          std::span<const std::string> group_c) {
    if (group_c.empty()) return mutual_information(p, group_a, group_b);
    if (group_a.empty() || group_b.empty())
        throw std::invalid_argument("mutual_information: empty group");
    require_disjoint(group_a, group_b);
    require_disjoint(group_a, group_c);
    require_disjoint(group_b, group_c);
    std::vector<std::string> ac = join_groups({group_a, group_c});
    std::vector<std::string> bc = join_groups({group_b, group_c});
    std::vector<std::string> abc = join_groups({group_a, group_b, group_c});
    double v = entropy(p, std::span(ac)) + entropy(p, std::span(bc)) -
               entropy(p, std::span(abc)) - entropy(p, group_c);
    return v < 0.0 ? 0.0 : v;
}

}  // namespace statecoder
