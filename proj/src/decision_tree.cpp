#include "rtrl/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace rtrl {
namespace {

constexpr double kTieTolerance = 1e-12;

double entropy_term(double c) { return c > 0.0 ? c * std::log(c) : 0.0; }

// n*H for a count vector with total n: n log n - sum c log c.
double scaled_entropy(const double* counts, int labels, double n) {
    double s = 0.0;
    for (int l = 0; l < labels; ++l) s += entropy_term(counts[l]);
    return entropy_term(n) - s;
}

}  // namespace

DecisionTree::DecisionTree(Kind kind, std::vector<int> input_ranges, std::uint64_t seed)
    : kind_(kind), ranges_(std::move(input_ranges)), seed_(seed) {
    if (ranges_.empty() || ranges_.size() > kMaxInputs) throw ConfigError("decision tree: bad input count");
}

bool DecisionTree::pure(const std::vector<std::uint32_t>& idx, std::size_t lo, std::size_t hi) const {
    if (kind_ == Kind::Classification) {
        const int first = label_id_[idx[lo]];
        for (std::size_t i = lo + 1; i < hi; ++i)
            if (label_id_[idx[i]] != first) return false;
        return true;
    }
    const double first = samples_[idx[lo]].value;
    for (std::size_t i = lo + 1; i < hi; ++i)
        if (samples_[idx[i]].value != first) return false;
    return true;
}

int DecisionTree::make_leaf(const std::vector<std::uint32_t>& idx, std::size_t lo, std::size_t hi) {
    TreeLeaf leaf;
    leaf.count = static_cast<std::uint32_t>(hi - lo);
    const double n = static_cast<double>(hi - lo);
    if (kind_ == Kind::Classification) {
        std::vector<std::uint32_t> counts(labels_.size(), 0);
        for (std::size_t i = lo; i < hi; ++i) ++counts[label_id_[idx[i]]];
        double mean = 0.0;
        for (std::size_t l = 0; l < counts.size(); ++l) {
            if (counts[l] == 0) continue;
            leaf.dist.emplace_back(labels_[l], counts[l] / n);
            mean += labels_[l] * (counts[l] / n);
        }
        leaf.mean = mean;
    } else {
        double sum = 0.0;
        for (std::size_t i = lo; i < hi; ++i) sum += samples_[idx[i]].value;
        leaf.mean = sum / n;
    }
    leaves_.push_back(std::move(leaf));
    return static_cast<int>(leaves_.size()) - 1;
}

DecisionTree::Split DecisionTree::best_split(const std::vector<std::uint32_t>& idx, std::size_t lo,
                                             std::size_t hi, Rng& rng) {
    Split best;
    int ties = 0;
    const double n = static_cast<double>(hi - lo);
    const int labels = static_cast<int>(labels_.size());

    auto consider = [&](int dim, int threshold, double gain) {
        if (best.dim < 0 || gain > best.gain + kTieTolerance) {
            best = Split{dim, threshold, gain};
            ties = 1;
        } else if (std::abs(gain - best.gain) <= kTieTolerance) {
            ++ties;
            if (std::uniform_int_distribution<int>(0, ties - 1)(rng) == 0) best = Split{dim, threshold, best.gain};
        }
    };

    std::vector<double> parent(kind_ == Kind::Classification ? labels : 0, 0.0);
    double parent_sum = 0.0, parent_sq = 0.0;
    if (kind_ == Kind::Classification) {
        for (std::size_t i = lo; i < hi; ++i) parent[label_id_[idx[i]]] += 1.0;
    } else {
        for (std::size_t i = lo; i < hi; ++i) {
            const double v = samples_[idx[i]].value;
            parent_sum += v;
            parent_sq += v * v;
        }
    }
    const double parent_impurity = kind_ == Kind::Classification ? scaled_entropy(parent.data(), labels, n)
                                                                 : parent_sq - parent_sum * parent_sum / n;

    std::vector<double> table, tot, sum, sq, left;
    for (std::size_t d = 0; d < ranges_.size(); ++d) {
        int vmin = std::numeric_limits<int>::max(), vmax = std::numeric_limits<int>::min();
        for (std::size_t i = lo; i < hi; ++i) {
            const int v = samples_[idx[i]].x[d];
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
        }
        if (vmin == vmax) continue;
        const int span = vmax - vmin + 1;
        tot.assign(span, 0.0);
        if (kind_ == Kind::Classification) {
            table.assign(static_cast<std::size_t>(span) * labels, 0.0);
            for (std::size_t i = lo; i < hi; ++i) {
                const int v = samples_[idx[i]].x[d] - vmin;
                tot[v] += 1.0;
                table[static_cast<std::size_t>(v) * labels + label_id_[idx[i]]] += 1.0;
            }
            left.assign(labels, 0.0);
            std::vector<double> right(labels);
            double nl = 0.0;
            for (int v = 0; v < span - 1; ++v) {
                if (tot[v] == 0.0) continue;
                nl += tot[v];
                for (int l = 0; l < labels; ++l) left[l] += table[static_cast<std::size_t>(v) * labels + l];
                const double nr = n - nl;
                if (nr <= 0.0) break;
                for (int l = 0; l < labels; ++l) right[l] = parent[l] - left[l];
                const double child = scaled_entropy(left.data(), labels, nl) + scaled_entropy(right.data(), labels, nr);
                consider(static_cast<int>(d), v + vmin, (parent_impurity - child) / n);
            }
        } else {
            sum.assign(span, 0.0);
            sq.assign(span, 0.0);
            for (std::size_t i = lo; i < hi; ++i) {
                const int v = samples_[idx[i]].x[d] - vmin;
                const double y = samples_[idx[i]].value;
                tot[v] += 1.0;
                sum[v] += y;
                sq[v] += y * y;
            }
            double nl = 0.0, sl = 0.0, ql = 0.0;
            for (int v = 0; v < span - 1; ++v) {
                if (tot[v] == 0.0) continue;
                nl += tot[v];
                sl += sum[v];
                ql += sq[v];
                const double nr = n - nl;
                if (nr <= 0.0) break;
                const double sr = parent_sum - sl, qr = parent_sq - ql;
                const double child = (ql - sl * sl / nl) + (qr - sr * sr / nr);
                consider(static_cast<int>(d), v + vmin, (parent_impurity - child) / n);
            }
        }
    }
    return best;
}

int DecisionTree::grow(std::vector<std::uint32_t>& idx, std::size_t lo, std::size_t hi, Rng& rng) {
    const int me = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    if (pure(idx, lo, hi)) {
        nodes_[me].leaf = make_leaf(idx, lo, hi);
        return me;
    }
    const Split split = best_split(idx, lo, hi, rng);
    if (split.dim < 0) {
        nodes_[me].leaf = make_leaf(idx, lo, hi);
        return me;
    }
    auto mid_it = std::partition(idx.begin() + static_cast<std::ptrdiff_t>(lo), idx.begin() + static_cast<std::ptrdiff_t>(hi),
                                 [&](std::uint32_t i) { return samples_[i].x[split.dim] <= split.threshold; });
    const std::size_t mid = static_cast<std::size_t>(mid_it - idx.begin());
    nodes_[me].dim = split.dim;
    nodes_[me].threshold = split.threshold;
    const int l = grow(idx, lo, mid, rng);
    nodes_[me].left = l;
    const int r = grow(idx, mid, hi, rng);
    nodes_[me].right = r;
    return me;
}

void DecisionTree::rebuild() {
    nodes_.clear();
    leaves_.clear();
    if (samples_.empty()) return;

    labels_.clear();
    label_id_.assign(samples_.size(), 0);
    if (kind_ == Kind::Classification) {
        for (const auto& s : samples_) labels_.push_back(s.label);
        std::sort(labels_.begin(), labels_.end());
        labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
        for (std::size_t i = 0; i < samples_.size(); ++i)
            label_id_[i] = static_cast<int>(std::lower_bound(labels_.begin(), labels_.end(), samples_[i].label) - labels_.begin());
    }

    std::vector<std::uint32_t> idx(samples_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<std::uint32_t>(i);
    Rng rng(seed_ * 0x9E3779B97F4A7C15ULL + samples_.size());
    nodes_.reserve(samples_.size());
    grow(idx, 0, idx.size(), rng);
}

const TreeLeaf& DecisionTree::leaf(std::span<const std::int16_t> x) const {
    int n = 0;
    while (nodes_[n].dim >= 0) n = x[nodes_[n].dim] <= nodes_[n].threshold ? nodes_[n].left : nodes_[n].right;
    return leaves_[nodes_[n].leaf];
}

std::size_t DecisionTree::depth() const {
    if (nodes_.empty()) return 0;
    std::function<std::size_t(int)> walk = [&](int n) -> std::size_t {
        if (nodes_[n].dim < 0) return 1;
        return 1 + std::max(walk(nodes_[n].left), walk(nodes_[n].right));
    };
    return walk(0);
}

}  // namespace rtrl
