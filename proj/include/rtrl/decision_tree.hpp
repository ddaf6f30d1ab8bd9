#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rtrl/types.hpp"

namespace rtrl {

inline constexpr std::size_t kMaxInputs = kMaxDims + 1;

/// Training example for a tree: small non-negative integer inputs (state bins
/// followed by the action) and either a class label or a real target.
struct TreeSample {
    std::array<std::int16_t, kMaxInputs> x{};
    int label = 0;
    double value = 0.0;
};

struct TreeLeaf {
    std::vector<std::pair<int, double>> dist;  // label -> probability (classification)
    double mean = 0.0;                         // mean target (regression)
    std::uint32_t count = 0;
};

/// Axis-aligned decision tree over integer inputs with splits of the form
/// x[dim] <= threshold. Classification trees maximise information gain,
/// regression trees maximise variance reduction. Trees are grown until every
/// leaf is pure or holds only identical inputs. Equal-gain candidates are
/// broken at random with the tree's seed, so two trees with the same seed and
/// samples are identical.
class DecisionTree {
public:
    enum class Kind { Classification, Regression };

    DecisionTree(Kind kind, std::vector<int> input_ranges, std::uint64_t seed);

    void add(const TreeSample& sample) { samples_.push_back(sample); }
    /// Regrows the tree from all stored samples.
    void rebuild();

    bool trained() const { return !leaves_.empty(); }
    const TreeLeaf& leaf(std::span<const std::int16_t> x) const;
    std::size_t sample_count() const { return samples_.size(); }
    const std::vector<TreeSample>& samples() const { return samples_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t leaf_count() const { return leaves_.size(); }
    std::size_t depth() const;
    Kind kind() const { return kind_; }

private:
    struct Node {
        int dim = -1;  // -1 marks a leaf
        int threshold = 0;
        int left = -1;
        int right = -1;
        int leaf = -1;
    };
    struct Split {
        int dim = -1;
        int threshold = 0;
        double gain = 0.0;
    };

    int grow(std::vector<std::uint32_t>& idx, std::size_t lo, std::size_t hi, Rng& rng);
    Split best_split(const std::vector<std::uint32_t>& idx, std::size_t lo, std::size_t hi, Rng& rng);
    int make_leaf(const std::vector<std::uint32_t>& idx, std::size_t lo, std::size_t hi);
    bool pure(const std::vector<std::uint32_t>& idx, std::size_t lo, std::size_t hi) const;

    Kind kind_;
    std::vector<int> ranges_;
    std::uint64_t seed_;
    std::vector<TreeSample> samples_;
    std::vector<Node> nodes_;
    std::vector<TreeLeaf> leaves_;

    // Scratch space reused during rebuild.
    std::vector<int> labels_;  // distinct labels, index = compact id
    std::vector<int> label_id_;
};

}  // namespace rtrl
